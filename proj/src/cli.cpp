#include "eqih/cli.hpp"

#include "eqih/classify.hpp"
#include "eqih/fixtures.hpp"
#include "eqih/report.hpp"
#include "eqih/suite.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <istream>
#include <ostream>

namespace eqih::cli {

namespace {

/// Input problems that are not model format errors (missing files, bad flags).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Context {
    std::istream& in;
    std::ostream& out;
    bool stdin_used = false;

    Model load(const std::string& path) {
        if (path != "-") return load_model_file(path);
        if (stdin_used) throw InputError("standard input can be read only once");
        stdin_used = true;
        return load_model(in);
    }
};

Perversity perversity_for(const Model& m, const std::string& text) {
    Perversity p = parse_perversity(text);
    check_perversity(m, p);
    return p;
}

void cmd_validate(Context& ctx, Report& r, const std::string& file, bool strict) {
    const Model m = ctx.load(file);
    r.model = m.name;
    r.results["strict"] = strict;
    for (const auto& c : validate(m, strict).checks) {
        Json data;
        if (!c.counterexample.empty()) data["vector"] = c.counterexample;
        r.check(c.name, c.passed, c.detail, data);
    }
}

void cmd_cohomology(Context& ctx, Report& r, const std::string& file, const std::string& perv) {
    Session s(ctx.load(file));
    r.model = s.model().name;
    const Perversity p = perversity_for(s.model(), perv);
    const int top = s.model().top_degree;
    r.results["perversity"] = p.str();
    r.results["ih_base"] = dims_to_json(s.perverse(p)->ih.dims(0, top));
    r.results["ih_total"] = dims_to_json(s.eq1(p)->h.dims(0, top + 1));
}

void cmd_gysin(Context& ctx, Report& r, const std::string& file, const std::string& perv) {
    Session s(ctx.load(file));
    const Model& m = s.model();
    r.model = m.name;
    const Perversity p = perversity_for(m, perv);
    const auto pd = s.perverse(p);
    const int top = m.top_degree;
    r.results["perversity"] = p.str();
    r.results["ih_base"] = dims_to_json(pd->ih.dims(0, top));
    r.results["ih_total"] = dims_to_json(s.eq1(p)->h.dims(0, top + 1));
    r.results["gysin"] = dims_to_json(pd->hg.dims(0, top));
    r.results["cogysin"] = dims_to_json(pd->hk.dims(0, top));
    Json eub = Json::object();
    for (int i = 0; i <= top; ++i) eub[std::to_string(i)] = matrix_to_json(pd->eub[std::size_t(i)]);
    r.results["eub"] = eub;
    try {
        const auto les = gysin_les(m, *pd, *s.eq1(p));
        const auto ex = check_exact(les.sequence);
        r.results["gysin_sequence"] = exactness_to_json(ex);
        r.check("gysin_sequence_exact", ex.exact());
        r.check("gysin_connecting_is_eub", true);
    } catch (const DecompositionMismatch& e) {
        r.check("gysin_connecting_is_eub", false, e.what(), Json{{"degree", e.degree}});
    }
    const auto co = check_exact(cogysin_les(*pd, top).sequence);
    r.results["cogysin_sequence"] = exactness_to_json(co);
    r.check("cogysin_sequence_exact", co.exact());
}

void cmd_equivariant(Context& ctx, Report& r, const std::string& file, const std::string& perv, int nu) {
    Session s(ctx.load(file));
    const Model& m = s.model();
    r.model = m.name;
    const Perversity p = perversity_for(m, perv);
    if (nu >= 0 && nu < 2) throw InputError("--nu must be at least 2");
    const auto ed = s.equivariant(p, nu);
    r.results["perversity"] = p.str();
    r.results["N"] = ed->N;
    r.results["dims"] = dims_to_json(ed->dims());
    r.results["u_ranks"] = dims_to_json(ed->u_ranks());
    const auto oracle = oracle_cohomology(m, p, ed->N);
    r.results["oracle"] = {{"dims", dims_to_json(oracle.dims)}, {"u_ranks", dims_to_json(oracle.u_ranks)}};
    r.check("oracle_agreement", oracle.dims == ed->dims() && oracle.u_ranks == ed->u_ranks());
    const auto eg = equivariant_gysin_les(*s.perverse(p), *ed);
    const auto ex = check_exact(eg.les.sequence);
    r.results["gysin_sequence"] = exactness_to_json(ex);
    r.check("equivariant_gysin_exact", ex.exact());
    r.check("connecting_decomposition", eg.mismatch_degree < 0,
            eg.mismatch_degree < 0 ? "" : "computed and predicted connecting maps differ",
            eg.mismatch_degree < 0 ? Json() : Json{{"degree", eg.mismatch_degree}});
}

void cmd_spectral(Context& ctx, Report& r, const std::string& file, const std::string& perv, int pages, bool d3) {
    Session s(ctx.load(file));
    const Model& m = s.model();
    r.model = m.name;
    const Perversity p = perversity_for(m, perv);
    if (pages < 0) pages = m.top_degree + 3;
    if (d3 && pages < 3) throw InputError("--d3-check needs --pages of at least 3");
    const auto ed = s.equivariant(p);
    FilteredComplex fc = base_degree_filtration(*ed);
    fc.verify();
    SpectralSequence ss(std::move(fc), pages);
    r.results["perversity"] = p.str();
    r.results["N"] = ed->N;
    Json list = Json::array();
    for (int k = 0; k <= ss.r_max(); ++k) list.push_back(page_to_json(ss.page(k)));
    r.results["pages"] = list;
    r.results["infinity"] = page_to_json(ss.infinity())["cells"];
    try {
        const auto rep = check_basic_spectral_sequence(m, *s.perverse(p), *ed, ss, d3);
        for (const auto& name : rep.passed) r.check(name, true);
        if (d3) {
            Json cells = Json::array();
            for (const auto& c : rep.d3)
                cells.push_back({{"i", c.i}, {"j", c.j}, {"engine", matrix_to_json(c.engine)},
                                 {"composite", matrix_to_json(c.composite)}, {"equal", c.equal}});
            r.results["d3"] = cells;
        }
    } catch (const PropertyViolation& e) {
        r.check(e.property, false, e.what(), Json{{"r", e.r}, {"i", e.i}, {"j", e.j}});
    }
}

void cmd_skjelbred(Context& ctx, Report& r, const std::string& file) {
    Session s(ctx.load(file));
    const Model& m = s.model();
    r.model = m.name;
    const Perversity zero = zero_perversity(m);
    const auto pz = s.perverse(zero);
    const auto pm = s.perverse(zero - characteristic_perversity(m));
    const bool eligible = skjelbred_eligible(m, *pz, *pm);
    r.results["eligible"] = eligible;
    if (!eligible) throw IdentificationFails("model is not eligible: G_0 or G_{-xbar} differs from Omega_{-xbar}");
    const auto sk = skjelbred(m, *pz, *pm, *s.equivariant(zero));
    r.results["sequence"] = exactness_to_json(sk.exactness);
    r.check("skjelbred_exact", sk.exactness.exact());
}

void cmd_localize(Context& ctx, Report& r, const std::string& file, const std::string& perv, int nu, bool cone) {
    Session s(ctx.load(file));
    const Model& m = s.model();
    r.model = m.name;
    const Perversity p = perversity_for(m, perv);
    if (cone && !m.cone) throw NotAConeModel("model " + m.name + " carries no cone link data");
    const auto ed = s.equivariant(p, nu);
    const auto module = LambdaUModule::from(*ed);
    const auto il = localize(module);
    r.results["perversity"] = p.str();
    r.results["N"] = ed->N;
    r.results["stable_from"] = module.stable_from;
    r.results["localized"] = localized_to_json(il);
    try {
        const auto lg = localized_gysin(m, *s.perverse(p), *ed);
        Json j;
        j["ih_dims"] = {lg.ih_dim[0], lg.ih_dim[1]};
        j["gysin_dims"] = {lg.gysin_dim[0], lg.gysin_dim[1]};
        j["delta_ranks"] = {lg.delta_rank[0], lg.delta_rank[1]};
        j["delta_even"] = poly_matrix_to_json(lg.delta[0]);
        j["delta_odd"] = poly_matrix_to_json(lg.delta[1]);
        j["from_delta"] = localized_to_json(lg.from_delta);
        j["stable_window"] = exactness_to_json(lg.exactness);
        r.results["localized_gysin"] = j;
        r.check("localized_gysin_exact", lg.exactness.exact());
        r.check("localizations_agree", lg.from_delta == il);
    } catch (const NotExact& e) {
        r.check("localized_gysin_exact", false, e.what(), Json{{"degree", e.degree}});
    }
    if (cone) {
        const auto c = cone_formula_check(s, p);
        r.results["cone"] = {{"apex_perversity", c.apex_perversity},
                             {"predicted", localized_to_json(c.predicted)},
                             {"computed", localized_to_json(c.computed)}};
        r.check("cone_formula", c.agree());
    }
}

ModelIso load_iso(const std::string& path, const Model& m1, const Model& m2) {
    std::ifstream file(path);
    if (!file) throw InputError("cannot open '" + path + "'");
    Json doc;
    try {
        doc = Json::parse(file);
    } catch (const Json::parse_error& e) {
        throw ModelFormatError(path, e.what());
    }
    if (!doc.is_object() || !doc.contains("f") || !doc["f"].is_array())
        throw ModelFormatError(path, "expected an object with a list 'f' of matrices");
    if (doc["f"].size() != std::size_t(m1.top_degree + 1))
        throw ModelFormatError(path + ".f", "need one matrix per degree 0.." + std::to_string(m1.top_degree));
    ModelIso iso;
    for (int k = 0; k <= m1.top_degree; ++k)
        iso.f.push_back(matrix_from_json(doc["f"][std::size_t(k)], m1.dim(k), m2.dim(k), path + ".f." + std::to_string(k)));
    if (doc.contains("strata")) {
        if (!doc["strata"].is_object()) throw ModelFormatError(path + ".strata", "expected an object");
        for (const auto& [s2, s1] : doc["strata"].items()) {
            if (!s1.is_string()) throw ModelFormatError(path + ".strata." + s2, "expected a stratum name");
            iso.strata[s2] = s1.get<std::string>();
        }
    }
    return iso;
}

void cmd_compare(Context& ctx, Report& r, const std::string& f1, const std::string& f2, const std::string& iso_path) {
    Session s1(ctx.load(f1)), s2(ctx.load(f2));
    r.model = s1.model().name + " / " + s2.model().name;
    const ModelIso iso = load_iso(iso_path, s1.model(), s2.model());
    const bool optimal = is_optimal(iso, s1.model(), s2.model());
    r.results["optimal"] = optimal;
    if (!optimal) return;
    const auto rel = f_related(iso, s1.model(), s2.model());
    r.results["related"] = rel.related;
    r.results["discrepancy"] = vector_to_json(rel.discrepancy);
    if (rel.witness) r.results["witness"] = vector_to_json(*rel.witness);
    if (!rel.related) return;
    try {
        const auto rep = consequence_check(iso, s1, s2);
        Json rows = Json::array();
        for (const auto& row : rep.rows)
            rows.push_back({{"perversity", row.p.str()},
                            {"dims", dims_to_json(row.dims1)},
                            {"u_ranks", dims_to_json(row.u_ranks1)},
                            {"localized", localized_to_json(row.il1)}});
        r.results["consequences"] = rows;
        r.check("consequences", true);
    } catch (const TheoremViolation& e) {
        r.check("consequences", false, e.what());
    }
}

void cmd_fixture(Context& ctx, const std::string& name, const std::string& output) {
    const std::string text = to_json(make_fixture(name)).dump(2) + "\n";
    if (output.empty() || output == "-") {
        ctx.out << text;
        return;
    }
    std::ofstream file(output);
    if (!file) throw InputError("cannot write '" + output + "'");
    file << text;
}

void cmd_selftest(Report& r, int seeds, int size, bool parallel) {
    if (seeds < 0) throw InputError("--seeds must be non-negative");
    SuiteOptions options;
    options.seeds = seeds;
    options.random_size = size;
    options.parallel = parallel;
    const SuiteResult result = run_suite(options);
    r.model = "suite";
    r.results = to_json(result);
    r.results["expectations"] = expectations()["sources"];
    for (const auto& c : result.criteria)
        r.check(std::to_string(c.id) + "_" + c.name, c.passed(), c.passed() ? "" : c.failures.front(),
                Json{{"checks", c.checks}, {"failures", c.failures.size()}});
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Equivariant intersection cohomology of finite circle-action models", "eqih"};
    app.require_subcommand(1);
    bool human = false;
    app.add_flag("--human", human, "Readable output instead of JSON");
    app.fallthrough();

    std::string file, file2, perv, iso_path, name, output;
    bool strict = false, d3 = false, cone = false, parallel = false;
    int nu = -1, pages = -1, seeds = 100, size = 2;

    auto* validate_cmd = app.add_subcommand("validate", "Check a model file against every axiom");
    validate_cmd->add_option("FILE", file, "Model file, '-' for stdin")->required();
    validate_cmd->add_flag("--strict", strict, "Also check Euler and product compatibility with filtrations");

    auto* cohomology_cmd = app.add_subcommand("cohomology", "IH_p of the base and of the total space");
    cohomology_cmd->add_option("FILE", file)->required();
    cohomology_cmd->add_option("-p,--perversity", perv, "stratum=int,...")->required();

    auto* gysin_cmd = app.add_subcommand("gysin", "Gysin and co-Gysin terms, sequences and eub");
    gysin_cmd->add_option("FILE", file)->required();
    gysin_cmd->add_option("-p,--perversity", perv)->required();

    auto* equivariant_cmd = app.add_subcommand("equivariant", "Equivariant cohomology through degree N");
    equivariant_cmd->add_option("FILE", file)->required();
    equivariant_cmd->add_option("-p,--perversity", perv)->required();
    equivariant_cmd->add_option("--nu", nu, "Truncation degree (default top+6)");

    auto* spectral_cmd = app.add_subcommand("spectral", "Basic spectral sequence pages and checks");
    spectral_cmd->add_option("FILE", file)->required();
    spectral_cmd->add_option("-p,--perversity", perv)->required();
    spectral_cmd->add_option("--pages", pages, "Last page computed (default top+3)");
    spectral_cmd->add_flag("--d3-check", d3, "Compare d3 with the Euler composites");

    auto* skjelbred_cmd = app.add_subcommand("skjelbred", "Skjelbred sequence at perversity 0");
    skjelbred_cmd->add_option("FILE", file)->required();

    auto* localize_cmd = app.add_subcommand("localize", "Ranks over Q(u) and the localized Gysin sequence");
    localize_cmd->add_option("FILE", file)->required();
    localize_cmd->add_option("-p,--perversity", perv)->required();
    localize_cmd->add_option("--nu", nu, "Truncation degree (default top+6)");
    localize_cmd->add_flag("--cone-check", cone, "Compare with the link-data formula");

    auto* compare_cmd = app.add_subcommand("compare", "Relatedness of two models under an isomorphism");
    compare_cmd->add_option("FILE1", file)->required();
    compare_cmd->add_option("FILE2", file2)->required();
    compare_cmd->add_option("--iso", iso_path, "JSON file with per-degree matrices 'f' and 'strata'")->required();

    auto* fixture_cmd = app.add_subcommand("fixture", "Print a fixture model");
    fixture_cmd->add_option("NAME", name, "HOPF, ROT, CONE2, NOPERV or RANDOM:seed:size")->required();
    fixture_cmd->add_option("-o,--output", output, "Output file (default stdout)");

    auto* selftest_cmd = app.add_subcommand("selftest", "Run the invariant suite");
    selftest_cmd->add_option("--seeds", seeds, "Number of random models");
    selftest_cmd->add_option("--size", size, "Size of random models (1-4)");
    selftest_cmd->add_flag("--parallel", parallel, "One thread per model");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitInputError;
    }

    Context ctx{in, out};
    Report report;
    report.command = args;
    try {
        if (validate_cmd->parsed()) cmd_validate(ctx, report, file, strict);
        else if (cohomology_cmd->parsed()) cmd_cohomology(ctx, report, file, perv);
        else if (gysin_cmd->parsed()) cmd_gysin(ctx, report, file, perv);
        else if (equivariant_cmd->parsed()) cmd_equivariant(ctx, report, file, perv, nu);
        else if (spectral_cmd->parsed()) cmd_spectral(ctx, report, file, perv, pages, d3);
        else if (skjelbred_cmd->parsed()) cmd_skjelbred(ctx, report, file);
        else if (localize_cmd->parsed()) cmd_localize(ctx, report, file, perv, nu, cone);
        else if (compare_cmd->parsed()) cmd_compare(ctx, report, file, file2, iso_path);
        else if (fixture_cmd->parsed()) {
            cmd_fixture(ctx, name, output);
            return kExitPass;
        } else if (selftest_cmd->parsed()) cmd_selftest(report, seeds, size, parallel);
    } catch (const TruncationTooSmall& e) {
        report.status_override = ReportStatus::input_error;
        report.error = e.what();
    } catch (const IdentificationFails& e) {
        report.status_override = ReportStatus::input_error;
        report.error = e.what();
    } catch (const std::invalid_argument& e) {
        // Model format errors, unknown strata, bad perversities, invalid isomorphisms.
        report.status_override = ReportStatus::input_error;
        report.error = e.what();
    } catch (const std::exception& e) {
        report.status_override = ReportStatus::violation;
        report.error = e.what();
    }

    const Json doc = report.to_json();
    if (human)
        write_human(doc, out);
    else
        out << doc.dump(2) << "\n";
    if (report.error) err << "eqih: " << *report.error << "\n";
    switch (report.status()) {
        case ReportStatus::pass: return kExitPass;
        case ReportStatus::violation: return kExitViolation;
        case ReportStatus::input_error: return kExitInputError;
    }
    return kExitViolation;
}

}  // namespace eqih::cli
