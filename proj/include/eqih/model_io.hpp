#pragma once

// JSON model files. Rationals are strings "p/q" (plain integers are accepted
// on input). A matrix is a list of rows; an empty list stands for the zero
// matrix of the expected shape.

#include "eqih/model.hpp"

#include <json.hpp>

#include <istream>
#include <string>

namespace eqih {

using Json = nlohmann::ordered_json;

/// Malformed model file. `where` is a dotted path into the document, or the
/// parser's line/column message for syntax errors.
class ModelFormatError : public std::invalid_argument {
public:
    ModelFormatError(const std::string& where, const std::string& what)
        : std::invalid_argument(where.empty() ? what : where + ": " + what), where(where) {}
    std::string where;
};

Model model_from_json(const Json& doc);
Model load_model(std::istream& in);
Model load_model_file(const std::string& path);

Json to_json(const Model& m);
Json matrix_to_json(const MatQ& m);
Json vector_to_json(const VecQ& v);
MatQ matrix_from_json(const Json& j, Index rows, Index cols, const std::string& where);
VecQ vector_from_json(const Json& j, Index n, const std::string& where);

}  // namespace eqih
