#include "eqih/ratla.hpp"

#include <cctype>

namespace eqih {

namespace {

bool is_integer_literal(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

BigInt parse_integer(const std::string& s) {
    return BigInt(s[0] == '+' ? s.substr(1) : s);
}

}  // namespace

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    const auto slash = s.find('/');
    const std::string num = slash == std::string::npos ? s : s.substr(0, slash);
    const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den))
        throw std::invalid_argument("malformed rational '" + text + "'");
    const BigInt d = parse_integer(den);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    return Rational(parse_integer(num), d);
}

std::string to_string(const Rational& q) { return q.str(); }

}  // namespace eqih
