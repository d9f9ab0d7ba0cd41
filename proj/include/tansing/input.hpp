// Input schema.
//
// Fields are described in JSON as monomial lists; each entry is either
//   [num, den, i, j]      — (num/den) x^i y^j with integer num/den, or
//   ["expr", i, j]        — an arithmetic expression over parameter
//                           names with + - * / ^ and parentheses,
//                           evaluated exactly at bind time.
// Parameters carry either {"rational": [num, den]} or
// {"real": "decimal-string"}; the presence of any real parameter (or a
// real override) switches the whole computation to the big-float field.
// Parse errors cite line and column of the offending text.
#pragma once

#include <json.hpp>

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tansing/errors.hpp"
#include "tansing/numbers.hpp"
#include "tansing/poly.hpp"

namespace tansing {

// ---- arithmetic expressions over parameters ---------------------------

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { number, variable, add, sub, mul, div, neg, pow };
    Kind kind = Kind::number;
    Rational value;      // number
    std::string name;    // variable
    ExprPtr lhs, rhs;    // binary nodes / neg operand in lhs
    int exponent = 0;    // pow
};

namespace detail {

inline Rational decimal_to_rational(const std::string& text) {
    // [sign] digits [. digits] [e|E [sign] digits]
    std::size_t pos = 0;
    bool neg = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) neg = text[pos++] == '-';
    std::string digits;
    int frac_digits = 0;
    bool any = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        digits += text[pos++];
        any = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            digits += text[pos++];
            ++frac_digits;
            any = true;
        }
    }
    long exp10 = 0;
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        bool eneg = false;
        if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) eneg = text[pos++] == '-';
        std::string e;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) e += text[pos++];
        if (e.empty()) throw UsageError("malformed exponent in number '" + text + "'");
        exp10 = std::stol(e) * (eneg ? -1 : 1);
    }
    if (!any || pos != text.size()) throw UsageError("malformed decimal literal '" + text + "'");
    // strip leading zeros so the big-integer parser cannot read them as octal
    std::size_t nz = digits.find_first_not_of('0');
    digits = nz == std::string::npos ? "0" : digits.substr(nz);
    Rational r = Rational(Integer(digits));
    long shift = exp10 - frac_digits;
    Integer p10(1);
    for (long t = 0; t < (shift < 0 ? -shift : shift); ++t) p10 *= 10;
    if (shift >= 0)
        r = r * Rational(p10);
    else
        r = r / Rational(p10);
    return neg ? -r : r;
}

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    ExprPtr parse() {
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ != s_.size()) fail("unexpected trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw UsageError("in expression '" + s_ + "' at offset " + std::to_string(pos_) + ": " + msg);
    }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ExprPtr parse_sum() {
        ExprPtr e = parse_product();
        for (;;) {
            if (eat('+')) {
                auto n = std::make_shared<Expr>();
                n->kind = Expr::Kind::add;
                n->lhs = e;
                n->rhs = parse_product();
                e = n;
            } else if (eat('-')) {
                auto n = std::make_shared<Expr>();
                n->kind = Expr::Kind::sub;
                n->lhs = e;
                n->rhs = parse_product();
                e = n;
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_product() {
        ExprPtr e = parse_unary();
        for (;;) {
            if (eat('*')) {
                auto n = std::make_shared<Expr>();
                n->kind = Expr::Kind::mul;
                n->lhs = e;
                n->rhs = parse_unary();
                e = n;
            } else if (eat('/')) {
                auto n = std::make_shared<Expr>();
                n->kind = Expr::Kind::div;
                n->lhs = e;
                n->rhs = parse_unary();
                e = n;
            } else {
                return e;
            }
        }
    }

    ExprPtr parse_unary() {
        if (eat('-')) {
            auto n = std::make_shared<Expr>();
            n->kind = Expr::Kind::neg;
            n->lhs = parse_unary();
            return n;
        }
        (void)eat('+');
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (eat('^')) {
            skip_ws();
            bool neg = eat('-');
            std::string digits;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
            if (digits.empty() || neg) fail("exponent must be a nonnegative integer");
            auto n = std::make_shared<Expr>();
            n->kind = Expr::Kind::pow;
            n->lhs = base;
            n->exponent = std::stoi(digits);
            return n;
        }
        return base;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end of expression");
        const char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::string num;
            while (pos_ < s_.size() &&
                   (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' ||
                    s_[pos_] == 'e' || s_[pos_] == 'E' ||
                    ((s_[pos_] == '+' || s_[pos_] == '-') && pos_ > 0 &&
                     (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E'))))
                num += s_[pos_++];
            auto n = std::make_shared<Expr>();
            n->kind = Expr::Kind::number;
            n->value = decimal_to_rational(num);
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
                name += s_[pos_++];
            auto n = std::make_shared<Expr>();
            n->kind = Expr::Kind::variable;
            n->name = name;
            return n;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline ExprPtr parse_expression(const std::string& text) { return detail::ExprParser(text).parse(); }

template <class F>
F eval_expression(const ExprPtr& e, const std::map<std::string, F>& env) {
    switch (e->kind) {
        case Expr::Kind::number: return from_rational<F>(e->value);
        case Expr::Kind::variable: {
            auto it = env.find(e->name);
            if (it == env.end()) throw UsageError("unbound parameter '" + e->name + "'");
            return it->second;
        }
        case Expr::Kind::add: return eval_expression(e->lhs, env) + eval_expression(e->rhs, env);
        case Expr::Kind::sub: return eval_expression(e->lhs, env) - eval_expression(e->rhs, env);
        case Expr::Kind::mul: return eval_expression(e->lhs, env) * eval_expression(e->rhs, env);
        case Expr::Kind::div: {
            F d = eval_expression(e->rhs, env);
            if (field_is_zero(d)) throw UsageError("division by zero in coefficient expression");
            return eval_expression(e->lhs, env) / d;
        }
        case Expr::Kind::neg: return -eval_expression(e->lhs, env);
        case Expr::Kind::pow: return field_pow(eval_expression(e->lhs, env), e->exponent);
    }
    throw InternalError("unreachable expression kind");
}

inline void collect_names(const ExprPtr& e, std::set<std::string>& out) {
    if (!e) return;
    if (e->kind == Expr::Kind::variable) out.insert(e->name);
    collect_names(e->lhs, out);
    collect_names(e->rhs, out);
}

// ---- field description ------------------------------------------------

struct ParamValue {
    bool is_real = false;
    Rational rational;   // when !is_real
    std::string decimal; // when is_real; converted at bind time so it
                         // honors the precision in force
};

struct TermSpec {
    int i = 0;
    int j = 0;
    std::optional<Rational> constant; // [num, den, i, j] form
    ExprPtr expr;                     // ["expr", i, j] form
};

struct FieldSpec {
    std::vector<TermSpec> upper_x, upper_y, lower_x, lower_y;
    std::map<std::string, ParamValue> parameters;

    std::set<std::string> names_used() const {
        std::set<std::string> out;
        for (const auto* list : {&upper_x, &upper_y, &lower_x, &lower_y})
            for (const TermSpec& t : *list) collect_names(t.expr, out);
        return out;
    }

    bool has_real_parameter() const {
        for (const auto& [name, v] : parameters)
            if (v.is_real) return true;
        return false;
    }
};

namespace detail {

inline std::pair<int, int> line_col_of_offset(const std::string& text, std::size_t offset) {
    int line = 1, col = 1;
    for (std::size_t t = 0; t < offset && t < text.size(); ++t) {
        if (text[t] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline std::vector<TermSpec> parse_terms(const nlohmann::json& arr, const std::string& where) {
    if (!arr.is_array()) throw UsageError(where + ": expected an array of monomial entries");
    std::vector<TermSpec> out;
    for (const auto& entry : arr) {
        if (!entry.is_array()) throw UsageError(where + ": each monomial must be an array");
        TermSpec t;
        if (entry.size() == 4 && entry[0].is_number_integer() && entry[1].is_number_integer()) {
            const long long num = entry[0].get<long long>();
            const long long den = entry[1].get<long long>();
            if (den == 0) throw UsageError(where + ": zero denominator");
            t.constant = make_rational(Integer(num), Integer(den));
            t.i = entry[2].get<int>();
            t.j = entry[3].get<int>();
        } else if (entry.size() == 3 && entry[0].is_string()) {
            t.expr = parse_expression(entry[0].get<std::string>());
            t.i = entry[1].get<int>();
            t.j = entry[2].get<int>();
        } else {
            throw UsageError(where + ": monomial must be [num, den, i, j] or [\"expr\", i, j]");
        }
        if (t.i < 0 || t.j < 0) throw UsageError(where + ": exponents must be nonnegative");
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace detail

inline FieldSpec parse_field_spec(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = detail::line_col_of_offset(json_text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(e.what(), line, col);
    }
    FieldSpec spec;
    if (!doc.contains("upper") || !doc.contains("lower"))
        throw UsageError("input must contain 'upper' and 'lower' fields");
    spec.upper_x = detail::parse_terms(doc["upper"].at("X"), "upper.X");
    spec.upper_y = detail::parse_terms(doc["upper"].at("Y"), "upper.Y");
    spec.lower_x = detail::parse_terms(doc["lower"].at("X"), "lower.X");
    spec.lower_y = detail::parse_terms(doc["lower"].at("Y"), "lower.Y");
    if (doc.contains("parameters")) {
        if (!doc["parameters"].is_object()) throw UsageError("'parameters' must be an object");
        for (const auto& [name, val] : doc["parameters"].items()) {
            ParamValue pv;
            if (val.is_object() && val.contains("rational")) {
                const auto& r = val["rational"];
                if (!r.is_array() || r.size() != 2) throw UsageError("parameter '" + name + "': rational must be [num, den]");
                const long long den = r[1].get<long long>();
                if (den == 0) throw UsageError("parameter '" + name + "': zero denominator");
                pv.rational = make_rational(Integer(r[0].get<long long>()), Integer(den));
            } else if (val.is_object() && val.contains("real")) {
                pv.is_real = true;
                pv.decimal = val["real"].get<std::string>();
            } else {
                throw UsageError("parameter '" + name + "' must carry 'rational' or 'real'");
            }
            spec.parameters.emplace(name, std::move(pv));
        }
    }
    return spec;
}

// bind every name to a field value; real decimals are materialized at
// the current working precision
template <class F>
std::map<std::string, F> default_bindings(const FieldSpec& spec) {
    std::map<std::string, F> env;
    for (const auto& [name, v] : spec.parameters) {
        if (v.is_real) {
            if constexpr (std::is_same_v<F, Rational>)
                throw UsageError("parameter '" + name + "' is real; exact-rational binding impossible");
            else
                env.emplace(name, F(v.decimal));
        } else {
            env.emplace(name, from_rational<F>(v.rational));
        }
    }
    return env;
}

template <class F>
PiecewiseField<F> bind_field(const FieldSpec& spec, const std::map<std::string, F>& env) {
    auto build = [&](const std::vector<TermSpec>& terms) {
        Poly2<F> p;
        for (const TermSpec& t : terms) {
            F c = t.constant ? from_rational<F>(*t.constant) : eval_expression<F>(t.expr, env);
            p.add_term(t.i, t.j, c);
        }
        return p;
    };
    PiecewiseField<F> f;
    f.upper.X = build(spec.upper_x);
    f.upper.Y = build(spec.upper_y);
    f.lower.X = build(spec.lower_x);
    f.lower.Y = build(spec.lower_y);
    return f;
}

} // namespace tansing
