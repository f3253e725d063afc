#include "laxkit/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

namespace laxkit::expr {

namespace {

const std::set<std::string>& function_names() {
    static const std::set<std::string> fns = {
        "sin", "cos", "tan", "sinh", "cosh", "tanh", "sech",
        "exp", "log", "sqrt", "atan", "abs"};
    return fns;
}

bool is_constant(const std::string& s) { return s == "pi" || s == "e" || s == "i"; }

struct Parser {
    const std::string& text;
    size_t pos = 0;

    explicit Parser(const std::string& t) : text(t) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) { ++pos; return true; }
        return false;
    }

    void expect(char c, const std::string& what) {
        if (!accept(c)) throw ParseError(pos, "syntax error", what);
    }

    ExprPtr parse_expression() {
        ExprPtr lhs = parse_term();
        while (true) {
            const char c = peek();
            if (c == '+' || c == '-') {
                ++pos;
                ExprPtr rhs = parse_term();
                auto node = std::make_shared<Expr>();
                node->tag = Expr::Tag::Binary;
                node->name = std::string(1, c);
                node->args = {lhs, rhs};
                lhs = node;
            } else {
                return lhs;
            }
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_unary();
        while (true) {
            const char c = peek();
            if (c == '*' || c == '/') {
                ++pos;
                ExprPtr rhs = parse_unary();
                auto node = std::make_shared<Expr>();
                node->tag = Expr::Tag::Binary;
                node->name = std::string(1, c);
                node->args = {lhs, rhs};
                lhs = node;
            } else {
                return lhs;
            }
        }
    }

    // Unary minus binds looser than ^: -x^2 parses as -(x^2).
    ExprPtr parse_unary() {
        if (peek() == '-') {
            ++pos;
            auto node = std::make_shared<Expr>();
            node->tag = Expr::Tag::Unary;
            node->name = "-";
            node->args = {parse_unary()};
            return node;
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_primary();
        if (peek() == '^') {
            ++pos;
            // Right-associative; the exponent may itself carry a unary minus.
            ExprPtr exponent = parse_unary_in_exponent();
            auto node = std::make_shared<Expr>();
            node->tag = Expr::Tag::Binary;
            node->name = "^";
            node->args = {base, exponent};
            return node;
        }
        return base;
    }

    ExprPtr parse_unary_in_exponent() {
        if (peek() == '-') {
            ++pos;
            auto node = std::make_shared<Expr>();
            node->tag = Expr::Tag::Unary;
            node->name = "-";
            node->args = {parse_unary_in_exponent()};
            return node;
        }
        return parse_power();
    }

    ExprPtr parse_primary() {
        const char c = peek();
        if (c == '(') {
            ++pos;
            ExprPtr inner = parse_expression();
            expect(')', "closing parenthesis");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_name();
        throw ParseError(pos, "syntax error", "expression");
    }

    ExprPtr parse_number() {
        skip_ws();
        const size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            size_t mark = pos;
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
                while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            } else {
                pos = mark;  // bare 'e' is the Euler constant, not an exponent
            }
        }
        double value = 0.0;
        auto res = std::from_chars(text.data() + start, text.data() + pos, value);
        if (res.ec != std::errc{}) throw ParseError(start, "syntax error", "number");
        auto node = std::make_shared<Expr>();
        node->tag = Expr::Tag::Number;
        node->number = value;
        return node;
    }

    ExprPtr parse_name() {
        skip_ws();
        const size_t start = pos;
        while (pos < text.size()
               && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        const std::string name = text.substr(start, pos - start);
        if (function_names().count(name)) {
            expect('(', "'(' after function name");
            ExprPtr arg = parse_expression();
            expect(')', "closing parenthesis");
            auto node = std::make_shared<Expr>();
            node->tag = Expr::Tag::Call;
            node->name = name;
            node->args = {arg};
            return node;
        }
        auto node = std::make_shared<Expr>();
        node->tag = is_constant(name) ? Expr::Tag::Constant : Expr::Tag::Ident;
        node->name = name;
        return node;
    }
};

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

ParseError::ParseError(size_t off, const std::string& what, const std::string& exp)
    : std::runtime_error(what + " at offset " + std::to_string(off) + ", expected " + exp),
      offset(off),
      expected(exp) {}

bool Expr::equals(const Expr& other) const {
    if (tag != other.tag || name != other.name || args.size() != other.args.size())
        return false;
    if (tag == Tag::Number && number != other.number) return false;
    for (size_t k = 0; k < args.size(); ++k)
        if (!args[k]->equals(*other.args[k])) return false;
    return true;
}

ExprPtr parse(const std::string& text) {
    Parser p(text);
    ExprPtr e = p.parse_expression();
    p.skip_ws();
    if (p.pos != text.size()) throw ParseError(p.pos, "syntax error", "end of input");
    return e;
}

std::string print(const ExprPtr& e) {
    switch (e->tag) {
        case Expr::Tag::Number: return format_double(e->number);
        case Expr::Tag::Ident:
        case Expr::Tag::Constant: return e->name;
        case Expr::Tag::Unary: return "(-" + print(e->args[0]) + ")";
        case Expr::Tag::Binary:
            return "(" + print(e->args[0]) + e->name + print(e->args[1]) + ")";
        case Expr::Tag::Call: return e->name + "(" + print(e->args[0]) + ")";
    }
    return {};
}

cplx eval(const ExprPtr& e, const std::map<std::string, cplx>& bindings) {
    switch (e->tag) {
        case Expr::Tag::Number: return cplx(e->number, 0.0);
        case Expr::Tag::Constant:
            if (e->name == "pi") return cplx(M_PI, 0.0);
            if (e->name == "e") return cplx(M_E, 0.0);
            return cplx(0.0, 1.0);  // i
        case Expr::Tag::Ident: {
            auto it = bindings.find(e->name);
            if (it == bindings.end()) throw EvalError("unbound identifier: " + e->name);
            return it->second;
        }
        case Expr::Tag::Unary: {
            // Normalize -0.0 parts so literals like -1 stay on the principal
            // side of the log/sqrt branch cut.
            const cplx v = -eval(e->args[0], bindings);
            return cplx(v.real() == 0.0 ? 0.0 : v.real(),
                        v.imag() == 0.0 ? 0.0 : v.imag());
        }
        case Expr::Tag::Binary: {
            const cplx a = eval(e->args[0], bindings);
            const cplx b = eval(e->args[1], bindings);
            switch (e->name[0]) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            throw EvalError("unknown operator");
        }
        case Expr::Tag::Call: {
            const cplx a = eval(e->args[0], bindings);
            const std::string& f = e->name;
            if (f == "sin") return std::sin(a);
            if (f == "cos") return std::cos(a);
            if (f == "tan") return std::tan(a);
            if (f == "sinh") return std::sinh(a);
            if (f == "cosh") return std::cosh(a);
            if (f == "tanh") return std::tanh(a);
            if (f == "sech") return 1.0 / std::cosh(a);
            if (f == "exp") return std::exp(a);
            if (f == "log") return std::log(a);
            if (f == "sqrt") return std::sqrt(a);
            if (f == "atan") return std::atan(a);
            if (f == "abs") return cplx(std::abs(a), 0.0);
            throw EvalError("unknown function: " + f);
        }
    }
    throw EvalError("malformed expression tree");
}

}  // namespace laxkit::expr
