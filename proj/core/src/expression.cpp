#include "geoindex/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <utility>

namespace geoindex::expr {

namespace detail {

enum class Op { kConst, kVarX, kVarY, kAdd, kSub, kMul, kDiv, kPow, kNeg, kSin, kCos, kExp, kSqrt };

struct Node {
    Op op = Op::kConst;
    double value = 0.0;
    std::shared_ptr<const Node> lhs, rhs;
};

namespace {

double eval(const Node& n, double x, double y) {
    switch (n.op) {
        case Op::kConst: return n.value;
        case Op::kVarX: return x;
        case Op::kVarY: return y;
        case Op::kAdd: return eval(*n.lhs, x, y) + eval(*n.rhs, x, y);
        case Op::kSub: return eval(*n.lhs, x, y) - eval(*n.rhs, x, y);
        case Op::kMul: return eval(*n.lhs, x, y) * eval(*n.rhs, x, y);
        case Op::kDiv: return eval(*n.lhs, x, y) / eval(*n.rhs, x, y);
        case Op::kPow: return std::pow(eval(*n.lhs, x, y), eval(*n.rhs, x, y));
        case Op::kNeg: return -eval(*n.lhs, x, y);
        case Op::kSin: return std::sin(eval(*n.lhs, x, y));
        case Op::kCos: return std::cos(eval(*n.lhs, x, y));
        case Op::kExp: return std::exp(eval(*n.lhs, x, y));
        case Op::kSqrt: return std::sqrt(eval(*n.lhs, x, y));
    }
    return 0.0;  // unreachable
}

bool uses(const Node& n, Op var) {
    if (n.op == var) return true;
    if (n.lhs && uses(*n.lhs, var)) return true;
    if (n.rhs && uses(*n.rhs, var)) return true;
    return false;
}

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->value = v;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& src) : src_(src) {}

    NodePtr parse() {
        NodePtr root = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input");
        return root;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        std::ostringstream msg;
        msg << what << " at position " << pos_ << " in '" << src_ << "'";
        throw ConfigError(msg.str());
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (consume('+')) {
                lhs = make(Op::kAdd, lhs, parse_term());
            } else if (consume('-')) {
                lhs = make(Op::kSub, lhs, parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (consume('*')) {
                lhs = make(Op::kMul, lhs, parse_unary());
            } else if (consume('/')) {
                lhs = make(Op::kDiv, lhs, parse_unary());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_unary() {
        bool negate = false;
        for (;;) {
            if (consume('-')) {
                negate = !negate;
            } else if (consume('+')) {
                // no-op
            } else {
                break;
            }
        }
        NodePtr p = parse_power();
        return negate ? make(Op::kNeg, p) : p;
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (consume('^')) return make(Op::kPow, base, parse_unary());
        return base;
    }

    NodePtr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size()) fail("expected an operand");
        const char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_expr();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        const char* begin = src_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("malformed number");
        pos_ += static_cast<std::size_t>(end - begin);
        return make_const(v);
    }

    NodePtr parse_ident() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string name = src_.substr(start, pos_ - start);
        if (name == "x") return make(Op::kVarX);
        if (name == "y") return make(Op::kVarY);
        if (name == "pi") return make_const(M_PI);
        Op op;
        if (name == "sin") {
            op = Op::kSin;
        } else if (name == "cos") {
            op = Op::kCos;
        } else if (name == "exp") {
            op = Op::kExp;
        } else if (name == "sqrt") {
            op = Op::kSqrt;
        } else {
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        if (!consume('(')) fail("expected '(' after '" + name + "'");
        NodePtr arg = parse_expr();
        if (!consume(')')) fail("expected ')'");
        return make(op, arg);
    }

    const std::string& src_;
    std::size_t pos_ = 0;
};

}  // namespace
}  // namespace detail

double Expression::operator()(double x, double y) const {
    if (!root_) throw std::logic_error("Expression: evaluating an empty expression");
    return detail::eval(*root_, x, y);
}

bool Expression::uses_x() const { return root_ && detail::uses(*root_, detail::Op::kVarX); }
bool Expression::uses_y() const { return root_ && detail::uses(*root_, detail::Op::kVarY); }

Expression compile(const std::string& source) {
    Expression e;
    e.root_ = detail::Parser(source).parse();
    e.source_ = source;
    return e;
}

double evaluate_constant(const std::string& source) {
    const Expression e = compile(source);
    if (e.uses_x() || e.uses_y())
        throw ConfigError("expression '" + source + "' must be constant (no x or y)");
    return e(0.0, 0.0);
}

double parse_length(const std::string& source) {
    double value = 0.0;
    const std::size_t suffix = source.rfind("pi");
    if (suffix != std::string::npos && suffix == source.size() - 2 &&
        source.find_first_of("*/+^(") == std::string::npos) {
        const std::string prefix = source.substr(0, suffix);
        if (prefix.empty()) {
            value = M_PI;
        } else {
            char* end = nullptr;
            const double factor = std::strtod(prefix.c_str(), &end);
            if (end != prefix.c_str() + prefix.size())
                throw ConfigError("malformed length '" + source + "'");
            value = factor * M_PI;
        }
    } else {
        value = evaluate_constant(source);
    }
    if (!std::isfinite(value) || value <= 0.0)
        throw ConfigError("length '" + source + "' must be finite and positive");
    return value;
}

}  // namespace geoindex::expr
