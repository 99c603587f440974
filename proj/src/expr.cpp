#include "cpflow/expr.hpp"

#include "cpflow/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cpflow {

struct Expression::Node {
    enum class Op { Num, X, Y, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Exp } op;
    double value = 0.0;
    std::shared_ptr<const Node> a, b;

    double eval(double x, double y) const {
        switch (op) {
        case Op::Num: return value;
        case Op::X: return x;
        case Op::Y: return y;
        case Op::Add: return a->eval(x, y) + b->eval(x, y);
        case Op::Sub: return a->eval(x, y) - b->eval(x, y);
        case Op::Mul: return a->eval(x, y) * b->eval(x, y);
        case Op::Div: return a->eval(x, y) / b->eval(x, y);
        case Op::Pow: return std::pow(a->eval(x, y), b->eval(x, y));
        case Op::Neg: return -a->eval(x, y);
        case Op::Sin: return std::sin(a->eval(x, y));
        case Op::Cos: return std::cos(a->eval(x, y));
        case Op::Exp: return std::exp(a->eval(x, y));
        }
        return 0.0;
    }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = decltype(Expression::Node::op);

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr, double v = 0.0) {
    auto n = std::make_shared<Expression::Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    n->value = v;
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr parse() {
        NodePtr e = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& why) const {
        std::ostringstream os;
        os << "expression '" << s_ << "': " << why << " at position " << pos_;
        throw ConfigError(os.str());
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr l = term();
        for (;;) {
            if (accept('+')) l = make(Op::Add, l, term());
            else if (accept('-')) l = make(Op::Sub, l, term());
            else return l;
        }
    }

    NodePtr term() {
        NodePtr l = unary();
        for (;;) {
            if (accept('*')) l = make(Op::Mul, l, unary());
            else if (accept('/')) l = make(Op::Div, l, unary());
            else return l;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Op::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (accept('^')) return make(Op::Pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        if (accept('(')) {
            NodePtr e = expr();
            if (!accept(')')) fail("expected ')'");
            return e;
        }
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
            if (ec != std::errc()) fail("bad number");
            pos_ = static_cast<std::size_t>(ptr - s_.data());
            return make(Op::Num, nullptr, nullptr, v);
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string id = s_.substr(start, pos_ - start);
            if (id == "x") return make(Op::X);
            if (id == "y") return make(Op::Y);
            if (id == "pi") return make(Op::Num, nullptr, nullptr, std::numbers::pi);
            Op f;
            if (id == "sin") f = Op::Sin;
            else if (id == "cos") f = Op::Cos;
            else if (id == "exp") f = Op::Exp;
            else {
                pos_ = start;
                fail("unknown identifier '" + id + "'");
            }
            if (!accept('(')) fail("expected '(' after " + id);
            NodePtr arg = expr();
            if (!accept(')')) fail("expected ')'");
            return make(f, arg);
        }
        fail("unexpected character");
    }
};

} // namespace

Expression Expression::parse(const std::string& text) {
    Expression e;
    e.text_ = text;
    e.root_ = Parser(text).parse();
    return e;
}

double Expression::operator()(double x, double y) const { return root_->eval(x, y); }

} // namespace cpflow
