#include "helixlab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

namespace helixlab {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

// ---------------------------------------------------------------------------
// Expr construction

Expr Expr::constant(double v, int arity) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Constant;
    n->value = v;
    return Expr(std::move(n), arity);
}

Expr Expr::variable(int index, int arity) {
    if (index < 1 || index > arity)
        throw InputError("variable index " + std::to_string(index) + " out of range [1, " +
                         std::to_string(arity) + "]");
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Variable;
    n->var_index = index;
    return Expr(std::move(n), arity);
}

Expr Expr::unary(UnaryFn fn, const Expr& e) {
    // negated literals are folded so that every tree has one canonical form
    if (fn == UnaryFn::Neg && e.node().kind == ExprNode::Kind::Constant)
        return Expr::constant(-e.node().value, e.arity());
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Unary;
    n->fn = fn;
    n->lhs = e.root();
    return Expr(std::move(n), e.arity());
}

Expr Expr::binary(BinaryOp op, const Expr& a, const Expr& b) {
    if (a.arity() != b.arity())
        throw InputError("mixing expressions of different arity");
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Binary;
    n->op = op;
    n->lhs = a.root();
    n->rhs = b.root();
    return Expr(std::move(n), a.arity());
}

// ---------------------------------------------------------------------------
// Jet2 arithmetic

Jet2 Jet2::constant(double v, int m) {
    Jet2 j;
    j.value = v;
    j.gradient = Eigen::VectorXd::Zero(m);
    j.hessian = Eigen::MatrixXd::Zero(m, m);
    return j;
}

Jet2 Jet2::variable(double v, int index, int m) {
    Jet2 j = constant(v, m);
    j.gradient(index) = 1.0;
    return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.value = a.value + b.value;
    r.gradient = a.gradient + b.gradient;
    r.hessian = a.hessian + b.hessian;
    return r;
}

Jet2 operator-(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.value = a.value - b.value;
    r.gradient = a.gradient - b.gradient;
    r.hessian = a.hessian - b.hessian;
    return r;
}

Jet2 operator-(const Jet2& a) {
    Jet2 r;
    r.value = -a.value;
    r.gradient = -a.gradient;
    r.hessian = -a.hessian;
    return r;
}

namespace {

// Concrete g g^T before any scalar touches it; entries are then single
// commutative products and the matrix is symmetric to the last bit.
Eigen::MatrixXd self_outer(const Eigen::VectorXd& g) {
    Eigen::MatrixXd M = g * g.transpose();
    return M;
}

// a b^T + b a^T with both triangles written from the same scalar, so the
// result is symmetric to the last bit
Eigen::MatrixXd sym_outer(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    const Eigen::Index m = a.size();
    Eigen::MatrixXd M(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        M(i, i) = 2.0 * a(i) * b(i);
        for (Eigen::Index j = i + 1; j < m; ++j) {
            const double v = a(i) * b(j) + a(j) * b(i);
            M(i, j) = v;
            M(j, i) = v;
        }
    }
    return M;
}

} // namespace

Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.value = a.value * b.value;
    r.gradient = a.value * b.gradient + b.value * a.gradient;
    r.hessian = a.value * b.hessian + b.value * a.hessian + sym_outer(a.gradient, b.gradient);
    return r;
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
    const double v = b.value;
    Jet2 r;
    r.value = a.value / v;
    r.gradient = a.gradient / v - (a.value / (v * v)) * b.gradient;
    r.hessian = a.hessian / v - sym_outer(a.gradient, b.gradient) / (v * v) -
                (a.value / (v * v)) * b.hessian +
                (2.0 * a.value / (v * v * v)) * self_outer(b.gradient);
    return r;
}

namespace {

// f(g) with scalar derivatives d1 = f'(g), d2 = f''(g)
Jet2 compose(const Jet2& g, double value, double d1, double d2) {
    Jet2 r;
    r.value = value;
    r.gradient = d1 * g.gradient;
    r.hessian = d1 * g.hessian + d2 * self_outer(g.gradient);
    return r;
}

bool is_integral(double x) {
    return std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e9;
}

} // namespace

// ---------------------------------------------------------------------------
// Evaluation

namespace {

class Evaluator {
  public:
    Evaluator(const Eigen::VectorXd& u, int arity) : u_(u), m_(arity) {}

    double value(const ExprNode& n) const {
        switch (n.kind) {
        case ExprNode::Kind::Constant: return n.value;
        case ExprNode::Kind::Variable: return u_(n.var_index - 1);
        case ExprNode::Kind::Unary: {
            const double x = value(*n.lhs);
            switch (n.fn) {
            case UnaryFn::Neg: return -x;
            case UnaryFn::Sin: return std::sin(x);
            case UnaryFn::Cos: return std::cos(x);
            case UnaryFn::Tan: return std::tan(x);
            case UnaryFn::Atan: return std::atan(x);
            case UnaryFn::Exp: return std::exp(x);
            case UnaryFn::Log:
                if (x <= 0.0) throw_domain("log of non-positive value", n);
                return std::log(x);
            case UnaryFn::Sqrt:
                if (x < 0.0) throw_domain("sqrt of negative value", n);
                return std::sqrt(x);
            }
            break;
        }
        case ExprNode::Kind::Binary: {
            const double a = value(*n.lhs);
            const double b = value(*n.rhs);
            switch (n.op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div:
                if (b == 0.0) throw_domain("division by zero", n);
                return a / b;
            case BinaryOp::Pow: {
                if (n.rhs->kind == ExprNode::Kind::Constant && is_integral(n.rhs->value)) {
                    if (a == 0.0 && b < 0.0) throw_domain("zero raised to negative power", n);
                    return std::pow(a, b);
                }
                if (a <= 0.0) throw_domain("power with non-positive base", n);
                return std::pow(a, b);
            }
            }
            break;
        }
        }
        throw Error("corrupt expression node");
    }

    Jet2 jet(const ExprNode& n) const {
        switch (n.kind) {
        case ExprNode::Kind::Constant: return Jet2::constant(n.value, m_);
        case ExprNode::Kind::Variable: return Jet2::variable(u_(n.var_index - 1), n.var_index - 1, m_);
        case ExprNode::Kind::Unary: {
            const Jet2 x = jet(*n.lhs);
            const double v = x.value;
            switch (n.fn) {
            case UnaryFn::Neg: return -x;
            case UnaryFn::Sin: return compose(x, std::sin(v), std::cos(v), -std::sin(v));
            case UnaryFn::Cos: return compose(x, std::cos(v), -std::sin(v), -std::cos(v));
            case UnaryFn::Tan: {
                const double t = std::tan(v);
                const double sec2 = 1.0 + t * t;
                return compose(x, t, sec2, 2.0 * t * sec2);
            }
            case UnaryFn::Atan: {
                const double w = 1.0 + v * v;
                return compose(x, std::atan(v), 1.0 / w, -2.0 * v / (w * w));
            }
            case UnaryFn::Exp: {
                const double e = std::exp(v);
                return compose(x, e, e, e);
            }
            case UnaryFn::Log:
                if (v <= 0.0) throw_domain("log of non-positive value", n);
                return compose(x, std::log(v), 1.0 / v, -1.0 / (v * v));
            case UnaryFn::Sqrt: {
                if (v < 0.0) throw_domain("sqrt of negative value", n);
                if (v == 0.0) throw_domain("sqrt derivative undefined at zero", n);
                const double s = std::sqrt(v);
                return compose(x, s, 0.5 / s, -0.25 / (s * v));
            }
            }
            break;
        }
        case ExprNode::Kind::Binary: {
            switch (n.op) {
            case BinaryOp::Add: return jet(*n.lhs) + jet(*n.rhs);
            case BinaryOp::Sub: return jet(*n.lhs) - jet(*n.rhs);
            case BinaryOp::Mul: return jet(*n.lhs) * jet(*n.rhs);
            case BinaryOp::Div: {
                const Jet2 a = jet(*n.lhs);
                const Jet2 b = jet(*n.rhs);
                if (b.value == 0.0) throw_domain("division by zero", n);
                return a / b;
            }
            case BinaryOp::Pow: return pow_jet(n);
            }
            break;
        }
        }
        throw Error("corrupt expression node");
    }

  private:
    Jet2 pow_jet(const ExprNode& n) const {
        const Jet2 base = jet(*n.lhs);
        const double a = base.value;

        if (n.rhs->kind == ExprNode::Kind::Constant) {
            const double k = n.rhs->value;
            if (is_integral(k)) {
                if (a == 0.0 && k < 2.0 && k != 0.0 && k != 1.0)
                    throw_domain("integer power derivative undefined at zero base", n);
                if (k == 0.0) return Jet2::constant(1.0, m_);
                if (k == 1.0) return base;
                const double d1 = k * std::pow(a, k - 1.0);
                const double d2 = k * (k - 1.0) * std::pow(a, k - 2.0);
                return compose(base, std::pow(a, k), d1, d2);
            }
            if (a <= 0.0) throw_domain("power with non-positive base", n);
            const double d1 = k * std::pow(a, k - 1.0);
            const double d2 = k * (k - 1.0) * std::pow(a, k - 2.0);
            return compose(base, std::pow(a, k), d1, d2);
        }

        // variable exponent: a^b = exp(b*log(a)), needs a > 0
        if (a <= 0.0) throw_domain("power with non-positive base", n);
        const Jet2 expo = jet(*n.rhs);
        const Jet2 loga = compose(base, std::log(a), 1.0 / a, -1.0 / (a * a));
        const Jet2 prod = expo * loga;
        const double e = std::exp(prod.value);
        return compose(prod, e, e, e);
    }

    [[noreturn]] void throw_domain(const char* msg, const ExprNode& n) const;

    const Eigen::VectorXd& u_;
    int m_;
};

std::string render(const ExprNode& n);

std::string render_unary(const ExprNode& n) {
    const std::string inner = render(*n.lhs);
    switch (n.fn) {
    case UnaryFn::Neg: return "(-(" + inner + "))";
    case UnaryFn::Sin: return "sin(" + inner + ")";
    case UnaryFn::Cos: return "cos(" + inner + ")";
    case UnaryFn::Tan: return "tan(" + inner + ")";
    case UnaryFn::Atan: return "atan(" + inner + ")";
    case UnaryFn::Exp: return "exp(" + inner + ")";
    case UnaryFn::Log: return "log(" + inner + ")";
    case UnaryFn::Sqrt: return "sqrt(" + inner + ")";
    }
    throw Error("corrupt unary node");
}

std::string render(const ExprNode& n) {
    switch (n.kind) {
    case ExprNode::Kind::Constant: return format_double(n.value);
    case ExprNode::Kind::Variable: return "u" + std::to_string(n.var_index);
    case ExprNode::Kind::Unary: return render_unary(n);
    case ExprNode::Kind::Binary: {
        const char* op = "";
        switch (n.op) {
        case BinaryOp::Add: op = "+"; break;
        case BinaryOp::Sub: op = "-"; break;
        case BinaryOp::Mul: op = "*"; break;
        case BinaryOp::Div: op = "/"; break;
        case BinaryOp::Pow: op = "^"; break;
        }
        return "(" + render(*n.lhs) + ")" + op + "(" + render(*n.rhs) + ")";
    }
    }
    throw Error("corrupt expression node");
}

void Evaluator::throw_domain(const char* msg, const ExprNode& n) const {
    throw EvalError(msg, render(n));
}

} // namespace

double eval_value(const Expr& e, const Eigen::VectorXd& u) {
    if (!e.valid()) throw InputError("evaluating empty expression");
    if (u.size() != e.arity()) throw InputError("evaluation point has wrong dimension");
    return Evaluator(u, e.arity()).value(e.node());
}

Jet2 eval_jet2(const Expr& e, const Eigen::VectorXd& u) {
    if (!e.valid()) throw InputError("evaluating empty expression");
    if (u.size() != e.arity()) throw InputError("evaluation point has wrong dimension");
    return Evaluator(u, e.arity()).jet(e.node());
}

std::string to_string(const Expr& e) {
    if (!e.valid()) return "";
    return render(e.node());
}

bool structurally_equal(const Expr& a, const Expr& b) {
    std::function<bool(const ExprNode&, const ExprNode&)> eq = [&](const ExprNode& x,
                                                                   const ExprNode& y) -> bool {
        if (x.kind != y.kind) return false;
        switch (x.kind) {
        case ExprNode::Kind::Constant: return x.value == y.value;
        case ExprNode::Kind::Variable: return x.var_index == y.var_index;
        case ExprNode::Kind::Unary: return x.fn == y.fn && eq(*x.lhs, *y.lhs);
        case ExprNode::Kind::Binary: return x.op == y.op && eq(*x.lhs, *y.lhs) && eq(*x.rhs, *y.rhs);
        }
        return false;
    };
    if (!a.valid() || !b.valid()) return a.valid() == b.valid();
    return eq(a.node(), b.node());
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over a small token stream.

namespace {

struct Token {
    enum class Type { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
    Type type = Type::End;
    double number = 0.0;
    std::string ident;
    std::size_t pos = 0;
};

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token t = current_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        current_ = Token{};
        current_.pos = pos_;
        if (pos_ >= text_.size()) {
            current_.type = Token::Type::End;
            return;
        }
        const char c = text_[pos_];
        switch (c) {
        case '+': current_.type = Token::Type::Plus; ++pos_; return;
        case '-': current_.type = Token::Type::Minus; ++pos_; return;
        case '*': current_.type = Token::Type::Star; ++pos_; return;
        case '/': current_.type = Token::Type::Slash; ++pos_; return;
        case '^': current_.type = Token::Type::Caret; ++pos_; return;
        case '(': current_.type = Token::Type::LParen; ++pos_; return;
        case ')': current_.type = Token::Type::RParen; ++pos_; return;
        default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            lex_number();
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            current_.type = Token::Type::Ident;
            current_.ident = std::string(text_.substr(start, pos_ - start));
            return;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    void lex_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark; // 'e' belongs to a following identifier, not this number
            }
        }
        const std::string_view s = text_.substr(start, pos_ - start);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size())
            throw ParseError("malformed number '" + std::string(s) + "'", start);
        current_.type = Token::Type::Number;
        current_.number = v;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    Token current_;
};

class Parser {
  public:
    Parser(std::string_view text, int arity) : lex_(text), m_(arity) {}

    Expr run() {
        Expr e = expression();
        const Token& t = lex_.peek();
        if (t.type != Token::Type::End)
            throw ParseError("unexpected trailing input", t.pos);
        return e;
    }

  private:
    Expr expression() {
        Expr e = term();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.type == Token::Type::Plus) {
                lex_.take();
                e = Expr::binary(BinaryOp::Add, e, term());
            } else if (t.type == Token::Type::Minus) {
                lex_.take();
                e = Expr::binary(BinaryOp::Sub, e, term());
            } else {
                return e;
            }
        }
    }

    Expr term() {
        Expr e = unary();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.type == Token::Type::Star) {
                lex_.take();
                e = Expr::binary(BinaryOp::Mul, e, unary());
            } else if (t.type == Token::Type::Slash) {
                lex_.take();
                e = Expr::binary(BinaryOp::Div, e, unary());
            } else {
                return e;
            }
        }
    }

    Expr unary() {
        if (lex_.peek().type == Token::Type::Minus) {
            lex_.take();
            Expr inner = unary();
            // fold leading minus into numeric literals so printing round-trips
            if (inner.node().kind == ExprNode::Kind::Constant)
                return Expr::constant(-inner.node().value, m_);
            return Expr::unary(UnaryFn::Neg, inner);
        }
        return power();
    }

    Expr power() {
        Expr base = primary();
        if (lex_.peek().type == Token::Type::Caret) {
            lex_.take();
            return Expr::binary(BinaryOp::Pow, base, unary()); // right-assoc, exponent may be signed
        }
        return base;
    }

    Expr primary() {
        Token t = lex_.take();
        switch (t.type) {
        case Token::Type::Number: return Expr::constant(t.number, m_);
        case Token::Type::LParen: {
            Expr e = expression();
            expect_rparen();
            return e;
        }
        case Token::Type::Ident: return ident(t);
        default: throw ParseError("expected a number, variable, function or '('", t.pos);
        }
    }

    Expr ident(const Token& t) {
        static const std::pair<const char*, UnaryFn> functions[] = {
            {"sin", UnaryFn::Sin}, {"cos", UnaryFn::Cos},   {"tan", UnaryFn::Tan},
            {"atan", UnaryFn::Atan}, {"exp", UnaryFn::Exp}, {"log", UnaryFn::Log},
            {"sqrt", UnaryFn::Sqrt},
        };
        for (const auto& [name, fn] : functions) {
            if (t.ident == name) {
                if (lex_.peek().type != Token::Type::LParen)
                    throw ParseError("function '" + t.ident + "' must be followed by '('",
                                     lex_.peek().pos);
                lex_.take();
                Expr arg = expression();
                expect_rparen();
                return Expr::unary(fn, arg);
            }
        }
        if (t.ident.size() >= 2 && t.ident[0] == 'u') {
            bool digits = true;
            for (std::size_t i = 1; i < t.ident.size(); ++i)
                digits = digits && std::isdigit(static_cast<unsigned char>(t.ident[i]));
            if (digits) {
                const long idx = std::strtol(t.ident.c_str() + 1, nullptr, 10);
                if (idx < 1 || idx > m_)
                    throw ParseError("variable index out of range: '" + t.ident + "' (arity " +
                                         std::to_string(m_) + ")",
                                     t.pos);
                return Expr::variable(static_cast<int>(idx), m_);
            }
        }
        throw ParseError("unknown identifier '" + t.ident + "'", t.pos);
    }

    void expect_rparen() {
        const Token t = lex_.take();
        if (t.type != Token::Type::RParen)
            throw ParseError("expected ')'", t.pos);
    }

    Lexer lex_;
    int m_;
};

} // namespace

Expr parse_expression(std::string_view text, int arity) {
    if (arity < 1) throw InputError("expression arity must be >= 1");
    return Parser(text, arity).run();
}

} // namespace helixlab
