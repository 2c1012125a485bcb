#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "helixlab/errors.hpp"

namespace helixlab {

enum class UnaryFn { Neg, Sin, Cos, Tan, Atan, Exp, Log, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Constant, Variable, Unary, Binary };

    Kind kind;
    double value = 0.0;     // Constant
    int var_index = 0;      // Variable, 1-based
    UnaryFn fn = UnaryFn::Neg;
    BinaryOp op = BinaryOp::Add;
    NodePtr lhs, rhs;       // Unary uses lhs only
};

// Immutable scalar expression over chart variables u1..um. Shared tree,
// cheap to copy, safe to evaluate concurrently.
class Expr {
  public:
    Expr() = default;

    static Expr constant(double v, int arity);
    static Expr variable(int index, int arity); // 1-based, throws on index > arity
    static Expr unary(UnaryFn fn, const Expr& e);
    static Expr binary(BinaryOp op, const Expr& a, const Expr& b);

    bool valid() const { return node_ != nullptr; }
    int arity() const { return arity_; }
    const ExprNode& node() const { return *node_; }
    const NodePtr& root() const { return node_; }

  private:
    Expr(NodePtr node, int arity) : node_(std::move(node)), arity_(arity) {}

    NodePtr node_;
    int arity_ = 0;
};

// Value with exact first and second derivatives at a point; the hessian is
// symmetric by construction of every rule below.
struct Jet2 {
    double value = 0.0;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;

    static Jet2 constant(double v, int m);
    static Jet2 variable(double v, int index, int m); // 0-based seat
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

// Parses an expression over u1..um with precedence ^ > unary- > *,/ > +,-.
// '^' is right-associative, everything else left-associative.
Expr parse_expression(std::string_view text, int arity);

// Plain double evaluation; no derivative bookkeeping. This is what the
// finite-difference oracles in the tests run on.
double eval_value(const Expr& e, const Eigen::VectorXd& u);

// Value + gradient + hessian at u. Throws EvalError on domain violations,
// naming the offending subexpression.
Jet2 eval_jet2(const Expr& e, const Eigen::VectorXd& u);

// Unambiguous (fully parenthesised) rendering; parse(to_string(e)) is
// structurally identical to e.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

} // namespace helixlab
