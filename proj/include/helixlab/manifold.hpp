#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "helixlab/expr.hpp"

namespace helixlab {

// Rectangular chart domain in R^m.
struct Box {
    Eigen::VectorXd lo, hi;

    int dim() const { return static_cast<int>(lo.size()); }
    bool contains(const Eigen::VectorXd& u) const;
};

// Point value, Jacobian and per-component Hessians of the chart map at u.
struct ImmersionJets {
    Eigen::VectorXd p;                     // n
    Eigen::MatrixXd jacobian;              // n x m
    std::vector<Eigen::MatrixXd> hessians; // n entries, each m x m symmetric
};

// A chart immersion f: U subset R^m -> R^n given by n scalar expressions.
class Immersion {
  public:
    Immersion() = default;
    Immersion(std::string name, int m, int n, std::vector<Expr> components, Box domain);

    const std::string& name() const { return name_; }
    int dim() const { return m_; }
    int ambient_dim() const { return n_; }
    const Box& domain() const { return domain_; }
    const std::vector<Expr>& components() const { return components_; }

    Eigen::VectorXd point(const Eigen::VectorXd& u) const;
    ImmersionJets jets(const Eigen::VectorXd& u) const;

  private:
    std::string name_;
    int m_ = 0, n_ = 0;
    std::vector<Expr> components_;
    Box domain_;
};

// Orthonormal frame data at one chart point.
struct Frame {
    Eigen::VectorXd u;             // m
    Eigen::VectorXd p;             // n
    Eigen::MatrixXd jacobian;      // n x m
    Eigen::MatrixXd tangent_basis; // n x m, orthonormal columns
    Eigen::MatrixXd normal_basis;  // n x (n-m), orthonormal columns
    Eigen::MatrixXd metric;        // m x m = J^T J

    Eigen::VectorXd tangential(const Eigen::VectorXd& w) const;
    Eigen::VectorXd normal(const Eigen::VectorXd& w) const { return w - tangential(w); }

    // chart components of an ambient tangent vector: solve J c = w in the
    // least-squares sense via the metric
    Eigen::VectorXd chart_components(const Eigen::VectorXd& w) const;

    // chart components of each orthonormal tangent basis column (m x m)
    Eigen::MatrixXd tangent_chart_components() const;
};

// Relative singular-value floor below which a Jacobian counts as rank
// deficient.
inline constexpr double kSingularRelTol = 1e-10;

// Frame at u. Throws OutOfDomainError / SingularPointError.
Frame frame_at(const Immersion& M, const Eigen::VectorXd& u);

// Splits w into (tangential, normal); the two parts sum to w exactly.
std::pair<Eigen::VectorXd, Eigen::VectorXd> project(const Frame& F, const Eigen::VectorXd& w);

// True iff the centered ambient sample cloud over the grid has numerical
// rank n. Requires at least n+1 valid sample points.
bool is_full(const Immersion& M, const std::vector<Eigen::VectorXd>& grid);

// Cell-centered rectangular sampling grid, per_axis points per axis.
std::vector<Eigen::VectorXd> make_grid(const Box& box, int per_axis);

// Modified Gram-Schmidt with one reorthogonalization pass. Columns whose
// residual norm falls below drop_tol are dropped. Returns orthonormal columns.
Eigen::MatrixXd orthonormalize_mgs(const Eigen::MatrixXd& cols, double drop_tol = 1e-8);

} // namespace helixlab
