#pragma once

#include "helixlab/manifold.hpp"

namespace helixlab {

// Tangent vector field X = sum_i a^i(u) df/du_i given by m chart-component
// expressions.
class TangentField {
  public:
    TangentField() = default;
    TangentField(const Immersion& M, std::vector<Expr> components);

    static TangentField coordinate(const Immersion& M, int axis); // d/du_axis, 0-based
    static TangentField constant(const Immersion& M, const Eigen::VectorXd& coeffs);
    static TangentField parse(const Immersion& M, const std::vector<std::string>& exprs);

    int dim() const { return static_cast<int>(components_.size()); }
    Eigen::VectorXd chart_components(const Eigen::VectorXd& u) const;
    // (j,i) entry is d a^j / d u_i
    Eigen::MatrixXd chart_jacobian(const Eigen::VectorXd& u) const;
    Eigen::VectorXd ambient(const Immersion& M, const Eigen::VectorXd& u) const;

  private:
    std::vector<Expr> components_;
};

// Normal vector field given by n ambient-component expressions over the
// chart variables. Values are checked to be genuinely normal where used.
class NormalField {
  public:
    NormalField() = default;
    NormalField(const Immersion& M, std::vector<Expr> components);

    static NormalField constant(const Immersion& M, const Eigen::VectorXd& value);
    static NormalField parse(const Immersion& M, const std::vector<std::string>& exprs);

    int ambient_dim() const { return static_cast<int>(components_.size()); }
    Eigen::VectorXd value(const Eigen::VectorXd& u) const;
    // (k,i) entry is d xi^k / d u_i
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& u) const;

  private:
    std::vector<Expr> components_;
};

// Tolerance on the tangential part of a vector that claims to be normal.
inline constexpr double kNormalityTol = 1e-8;

struct GaussSplit {
    Eigen::VectorXd nabla_XY; // tangential part of D_X Y
    Eigen::VectorXd V_XY;     // normal part (second fundamental form)
};

struct WeingartenSplit {
    Eigen::VectorXd A_xi_X;     // tangential; A^xi(X) = tang(-D_X xi)
    Eigen::VectorXd nabla_perp; // normal part of D_X xi
};

// D_X Y = nabla_X Y + V(X,Y), computed exactly from second-order jets.
GaussSplit gauss_split(const Immersion& M, const Eigen::VectorXd& u, const TangentField& X,
                       const TangentField& Y);

Eigen::VectorXd second_fundamental_form(const Immersion& M, const Eigen::VectorXd& u,
                                        const TangentField& X, const TangentField& Y);

// Pointwise second fundamental form V(x,y) for chart components x, y.
Eigen::VectorXd second_fundamental_point(const ImmersionJets& jets, const Frame& F,
                                         const Eigen::VectorXd& x_chart,
                                         const Eigen::VectorXd& y_chart);

// D_X xi = -A^xi(X) + nabla^perp_X xi.
WeingartenSplit weingarten_split(const Immersion& M, const Eigen::VectorXd& u, const TangentField& X,
                                 const NormalField& xi);

// Shape operator in the orthonormal tangent basis: S_ij = <V(E_i,E_j), xi>.
// Symmetric by construction; eigenvalues are principal curvatures.
Eigen::MatrixXd shape_operator_matrix(const Immersion& M, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& xi_value);

Eigen::MatrixXd shape_operator_matrix(const ImmersionJets& jets, const Frame& F,
                                      const Eigen::VectorXd& xi_value);

// Orthonormal basis of { xi normal : A^xi = 0 }, the kernel of the linear
// map from the normal space into symmetric m x m matrices. Columns are
// ambient vectors; may have zero columns.
Eigen::MatrixXd second_normal_space(const Immersion& M, const Eigen::VectorXd& u);

} // namespace helixlab
