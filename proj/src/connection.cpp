#include "helixlab/connection.hpp"

#include <Eigen/SVD>

namespace helixlab {

TangentField::TangentField(const Immersion& M, std::vector<Expr> components)
    : components_(std::move(components)) {
    if (static_cast<int>(components_.size()) != M.dim())
        throw InputError("tangent field needs m=" + std::to_string(M.dim()) + " chart components");
    for (const Expr& e : components_)
        if (!e.valid() || e.arity() != M.dim())
            throw InputError("tangent field component has wrong arity");
}

TangentField TangentField::coordinate(const Immersion& M, int axis) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(M.dim());
    c(axis) = 1.0;
    return constant(M, c);
}

TangentField TangentField::constant(const Immersion& M, const Eigen::VectorXd& coeffs) {
    std::vector<Expr> comps;
    comps.reserve(M.dim());
    for (int i = 0; i < M.dim(); ++i) comps.push_back(Expr::constant(coeffs(i), M.dim()));
    return TangentField(M, std::move(comps));
}

TangentField TangentField::parse(const Immersion& M, const std::vector<std::string>& exprs) {
    std::vector<Expr> comps;
    comps.reserve(exprs.size());
    for (const auto& s : exprs) comps.push_back(parse_expression(s, M.dim()));
    return TangentField(M, std::move(comps));
}

Eigen::VectorXd TangentField::chart_components(const Eigen::VectorXd& u) const {
    Eigen::VectorXd a(components_.size());
    for (std::size_t i = 0; i < components_.size(); ++i) a(i) = eval_value(components_[i], u);
    return a;
}

Eigen::MatrixXd TangentField::chart_jacobian(const Eigen::VectorXd& u) const {
    const int m = dim();
    Eigen::MatrixXd da(m, m);
    for (int j = 0; j < m; ++j) da.row(j) = eval_jet2(components_[j], u).gradient.transpose();
    return da;
}

Eigen::VectorXd TangentField::ambient(const Immersion& M, const Eigen::VectorXd& u) const {
    return M.jets(u).jacobian * chart_components(u);
}

NormalField::NormalField(const Immersion& M, std::vector<Expr> components)
    : components_(std::move(components)) {
    if (static_cast<int>(components_.size()) != M.ambient_dim())
        throw InputError("normal field needs n=" + std::to_string(M.ambient_dim()) +
                         " ambient components");
    for (const Expr& e : components_)
        if (!e.valid() || e.arity() != M.dim())
            throw InputError("normal field component has wrong arity");
}

NormalField NormalField::constant(const Immersion& M, const Eigen::VectorXd& value) {
    std::vector<Expr> comps;
    comps.reserve(M.ambient_dim());
    for (int k = 0; k < M.ambient_dim(); ++k) comps.push_back(Expr::constant(value(k), M.dim()));
    return NormalField(M, std::move(comps));
}

NormalField NormalField::parse(const Immersion& M, const std::vector<std::string>& exprs) {
    std::vector<Expr> comps;
    comps.reserve(exprs.size());
    for (const auto& s : exprs) comps.push_back(parse_expression(s, M.dim()));
    return NormalField(M, std::move(comps));
}

Eigen::VectorXd NormalField::value(const Eigen::VectorXd& u) const {
    Eigen::VectorXd v(components_.size());
    for (std::size_t k = 0; k < components_.size(); ++k) v(k) = eval_value(components_[k], u);
    return v;
}

Eigen::MatrixXd NormalField::jacobian(const Eigen::VectorXd& u) const {
    Eigen::MatrixXd dxi(components_.size(), components_.empty() ? 0 : components_[0].arity());
    for (std::size_t k = 0; k < components_.size(); ++k)
        dxi.row(k) = eval_jet2(components_[k], u).gradient.transpose();
    return dxi;
}

// ---------------------------------------------------------------------------

GaussSplit gauss_split(const Immersion& M, const Eigen::VectorXd& u, const TangentField& X,
                       const TangentField& Y) {
    const Frame F = frame_at(M, u);
    const ImmersionJets jets = M.jets(u);
    const Eigen::VectorXd a = X.chart_components(u);
    const Eigen::VectorXd b = Y.chart_components(u);
    const Eigen::MatrixXd db = Y.chart_jacobian(u);

    // D_X Y = J (db a) + sum_k (a^T H_k b) e_k
    Eigen::VectorXd D = jets.jacobian * (db * a);
    for (int k = 0; k < M.ambient_dim(); ++k) D(k) += a.dot(jets.hessians[k] * b);

    GaussSplit out;
    out.nabla_XY = F.tangential(D);
    out.V_XY = D - out.nabla_XY;
    return out;
}

Eigen::VectorXd second_fundamental_form(const Immersion& M, const Eigen::VectorXd& u,
                                        const TangentField& X, const TangentField& Y) {
    return gauss_split(M, u, X, Y).V_XY;
}

Eigen::VectorXd second_fundamental_point(const ImmersionJets& jets, const Frame& F,
                                         const Eigen::VectorXd& x_chart,
                                         const Eigen::VectorXd& y_chart) {
    const int n = static_cast<int>(jets.hessians.size());
    Eigen::VectorXd w(n);
    for (int k = 0; k < n; ++k) w(k) = x_chart.dot(jets.hessians[k] * y_chart);
    return F.normal(w);
}

WeingartenSplit weingarten_split(const Immersion& M, const Eigen::VectorXd& u, const TangentField& X,
                                 const NormalField& xi) {
    const Frame F = frame_at(M, u);
    const Eigen::VectorXd xi_val = xi.value(u);
    if (F.tangential(xi_val).norm() >= kNormalityTol)
        throw GeometryError("field is not normal at the evaluation point");

    const Eigen::VectorXd a = X.chart_components(u);
    const Eigen::VectorXd D = xi.jacobian(u) * a;

    WeingartenSplit out;
    out.A_xi_X = -F.tangential(D);
    out.nabla_perp = D + out.A_xi_X; // D - tangential(D)
    return out;
}

Eigen::MatrixXd shape_operator_matrix(const ImmersionJets& jets, const Frame& F,
                                      const Eigen::VectorXd& xi_value) {
    if (F.tangential(xi_value).norm() >= kNormalityTol)
        throw GeometryError("shape operator direction has a tangential component");

    const int m = static_cast<int>(F.metric.rows());
    const Eigen::MatrixXd C = F.tangent_chart_components(); // m x m, columns are E_i in chart
    // <V(E_i,E_j), xi> = sum_k xi_k c_i^T H_k c_j since xi is normal
    Eigen::MatrixXd weighted = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < static_cast<int>(jets.hessians.size()); ++k)
        weighted += xi_value(k) * jets.hessians[k];
    return C.transpose() * weighted * C;
}

Eigen::MatrixXd shape_operator_matrix(const Immersion& M, const Eigen::VectorXd& u,
                                      const Eigen::VectorXd& xi_value) {
    const Frame F = frame_at(M, u);
    return shape_operator_matrix(M.jets(u), F, xi_value);
}

Eigen::MatrixXd second_normal_space(const Immersion& M, const Eigen::VectorXd& u) {
    const Frame F = frame_at(M, u);
    const ImmersionJets jets = M.jets(u);
    const int m = M.dim();
    const int n = M.ambient_dim();
    const int codim = n - m;

    Eigen::MatrixXd K(m * m, codim);
    for (int l = 0; l < codim; ++l) {
        const Eigen::MatrixXd S = shape_operator_matrix(jets, F, F.normal_basis.col(l));
        K.col(l) = Eigen::Map<const Eigen::VectorXd>(S.data(), m * m);
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double sigma_max = sv.size() > 0 ? sv(0) : 0.0;

    int kernel_dim = 0;
    if (sigma_max < 1e-12) {
        kernel_dim = codim; // the map is identically zero; the whole normal space qualifies
    } else {
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) < 1e-8 * sigma_max) ++kernel_dim;
        kernel_dim += codim - static_cast<int>(sv.size()); // columns beyond the rank count
    }

    Eigen::MatrixXd basis(n, kernel_dim);
    for (int i = 0; i < kernel_dim; ++i) {
        Eigen::VectorXd coeff = svd.matrixV().col(codim - kernel_dim + i);
        Eigen::VectorXd xi = F.normal_basis * coeff;
        // deterministic sign: first significant entry positive
        for (int k = 0; k < n; ++k) {
            if (std::abs(xi(k)) > 1e-9) {
                if (xi(k) < 0.0) xi = -xi;
                break;
            }
        }
        basis.col(i) = xi;
    }
    return basis;
}

} // namespace helixlab
