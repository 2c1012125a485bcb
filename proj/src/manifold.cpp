#include "helixlab/manifold.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace helixlab {

bool Box::contains(const Eigen::VectorXd& u) const {
    if (u.size() != lo.size()) return false;
    for (int i = 0; i < u.size(); ++i)
        if (!(u(i) >= lo(i) && u(i) <= hi(i))) return false;
    return true;
}

Immersion::Immersion(std::string name, int m, int n, std::vector<Expr> components, Box domain)
    : name_(std::move(name)), m_(m), n_(n), components_(std::move(components)),
      domain_(std::move(domain)) {
    if (!(n_ > m_ && m_ >= 1))
        throw InputError("immersion requires n > m >= 1, got m=" + std::to_string(m_) +
                         ", n=" + std::to_string(n_));
    if (static_cast<int>(components_.size()) != n_)
        throw InputError("immersion needs exactly n=" + std::to_string(n_) + " components");
    for (const Expr& e : components_)
        if (!e.valid() || e.arity() != m_)
            throw InputError("immersion component has wrong arity");
    if (domain_.dim() != m_ || domain_.hi.size() != m_)
        throw InputError("domain box dimension does not match m");
    for (int i = 0; i < m_; ++i)
        if (!(domain_.lo(i) < domain_.hi(i)))
            throw InputError("domain box is empty on axis " + std::to_string(i + 1));
}

Eigen::VectorXd Immersion::point(const Eigen::VectorXd& u) const {
    Eigen::VectorXd p(n_);
    for (int k = 0; k < n_; ++k) p(k) = eval_value(components_[k], u);
    return p;
}

ImmersionJets Immersion::jets(const Eigen::VectorXd& u) const {
    ImmersionJets out;
    out.p.resize(n_);
    out.jacobian.resize(n_, m_);
    out.hessians.reserve(n_);
    for (int k = 0; k < n_; ++k) {
        Jet2 j = eval_jet2(components_[k], u);
        out.p(k) = j.value;
        out.jacobian.row(k) = j.gradient.transpose();
        out.hessians.push_back(std::move(j.hessian));
    }
    return out;
}

Eigen::VectorXd Frame::tangential(const Eigen::VectorXd& w) const {
    return tangent_basis * (tangent_basis.transpose() * w);
}

Eigen::VectorXd Frame::chart_components(const Eigen::VectorXd& w) const {
    return metric.ldlt().solve(jacobian.transpose() * w);
}

Eigen::MatrixXd Frame::tangent_chart_components() const {
    return metric.ldlt().solve(jacobian.transpose() * tangent_basis);
}

Eigen::MatrixXd orthonormalize_mgs(const Eigen::MatrixXd& cols, double drop_tol) {
    const Eigen::Index n = cols.rows();
    Eigen::MatrixXd q(n, cols.cols());
    Eigen::Index kept = 0;
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
        Eigen::VectorXd v = cols.col(j);
        for (int pass = 0; pass < 2; ++pass)
            for (Eigen::Index i = 0; i < kept; ++i) v -= q.col(i).dot(v) * q.col(i);
        const double norm = v.norm();
        if (norm > drop_tol) q.col(kept++) = v / norm;
    }
    return q.leftCols(kept);
}

Frame frame_at(const Immersion& M, const Eigen::VectorXd& u) {
    if (u.size() != M.dim()) throw InputError("chart point has wrong dimension");
    if (!M.domain().contains(u)) throw OutOfDomainError("chart point outside the domain box");

    const int m = M.dim();
    const int n = M.ambient_dim();

    Frame F;
    F.u = u;
    ImmersionJets jets = M.jets(u);
    F.p = std::move(jets.p);
    F.jacobian = std::move(jets.jacobian);
    F.metric = F.jacobian.transpose() * F.jacobian;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(F.jacobian);
    const auto& sv = svd.singularValues();
    if (sv(0) <= 0.0 || sv(m - 1) < kSingularRelTol * sv(0))
        throw SingularPointError("rank-deficient Jacobian (singular immersion point)");

    F.tangent_basis = orthonormalize_mgs(F.jacobian, kSingularRelTol * sv(0));
    if (F.tangent_basis.cols() != m)
        throw SingularPointError("tangent orthonormalization dropped a direction");

    // Complete with standard basis vectors, keeping the lowest indices that
    // survive orthogonalization against everything accepted so far.
    F.normal_basis.resize(n, n - m);
    int kept = 0;
    for (int k = 0; k < n && kept < n - m; ++k) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, k);
        for (int pass = 0; pass < 2; ++pass) {
            v -= F.tangent_basis * (F.tangent_basis.transpose() * v);
            for (int i = 0; i < kept; ++i) v -= F.normal_basis.col(i).dot(v) * F.normal_basis.col(i);
        }
        const double norm = v.norm();
        if (norm > 1e-8) F.normal_basis.col(kept++) = v / norm;
    }
    if (kept != n - m) throw SingularPointError("could not complete an orthonormal normal basis");
    return F;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> project(const Frame& F, const Eigen::VectorXd& w) {
    Eigen::VectorXd t = F.tangential(w);
    return {t, w - t};
}

bool is_full(const Immersion& M, const std::vector<Eigen::VectorXd>& grid) {
    const int n = M.ambient_dim();
    std::vector<Eigen::VectorXd> points;
    points.reserve(grid.size());
    for (const auto& u : grid) {
        if (!M.domain().contains(u)) continue;
        try {
            points.push_back(M.point(u));
        } catch (const EvalError&) {
            continue;
        }
    }
    if (static_cast<int>(points.size()) < n + 1)
        throw GeometryError("fullness test needs at least n+1 valid sample points");

    Eigen::MatrixXd cloud(points.size(), n);
    for (std::size_t i = 0; i < points.size(); ++i) cloud.row(i) = points[i].transpose();
    cloud.rowwise() -= cloud.colwise().mean();

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(cloud);
    const auto& sv = svd.singularValues();
    return sv(0) > 0.0 && sv(n - 1) > 1e-8 * sv(0);
}

std::vector<Eigen::VectorXd> make_grid(const Box& box, int per_axis) {
    if (per_axis < 1) throw InputError("grid needs at least one point per axis");
    const int m = box.dim();
    std::size_t total = 1;
    for (int i = 0; i < m; ++i) total *= static_cast<std::size_t>(per_axis);

    std::vector<Eigen::VectorXd> grid;
    grid.reserve(total);
    std::vector<int> idx(m, 0);
    for (std::size_t k = 0; k < total; ++k) {
        Eigen::VectorXd u(m);
        for (int i = 0; i < m; ++i) {
            const double t = (idx[i] + 0.5) / per_axis;
            u(i) = box.lo(i) + t * (box.hi(i) - box.lo(i));
        }
        grid.push_back(std::move(u));
        for (int i = m - 1; i >= 0; --i) {
            if (++idx[i] < per_axis) break;
            idx[i] = 0;
        }
    }
    return grid;
}

} // namespace helixlab
