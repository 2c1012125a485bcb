#include "helixlab/helix.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

namespace helixlab {

namespace {

void require_unit(const Eigen::VectorXd& d) {
    if (std::abs(d.norm() - 1.0) > 1e-10)
        throw InputError("direction must be a unit vector (within 1e-10)");
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

} // namespace

HelixDecomposition decompose_direction(const Immersion& M, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& d) {
    require_unit(d);
    const Frame F = frame_at(M, u);

    HelixDecomposition out;
    const Eigen::VectorXd t = F.tangential(d);
    const Eigen::VectorXd z = d - t;
    const double c = t.norm();
    out.tangential_norm = c;
    out.theta = std::acos(clamp01(c));
    if (c > kDecompositionTol) out.tangent_dir = t / c;
    if (z.norm() > kDecompositionTol) out.normal_dir = z / z.norm();
    return out;
}

HelixVerdict check_helix(const Immersion& M, const Eigen::VectorXd& d,
                         const std::vector<Eigen::VectorXd>& grid, double tol) {
    require_unit(d);

    double lo = 0.0, hi = 0.0, sum = 0.0;
    int valid = 0;
    for (const auto& u : grid) {
        double theta;
        try {
            const Frame F = frame_at(M, u);
            theta = std::acos(clamp01(F.tangential(d).norm()));
        } catch (const GeometryError&) {
            continue;
        } catch (const EvalError&) {
            continue;
        }
        if (valid == 0) {
            lo = hi = theta;
        } else {
            lo = std::min(lo, theta);
            hi = std::max(hi, theta);
        }
        sum += theta;
        ++valid;
    }
    if (valid == 0) throw GeometryError("all grid points are singular or invalid");
    if (valid < 4) throw GeometryError("helix check needs at least 4 valid grid points");

    HelixVerdict v;
    v.theta_mean = sum / valid;
    v.theta_spread = hi - lo;
    v.grid_size = valid;
    v.tolerance = tol;
    v.is_helix = v.theta_spread <= tol;
    return v;
}

// ---------------------------------------------------------------------------
// Weak r-helix direction search

namespace {

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Eigen::VectorXd random_unit(std::mt19937_64& rng, int dim) {
    // rejection-sampled cube -> sphere, avoids implementation-defined
    // std::normal_distribution sequences
    for (;;) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = 2.0 * uniform01(rng) - 1.0;
        const double n = v.norm();
        if (n > 1e-3 && n <= 1.0) return v / n;
    }
}

struct ReducedObjective {
    // B_q = B^T P_q B for the current deflation subspace
    std::vector<Eigen::MatrixXd> forms;

    double variance(const Eigen::VectorXd& y) const {
        double mean = 0.0, mean2 = 0.0;
        for (const auto& Bq : forms) {
            const double g = y.dot(Bq * y);
            mean += g;
            mean2 += g * g;
        }
        mean /= static_cast<double>(forms.size());
        mean2 /= static_cast<double>(forms.size());
        return std::max(0.0, mean2 - mean * mean);
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& y) const {
        const auto N = static_cast<double>(forms.size());
        std::vector<double> g(forms.size());
        double mean = 0.0;
        for (std::size_t q = 0; q < forms.size(); ++q) {
            g[q] = y.dot(forms[q] * y);
            mean += g[q];
        }
        mean /= N;
        Eigen::VectorXd grad = Eigen::VectorXd::Zero(y.size());
        for (std::size_t q = 0; q < forms.size(); ++q) grad += (g[q] - mean) * (forms[q] * y);
        return grad * (4.0 / N);
    }
};

Eigen::VectorXd descend(const ReducedObjective& obj, Eigen::VectorXd y, double stop_var) {
    for (int iter = 0; iter < 300; ++iter) {
        const double var = obj.variance(y);
        if (var < stop_var) return y;
        Eigen::VectorXd grad = obj.gradient(y);
        grad -= grad.dot(y) * y;
        if (grad.norm() < 1e-15) return y;

        double step = 1.0;
        bool improved = false;
        while (step >= 1e-12) {
            Eigen::VectorXd cand = y - step * grad;
            cand.normalize();
            if (obj.variance(cand) < var) {
                y = cand;
                improved = true;
                break;
            }
            step *= 0.5;
        }
        if (!improved) return y;
    }
    return y;
}

// Gauss-Newton refinement of a near-zero of the residual vector
// r_q = g_q - mean(g); converges quadratically when an exact helix
// direction exists, which is what makes the returned directions re-pass
// check_helix at much tighter tolerances than the descent stop.
Eigen::VectorXd polish(const ReducedObjective& obj, Eigen::VectorXd y) {
    const int k = static_cast<int>(y.size());
    if (k < 2) return y;
    const auto N = static_cast<Eigen::Index>(obj.forms.size());

    for (int iter = 0; iter < 6; ++iter) {
        Eigen::VectorXd g(N);
        for (Eigen::Index q = 0; q < N; ++q) g(q) = y.dot(obj.forms[q] * y);
        const double mean = g.mean();
        const Eigen::VectorXd r = g.array() - mean;

        Eigen::MatrixXd J(N, k);
        Eigen::VectorXd mean_py = Eigen::VectorXd::Zero(k);
        for (Eigen::Index q = 0; q < N; ++q) mean_py += obj.forms[q] * y;
        mean_py /= static_cast<double>(N);
        for (Eigen::Index q = 0; q < N; ++q)
            J.row(q) = 2.0 * (obj.forms[q] * y - mean_py).transpose();

        // tangent basis of the sphere at y
        Eigen::MatrixXd Z(k, k);
        Z.col(0) = y;
        Z.rightCols(k - 1) = Eigen::MatrixXd::Identity(k, k).leftCols(k - 1);
        const Eigen::MatrixXd Q = orthonormalize_mgs(Z);
        if (Q.cols() != k) break;
        const Eigen::MatrixXd Zt = Q.rightCols(k - 1);

        const Eigen::VectorXd w =
            (J * Zt).bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(-r);
        Eigen::VectorXd cand = y + Zt * w;
        cand.normalize();
        if (obj.variance(cand) <= obj.variance(y))
            y = cand;
        else
            break;
    }
    return y;
}

void canonicalize_sign(Eigen::VectorXd& d) {
    for (int i = 0; i < d.size(); ++i) {
        if (std::abs(d(i)) > 1e-9) {
            if (d(i) < 0.0) d = -d;
            return;
        }
    }
}

bool lex_less(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i)) return true;
        if (a(i) > b(i)) return false;
    }
    return false;
}

} // namespace

WeakHelixResult find_helix_directions(const Immersion& M, const std::vector<Eigen::VectorXd>& grid,
                                      double tol, int max_starts, std::uint64_t seed) {
    if (max_starts < 1) throw InputError("max_starts must be >= 1");
    const int n = M.ambient_dim();

    std::vector<Eigen::MatrixXd> projectors;
    projectors.reserve(grid.size());
    for (const auto& u : grid) {
        try {
            const Frame F = frame_at(M, u);
            projectors.push_back(F.tangent_basis * F.tangent_basis.transpose());
        } catch (const GeometryError&) {
        } catch (const EvalError&) {
        }
    }
    if (static_cast<int>(projectors.size()) < 4)
        throw GeometryError("direction search needs at least 4 valid grid points");

    const double stop_var = tol * tol;
    std::mt19937_64 rng(seed);

    std::vector<Eigen::VectorXd> accepted;
    for (;;) {
        const int k = n - static_cast<int>(accepted.size());
        if (k == 0) break;

        // orthonormal basis of the complement of the accepted span
        Eigen::MatrixXd stack(n, accepted.size() + n);
        for (std::size_t i = 0; i < accepted.size(); ++i) stack.col(i) = accepted[i];
        stack.rightCols(n) = Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd full = orthonormalize_mgs(stack);
        const Eigen::MatrixXd B = full.rightCols(k);

        ReducedObjective obj;
        obj.forms.reserve(projectors.size());
        for (const auto& P : projectors) obj.forms.push_back(B.transpose() * P * B);

        std::vector<Eigen::VectorXd> starts;
        for (int i = 0; i < k; ++i) starts.push_back(Eigen::VectorXd::Unit(k, i));
        for (int i = 0; i < max_starts; ++i) starts.push_back(random_unit(rng, k));

        std::vector<Eigen::VectorXd> candidates;
        for (const auto& y0 : starts) {
            Eigen::VectorXd y = descend(obj, y0, stop_var);
            if (obj.variance(y) >= stop_var) continue;
            y = polish(obj, y);
            if (obj.variance(y) >= stop_var) continue;
            Eigen::VectorXd d = B * y;
            d.normalize();
            canonicalize_sign(d);
            candidates.push_back(std::move(d));
        }
        if (candidates.empty()) break;

        std::sort(candidates.begin(), candidates.end(), lex_less);
        accepted.push_back(candidates.front());
    }

    WeakHelixResult out;
    out.directions = std::move(accepted);
    out.thetas.reserve(out.directions.size());
    for (const auto& d : out.directions) {
        double sum = 0.0;
        for (const auto& P : projectors) sum += std::acos(clamp01(std::sqrt(clamp01(d.dot(P * d)))));
        out.thetas.push_back(sum / static_cast<double>(projectors.size()));
    }
    if (!out.directions.empty()) {
        Eigen::MatrixXd D(n, out.directions.size());
        for (std::size_t i = 0; i < out.directions.size(); ++i) D.col(i) = out.directions[i];
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(D);
        for (int i = 0; i < svd.singularValues().size(); ++i)
            if (svd.singularValues()(i) > 1e-8) ++out.independence_rank;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Exact derivatives of the decomposition fields

DirectionDerivatives direction_field_derivative(const Immersion& M, const Eigen::VectorXd& u,
                                                const Eigen::VectorXd& a_chart,
                                                const Eigen::VectorXd& d) {
    require_unit(d);
    frame_at(M, u); // validates domain and rank

    const ImmersionJets jets = M.jets(u);
    const Eigen::MatrixXd& J = jets.jacobian;
    const int n = M.ambient_dim();
    const int m = M.dim();

    Eigen::MatrixXd dJ(n, m);
    for (int k = 0; k < n; ++k) dJ.row(k) = (jets.hessians[k] * a_chart).transpose();

    const Eigen::MatrixXd G = J.transpose() * J;
    const auto ldlt = G.ldlt();
    const Eigen::MatrixXd W = ldlt.solve(J.transpose()); // G^{-1} J^T, m x n
    const Eigen::MatrixXd dG = dJ.transpose() * J + J.transpose() * dJ;

    const Eigen::MatrixXd P = J * W;
    const Eigen::MatrixXd dJW = dJ * W;
    const Eigen::MatrixXd dP = dJW + dJW.transpose() - W.transpose() * dG * W;

    const Eigen::VectorXd w = P * d;
    const Eigen::VectorXd dw = dP * d;
    const Eigen::VectorXd z = d - w;

    const double c = w.norm();
    const double s = z.norm();
    if (c <= kDecompositionTol || s <= kDecompositionTol)
        throw DegenerateConfigError("direction decomposition is degenerate (theta at 0 or pi/2)");

    DirectionDerivatives out;
    out.theta = std::acos(clamp01(c));
    out.T = w / c;
    out.dT = dw / c - w * (w.dot(dw)) / (c * c * c);
    out.xi = z / s;
    out.dxi = -dw / s + z * (z.dot(dw)) / (s * s * s);
    return out;
}

std::pair<double, double> helix_system_residual(const Immersion& M, const Eigen::VectorXd& u,
                                                const Eigen::VectorXd& d, const TangentField& X) {
    const Eigen::VectorXd a = X.chart_components(u);
    const DirectionDerivatives dd = direction_field_derivative(M, u, a, d);

    const Frame F = frame_at(M, u);
    const ImmersionJets jets = M.jets(u);

    const double ct = std::cos(dd.theta);
    const double st = std::sin(dd.theta);

    const Eigen::VectorXd nabla_X_T = F.tangential(dd.dT);
    const Eigen::VectorXd A_xi_X = -F.tangential(dd.dxi);
    const Eigen::VectorXd nabla_perp = dd.dxi + A_xi_X;

    const Eigen::VectorXd t_chart = F.chart_components(dd.T);
    const Eigen::VectorXd V_XT = second_fundamental_point(jets, F, a, t_chart);

    const double r1 = (ct * nabla_X_T - st * A_xi_X).norm();
    const double r2 = (ct * V_XT + st * nabla_perp).norm();
    return {r1, r2};
}

} // namespace helixlab
