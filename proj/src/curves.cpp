#include "helixlab/curves.hpp"

#include "helixlab/helix.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace helixlab {

namespace {

// chart components of the unit-speed pullback of an ambient field
Eigen::VectorXd unit_chart_velocity(const Immersion& M, const AmbientFieldRule& field,
                                    const Eigen::VectorXd& u) {
    if (!M.domain().contains(u)) throw OutOfDomainError("integration point left the domain box");
    const Eigen::VectorXd w = field(u);
    if (w.norm() < 1e-10) throw GeometryError("vanishing field along the trajectory");

    const ImmersionJets jets = M.jets(u);
    const Eigen::MatrixXd G = jets.jacobian.transpose() * jets.jacobian;
    Eigen::VectorXd c = G.ldlt().solve(jets.jacobian.transpose() * w);
    const double speed = (jets.jacobian * c).norm();
    if (speed < 1e-10) throw GeometryError("field has vanishing tangential part");
    return c / speed;
}

} // namespace

CurveOnManifold integral_curve(const Immersion& M, const AmbientFieldRule& field,
                               const Eigen::VectorXd& u0, double s_max, double step) {
    if (step <= 0.0 || s_max <= 0.0) throw InputError("integration needs positive step and s_max");

    CurveOnManifold curve;
    curve.owner = M;
    curve.step = step;

    auto push_sample = [&](double s, const Eigen::VectorXd& u) {
        const Eigen::VectorXd c = unit_chart_velocity(M, field, u);
        CurveSample sample;
        sample.s = s;
        sample.u = u;
        const ImmersionJets jets = M.jets(u);
        sample.p = jets.p;
        sample.T = jets.jacobian * c;
        curve.samples.push_back(std::move(sample));
        return c;
    };

    // the seed must be valid; failures later merely truncate
    push_sample(0.0, u0);

    const auto steps = static_cast<long>(std::llround(s_max / step));
    Eigen::VectorXd u = u0;
    for (long k = 1; k <= steps; ++k) {
        try {
            const Eigen::VectorXd k1 = unit_chart_velocity(M, field, u);
            const Eigen::VectorXd k2 = unit_chart_velocity(M, field, u + 0.5 * step * k1);
            const Eigen::VectorXd k3 = unit_chart_velocity(M, field, u + 0.5 * step * k2);
            const Eigen::VectorXd k4 = unit_chart_velocity(M, field, u + step * k3);
            Eigen::VectorXd next = u + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            if (!M.domain().contains(next)) throw OutOfDomainError("domain exit");
            push_sample(static_cast<double>(k) * step, next);
            u = std::move(next);
        } catch (const GeometryError&) {
            curve.truncated = true;
            break;
        } catch (const EvalError&) {
            curve.truncated = true;
            break;
        }
    }
    return curve;
}

CurveOnManifold integral_curve(const Immersion& M, const TangentField& field,
                               const Eigen::VectorXd& u0, double s_max, double step) {
    AmbientFieldRule rule = [&M, field](const Eigen::VectorXd& u) { return field.ambient(M, u); };
    return integral_curve(M, rule, u0, s_max, step);
}

CurveOnManifold helix_line(const Immersion& M, const Eigen::VectorXd& d, const Eigen::VectorXd& u0,
                           double s_max, double step) {
    AmbientFieldRule rule = [&M, d](const Eigen::VectorXd& u) {
        const HelixDecomposition dec = decompose_direction(M, u, d);
        if (!dec.tangent_dir)
            throw GeometryError("helix tangent undefined: direction is normal (theta = pi/2)");
        return *dec.tangent_dir;
    };
    return integral_curve(M, rule, u0, s_max, step);
}

FrenetData frenet(const CurveOnManifold& c) {
    const std::size_t n = c.samples.size();
    if (n < 5) throw GeometryError("frenet data needs at least 5 samples");

    FrenetData f;
    f.k.resize(n);
    f.v2.resize(n);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double ds = c.samples[i + 1].s - c.samples[i - 1].s;
        const Eigen::VectorXd dT = (c.samples[i + 1].T - c.samples[i - 1].T) / ds;
        const double k = dT.norm();
        f.k[i] = k;
        if (k >= kCurvatureFloor) f.v2[i] = dT / k;
    }
    return f;
}

double geodesic_residual(const Immersion& M, const CurveOnManifold& c) {
    const std::size_t n = c.samples.size();
    if (n < 5) throw GeometryError("geodesic residual needs at least 5 samples");

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double ds = c.samples[i + 1].s - c.samples[i - 1].s;
        const Eigen::VectorXd dT = (c.samples[i + 1].T - c.samples[i - 1].T) / ds;
        const Frame F = frame_at(M, c.samples[i].u);
        worst = std::max(worst, F.tangential(dT).norm());
    }
    return worst;
}

std::vector<double> normal_curvature(const Immersion& M, const CurveOnManifold& c) {
    std::vector<double> out;
    out.reserve(c.samples.size());
    for (const auto& sample : c.samples) {
        const Frame F = frame_at(M, sample.u);
        const ImmersionJets jets = M.jets(sample.u);
        const Eigen::VectorXd t_chart = F.chart_components(sample.T);
        out.push_back(second_fundamental_point(jets, F, t_chart, t_chart).norm());
    }
    return out;
}

namespace {

struct ShapeApplied {
    double lambda;          // <A^xi(T), T>
    Eigen::VectorXd A_xi_T; // ambient
};

ShapeApplied apply_shape(const Immersion& M, const CurveSample& sample, const Eigen::VectorXd& xi) {
    const Frame F = frame_at(M, sample.u);
    if (F.tangential(xi).norm() >= kNormalityTol)
        throw GeometryError("field is not normal along the curve");
    const Eigen::MatrixXd S = shape_operator_matrix(M.jets(sample.u), F, xi);
    const Eigen::VectorXd y = F.tangent_basis.transpose() * sample.T;
    ShapeApplied r;
    r.lambda = y.dot(S * y);
    r.A_xi_T = F.tangent_basis * (S * y);
    return r;
}

} // namespace

double asymptotic_residual(const Immersion& M, const CurveOnManifold& c, const NormalRule& xi) {
    double worst = 0.0;
    for (const auto& sample : c.samples)
        worst = std::max(worst, std::abs(apply_shape(M, sample, xi(sample.u)).lambda));
    return worst;
}

double asymptotic_residual(const Immersion& M, const CurveOnManifold& c, const NormalField& xi) {
    return asymptotic_residual(M, c, NormalRule([&xi](const Eigen::VectorXd& u) { return xi.value(u); }));
}

LineOfCurvatureResult line_of_curvature_residual(const Immersion& M, const CurveOnManifold& c,
                                                 const NormalRule& xi) {
    LineOfCurvatureResult out;
    out.lambdas.reserve(c.samples.size());
    for (const auto& sample : c.samples) {
        const ShapeApplied r = apply_shape(M, sample, xi(sample.u));
        out.lambdas.push_back(r.lambda);
        out.residual = std::max(out.residual, (r.A_xi_T - r.lambda * sample.T).norm());
    }
    return out;
}

LineOfCurvatureResult line_of_curvature_residual(const Immersion& M, const CurveOnManifold& c,
                                                 const NormalField& xi) {
    return line_of_curvature_residual(
        M, c, NormalRule([&xi](const Eigen::VectorXd& u) { return xi.value(u); }));
}

void write_curve_csv(std::ostream& os, const CurveOnManifold& c) {
    const int m = c.owner.dim();
    const int n = c.owner.ambient_dim();

    os << "s";
    for (int i = 1; i <= m; ++i) os << ",u" << i;
    for (int i = 1; i <= n; ++i) os << ",p" << i;
    for (int i = 1; i <= n; ++i) os << ",T" << i;
    os << ",k\n";

    FrenetData f;
    const bool have_frenet = c.samples.size() >= 5;
    if (have_frenet) f = frenet(c);

    char buf[40];
    auto emit = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf;
    };

    for (std::size_t i = 0; i < c.samples.size(); ++i) {
        const auto& sample = c.samples[i];
        emit(sample.s);
        for (int j = 0; j < m; ++j) { os << ','; emit(sample.u(j)); }
        for (int j = 0; j < n; ++j) { os << ','; emit(sample.p(j)); }
        for (int j = 0; j < n; ++j) { os << ','; emit(sample.T(j)); }
        os << ',';
        if (have_frenet && f.k[i])
            emit(*f.k[i]);
        else
            os << "nan";
        os << '\n';
    }
}

} // namespace helixlab
