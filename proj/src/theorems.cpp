#include "helixlab/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace helixlab {

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Confirmed: return "confirmed";
    case Verdict::HypothesisNotMet: return "hypothesis-not-met";
    case Verdict::Violated: return "violated";
    }
    return "?";
}

namespace {

const double kPi = std::acos(-1.0);
constexpr double kThetaMargin = 1e-8;

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string describe(const Immersion& M, const Eigen::VectorXd* d = nullptr) {
    std::string s = M.name().empty() ? "<anonymous>" : M.name();
    if (d) {
        s += ", d=(";
        char buf[40];
        for (int i = 0; i < d->size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%g", (*d)(i));
            if (i) s += ",";
            s += buf;
        }
        s += ")";
    }
    return s;
}

enum class Size { Zero, Nonzero, Inconclusive };

Size classify(double r, const VerifyParams& p) {
    if (r <= p.tol) return Size::Zero;
    if (r >= p.nonzero_floor) return Size::Nonzero;
    return Size::Inconclusive;
}

// 0 when all legs vanish together or are clearly nonzero together; 1 on a
// clean disagreement; 0.5 when a leg falls in the inconclusive band (fails
// CI on catalog instances but is distinguishable in reports).
double equivalence_gap(const std::vector<double>& legs, const VerifyParams& p) {
    bool any_zero = false, any_nonzero = false, any_band = false;
    for (double r : legs) {
        switch (classify(r, p)) {
        case Size::Zero: any_zero = true; break;
        case Size::Nonzero: any_nonzero = true; break;
        case Size::Inconclusive: any_band = true; break;
        }
    }
    if (any_band) return 0.5;
    return (any_zero && any_nonzero) ? 1.0 : 0.0;
}

void finalize(TheoremReport& r) {
    bool hyp_ok = true, concl_ok = true;
    for (const auto& [name, value] : r.hypothesis) hyp_ok = hyp_ok && value <= r.tolerance;
    for (const auto& [name, value] : r.conclusion) concl_ok = concl_ok && value <= r.tolerance;
    if (!hyp_ok)
        r.verdict = Verdict::HypothesisNotMet;
    else if (!r.conclusion.empty() && concl_ok)
        r.verdict = Verdict::Confirmed;
    else if (r.conclusion.empty())
        r.verdict = Verdict::HypothesisNotMet; // nothing checkable
    else
        r.verdict = Verdict::Violated;
}

struct HelixHypothesis {
    double spread = 0.0;
    double theta_mean = 0.0;
    bool has_tangent = false;
    bool has_normal = false;
    int grid_points = 0;
};

HelixHypothesis helix_hypothesis(const Immersion& M, const Eigen::VectorXd& d,
                                 const VerifyParams& p) {
    const auto grid = make_grid(M.domain(), p.grid_per_axis);
    const HelixVerdict v = check_helix(M, d, grid, p.tol);
    HelixHypothesis h;
    h.spread = v.theta_spread;
    h.theta_mean = v.theta_mean;
    h.has_tangent = v.theta_mean < kPi / 2 - kThetaMargin;
    h.has_normal = v.theta_mean > kThetaMargin;
    h.grid_points = v.grid_size;
    return h;
}

CurveOnManifold usable_helix_line(const Immersion& M, const Eigen::VectorXd& d,
                                  const Eigen::VectorXd& seed, const VerifyParams& p) {
    CurveOnManifold c = helix_line(M, d, seed, p.s_max, p.step);
    if (c.samples.size() < 5)
        throw GeometryError("helix line truncated to fewer than 5 samples; move the seed");
    return c;
}

// max |normal part of (d/ds) field| along the curve, where field is the
// T- or xi-component of the decomposition of d
struct DecompositionDerivatives {
    double max_perp_dxi = 0.0; // |nabla^perp_T xi|
    double max_perp_dT = 0.0;  // |normal part of T_j'|
};

DecompositionDerivatives decomposition_derivatives_along(const Immersion& M,
                                                         const Eigen::VectorXd& d,
                                                         const CurveOnManifold& c) {
    DecompositionDerivatives out;
    for (const auto& sample : c.samples) {
        const Frame F = frame_at(M, sample.u);
        const Eigen::VectorXd a = F.chart_components(sample.T);
        const DirectionDerivatives dd = direction_field_derivative(M, sample.u, a, d);
        out.max_perp_dxi = std::max(out.max_perp_dxi, (dd.dxi - F.tangential(dd.dxi)).norm());
        out.max_perp_dT = std::max(out.max_perp_dT, (dd.dT - F.tangential(dd.dT)).norm());
    }
    return out;
}

Eigen::VectorXd random_interior_point(const Immersion& M, std::mt19937_64& rng) {
    const Box& box = M.domain();
    Eigen::VectorXd u(box.dim());
    for (int i = 0; i < box.dim(); ++i) {
        const double t = 0.1 + 0.8 * uniform01(rng);
        u(i) = box.lo(i) + t * (box.hi(i) - box.lo(i));
    }
    return u;
}

} // namespace

std::vector<Eigen::VectorXd> default_seeds(const Immersion& M, int count, std::uint64_t seed) {
    std::vector<Eigen::VectorXd> seeds;
    seeds.reserve(count);
    const Box& box = M.domain();
    seeds.push_back(0.5 * (box.lo + box.hi));
    std::mt19937_64 rng(seed);
    while (static_cast<int>(seeds.size()) < count) seeds.push_back(random_interior_point(M, rng));
    return seeds;
}

// ---------------------------------------------------------------------------

TheoremReport verify_prop_2_1(const Immersion& M, const Eigen::VectorXd& d,
                              const std::vector<Eigen::VectorXd>& seeds,
                              const VerifyParams& params) {
    TheoremReport r;
    r.theorem_id = "2.1";
    r.instance = describe(M, &d);
    r.tolerance = params.discrete_tol;

    const HelixHypothesis h = helix_hypothesis(M, d, params);
    r.hypothesis.emplace_back("helix_theta_spread", h.spread);
    r.hypothesis.emplace_back("tangent_component_defined", h.has_tangent ? 0.0 : 1.0);
    r.observed.emplace_back("theta_mean", h.theta_mean);

    if (h.has_tangent) {
        double worst = 0.0;
        for (const auto& seed : seeds) {
            const CurveOnManifold c = usable_helix_line(M, d, seed, params);
            worst = std::max(worst, geodesic_residual(M, c));
            r.samples_used += static_cast<int>(c.samples.size());
        }
        r.conclusion.emplace_back("max_geodesic_residual", worst);
    }
    finalize(r);
    return r;
}

TheoremReport verify_thm_3_1(const Immersion& M, const Eigen::VectorXd& d,
                             const Eigen::VectorXd& curve_seed, const VerifyParams& params) {
    TheoremReport r;
    r.theorem_id = "3.1";
    r.instance = describe(M, &d);
    r.tolerance = params.tol;

    const HelixHypothesis h = helix_hypothesis(M, d, params);
    r.hypothesis.emplace_back("helix_theta_spread", h.spread);
    r.hypothesis.emplace_back("theta_in_open_range", (h.has_tangent && h.has_normal) ? 0.0 : 1.0);
    r.observed.emplace_back("theta_mean", h.theta_mean);

    if (h.has_tangent && h.has_normal) {
        const CurveOnManifold c = usable_helix_line(M, d, curve_seed, params);
        const DecompositionDerivatives dd = decomposition_derivatives_along(M, d, c);
        r.samples_used = static_cast<int>(c.samples.size());
        r.conclusion.emplace_back("equivalence_gap",
                                  equivalence_gap({dd.max_perp_dxi, dd.max_perp_dT}, params));
        r.observed.emplace_back("max_normal_connection_xi", dd.max_perp_dxi);
        r.observed.emplace_back("max_normal_part_Tj_prime", dd.max_perp_dT);
    }
    finalize(r);
    return r;
}

TheoremReport verify_thm_3_2(const Immersion& M, const Eigen::VectorXd& d,
                             const std::vector<Eigen::VectorXd>& seeds,
                             const VerifyParams& params) {
    TheoremReport r;
    r.theorem_id = "3.2";
    r.instance = describe(M, &d);
    r.tolerance = params.curvature_match_tol;

    const HelixHypothesis h = helix_hypothesis(M, d, params);
    r.hypothesis.emplace_back("helix_theta_spread", h.spread);
    r.hypothesis.emplace_back("tangent_component_defined", h.has_tangent ? 0.0 : 1.0);
    r.observed.emplace_back("theta_mean", h.theta_mean);

    const bool hyp_ok = h.spread <= r.tolerance && h.has_tangent;
    if (h.has_tangent) {
        try {
            double worst = 0.0, k_sum = 0.0, nc_sum = 0.0;
            int count = 0;
            for (const auto& seed : seeds) {
                const CurveOnManifold c = usable_helix_line(M, d, seed, params);
                const FrenetData f = frenet(c);
                const std::vector<double> nc = normal_curvature(M, c);
                for (std::size_t i = 1; i + 1 < c.samples.size(); ++i) {
                    worst = std::max(worst, std::abs(*f.k[i] - nc[i]));
                    k_sum += *f.k[i];
                    nc_sum += nc[i];
                    ++count;
                }
                r.samples_used += static_cast<int>(c.samples.size());
            }
            r.conclusion.emplace_back("max_curvature_mismatch", worst);
            r.observed.emplace_back("frenet_k_mean", k_sum / count);
            r.observed.emplace_back("normal_curvature_mean", nc_sum / count);
        } catch (const GeometryError&) {
            if (hyp_ok) throw;
        }
    }
    finalize(r);
    return r;
}

TheoremReport verify_lemma_3_1(const Immersion& M, const Eigen::VectorXd& d,
                               const std::vector<Eigen::VectorXd>& seeds,
                               const VerifyParams& params) {
    TheoremReport r;
    r.theorem_id = "L3.1";
    r.instance = describe(M, &d);
    r.tolerance = params.discrete_tol;

    const HelixHypothesis h = helix_hypothesis(M, d, params);
    r.hypothesis.emplace_back("helix_theta_spread", h.spread);
    r.hypothesis.emplace_back("tangent_component_defined", h.has_tangent ? 0.0 : 1.0);
    r.observed.emplace_back("theta_mean", h.theta_mean);

    if (h.has_tangent) {
        double worst = 0.0;
        bool any_defined = false;
        for (const auto& seed : seeds) {
            const CurveOnManifold c = usable_helix_line(M, d, seed, params);
            const FrenetData f = frenet(c);
            for (std::size_t i = 1; i + 1 < c.samples.size(); ++i) {
                if (!f.v2[i]) continue;
                any_defined = true;
                const Frame F = frame_at(M, c.samples[i].u);
                worst = std::max(worst, F.tangential(*f.v2[i]).norm());
            }
            r.samples_used += static_cast<int>(c.samples.size());
        }
        r.hypothesis.emplace_back("principal_normal_defined", any_defined ? 0.0 : 1.0);
        if (any_defined) r.conclusion.emplace_back("max_tangential_V2", worst);
    }
    finalize(r);
    return r;
}

TheoremReport verify_thm_3_3(const Immersion& M, const VerifyParams& params) {
    TheoremReport r;
    r.theorem_id = "3.3";
    r.instance = describe(M);
    r.tolerance = params.tol;

    std::mt19937_64 rng(params.seed);
    const Eigen::VectorXd u0 = 0.5 * (M.domain().lo + M.domain().hi);
    const Eigen::MatrixXd basis0 = second_normal_space(M, u0);
    const int dim = static_cast<int>(basis0.cols());

    r.hypothesis.emplace_back("second_normal_space_nonempty", dim >= 1 ? 0.0 : 1.0);
    r.observed.emplace_back("second_normal_dimension", static_cast<double>(dim));

    if (dim >= 1) {
        const int n_curves = std::max(3, params.test_curves);
        bool dim_constant = true;
        double worst = 0.0;

        for (int ci = 0; ci < n_curves + M.dim(); ++ci) {
            Eigen::VectorXd coeffs(M.dim());
            if (ci < M.dim()) {
                coeffs = Eigen::VectorXd::Unit(M.dim(), ci);
            } else {
                do {
                    for (int i = 0; i < M.dim(); ++i) coeffs(i) = 2.0 * uniform01(rng) - 1.0;
                } while (coeffs.norm() < 0.1);
            }
            const Eigen::VectorXd seed = random_interior_point(M, rng);
            const TangentField field = TangentField::constant(M, coeffs);
            const CurveOnManifold c = integral_curve(M, field, seed, params.s_max, params.step);

            for (const auto& sample : c.samples) {
                const Eigen::MatrixXd sns = second_normal_space(M, sample.u);
                if (static_cast<int>(sns.cols()) != dim) {
                    dim_constant = false;
                    continue;
                }
                const Frame F = frame_at(M, sample.u);
                const ImmersionJets jets = M.jets(sample.u);
                const Eigen::VectorXd y = F.tangent_basis.transpose() * sample.T;
                for (int l = 0; l < dim; ++l) {
                    const Eigen::MatrixXd S = shape_operator_matrix(jets, F, sns.col(l));
                    worst = std::max(worst, std::abs(y.dot(S * y)));
                }
            }
            r.samples_used += static_cast<int>(c.samples.size());
        }
        r.hypothesis.emplace_back("dimension_constant", dim_constant ? 0.0 : 1.0);
        r.conclusion.emplace_back("max_asymptotic_residual", worst);
    }
    finalize(r);
    return r;
}

TheoremReport verify_thm_3_4(const Immersion& M, const Eigen::VectorXd& d,
                             const VerifyParams& params) {
    TheoremReport r;
    r.theorem_id = "3.4";
    r.instance = describe(M, &d);
    r.tolerance = params.tol;

    const HelixHypothesis h = helix_hypothesis(M, d, params);
    r.hypothesis.emplace_back("helix_theta_spread", h.spread);
    r.hypothesis.emplace_back("theta_in_open_range", (h.has_tangent && h.has_normal) ? 0.0 : 1.0);
    r.observed.emplace_back("theta_mean", h.theta_mean);

    if (h.has_tangent && h.has_normal) {
        std::mt19937_64 rng(params.seed);
        double legA = 0.0, legB = 0.0;
        for (int pi = 0; pi < params.sample_points; ++pi) {
            const Eigen::VectorXd u =
                pi == 0 ? Eigen::VectorXd(0.5 * (M.domain().lo + M.domain().hi))
                        : random_interior_point(M, rng);
            const Frame F = frame_at(M, u);
            const ImmersionJets jets = M.jets(u);

            std::vector<Eigen::VectorXd> probes;
            const Eigen::MatrixXd C = F.tangent_chart_components();
            for (int i = 0; i < M.dim(); ++i) probes.push_back(C.col(i));
            for (int k = 0; k < params.test_curves; ++k) {
                Eigen::VectorXd a(M.dim());
                do {
                    for (int i = 0; i < M.dim(); ++i) a(i) = 2.0 * uniform01(rng) - 1.0;
                } while ((jets.jacobian * a).norm() < 0.1);
                probes.push_back(a / (jets.jacobian * a).norm());
            }

            for (const auto& a : probes) {
                const DirectionDerivatives dd = direction_field_derivative(M, u, a, d);
                legA = std::max(legA, F.tangential(dd.dT).norm());
                const Eigen::VectorXd Vxx = second_fundamental_point(jets, F, a, a);
                legB = std::max(legB, std::abs(dd.xi.dot(Vxx)));
                ++r.samples_used;
            }
        }
        r.conclusion.emplace_back("equivalence_gap", equivalence_gap({legA, legB}, params));
        r.observed.emplace_back("max_nabla_X_Tj", legA);
        r.observed.emplace_back("max_asymptotic_form", legB);
    }
    finalize(r);
    return r;
}

TheoremReport verify_thm_3_5(const Immersion& M, const Eigen::VectorXd& d,
                             const std::vector<Eigen::VectorXd>& seeds,
                             const VerifyParams& params) {
    TheoremReport r;
    r.theorem_id = "3.5";
    r.instance = describe(M, &d);
    r.tolerance = params.tol;

    const HelixHypothesis h = helix_hypothesis(M, d, params);
    r.hypothesis.emplace_back("helix_theta_spread", h.spread);
    r.hypothesis.emplace_back("theta_in_open_range", (h.has_tangent && h.has_normal) ? 0.0 : 1.0);
    r.observed.emplace_back("theta_mean", h.theta_mean);

    if (h.has_tangent && h.has_normal) {
        const NormalRule xi_rule = [&M, &d](const Eigen::VectorXd& u) {
            const HelixDecomposition dec = decompose_direction(M, u, d);
            if (!dec.normal_dir) throw GeometryError("xi undefined along the curve (theta = 0)");
            return *dec.normal_dir;
        };
        double worst = 0.0;
        for (const auto& seed : seeds) {
            const CurveOnManifold c = usable_helix_line(M, d, seed, params);
            worst = std::max(worst, asymptotic_residual(M, c, xi_rule));
            r.samples_used += static_cast<int>(c.samples.size());
        }
        r.conclusion.emplace_back("max_asymptotic_residual", worst);
    }
    finalize(r);
    return r;
}

TheoremReport verify_thm_3_6(const Immersion& M, const std::vector<Eigen::VectorXd>& directions,
                             const TangentField& curve_field, const Eigen::VectorXd& curve_seed,
                             const NormalField& xi, const VerifyParams& params) {
    if (directions.empty()) throw InputError("theorem 3.6 needs at least one helix direction");

    TheoremReport r;
    r.theorem_id = "3.6";
    r.instance = describe(M, &directions.front()) +
                 (directions.size() > 1 ? " (+" + std::to_string(directions.size() - 1) + " more)" : "");
    r.tolerance = params.tol;

    double max_spread = 0.0;
    for (const auto& d : directions)
        max_spread = std::max(max_spread, helix_hypothesis(M, d, params).spread);
    r.hypothesis.emplace_back("max_helix_theta_spread", max_spread);

    const CurveOnManifold c = integral_curve(M, curve_field, curve_seed, params.s_max, params.step);
    if (c.samples.size() < 5) throw GeometryError("curve truncated to fewer than 5 samples");
    r.samples_used = static_cast<int>(c.samples.size());

    const LineOfCurvatureResult loc = line_of_curvature_residual(M, c, xi);
    r.hypothesis.emplace_back("line_of_curvature_residual", loc.residual);

    const FrenetData f = frenet(c);
    double min_k = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i + 1 < c.samples.size(); ++i) min_k = std::min(min_k, *f.k[i]);
    r.hypothesis.emplace_back("curve_not_straight", min_k >= kCurvatureFloor ? 0.0 : 1.0);
    r.observed.emplace_back("min_curvature", min_k);

    double max_xi_prime_normal = 0.0;
    for (const auto& sample : c.samples) {
        const Frame F = frame_at(M, sample.u);
        const Eigen::VectorXd a = F.chart_components(sample.T);
        const Eigen::VectorXd dxi = xi.jacobian(sample.u) * a;
        max_xi_prime_normal = std::max(max_xi_prime_normal, (dxi - F.tangential(dxi)).norm());
    }
    r.hypothesis.emplace_back("max_normal_part_xi_prime", max_xi_prime_normal);

    std::vector<double> min_dist(directions.size(), std::numeric_limits<double>::infinity());
    for (const auto& sample : c.samples) {
        Eigen::MatrixXd span(M.ambient_dim(), 2);
        span.col(0) = xi.value(sample.u).normalized();
        span.col(1) = sample.T;
        const Eigen::MatrixXd Q = orthonormalize_mgs(span);
        for (std::size_t j = 0; j < directions.size(); ++j) {
            const Eigen::VectorXd& d = directions[j];
            min_dist[j] = std::min(min_dist[j], (d - Q * (Q.transpose() * d)).norm());
        }
    }

    bool all_excluded = true;
    for (std::size_t j = 0; j < directions.size(); ++j) {
        all_excluded = all_excluded && min_dist[j] >= params.nonzero_floor;
        r.observed.emplace_back("min_distance_d" + std::to_string(j + 1), min_dist[j]);
    }
    r.conclusion.emplace_back("span_exclusion_gap", all_excluded ? 0.0 : 1.0);

    finalize(r);
    return r;
}

TheoremReport verify_thm_3_8(const Immersion& M, const Eigen::VectorXd& d,
                             const std::vector<Eigen::VectorXd>& seeds,
                             const VerifyParams& params) {
    TheoremReport r;
    r.theorem_id = "3.8";
    r.instance = describe(M, &d);
    r.tolerance = params.tol;

    const HelixHypothesis h = helix_hypothesis(M, d, params);
    r.hypothesis.emplace_back("helix_theta_spread", h.spread);
    r.hypothesis.emplace_back("theta_nonzero", h.has_normal ? 0.0 : 1.0);
    r.hypothesis.emplace_back("tangent_component_defined", h.has_tangent ? 0.0 : 1.0);
    const bool full = is_full(M, make_grid(M.domain(), params.grid_per_axis));
    r.hypothesis.emplace_back("full", full ? 0.0 : 1.0);
    r.observed.emplace_back("theta_mean", h.theta_mean);

    if (h.has_tangent && h.has_normal) {
        double leg_conn = 0.0, leg_nc = 0.0, leg_straight = 0.0;
        for (const auto& seed : seeds) {
            const CurveOnManifold c = usable_helix_line(M, d, seed, params);
            const DecompositionDerivatives dd = decomposition_derivatives_along(M, d, c);
            leg_conn = std::max(leg_conn, dd.max_perp_dxi);
            for (double nc : normal_curvature(M, c)) leg_nc = std::max(leg_nc, nc);
            const FrenetData f = frenet(c);
            for (std::size_t i = 1; i + 1 < c.samples.size(); ++i)
                leg_straight = std::max(leg_straight, *f.k[i]);
            r.samples_used += static_cast<int>(c.samples.size());
        }
        r.conclusion.emplace_back("equivalence_gap",
                                  equivalence_gap({leg_conn, leg_nc, leg_straight}, params));
        r.observed.emplace_back("max_normal_connection", leg_conn);
        r.observed.emplace_back("max_normal_curvature", leg_nc);
        r.observed.emplace_back("max_straightness", leg_straight);
    }
    finalize(r);
    return r;
}

TheoremReport verify_cor_3_2(const Immersion& M, const Eigen::VectorXd& d,
                             const std::vector<Eigen::VectorXd>& seeds,
                             const VerifyParams& params) {
    TheoremReport r;
    r.theorem_id = "C3.2";
    r.instance = describe(M, &d);
    r.tolerance = params.tol;

    r.hypothesis.emplace_back("hypersurface", M.ambient_dim() == M.dim() + 1 ? 0.0 : 1.0);
    const HelixHypothesis h = helix_hypothesis(M, d, params);
    r.hypothesis.emplace_back("helix_theta_spread", h.spread);
    r.hypothesis.emplace_back("tangent_component_defined", h.has_tangent ? 0.0 : 1.0);
    r.observed.emplace_back("theta_mean", h.theta_mean);

    if (h.has_tangent) {
        double straight = 0.0, nc_max = 0.0;
        for (const auto& seed : seeds) {
            const CurveOnManifold c = usable_helix_line(M, d, seed, params);
            const FrenetData f = frenet(c);
            for (std::size_t i = 1; i + 1 < c.samples.size(); ++i)
                straight = std::max(straight, *f.k[i]);
            for (double nc : normal_curvature(M, c)) nc_max = std::max(nc_max, nc);
            r.samples_used += static_cast<int>(c.samples.size());
        }
        r.conclusion.emplace_back("max_straightness", straight);
        r.conclusion.emplace_back("max_normal_curvature", nc_max);
    }
    finalize(r);
    return r;
}

} // namespace helixlab
