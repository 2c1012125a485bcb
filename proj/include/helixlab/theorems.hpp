#pragma once

#include "helixlab/curves.hpp"
#include "helixlab/helix.hpp"

namespace helixlab {

enum class Verdict { Confirmed, HypothesisNotMet, Violated };

const char* to_string(Verdict v);

// Hypothesis and conclusion entries are judged against `tolerance`;
// `observed` carries raw quantities that inform but never decide the
// verdict (e.g. the two legs of an equivalence, reported before they are
// folded into a vanishing-indicator gap).
struct TheoremReport {
    std::string theorem_id;
    std::string instance;
    std::vector<std::pair<std::string, double>> hypothesis;
    std::vector<std::pair<std::string, double>> conclusion;
    std::vector<std::pair<std::string, double>> observed;
    double tolerance = 1e-6;
    Verdict verdict = Verdict::HypothesisNotMet;
    int samples_used = 0;
};

struct VerifyParams {
    int grid_per_axis = 20;
    double step = 1e-2;
    double s_max = 1.0;
    double tol = 1e-6;           // "zero" residual tolerance
    double nonzero_floor = 1e-3; // clearly-nonzero threshold for equivalence legs
    double curvature_match_tol = 1e-4; // Frenet k vs exact normal curvature
    double discrete_tol = 1e-5;        // conclusions limited by sample differencing
    std::uint64_t seed = 42;
    int test_curves = 3;   // random probe curves where a theorem says "every curve"
    int sample_points = 5; // random probe points where a theorem says "every point"
};

// Deterministic interior seed points (domain centre first, then seeded
// uniform draws kept away from the box faces).
std::vector<Eigen::VectorXd> default_seeds(const Immersion& M, int count, std::uint64_t seed);

// Helix lines are geodesics.
TheoremReport verify_prop_2_1(const Immersion& M, const Eigen::VectorXd& d,
                              const std::vector<Eigen::VectorXd>& seeds, const VerifyParams& params);

// xi_j parallel normal along a curve <=> T_j' tangential along it.
TheoremReport verify_thm_3_1(const Immersion& M, const Eigen::VectorXd& d,
                             const Eigen::VectorXd& curve_seed, const VerifyParams& params);

// Normal curvature of a helix line equals its first curvature.
TheoremReport verify_thm_3_2(const Immersion& M, const Eigen::VectorXd& d,
                             const std::vector<Eigen::VectorXd>& seeds, const VerifyParams& params);

// Principal normal of a helix line lies in the normal space.
TheoremReport verify_lemma_3_1(const Immersion& M, const Eigen::VectorXd& d,
                               const std::vector<Eigen::VectorXd>& seeds,
                               const VerifyParams& params);

// Every curve is asymptotic for directions in the second normal space.
TheoremReport verify_thm_3_3(const Immersion& M, const VerifyParams& params);

// T_j parallel in M <=> every X asymptotic in the direction xi_j.
TheoremReport verify_thm_3_4(const Immersion& M, const Eigen::VectorXd& d,
                             const VerifyParams& params);

// Helix lines are asymptotic in the direction xi_j.
TheoremReport verify_thm_3_5(const Immersion& M, const Eigen::VectorXd& d,
                             const std::vector<Eigen::VectorXd>& seeds, const VerifyParams& params);

// Along a curved line of curvature with tangential xi', no helix direction
// lies in span{xi, T}.
TheoremReport verify_thm_3_6(const Immersion& M, const std::vector<Eigen::VectorXd>& directions,
                             const TangentField& curve_field, const Eigen::VectorXd& curve_seed,
                             const NormalField& xi, const VerifyParams& params);

// Ruled <=> parallel xi (Thm 3.7 criterion) <=> vanishing normal curvature,
// checked as a three-way equivalence along helix lines.
TheoremReport verify_thm_3_8(const Immersion& M, const Eigen::VectorXd& d,
                             const std::vector<Eigen::VectorXd>& seeds, const VerifyParams& params);

// Hypersurface helix lines are straight.
TheoremReport verify_cor_3_2(const Immersion& M, const Eigen::VectorXd& d,
                             const std::vector<Eigen::VectorXd>& seeds, const VerifyParams& params);

} // namespace helixlab
