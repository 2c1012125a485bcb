#pragma once

#include <optional>

#include "helixlab/connection.hpp"

namespace helixlab {

// Splitting of a unit ambient direction d = cos(theta) T + sin(theta) xi at
// one chart point. T is absent when d is normal there (theta = pi/2), xi is
// absent when d is tangent (theta = 0).
struct HelixDecomposition {
    double theta = 0.0;           // in [0, pi/2]
    double tangential_norm = 0.0; // = cos(theta)
    std::optional<Eigen::VectorXd> tangent_dir;
    std::optional<Eigen::VectorXd> normal_dir;
};

struct HelixVerdict {
    bool is_helix = false;
    double theta_mean = 0.0;
    double theta_spread = 0.0; // max - min over the grid
    int grid_size = 0;         // valid points that entered the statistics
    double tolerance = 0.0;
};

struct WeakHelixResult {
    std::vector<Eigen::VectorXd> directions; // unit, mutually orthogonal by deflation
    std::vector<double> thetas;
    int independence_rank = 0;
};

// Threshold below which the tangent/normal part of a decomposition is
// reported absent.
inline constexpr double kDecompositionTol = 1e-10;

HelixDecomposition decompose_direction(const Immersion& M, const Eigen::VectorXd& u,
                                       const Eigen::VectorXd& d);

// Sweeps the grid, skipping points where the frame fails; needs at least 4
// usable points.
HelixVerdict check_helix(const Immersion& M, const Eigen::VectorXd& d,
                         const std::vector<Eigen::VectorXd>& grid, double tol);

// Multistart projected descent on the variance of |P(q) d|^2 over unit d,
// with Gauss-Newton polish and deflation into the orthogonal complement of
// every accepted direction. Deterministic for a fixed seed.
WeakHelixResult find_helix_directions(const Immersion& M, const std::vector<Eigen::VectorXd>& grid,
                                      double tol, int max_starts, std::uint64_t seed = 42);

// Values and exact directional derivatives (along the chart direction
// a_chart) of the unit fields T(u), xi(u) induced by decomposing a fixed d.
struct DirectionDerivatives {
    double theta = 0.0;
    Eigen::VectorXd T, xi;   // unit field values
    Eigen::VectorXd dT, dxi; // ambient directional derivatives
};

DirectionDerivatives direction_field_derivative(const Immersion& M, const Eigen::VectorXd& u,
                                                const Eigen::VectorXd& a_chart,
                                                const Eigen::VectorXd& d);

// Residuals of the helix system at u:
//   r1 = |cos(theta) nabla_X T - sin(theta) A^xi(X)|
//   r2 = |cos(theta) V(X,T) + sin(theta) nabla_perp_X xi|
// Throws DegenerateConfigError when the decomposition lacks T or xi.
std::pair<double, double> helix_system_residual(const Immersion& M, const Eigen::VectorXd& u,
                                                const Eigen::VectorXd& d, const TangentField& X);

} // namespace helixlab
