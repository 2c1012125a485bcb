#pragma once

#include <functional>
#include <iosfwd>
#include <optional>

#include "helixlab/connection.hpp"

namespace helixlab {

struct CurveSample {
    double s = 0.0;    // arc length
    Eigen::VectorXd u; // chart point
    Eigen::VectorXd p; // ambient point
    Eigen::VectorXd T; // unit ambient tangent
};

// Arc-length-sampled curve produced by integral_curve. Immutable after
// construction; owns a copy of its immersion (expression trees are shared,
// so the copy is cheap).
struct CurveOnManifold {
    Immersion owner;
    std::vector<CurveSample> samples;
    double step = 0.0;
    bool truncated = false; // integration left the domain before s_max
};

// First curvature and unit principal normal per sample; endpoints carry no
// values (central differences need both neighbours). V2 is absent where
// k < kCurvatureFloor.
struct FrenetData {
    std::vector<std::optional<double>> k;
    std::vector<std::optional<Eigen::VectorXd>> v2;
};

inline constexpr double kCurvatureFloor = 1e-6;

// Ambient vector field evaluated at a chart point; must return a vector
// with a nonvanishing tangential part.
using AmbientFieldRule = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Pointwise normal vector at a chart point (values only; shape-operator
// contractions do not need the field's derivative).
using NormalRule = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Classical RK4 with fixed step on u' = unit chart pullback of the field.
// Leaves the domain -> truncated curve; vanishing field at the seed -> error.
CurveOnManifold integral_curve(const Immersion& M, const AmbientFieldRule& field,
                               const Eigen::VectorXd& u0, double s_max, double step);

CurveOnManifold integral_curve(const Immersion& M, const TangentField& field,
                               const Eigen::VectorXd& u0, double s_max, double step);

// Integral curve of the unit tangent component T of the helix direction d.
CurveOnManifold helix_line(const Immersion& M, const Eigen::VectorXd& d, const Eigen::VectorXd& u0,
                           double s_max, double step);

// dT/ds by central differences over the samples; needs >= 5 samples.
FrenetData frenet(const CurveOnManifold& c);

// max over interior samples of |tangential part of dT/ds|.
double geodesic_residual(const Immersion& M, const CurveOnManifold& c);

// |V(T,T)| per sample (exact, from jets).
std::vector<double> normal_curvature(const Immersion& M, const CurveOnManifold& c);

// max over samples of |<A^xi(T), T>|.
double asymptotic_residual(const Immersion& M, const CurveOnManifold& c, const NormalRule& xi);
double asymptotic_residual(const Immersion& M, const CurveOnManifold& c, const NormalField& xi);

struct LineOfCurvatureResult {
    double residual = 0.0;       // max over samples of |A^xi(T) - lambda T|
    std::vector<double> lambdas; // <A^xi(T), T> per sample
};

LineOfCurvatureResult line_of_curvature_residual(const Immersion& M, const CurveOnManifold& c,
                                                 const NormalRule& xi);
LineOfCurvatureResult line_of_curvature_residual(const Immersion& M, const CurveOnManifold& c,
                                                 const NormalField& xi);

// CSV with columns s,u1..um,p1..pn,T1..Tn,k (k is nan where undefined).
void write_curve_csv(std::ostream& os, const CurveOnManifold& c);

} // namespace helixlab
