#pragma once

// Finite-difference oracles and deterministic random generators for the
// test suites. Everything here runs on plain value evaluation only, so the
// oracles stay independent of the jet arithmetic they are checking.

#include <functional>
#include <random>

#include "helixlab/catalog.hpp"
#include "helixlab/expr.hpp"
#include "helixlab/manifold.hpp"

namespace oracles {

using helixlab::Expr;
using helixlab::Immersion;

inline double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * u01(rng);
}

inline Eigen::VectorXd random_unit_vector(std::mt19937_64& rng, int dim) {
    for (;;) {
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i) v(i) = 2.0 * u01(rng) - 1.0;
        const double n = v.norm();
        if (n > 1e-3 && n <= 1.0) return v / n;
    }
}

inline Eigen::VectorXd random_interior_point(const helixlab::Box& box, std::mt19937_64& rng,
                                             double inset = 0.1) {
    Eigen::VectorXd u(box.dim());
    for (int i = 0; i < box.dim(); ++i)
        u(i) = box.lo(i) + (inset + (1.0 - 2.0 * inset) * u01(rng)) * (box.hi(i) - box.lo(i));
    return u;
}

// ---------------------------------------------------------------------------
// central finite differences on eval_value

inline Eigen::VectorXd fd_gradient(const Expr& e, const Eigen::VectorXd& u, double h = 1e-5) {
    Eigen::VectorXd g(u.size());
    for (int i = 0; i < u.size(); ++i) {
        Eigen::VectorXd up = u, dn = u;
        up(i) += h;
        dn(i) -= h;
        g(i) = (helixlab::eval_value(e, up) - helixlab::eval_value(e, dn)) / (2.0 * h);
    }
    return g;
}

inline Eigen::MatrixXd fd_hessian(const Expr& e, const Eigen::VectorXd& u, double h = 1e-5) {
    const int m = static_cast<int>(u.size());
    Eigen::MatrixXd H(m, m);
    const double f0 = helixlab::eval_value(e, u);
    for (int i = 0; i < m; ++i) {
        Eigen::VectorXd up = u, dn = u;
        up(i) += h;
        dn(i) -= h;
        H(i, i) =
            (helixlab::eval_value(e, up) - 2.0 * f0 + helixlab::eval_value(e, dn)) / (h * h);
        for (int j = i + 1; j < m; ++j) {
            Eigen::VectorXd pp = u, pm = u, mp = u, mm = u;
            pp(i) += h; pp(j) += h;
            pm(i) += h; pm(j) -= h;
            mp(i) -= h; mp(j) += h;
            mm(i) -= h; mm(j) -= h;
            const double v = (helixlab::eval_value(e, pp) - helixlab::eval_value(e, pm) -
                              helixlab::eval_value(e, mp) + helixlab::eval_value(e, mm)) /
                             (4.0 * h * h);
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return H;
}

inline Eigen::MatrixXd fd_jacobian(const Immersion& M, const Eigen::VectorXd& u, double h = 1e-6) {
    Eigen::MatrixXd J(M.ambient_dim(), M.dim());
    for (int i = 0; i < M.dim(); ++i) {
        Eigen::VectorXd up = u, dn = u;
        up(i) += h;
        dn(i) -= h;
        J.col(i) = (M.point(up) - M.point(dn)) / (2.0 * h);
    }
    return J;
}

// directional derivative of a vector-valued map along a chart direction
inline Eigen::VectorXd
fd_directional(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
               const Eigen::VectorXd& u, const Eigen::VectorXd& a, double h = 1e-5) {
    return (f(u + h * a) - f(u - h * a)) / (2.0 * h);
}

// ---------------------------------------------------------------------------
// random expression trees

struct ExprGenerator {
    std::mt19937_64 rng;
    int arity;

    explicit ExprGenerator(std::uint64_t seed, int m) : rng(seed), arity(m) {}

    Expr leaf() {
        if (u01(rng) < 0.4) return Expr::constant(uniform(rng, -2.0, 2.0), arity);
        const int idx = 1 + static_cast<int>(u01(rng) * arity);
        return Expr::variable(std::min(idx, arity), arity);
    }

    Expr gen(int depth) {
        if (depth <= 0 || u01(rng) < 0.25) return leaf();
        const double roll = u01(rng);
        using helixlab::BinaryOp;
        using helixlab::UnaryFn;
        if (roll < 0.5) {
            static const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul,
                                           BinaryOp::Div};
            const BinaryOp op = ops[static_cast<int>(u01(rng) * 4) % 4];
            return Expr::binary(op, gen(depth - 1), gen(depth - 1));
        }
        if (roll < 0.58) {
            // integer power of a subexpression
            const double k = 2.0 + std::floor(u01(rng) * 3.0); // 2..4
            return Expr::binary(BinaryOp::Pow, gen(depth - 1), Expr::constant(k, arity));
        }
        static const UnaryFn fns[] = {UnaryFn::Neg, UnaryFn::Sin,  UnaryFn::Cos, UnaryFn::Tan,
                                      UnaryFn::Atan, UnaryFn::Exp, UnaryFn::Log, UnaryFn::Sqrt};
        const UnaryFn fn = fns[static_cast<int>(u01(rng) * 8) % 8];
        return Expr::unary(fn, gen(depth - 1));
    }

    // expression/point pair where the jet is finite and modestly scaled, so
    // finite differences are trustworthy
    std::pair<Expr, Eigen::VectorXd> well_scaled_sample(int depth = 4) {
        for (;;) {
            Expr e = gen(depth);
            Eigen::VectorXd u(arity);
            for (int i = 0; i < arity; ++i) u(i) = uniform(rng, -1.5, 1.5);
            try {
                // probe the full finite-difference stencil before accepting
                const helixlab::Jet2 j = helixlab::eval_jet2(e, u);
                if (!std::isfinite(j.value) || std::abs(j.value) > 50.0) continue;
                if (!j.gradient.allFinite() || j.gradient.norm() > 100.0) continue;
                if (!j.hessian.allFinite() || j.hessian.norm() > 100.0) continue;
                bool stencil_ok = true;
                const double h = 2e-5;
                for (int i = 0; i < arity && stencil_ok; ++i) {
                    for (double sgn : {-1.0, 1.0}) {
                        Eigen::VectorXd v = u;
                        v(i) += sgn * 2.0 * h;
                        if (std::abs(helixlab::eval_value(e, v)) > 1e3) stencil_ok = false;
                    }
                }
                if (!stencil_ok) continue;
                return {e, u};
            } catch (const helixlab::EvalError&) {
                continue;
            }
        }
    }
};

inline const std::vector<std::string>& catalog_names() {
    static const std::vector<std::string> names = helixlab::catalog_list();
    return names;
}

} // namespace oracles
