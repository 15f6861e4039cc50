#pragma once

// Scalar root/extremum searches and a log-barrier interior-point method for
// small smooth convex programs with one linear equality.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "robagg/error.hpp"
#include "robagg/tolerances.hpp"

namespace robagg::detail {

/// Root of a continuous f on [lo, hi] with f(lo), f(hi) of opposite signs.
/// Stops when the bracket is below xtol or after the step cap.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double xtol,
                     int max_steps = tol::max_bisection_steps) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    require(std::signbit(flo) != std::signbit(fhi), ErrorCode::NoRoot, "bisection bracket has no sign change");
    for (int k = 0; k < max_steps && hi - lo > xtol; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if (std::signbit(fm) == std::signbit(flo)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Maximizer of a unimodal f on [lo, hi] by golden-section search.
inline std::pair<double, double> golden_max(const std::function<double(double)>& f, double lo, double hi,
                                            double xtol = 1e-12) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < 400 && b - a > xtol; ++k) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    double x = 0.5 * (a + b);
    double fx = f(x);
    // endpoints may beat the interior estimate when the maximum is on the boundary
    for (double e : {lo, hi}) {
        const double fe = f(e);
        if (fe > fx) {
            x = e;
            fx = fe;
        }
    }
    return {x, fx};
}

// ---------------------------------------------------------------------------
// Barrier method

/// Value, gradient and Hessian of one smooth term. nullopt marks a point
/// outside the term's domain.
struct Eval {
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};
using Term = std::function<std::optional<Eval>(const Eigen::VectorXd&)>;

/// minimize f0(x) s.t. f_i(x) <= 0, x_j >= 0 for j in nonneg, a'x = b.
struct BarrierProblem {
    Term objective;
    std::vector<Term> constraints;
    std::vector<Eigen::Index> nonneg;
    Eigen::VectorXd eq_a;
    double eq_b = 0.0;
};

struct BarrierResult {
    Eigen::VectorXd x;
    std::vector<double> duals;        // one per inequality constraint
    std::vector<double> nonneg_duals; // one per nonnegativity bound
    double eq_dual = 0.0;
    double objective = 0.0;
    double gap = 0.0;
    bool converged = false;
};

namespace barrier_impl {

struct Centering {
    double value;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

inline std::optional<Centering> evaluate(const BarrierProblem& pr, const Eigen::VectorXd& x, double t) {
    const auto n = x.size();
    for (Eigen::Index j : pr.nonneg)
        if (!(x(j) > 0.0)) return std::nullopt;
    auto f0 = pr.objective(x);
    if (!f0) return std::nullopt;
    Centering c{t * f0->value, t * f0->grad, t * f0->hess};
    for (const auto& term : pr.constraints) {
        auto fi = term(x);
        if (!fi || !(fi->value < 0.0)) return std::nullopt;
        const double s = -fi->value;
        c.value -= std::log(s);
        c.grad += fi->grad / s;
        c.hess += fi->hess / s + (fi->grad * fi->grad.transpose()) / (s * s);
    }
    for (Eigen::Index j : pr.nonneg) {
        c.value -= std::log(x(j));
        c.grad(j) -= 1.0 / x(j);
        c.hess(j, j) += 1.0 / (x(j) * x(j));
    }
    if (!std::isfinite(c.value) || !c.grad.allFinite() || !c.hess.allFinite()) return std::nullopt;
    (void)n;
    return c;
}

} // namespace barrier_impl

/// Path-following log-barrier method. x0 must be strictly feasible and satisfy
/// the equality. Duals are the central-path estimates at the final t.
inline BarrierResult solve_barrier(const BarrierProblem& pr, Eigen::VectorXd x0,
                                   double gap_tol = tol::barrier_gap) {
    using barrier_impl::evaluate;
    const auto n = x0.size();
    const bool has_eq = pr.eq_a.size() == n;
    const double m = static_cast<double>(pr.constraints.size() + pr.nonneg.size());
    require(evaluate(pr, x0, 1.0).has_value(), ErrorCode::InvalidArgument,
            "barrier: starting point is not strictly feasible");

    Eigen::VectorXd x = std::move(x0);
    double t = 1.0;
    double eq_w = 0.0;
    bool converged = false;

    for (int outer = 0; outer < 80; ++outer) {
        // Newton centering at fixed t
        for (int it = 0; it < 200; ++it) {
            auto c = evaluate(pr, x, t);
            if (!c) break;
            Eigen::VectorXd dx;
            if (has_eq) {
                // the equality row is scaled to the Hessian so the solve keeps it accurate
                const double sc = std::max(1.0, c->hess.cwiseAbs().maxCoeff());
                Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
                kkt.topLeftCorner(n, n) = c->hess;
                kkt.block(0, n, n, 1) = sc * pr.eq_a;
                kkt.block(n, 0, 1, n) = sc * pr.eq_a.transpose();
                Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
                rhs.head(n) = -c->grad;
                rhs(n) = sc * (pr.eq_b - pr.eq_a.dot(x));
                Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
                dx = sol.head(n);
                eq_w = sc * sol(n);
            } else {
                dx = c->hess.ldlt().solve(-c->grad);
            }
            if (!dx.allFinite()) break;
            const double dec = -c->grad.dot(dx);
            if (dec < 0.0 || 0.5 * dec <= 1e-14) break;
            double step = 1.0;
            bool moved = false;
            for (int ls = 0; ls < 80; ++ls) {
                Eigen::VectorXd xn = x + step * dx;
                if (has_eq) xn += pr.eq_a * ((pr.eq_b - pr.eq_a.dot(xn)) / pr.eq_a.squaredNorm());
                auto cn = evaluate(pr, xn, t);
                // Inside the quadratic-convergence region a feasible full step is
                // taken without the sufficient-decrease test, which loses meaning
                // once t f0 dwarfs the decrement.
                const bool accept = cn && ((step == 1.0 && dec < 0.2) || cn->value <= c->value - 0.25 * step * dec);
                if (accept) {
                    x = std::move(xn);
                    moved = true;
                    break;
                }
                step *= 0.5;
            }
            if (!moved) break;
        }
        if (m / t < gap_tol) {
            converged = true;
            break;
        }
        t *= 12.0;
    }

    BarrierResult r;
    r.x = x;
    r.converged = converged;
    r.gap = m / t;
    auto f0 = pr.objective(x);
    r.objective = f0 ? f0->value : std::numeric_limits<double>::quiet_NaN();
    for (const auto& term : pr.constraints) {
        auto fi = term(x);
        r.duals.push_back(fi && fi->value < 0.0 ? 1.0 / (t * -fi->value) : 0.0);
    }
    for (Eigen::Index j : pr.nonneg) r.nonneg_duals.push_back(1.0 / (t * x(j)));
    r.eq_dual = eq_w / t;
    return r;
}

} // namespace robagg::detail
