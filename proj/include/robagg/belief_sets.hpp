#pragma once

// Divergence balls, their intersections, hull witnesses and the Chernoff
// point. Every optimization here is a small smooth convex program handed to
// the barrier solver.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "robagg/detail/solvers.hpp"
#include "robagg/divergences.hpp"
#include "robagg/simplex.hpp"

namespace robagg {

/// {q : D(center || q) <= radius}. The divergence runs from the center to the
/// candidate.
struct Ball {
    Dist center;
    double radius = 0.0;
    DivergenceFamily divergence = KLFamily{};

    Ball() = default;
    Ball(Dist c, double r, DivergenceFamily d = KLFamily{}) : center(std::move(c)), radius(r), divergence(std::move(d)) {
        require(std::isfinite(radius) && radius >= 0.0, ErrorCode::InvalidArgument, "ball radius must be >= 0");
    }
};

inline bool ball_contains(const Ball& b, const Dist& q) {
    require_same_size(b.center.size(), q.size(), "ball_contains: dimension mismatch");
    return divergence(b.divergence, b.center, q) <= b.radius + tol::ball;
}

inline bool intersection_contains(const std::vector<Ball>& balls, const Dist& q) {
    require(!balls.empty(), ErrorCode::EmptyList, "intersection_contains: no balls");
    return std::all_of(balls.begin(), balls.end(), [&](const Ball& b) { return ball_contains(b, q); });
}

namespace detail {

inline Eigen::MatrixXd center_matrix(const std::vector<Dist>& centers) {
    const auto s = static_cast<Eigen::Index>(centers.front().size());
    const auto n = static_cast<Eigen::Index>(centers.size());
    Eigen::MatrixXd a(s, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        require_same_size(centers[static_cast<std::size_t>(i)].size(), static_cast<std::size_t>(s),
                          "center dimension mismatch");
        for (Eigen::Index k = 0; k < s; ++k) a(k, i) = centers[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    return a;
}

inline Eigen::VectorXd to_eigen(const Dist& d) {
    return Eigen::Map<const Eigen::VectorXd>(d.vec().data(), static_cast<Eigen::Index>(d.size()));
}

inline Dist from_eigen(const Eigen::VectorXd& v) {
    return repair(std::vector<double>(v.data(), v.data() + v.size()));
}

inline void check_common_family(const std::vector<Ball>& balls) {
    require(!balls.empty(), ErrorCode::EmptyList, "no balls given");
    for (const auto& b : balls) {
        require(b.divergence.index() == balls.front().divergence.index(), ErrorCode::InvalidArgument,
                "balls must share one divergence family");
        require_same_size(b.center.size(), balls.front().center.size(), "ball dimension mismatch");
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Hull witness

/// Minimizer of Phi(q) = max_i (D(p_i || q) - r_i) over the hull of the centers.
struct HullWitness {
    Dist argmin;                  // hull point attaining min Phi
    std::vector<double> weights;  // its convex coordinates
    double phi = 0.0;             // min Phi
    bool found() const noexcept { return phi <= tol::witness; }
    /// The witness when the intersection is nonempty.
    std::optional<Dist> point() const { return found() ? std::optional<Dist>(argmin) : std::nullopt; }
};

inline double phi_max_slack(const std::vector<Dist>& centers, const std::vector<double>& radii,
                            const DivergenceFamily& family, const Dist& q) {
    double phi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < centers.size(); ++i)
        phi = std::max(phi, divergence(family, centers[i], q).as_double() - radii[i]);
    return phi;
}

namespace detail {

/// Barrier iterates keep O(mu) weight on centers whose constraint is slack.
/// Drops the centers more than 1e-6 below the max slack and solves
/// D(p_i || A w) - r_i = t (i active), sum w = 1 by Newton on the active face.
/// Returns nothing unless Newton converges to nonnegative weights.
inline std::optional<Eigen::VectorXd> polish_active_face(const std::vector<Dist>& centers,
                                                         const std::vector<double>& radii,
                                                         const DivergenceFamily& family, const Eigen::MatrixXd& a,
                                                         const Eigen::VectorXd& w0, double phi) {
    constexpr double active_gap = 1e-6;
    const auto n = static_cast<Eigen::Index>(centers.size());
    auto slack = [&](Eigen::Index i, const Eigen::VectorXd& w) {
        return center_divergence(family, centers[static_cast<std::size_t>(i)], a * w);
    };
    std::vector<Eigen::Index> act;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto d = slack(i, w0);
        if (d && d->value - radii[static_cast<std::size_t>(i)] >= phi - active_gap) act.push_back(i);
    }
    const auto m = static_cast<Eigen::Index>(act.size());
    if (m == 0 || m == n) return std::nullopt;
    // unknowns: active weights, then t
    Eigen::VectorXd x(m + 1);
    double mass = 0.0;
    for (Eigen::Index k = 0; k < m; ++k) mass += w0(act[static_cast<std::size_t>(k)]);
    if (!(mass > 0.0)) return std::nullopt;
    for (Eigen::Index k = 0; k < m; ++k) x(k) = w0(act[static_cast<std::size_t>(k)]) / mass;
    x(m) = phi;
    auto expand = [&](const Eigen::VectorXd& y) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
        for (Eigen::Index k = 0; k < m; ++k) w(act[static_cast<std::size_t>(k)]) = y(k);
        return w;
    };
    for (int it = 0; it < 50; ++it) {
        const Eigen::VectorXd w = expand(x);
        Eigen::VectorXd f(m + 1);
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m + 1, m + 1);
        for (Eigen::Index r = 0; r < m; ++r) {
            const auto i = act[static_cast<std::size_t>(r)];
            const auto d = slack(i, w);
            if (!d) return std::nullopt;
            f(r) = d->value - radii[static_cast<std::size_t>(i)] - x(m);
            const Eigen::VectorXd g = a.transpose() * d->grad;
            for (Eigen::Index k = 0; k < m; ++k) jac(r, k) = g(act[static_cast<std::size_t>(k)]);
            jac(r, m) = -1.0;
        }
        f(m) = x.head(m).sum() - 1.0;
        jac.row(m).head(m).setOnes();
        if (f.cwiseAbs().maxCoeff() <= 1e-14) break;
        const auto lu = jac.fullPivLu();
        if (!lu.isInvertible()) return std::nullopt;
        x -= lu.solve(f);
        if (!x.allFinite()) return std::nullopt;
    }
    if (x.head(m).minCoeff() < 0.0) return std::nullopt;
    const Eigen::VectorXd w = expand(x);
    for (Eigen::Index r = 0; r < m; ++r) {
        const auto d = slack(act[static_cast<std::size_t>(r)], w);
        if (!d || std::abs(d->value - radii[static_cast<std::size_t>(act[static_cast<std::size_t>(r)])] - x(m)) > 1e-12)
            return std::nullopt;
    }
    return w;
}

} // namespace detail

/// Searches the weight simplex with an epigraph barrier program:
/// minimize t s.t. D(p_i || A w) - r_i <= t, w >= 0, sum w = 1.
inline HullWitness hull_witness(const std::vector<Dist>& centers, const std::vector<double>& radii,
                                const DivergenceFamily& family) {
    require(!centers.empty(), ErrorCode::EmptyList, "hull_witness: no centers");
    require(centers.size() == radii.size(), ErrorCode::DimensionMismatch, "hull_witness: radius count mismatch");
    const std::size_t n = centers.size();
    const Eigen::MatrixXd a = detail::center_matrix(centers);
    const auto ni = static_cast<Eigen::Index>(n);

    auto weights_to_q = [&](const Eigen::VectorXd& w) { return detail::from_eigen((a * w).cwiseMax(0.0)); };

    if (n == 1) {
        const double phi = divergence(family, centers[0], centers[0]).as_double() - radii[0];
        return HullWitness{centers[0], {1.0}, phi};
    }

    detail::BarrierProblem pr;
    pr.objective = [ni](const Eigen::VectorXd& x) -> std::optional<detail::Eval> {
        detail::Eval e;
        e.value = x(ni);
        e.grad = Eigen::VectorXd::Zero(ni + 1);
        e.grad(ni) = 1.0;
        e.hess = Eigen::MatrixXd::Zero(ni + 1, ni + 1);
        return e;
    };
    for (std::size_t i = 0; i < n; ++i) {
        pr.constraints.push_back([&, i](const Eigen::VectorXd& x) -> std::optional<detail::Eval> {
            const Eigen::VectorXd q = a * x.head(ni);
            auto d = detail::center_divergence(family, centers[i], q);
            if (!d) return std::nullopt;
            detail::Eval e;
            e.value = d->value - radii[i] - x(ni);
            e.grad.resize(ni + 1);
            e.grad.head(ni) = a.transpose() * d->grad;
            e.grad(ni) = -1.0;
            e.hess = Eigen::MatrixXd::Zero(ni + 1, ni + 1);
            e.hess.topLeftCorner(ni, ni) = a.transpose() * d->hess * a;
            return e;
        });
    }
    for (Eigen::Index j = 0; j < ni; ++j) pr.nonneg.push_back(j);
    pr.eq_a = Eigen::VectorXd::Zero(ni + 1);
    pr.eq_a.head(ni).setOnes();
    pr.eq_b = 1.0;

    Eigen::VectorXd x0(ni + 1);
    x0.head(ni).setConstant(1.0 / static_cast<double>(n));
    const double phi0 = phi_max_slack(centers, radii, family, weights_to_q(x0.head(ni)));
    require(std::isfinite(phi0), ErrorCode::DomainError, "hull_witness: divergence infinite at the barycenter");
    x0(ni) = phi0 + 1.0;

    const auto res = detail::solve_barrier(pr, x0);
    Eigen::VectorXd w = res.x.head(ni);
    require(w.minCoeff() >= -tol::simplex && std::abs(w.sum() - 1.0) <= 1e-8, ErrorCode::SolverDiverged,
            "hull_witness: weights left the simplex");
    w = w.cwiseMax(0.0);
    w /= w.sum();
    HullWitness out;
    out.weights.assign(w.data(), w.data() + ni);
    out.argmin = weights_to_q(w);
    out.phi = phi_max_slack(centers, radii, family, out.argmin);
    if (auto polished = detail::polish_active_face(centers, radii, family, a, w, out.phi)) {
        const Eigen::VectorXd& pw = *polished;
        const Dist q = weights_to_q(pw);
        const double phi = phi_max_slack(centers, radii, family, q);
        if (phi <= out.phi + 1e-12) {
            out.weights.assign(pw.data(), pw.data() + ni);
            out.argmin = q;
            out.phi = phi;
        }
    }
    return out;
}

inline HullWitness hull_witness(const std::vector<Dist>& centers, const std::vector<double>& radii,
                                const BregmanGenerator& g) {
    return hull_witness(centers, radii, DivergenceFamily{BregmanFamily{g}});
}

inline HullWitness hull_witness(const std::vector<Ball>& balls) {
    detail::check_common_family(balls);
    std::vector<Dist> centers;
    std::vector<double> radii;
    for (const auto& b : balls) {
        centers.push_back(b.center);
        radii.push_back(b.radius);
    }
    return hull_witness(centers, radii, balls.front().divergence);
}

// ---------------------------------------------------------------------------
// Chernoff point

struct ChernoffResult {
    Dist point;
    double radius = 0.0;
    std::vector<double> weights;
    double residual = 0.0;             // ||point - sum w_i p_i||_inf
    std::vector<double> divergences;   // D(p_i || point)
    bool degenerate = false;           // all centers equal
};

/// Smallest common radius r* at which the balls meet, and the meeting point.
/// Since Phi shifts by -r under a common radius r, r* equals the minimax value
/// min_q max_i D(p_i || q) and q* is its minimizer over the hull.
inline ChernoffResult chernoff_point(const std::vector<Dist>& centers, const DivergenceFamily& family) {
    require(!centers.empty(), ErrorCode::EmptyList, "chernoff_point: no centers");
    ChernoffResult out;
    const bool all_equal =
        std::all_of(centers.begin(), centers.end(), [&](const Dist& c) { return c == centers.front(); });
    if (all_equal) {
        out.point = centers.front();
        out.weights.assign(centers.size(), 0.0);
        out.weights[0] = 1.0;
        out.divergences.assign(centers.size(), 0.0);
        out.degenerate = true;
        return out;
    }
    const auto w = hull_witness(centers, std::vector<double>(centers.size(), 0.0), family);
    out.point = w.argmin;
    out.weights = w.weights;
    std::vector<double> mix(out.point.size(), 0.0);
    for (std::size_t i = 0; i < centers.size(); ++i)
        for (std::size_t s = 0; s < mix.size(); ++s) mix[s] += out.weights[i] * centers[i][s];
    for (std::size_t s = 0; s < mix.size(); ++s)
        out.residual = std::max(out.residual, std::abs(mix[s] - out.point[s]));
    for (const auto& c : centers) {
        const double d = divergence(family, c, out.point).as_double();
        out.divergences.push_back(d);
        out.radius = std::max(out.radius, d);
    }
    require(std::isfinite(out.radius), ErrorCode::NoConvergence, "chernoff_point: radius is not finite");
    return out;
}

inline ChernoffResult chernoff_point(const std::vector<Dist>& centers, const BregmanGenerator& g) {
    return chernoff_point(centers, DivergenceFamily{BregmanFamily{g}});
}

// ---------------------------------------------------------------------------
// Convex optimization over a ball intersection

namespace detail {

struct IntersectionOptimum {
    Dist point;
    std::vector<double> duals;  // per ball; empty when the intersection is a single point
    double eq_dual = 0.0;
    bool singleton = false;
    HullWitness witness;
};

/// Barrier duals 1/(t s_i) lose precision once the slack s_i is near roundoff.
/// Re-solve stationarity grad f0 + sum_i l_i grad D_i + nu 1 = 0 by least
/// squares over the active balls and the states in the support of q.
inline void refine_duals(const std::vector<Ball>& balls, const Term& objective, const Eigen::VectorXd& x,
                         IntersectionOptimum& out) {
    const auto f0 = objective(x);
    if (!f0) return;
    std::vector<std::size_t> active;
    std::vector<Eigen::VectorXd> grads;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        auto d = center_divergence(balls[i].divergence, balls[i].center, x);
        if (!d) return;
        if (balls[i].radius - d->value <= 1e-8 * std::max(1.0, balls[i].radius)) {
            active.push_back(i);
            grads.push_back(d->grad);
        }
    }
    std::vector<Eigen::Index> rows;
    for (Eigen::Index s = 0; s < x.size(); ++s)
        if (x(s) > 1e-9) rows.push_back(s);
    const auto k = static_cast<Eigen::Index>(active.size());
    if (static_cast<Eigen::Index>(rows.size()) < k + 1) return;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), k + 1);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto ri = static_cast<Eigen::Index>(r);
        for (Eigen::Index j = 0; j < k; ++j) m(ri, j) = grads[static_cast<std::size_t>(j)](rows[r]);
        m(ri, k) = 1.0;
        rhs(ri) = -f0->grad(rows[r]);
    }
    const Eigen::VectorXd sol = m.completeOrthogonalDecomposition().solve(rhs);
    if (!sol.allFinite()) return;
    std::fill(out.duals.begin(), out.duals.end(), 0.0);
    for (Eigen::Index j = 0; j < k; ++j) out.duals[active[static_cast<std::size_t>(j)]] = std::max(0.0, sol(j));
    out.eq_dual = sol(k);
}

/// minimize a convex objective of q over the simplex intersected with the
/// balls. The search runs over the whole simplex: optima of nonlinear
/// objectives can leave the hull of the centers.
inline IntersectionOptimum optimize_over_intersection(const std::vector<Ball>& balls, const Term& objective) {
    check_common_family(balls);
    IntersectionOptimum out;
    out.witness = hull_witness(balls);
    require(out.witness.found(), ErrorCode::EmptyIntersection, "ball intersection is empty");
    if (out.witness.phi >= -tol::singleton_slack) {
        out.point = out.witness.argmin;
        out.singleton = true;
        return out;
    }
    const auto dim = static_cast<Eigen::Index>(balls.front().center.size());
    BarrierProblem pr;
    pr.objective = objective;
    for (const auto& b : balls) {
        pr.constraints.push_back([&b](const Eigen::VectorXd& q) -> std::optional<Eval> {
            auto d = center_divergence(b.divergence, b.center, q);
            if (!d) return std::nullopt;
            return Eval{d->value - b.radius, d->grad, d->hess};
        });
    }
    for (Eigen::Index j = 0; j < dim; ++j) pr.nonneg.push_back(j);
    pr.eq_a = Eigen::VectorXd::Ones(dim);
    pr.eq_b = 1.0;

    const Eigen::VectorXd qw = to_eigen(out.witness.argmin);
    const Eigen::VectorXd uni = Eigen::VectorXd::Constant(dim, 1.0 / static_cast<double>(dim));
    std::optional<Eigen::VectorXd> start;
    for (double eps = 0.5; eps > 1e-14; eps *= 0.5) {
        Eigen::VectorXd x = (1.0 - eps) * qw + eps * uni;
        bool ok = objective(x).has_value();
        for (std::size_t i = 0; ok && i < pr.constraints.size(); ++i) {
            auto c = pr.constraints[i](x);
            ok = c && c->value < 0.0;
        }
        if (ok) {
            start = x;
            break;
        }
    }
    require(start.has_value(), ErrorCode::SolverDiverged, "no strictly feasible interior start found");
    const auto res = solve_barrier(pr, *start);
    out.point = from_eigen(res.x);
    out.duals = res.duals;
    out.eq_dual = res.eq_dual;
    refine_duals(balls, objective, res.x, out);
    return out;
}

/// Linear objective q -> c'q.
inline Term linear_term(const Eigen::VectorXd& c) {
    return [c](const Eigen::VectorXd& q) -> std::optional<Eval> {
        return Eval{c.dot(q), c, Eigen::MatrixXd::Zero(c.size(), c.size())};
    };
}

} // namespace detail
} // namespace robagg
