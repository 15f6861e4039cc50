#pragma once

// Welfare functionals over a planner's structured set of beliefs, and the
// worst-case belief each one selects.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <variant>
#include <vector>

#include "robagg/belief_sets.hpp"
#include "robagg/detail/solvers.hpp"
#include "robagg/divergences.hpp"
#include "robagg/simplex.hpp"

namespace robagg {

/// Misspecification parameter in (0, inf]. Infinity is an explicit marker.
class Lambda {
public:
    explicit Lambda(double v) : value_(v) {
        require(std::isfinite(v) && v > 0.0, ErrorCode::InvalidArgument, "lambda must be a positive finite real");
    }
    static Lambda infinity() { return Lambda(); }

    bool is_infinite() const noexcept { return infinite_; }
    double value() const {
        require(!infinite_, ErrorCode::DomainError, "lambda is infinite");
        return value_;
    }

private:
    Lambda() : value_(0.0), infinite_(true) {}
    double value_;
    bool infinite_ = false;
};

// ---------------------------------------------------------------------------
// Structured sets

struct Singleton {
    Dist p;
};
struct FiniteSet {
    std::vector<Dist> members;
};
struct HullOfFinite {
    std::vector<Dist> generators;
};
struct BallIntersection {
    std::vector<Ball> balls;
};
using StructuredSet = std::variant<Singleton, FiniteSet, HullOfFinite, BallIntersection>;

inline std::size_t state_count(const StructuredSet& q) {
    return std::visit(
        [](const auto& v) -> std::size_t {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Singleton>) return v.p.size();
            else if constexpr (std::is_same_v<T, FiniteSet>) {
                require(!v.members.empty(), ErrorCode::EmptyList, "finite set is empty");
                return v.members.front().size();
            } else if constexpr (std::is_same_v<T, HullOfFinite>) {
                require(!v.generators.empty(), ErrorCode::EmptyList, "hull has no generators");
                return v.generators.front().size();
            } else {
                require(!v.balls.empty(), ErrorCode::EmptyList, "ball intersection has no balls");
                return v.balls.front().center.size();
            }
        },
        q);
}

namespace detail {

inline const std::vector<Dist>* finite_members(const StructuredSet& q) {
    if (auto* f = std::get_if<FiniteSet>(&q)) return &f->members;
    if (auto* h = std::get_if<HullOfFinite>(&q)) return &h->generators;
    return nullptr;
}

inline Eigen::VectorXd to_eigen(const StateVector& x) {
    return Eigen::Map<const Eigen::VectorXd>(x.vec().data(), static_cast<Eigen::Index>(x.size()));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Multiplier criterion

/// -lambda log E_q[exp(-u0/lambda)], shifted by min u0 so no exponent is
/// positive.
inline double multiplier_value(const StateVector& u0, const Dist& q, double lambda) {
    require_same_size(u0.size(), q.size(), "multiplier_value: dimension mismatch");
    require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::InvalidArgument, "lambda must be positive and finite");
    const double lo = u0.min();
    double z = 0.0;
    for (std::size_t s = 0; s < q.size(); ++s) z += q[s] * std::exp(-(u0[s] - lo) / lambda);
    return lo - lambda * std::log(z);
}

/// p(s) proportional to q(s) exp(-u0(s)/lambda): the minimizer of
/// E_p[u0] + lambda kl(p||q).
inline Dist worst_case_tilt(const StateVector& u0, const Dist& q, double lambda) {
    require_same_size(u0.size(), q.size(), "worst_case_tilt: dimension mismatch");
    require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::InvalidArgument, "lambda must be positive and finite");
    const double lo = u0.min();
    std::vector<double> w(q.size());
    for (std::size_t s = 0; s < q.size(); ++s) w[s] = q[s] * std::exp(-(u0[s] - lo) / lambda);
    return normalize(w);
}

// ---------------------------------------------------------------------------
// Expected-utility extremes over a structured set

struct Extremum {
    double value = 0.0;
    Dist belief;
};

/// min (sign=+1) or max (sign=-1) of E_q[u0] over the set.
inline Extremum expectation_extremum(const StateVector& u0, const StructuredSet& q, double sign) {
    require_same_size(u0.size(), state_count(q), "structured set dimension mismatch");
    if (auto* s = std::get_if<Singleton>(&q)) return {expectation(s->p, u0), s->p};
    if (auto* members = detail::finite_members(q)) {
        // linear objective: the hull optimum sits at a generator
        Extremum best{sign * std::numeric_limits<double>::infinity(), members->front()};
        for (const auto& p : *members) {
            require_same_size(p.size(), u0.size(), "structured set dimension mismatch");
            const double v = expectation(p, u0);
            if (sign * v < sign * best.value) best = {v, p};
        }
        return best;
    }
    const auto& balls = std::get<BallIntersection>(q).balls;
    const auto opt = detail::optimize_over_intersection(balls, detail::linear_term(sign * detail::to_eigen(u0)));
    return {expectation(opt.point, u0), opt.point};
}

/// min over the set of E_q[u0].
inline double meu_value(const StateVector& u0, const StructuredSet& q) {
    return expectation_extremum(u0, q, 1.0).value;
}

/// alpha min E + (1 - alpha) max E over the set.
inline double mba_value(const StateVector& u0, const StructuredSet& q, double alpha) {
    require(alpha >= 0.0 && alpha <= 1.0, ErrorCode::InvalidArgument, "alpha must lie in [0, 1]");
    const double lo = expectation_extremum(u0, q, 1.0).value;
    const double hi = expectation_extremum(u0, q, -1.0).value;
    return alpha * lo + (1.0 - alpha) * hi;
}

// ---------------------------------------------------------------------------
// Entropic and phi-penalized criteria

struct KLPenalty {};
using Penalty = std::variant<KLPenalty, PhiSpec>;

struct Planner {
    Lambda lambda;
    Penalty penalty = KLPenalty{};
    StructuredSet structured;
};

struct EntropicSolution {
    double value = 0.0;
    Dist structured_belief;  // minimizing element of the structured set
    Dist worst_case;         // its exponential tilt (equal to it when lambda = inf)
};

/// min over the structured set of the multiplier value; lambda = inf is MEU.
inline EntropicSolution entropic_solve(const StateVector& u0, const StructuredSet& q, const Lambda& lambda) {
    require_same_size(u0.size(), state_count(q), "structured set dimension mismatch");
    if (lambda.is_infinite()) {
        const auto e = expectation_extremum(u0, q, 1.0);
        return {e.value, e.belief, e.belief};
    }
    const double lam = lambda.value();
    EntropicSolution out;
    if (auto* s = std::get_if<Singleton>(&q)) {
        out.structured_belief = s->p;
    } else if (auto* members = detail::finite_members(q)) {
        // concave in q: the hull minimum sits at a generator
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : *members) {
            const double v = multiplier_value(u0, p, lam);
            if (v < best) {
                best = v;
                out.structured_belief = p;
            }
        }
    } else {
        // maximize the linear functional E_q[exp(-(u0 - min u0)/lambda)]
        const double lo = u0.min();
        Eigen::VectorXd w(static_cast<Eigen::Index>(u0.size()));
        for (std::size_t s = 0; s < u0.size(); ++s) w(static_cast<Eigen::Index>(s)) = std::exp(-(u0[s] - lo) / lam);
        const auto opt =
            detail::optimize_over_intersection(std::get<BallIntersection>(q).balls, detail::linear_term(-w));
        out.structured_belief = opt.point;
    }
    out.value = multiplier_value(u0, out.structured_belief, lam);
    out.worst_case = worst_case_tilt(u0, out.structured_belief, lam);
    return out;
}

inline double entropic_value(const StateVector& u0, const StructuredSet& q, const Lambda& lambda) {
    return entropic_solve(u0, q, lambda).value;
}

inline double entropic_value(const StateVector& u0, const Planner& planner) {
    require(std::holds_alternative<KLPenalty>(planner.penalty), ErrorCode::InvalidArgument,
            "entropic_value requires the KL penalty");
    return entropic_value(u0, planner.structured, planner.lambda);
}

/// sup_psi { psi - E_q[phi*(psi - u0/lambda)] }, a concave scalar problem.
inline double phi_dual_inner(const PhiSpec& spec, const StateVector& u0, const Dist& q, double lambda) {
    auto f = [&](double psi) {
        double e = 0.0;
        for (std::size_t s = 0; s < q.size(); ++s)
            if (q[s] > 0.0) e += q[s] * spec.conjugate(psi - u0[s] / lambda);
        return psi - e;
    };
    double lo = u0.min() / lambda - 10.0;
    double hi = u0.max() / lambda + 10.0;
    for (int k = 0; k <= tol::max_bracket_doublings; ++k) {
        const auto [x, fx] = detail::golden_max(f, lo, hi, 1e-13 * std::max(1.0, hi - lo));
        const double edge = 1e-9 * (hi - lo);
        if (x > lo + edge && x < hi - edge) return fx;
        const double width = hi - lo;
        if (x <= lo + edge) lo -= width;
        else hi += width;
    }
    fail(ErrorCode::BracketFailure, "phi dual: supremum not interior after bracket expansion");
}

/// Dual form lambda min_q sup_psi {psi - E_q[phi*(psi - u0/lambda)]} over a
/// Singleton or FiniteSet.
inline double variational_phi_value(const StateVector& u0, const Planner& planner) {
    const auto* spec = std::get_if<PhiSpec>(&planner.penalty);
    require(spec != nullptr, ErrorCode::InvalidArgument, "variational_phi_value requires a phi penalty");
    if (planner.lambda.is_infinite()) return meu_value(u0, planner.structured);
    const double lam = planner.lambda.value();
    std::vector<Dist> members;
    if (auto* s = std::get_if<Singleton>(&planner.structured)) members = {s->p};
    else if (auto* f = std::get_if<FiniteSet>(&planner.structured)) members = f->members;
    else fail(ErrorCode::InvalidArgument, "variational_phi_value supports Singleton and FiniteSet only");
    require(!members.empty(), ErrorCode::EmptyList, "finite set is empty");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : members) {
        require_same_size(q.size(), u0.size(), "variational_phi_value: dimension mismatch");
        best = std::min(best, lam * phi_dual_inner(*spec, u0, q, lam));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Exponential certainty equivalent

/// phi_lambda(u) = -exp(-u/lambda) and its inverse; identity maps at lambda = inf.
class ExponentialCE {
public:
    explicit ExponentialCE(Lambda lambda) : lambda_(lambda) {}

    double phi(double u) const {
        if (lambda_.is_infinite()) return u;
        return -std::exp(-u / lambda_.value());
    }
    double phi_inv(double v) const {
        if (lambda_.is_infinite()) return v;
        require(v < 0.0, ErrorCode::DomainError, "phi_inv requires a negative argument");
        return -lambda_.value() * std::log(-v);
    }
    /// Criterion values are already certainty equivalents.
    double certainty_equivalent(double value) const { return value; }

private:
    Lambda lambda_;
};

} // namespace robagg
