#pragma once

// Aggregation of agents' tastes and beliefs: social utility, act-dependent
// social beliefs, projections of a truth model onto the structured set,
// opinion pools, comparative statics and policy choice.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "robagg/belief_sets.hpp"
#include "robagg/criteria.hpp"
#include "robagg/detail/solvers.hpp"
#include "robagg/divergences.hpp"
#include "robagg/simplex.hpp"

namespace robagg {

struct Agent {
    std::string name;
    std::map<std::string, double> utility;  // outcome id -> utility
    Dist reference;
    double radius = 0.0;
};

struct Profile {
    std::vector<Agent> agents;
    std::map<std::string, std::vector<std::string>> acts;  // act id -> outcome per state
    std::vector<double> beta;
    double gamma = 0.0;
};

inline void validate(const Profile& profile) {
    require(!profile.agents.empty(), ErrorCode::EmptyList, "profile has no agents");
    require(profile.beta.size() == profile.agents.size(), ErrorCode::DimensionMismatch,
            "beta must have one entry per agent");
    bool positive = false;
    for (double b : profile.beta) {
        require(std::isfinite(b) && b >= 0.0, ErrorCode::InvalidArgument, "beta must be nonnegative");
        positive = positive || b > 0.0;
    }
    require(positive, ErrorCode::InvalidArgument, "beta must not be identically zero");
    const std::size_t dim = profile.agents.front().reference.size();
    for (const auto& a : profile.agents) {
        require_same_size(a.reference.size(), dim, "agent reference dimension mismatch");
        require(std::isfinite(a.radius) && a.radius >= 0.0, ErrorCode::InvalidArgument, "agent radius must be >= 0");
        require(!a.utility.empty(), ErrorCode::InvalidArgument, "agent '" + a.name + "' has no utilities");
        auto [lo, hi] = std::minmax_element(a.utility.begin(), a.utility.end(),
                                            [](const auto& x, const auto& y) { return x.second < y.second; });
        require(lo->second < hi->second, ErrorCode::InvalidArgument,
                "agent '" + a.name + "' has a constant utility");
    }
    for (const auto& [id, outcomes] : profile.acts) {
        require(outcomes.size() == dim, ErrorCode::DimensionMismatch, "act '" + id + "' has the wrong state count");
        for (const auto& o : outcomes)
            for (const auto& a : profile.agents)
                require(a.utility.count(o) == 1, ErrorCode::UnknownOutcome,
                        "act '" + id + "' references unknown outcome '" + o + "'");
    }
}

inline const std::vector<std::string>& act_outcomes(const Profile& profile, const std::string& act) {
    auto it = profile.acts.find(act);
    require(it != profile.acts.end(), ErrorCode::UnknownAct, "unknown act '" + act + "'");
    return it->second;
}

/// u0(s) = sum_i beta_i u_i(act(s)) + gamma.
inline StateVector social_utility(const Profile& profile, const std::string& act) {
    const auto& outcomes = act_outcomes(profile, act);
    std::vector<double> u(outcomes.size(), profile.gamma);
    for (std::size_t s = 0; s < outcomes.size(); ++s) {
        for (std::size_t i = 0; i < profile.agents.size(); ++i) {
            auto it = profile.agents[i].utility.find(outcomes[s]);
            require(it != profile.agents[i].utility.end(), ErrorCode::UnknownOutcome,
                    "unknown outcome '" + outcomes[s] + "'");
            u[s] += profile.beta[i] * it->second;
        }
    }
    return StateVector(std::move(u));
}

/// Outcome-level index per state: states sharing an outcome share a level.
inline std::vector<std::size_t> act_levels(const Profile& profile, const std::string& act) {
    const auto& outcomes = act_outcomes(profile, act);
    std::map<std::string, std::size_t> ids;
    std::vector<std::size_t> levels;
    for (const auto& o : outcomes) levels.push_back(ids.emplace(o, ids.size()).first->second);
    return levels;
}

/// KL balls of the agents with beta_i > 0.
inline std::vector<Ball> profile_balls(const Profile& profile) {
    std::vector<Ball> balls;
    for (std::size_t i = 0; i < profile.agents.size(); ++i)
        balls.emplace_back(profile.agents[i].reference, profile.agents[i].radius);
    return balls;
}

namespace detail {

struct ActiveSet {
    std::vector<Ball> balls;
    std::vector<std::size_t> index;  // position in the caller's list
};

inline ActiveSet active_balls(const std::vector<Ball>& balls, const std::vector<double>& beta) {
    require(!balls.empty(), ErrorCode::EmptyList, "no balls given");
    require(beta.size() == balls.size(), ErrorCode::DimensionMismatch, "beta must have one entry per ball");
    ActiveSet a;
    for (std::size_t i = 0; i < balls.size(); ++i) {
        require(std::isfinite(beta[i]) && beta[i] >= 0.0, ErrorCode::InvalidArgument, "beta must be nonnegative");
        if (beta[i] > 0.0) {
            a.balls.push_back(balls[i]);
            a.index.push_back(i);
        }
    }
    require(!a.balls.empty(), ErrorCode::InvalidArgument, "beta must not be identically zero");
    return a;
}

inline void require_kl(const std::vector<Ball>& balls) {
    for (const auto& b : balls)
        require(std::holds_alternative<KLFamily>(b.divergence), ErrorCode::InvalidArgument, "KL balls required");
}

inline int reference_rank(const std::vector<Ball>& balls) {
    std::vector<Dist> c;
    for (const auto& b : balls) c.push_back(b.center);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(center_matrix(c));
    lu.setThreshold(1e-10);
    return static_cast<int>(lu.rank());
}

} // namespace detail

// ---------------------------------------------------------------------------
// Act-dependent social belief

struct SocialBeliefResult {
    Dist belief;
    std::map<std::size_t, std::vector<double>> weights_by_level;  // level -> weight per agent
    double kkt_residual = 0.0;             // feasibility and complementary slackness
    double reconstruction_residual = 0.0;  // max_s |q(s) - sum_i mu_i(level(s)) p_i(s)|
    bool degenerate = false;
    bool singleton = false;
    int reference_rank = 0;
};

/// Worst-case structured belief for one act: minimizes the multiplier value
/// over the intersection of the balls with beta_i > 0, then writes it as
/// q(s) = sum_i mu_i(level(s)) p_i(s) with mu_i(level) = l_i / (nu - w(level)),
/// where l_i are the ball multipliers, w = exp(-(u0 - min u0)/lambda) and nu
/// normalizes q.
inline SocialBeliefResult social_belief_for_act(const StateVector& u0, const std::vector<std::size_t>& levels,
                                                const std::vector<Ball>& balls, const std::vector<double>& beta,
                                                double lambda) {
    require(std::isfinite(lambda) && lambda > 0.0, ErrorCode::InvalidArgument, "lambda must be positive and finite");
    detail::require_kl(balls);
    require_same_size(u0.size(), levels.size(), "social_belief_for_act: level count mismatch");
    const auto act = detail::active_balls(balls, beta);
    const std::size_t dim = u0.size();
    const std::size_t n = balls.size();

    const double lo = u0.min();
    Eigen::VectorXd w(static_cast<Eigen::Index>(dim));
    for (std::size_t s = 0; s < dim; ++s) w(static_cast<Eigen::Index>(s)) = std::exp(-(u0[s] - lo) / lambda);
    const auto opt = detail::optimize_over_intersection(act.balls, detail::linear_term(-w));

    SocialBeliefResult out;
    out.belief = opt.point;
    out.singleton = opt.singleton;
    out.reference_rank = detail::reference_rank(act.balls);

    std::vector<std::size_t> distinct(levels);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<double> level_w(dim);
    for (std::size_t s = 0; s < dim; ++s) level_w[s] = w(static_cast<Eigen::Index>(s));

    const bool constant_act = *std::max_element(level_w.begin(), level_w.end()) -
                                  *std::min_element(level_w.begin(), level_w.end()) <= 0.0;
    if (constant_act) {
        // every feasible belief is optimal; report the hull witness, which the weights reproduce exactly
        out.belief = opt.witness.argmin;
    }
    if (opt.singleton || constant_act) {
        // single feasible point (or the witness): its hull weights do not depend on the act
        std::vector<double> mu(n, 0.0);
        for (std::size_t k = 0; k < act.index.size(); ++k) mu[act.index[k]] = opt.witness.weights[k];
        for (auto l : distinct) out.weights_by_level[l] = mu;
    } else {
        std::vector<double> a(dim, 0.0);  // sum_i l_i p_i(s)
        double lsum = 0.0;
        for (std::size_t k = 0; k < act.balls.size(); ++k) {
            lsum += opt.duals[k];
            for (std::size_t s = 0; s < dim; ++s) a[s] += opt.duals[k] * act.balls[k].center[s];
        }
        out.degenerate = lsum <= 1e-14;
        double nu_lo = -std::numeric_limits<double>::infinity();
        double amass = 0.0;
        for (std::size_t s = 0; s < dim; ++s)
            if (a[s] > 0.0) {
                nu_lo = std::max(nu_lo, level_w[s]);
                amass += a[s];
            }
        if (!out.degenerate && amass > 0.0) {
            auto excess = [&](double nu) {
                double m = 0.0;
                for (std::size_t s = 0; s < dim; ++s)
                    if (a[s] > 0.0) m += a[s] / (nu - level_w[s]);
                return m - 1.0;
            };
            const double nu_hi = nu_lo + amass + 1.0;
            double left = nu_lo;
            double right = nu_hi;
            for (int k = 0; k < 400 && right > left; ++k) {
                const double mid = 0.5 * (left + right);
                if (mid <= left || mid >= right) break;
                if (excess(mid) > 0.0) left = mid;
                else right = mid;
            }
            const double nu = 0.5 * (left + right);
            for (auto l : distinct) {
                std::size_t s0 = 0;
                while (levels[s0] != l) ++s0;
                std::vector<double> mu(n, 0.0);
                for (std::size_t k = 0; k < act.balls.size(); ++k)
                    mu[act.index[k]] = opt.duals[k] / (nu - level_w[s0]);
                out.weights_by_level[l] = mu;
            }
        } else {
            out.degenerate = true;
            for (auto l : distinct) out.weights_by_level[l] = std::vector<double>(n, 0.0);
        }
    }

    for (std::size_t s = 0; s < dim; ++s) {
        const auto& mu = out.weights_by_level[levels[s]];
        double r = 0.0;
        for (std::size_t i = 0; i < n; ++i) r += mu[i] * balls[i].center[s];
        out.reconstruction_residual = std::max(out.reconstruction_residual, std::abs(r - out.belief[s]));
    }
    for (std::size_t k = 0; k < act.balls.size(); ++k) {
        const double slack = kl(act.balls[k].center, out.belief).as_double() - act.balls[k].radius;
        out.kkt_residual = std::max(out.kkt_residual, std::max(slack, 0.0));
        if (!opt.duals.empty()) out.kkt_residual = std::max(out.kkt_residual, std::abs(opt.duals[k] * slack));
    }
    if (out.reconstruction_residual > 1e-6) out.degenerate = true;
    return out;
}

inline SocialBeliefResult social_belief_for_act(const Profile& profile, const std::string& act, double lambda) {
    validate(profile);
    return social_belief_for_act(social_utility(profile, act), act_levels(profile, act), profile_balls(profile),
                                 profile.beta, lambda);
}

// ---------------------------------------------------------------------------
// Projection of a truth model

struct TruthProjection {
    double sigma = 0.0;
    Dist projected;
    std::vector<double> mixture_weights;  // per agent, zero for beta_i = 0
    double divergence = 0.0;              // kl(p* || projected)
    double residual = 0.0;                // ||projected - (sigma p* + (1-sigma) sum mu p)||_inf
};

/// argmin over the intersection of kl(p* || q). Stationarity gives
/// q = (p* + sum l_i p_i) / (1 + sum l_i), hence sigma = 1/(1 + sum l) and
/// mu_i = l_i / sum l.
inline TruthProjection kl_project_to_intersection(const Dist& p_star, const std::vector<Ball>& balls,
                                                  const std::vector<double>& beta) {
    detail::require_kl(balls);
    const auto act = detail::active_balls(balls, beta);
    const std::size_t n = balls.size();
    const std::size_t dim = p_star.size();
    for (const auto& b : act.balls) require_same_size(b.center.size(), dim, "projection: dimension mismatch");

    TruthProjection out;
    out.mixture_weights.assign(n, 0.0);
    if (intersection_contains(act.balls, p_star)) {
        out.sigma = 1.0;
        out.projected = p_star;
        for (auto i : act.index) out.mixture_weights[i] = 1.0 / static_cast<double>(act.index.size());
        return out;
    }
    const auto opt = detail::optimize_over_intersection(
        act.balls, [&p_star](const Eigen::VectorXd& q) -> std::optional<detail::Eval> {
            auto d = detail::center_divergence(KLFamily{}, p_star, q);
            if (!d) return std::nullopt;
            return detail::Eval{d->value, d->grad, d->hess};
        });
    out.projected = opt.point;
    const Extended d = kl(p_star, out.projected);
    require(d.is_finite(), ErrorCode::AbsoluteContinuityFailure,
            "truth model is not absolutely continuous with respect to the structured set");
    out.divergence = d.value();
    if (opt.singleton) {
        out.sigma = 0.0;
        for (std::size_t k = 0; k < act.index.size(); ++k) out.mixture_weights[act.index[k]] = opt.witness.weights[k];
    } else {
        double lsum = 0.0;
        for (double l : opt.duals) lsum += l;
        out.sigma = 1.0 / (1.0 + lsum);
        for (std::size_t k = 0; k < act.index.size(); ++k)
            out.mixture_weights[act.index[k]] = lsum > 0.0 ? opt.duals[k] / lsum : 0.0;
    }
    for (std::size_t s = 0; s < dim; ++s) {
        double r = out.sigma * p_star[s];
        for (std::size_t i = 0; i < n; ++i) r += (1.0 - out.sigma) * out.mixture_weights[i] * balls[i].center[s];
        out.residual = std::max(out.residual, std::abs(r - out.projected[s]));
    }
    return out;
}

/// kl(p* || q) - kl(p* || q0); nonnegative on the structured set when q0 is
/// the projection.
inline double pythagorean_gap(const Dist& p_star, const Dist& q, const Dist& q0) {
    const Extended a = kl(p_star, q);
    const Extended b = kl(p_star, q0);
    require(a.is_finite() && b.is_finite(), ErrorCode::AbsoluteContinuityFailure,
            "pythagorean_gap: truth model not absolutely continuous");
    return a.value() - b.value();
}

// ---------------------------------------------------------------------------
// Opinion pools

/// sum mu_i p_i, the minimizer of q -> sum mu_i kl(p_i || q).
inline Dist barycenter(const std::vector<double>& weights, const std::vector<Dist>& points) {
    return convex_combine(weights, points);
}

struct FitGap {
    double objective = 0.0;     // sum mu_i kl(p_i || q0)
    double entropy_gap = 0.0;   // H(q0) - sum mu_i H(p_i)
};

inline FitGap fit_gap(const std::vector<double>& weights, const std::vector<Dist>& points) {
    const Dist q0 = barycenter(weights, points);
    FitGap out;
    out.entropy_gap = shannon_entropy(q0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (weights[i] == 0.0) continue;
        out.objective += weights[i] * kl(points[i], q0).value();
        out.entropy_gap -= weights[i] * shannon_entropy(points[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Comparative statics of the weights

/// Hull weights of the equal-slack point argmin_q max_i (kl(p_i||q) - eta_i)
/// over the agents with beta_i > 0. When the balls meet in a single point this
/// is that point's weight vector.
inline std::vector<double> equal_slack_weights(const std::vector<Ball>& balls, const std::vector<double>& beta) {
    detail::require_kl(balls);
    const auto act = detail::active_balls(balls, beta);
    const auto w = hull_witness(act.balls);
    std::vector<double> mu(balls.size(), 0.0);
    for (std::size_t k = 0; k < act.index.size(); ++k) mu[act.index[k]] = w.weights[k];
    return mu;
}

struct WeightSensitivity {
    double dmu_i_deta_i = 0.0;
    double dsum_others = 0.0;
    std::vector<double> weights_minus;
    std::vector<double> weights_plus;
};

/// Central differences of the equal-slack weights in eta_i (forward when the
/// radius is below the step).
inline WeightSensitivity weight_sensitivity(const std::vector<Ball>& balls, const std::vector<double>& beta,
                                            std::size_t i, double step) {
    require(i < balls.size(), ErrorCode::InvalidArgument, "agent index out of range");
    require(step > 0.0, ErrorCode::InvalidArgument, "step must be positive");
    auto perturbed = [&](double eta) {
        auto b = balls;
        b[i].radius = eta;
        return equal_slack_weights(b, beta);
    };
    const double eta = balls[i].radius;
    const double lo = std::max(0.0, eta - step);
    const double hi = eta + step;
    WeightSensitivity out;
    out.weights_minus = perturbed(lo);
    out.weights_plus = perturbed(hi);
    const double h = hi - lo;
    out.dmu_i_deta_i = (out.weights_plus[i] - out.weights_minus[i]) / h;
    for (std::size_t j = 0; j < balls.size(); ++j)
        if (j != i) out.dsum_others += (out.weights_plus[j] - out.weights_minus[j]) / h;
    return out;
}

// ---------------------------------------------------------------------------
// Welfare-dominant singleton

struct DominantBelief {
    std::size_t index = 0;
    Dist belief;
};

/// FOSD-greatest candidate; errors when some pair is incomparable.
inline DominantBelief welfare_dominant_belief(const std::vector<Dist>& candidates) {
    require(!candidates.empty(), ErrorCode::EmptyList, "no candidate beliefs");
    for (std::size_t a = 0; a < candidates.size(); ++a)
        for (std::size_t b = a + 1; b < candidates.size(); ++b)
            require(fosd_compare(candidates[a], candidates[b]) != Dominance::Incomparable, ErrorCode::NoFosdOrder,
                    "candidate beliefs are not totally ordered by FOSD");
    std::size_t best = 0;
    for (std::size_t k = 1; k < candidates.size(); ++k)
        if (fosd_compare(candidates[k], candidates[best]) == Dominance::PDominates) best = k;
    return {best, candidates[best]};
}

inline DominantBelief welfare_dominant_belief(const Profile& profile, const std::vector<Dist>& candidates) {
    validate(profile);
    return welfare_dominant_belief(candidates);
}

// ---------------------------------------------------------------------------
// rho-aggregation

struct RhoAggregate {
    Dist aggregate;
    std::vector<double> sigmas;  // n agent coefficients followed by the truth coefficient
};

/// argmin over the intersection of rho-balls of D_rho(p* || q). The solution
/// satisfies q^{1-rho} = sum sigma_i p_i^{1-rho} (p_{n+1} = p*) with
/// sigma_i = l_i c, sigma_{n+1} = c, c fixed by unit mass.
inline RhoAggregate rho_aggregate(const Dist& p_star, const std::vector<Dist>& points,
                                  const std::vector<double>& radii, double rho) {
    check_rho(rho);
    require(!points.empty(), ErrorCode::EmptyList, "rho_aggregate: no points");
    require(points.size() == radii.size(), ErrorCode::DimensionMismatch, "rho_aggregate: radius count mismatch");
    const std::size_t n = points.size();
    const std::size_t dim = p_star.size();
    std::vector<Ball> balls;
    for (std::size_t i = 0; i < n; ++i) {
        require_same_size(points[i].size(), dim, "rho_aggregate: dimension mismatch");
        balls.emplace_back(points[i], radii[i], RhoFamily{rho});
    }
    RhoAggregate out;
    out.sigmas.assign(n + 1, 0.0);
    if (intersection_contains(balls, p_star)) {
        out.aggregate = p_star;
        out.sigmas[n] = 1.0;
        return out;
    }
    const auto opt = detail::optimize_over_intersection(
        balls, [&p_star, rho](const Eigen::VectorXd& q) -> std::optional<detail::Eval> {
            auto d = detail::center_divergence(RhoFamily{rho}, p_star, q);
            if (!d) return std::nullopt;
            return detail::Eval{d->value, d->grad, d->hess};
        });
    out.aggregate = opt.point;
    const double e = 1.0 - rho;
    if (!opt.singleton) {
        std::vector<double> raw(n + 1);
        for (std::size_t i = 0; i < n; ++i) raw[i] = opt.duals[i];
        raw[n] = 1.0;
        double mass = 0.0;
        for (std::size_t s = 0; s < dim; ++s) {
            double a = std::pow(p_star[s], e);
            for (std::size_t i = 0; i < n; ++i) a += raw[i] * std::pow(points[i][s], e);
            mass += std::pow(a, 1.0 / e);
        }
        const double c = std::pow(mass, -e);
        for (std::size_t i = 0; i <= n; ++i) out.sigmas[i] = c * raw[i];
    } else {
        // single feasible point: least-squares fit of q^{1-rho} on the p_i^{1-rho}
        Eigen::MatrixXd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n + 1));
        Eigen::VectorXd y(static_cast<Eigen::Index>(dim));
        for (std::size_t s = 0; s < dim; ++s) {
            const auto r = static_cast<Eigen::Index>(s);
            for (std::size_t i = 0; i < n; ++i) m(r, static_cast<Eigen::Index>(i)) = std::pow(points[i][s], e);
            m(r, static_cast<Eigen::Index>(n)) = std::pow(p_star[s], e);
            y(r) = std::pow(out.aggregate[s], e);
        }
        const Eigen::VectorXd sol = m.completeOrthogonalDecomposition().solve(y);
        for (std::size_t i = 0; i <= n; ++i) out.sigmas[i] = std::max(0.0, sol(static_cast<Eigen::Index>(i)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Optimal policy along a one-parameter family of acts

struct PolicyFamily {
    /// Per-agent state utility vectors of the act indexed by t.
    std::function<std::vector<StateVector>(double)> utilities;
    /// Optional per-agent t-derivatives of those vectors.
    std::function<std::vector<StateVector>(double)> derivatives{};
    double lo = 0.0;
    double hi = 1.0;
};

struct PolicyResult {
    double t_opt = 0.0;
    double value = 0.0;
    bool interior = false;
    /// |dV/dt| at t_opt from the derivative callbacks, when supplied and interior.
    std::optional<double> stationarity;
};

inline StateVector policy_social_utility(const std::vector<StateVector>& u, const std::vector<double>& beta,
                                         double gamma) {
    require(u.size() == beta.size(), ErrorCode::DimensionMismatch, "one utility vector per beta entry required");
    StateVector acc = StateVector(std::vector<double>(u.front().size(), gamma));
    for (std::size_t i = 0; i < u.size(); ++i) acc = acc + beta[i] * u[i];
    return acc;
}

/// Maximizes the multiplier value (expected utility at lambda = inf) over t.
inline PolicyResult optimal_policy(const PolicyFamily& family, const std::vector<double>& beta, double gamma,
                                   const Dist& q0, const Lambda& lambda) {
    require(family.hi > family.lo, ErrorCode::InvalidArgument, "policy interval must be nonempty");
    auto value = [&](double t) {
        const StateVector u0 = policy_social_utility(family.utilities(t), beta, gamma);
        return lambda.is_infinite() ? expectation(q0, u0) : multiplier_value(u0, q0, lambda.value());
    };
    constexpr int grid = 101;
    std::vector<double> ts(grid), vs(grid);
    for (int k = 0; k < grid; ++k) {
        ts[k] = family.lo + (family.hi - family.lo) * k / (grid - 1);
        vs[k] = value(ts[k]);
    }
    int peaks = 0;
    int best = 0;
    for (int k = 1; k + 1 < grid; ++k) {
        const double scale = 1e-12 * std::max(1.0, std::abs(vs[k]));
        if (vs[k] > vs[k - 1] + scale && vs[k] > vs[k + 1] + scale) ++peaks;
    }
    require(peaks <= 1, ErrorCode::NonConcaveDetected, "value along the policy family has several interior maxima");
    for (int k = 1; k < grid; ++k)
        if (vs[k] > vs[best]) best = k;
    const double a = ts[std::max(0, best - 1)];
    const double b = ts[std::min(grid - 1, best + 1)];
    auto [t, v] = detail::golden_max(value, a, b, 1e-13);
    auto slope = [&](double x) {
        const StateVector u0 = policy_social_utility(family.utilities(x), beta, gamma);
        const StateVector du = policy_social_utility(family.derivatives(x), beta, 0.0);
        const Dist weight = lambda.is_infinite() ? q0 : worst_case_tilt(u0, q0, lambda.value());
        return expectation(weight, du);
    };
    if (family.derivatives) {
        // golden section resolves t only to about sqrt(eps); the slope root is sharper
        const double sa = slope(a), sb = slope(b);
        if (sa > 0.0 && sb < 0.0) {
            t = detail::bisect(slope, a, b, 1e-16);
            v = value(t);
        }
    }
    PolicyResult out;
    out.t_opt = t;
    out.value = v;
    const double edge = 1e-9 * (family.hi - family.lo);
    out.interior = t > family.lo + edge && t < family.hi - edge;
    if (out.interior && family.derivatives) out.stationarity = std::abs(slope(t));
    return out;
}

} // namespace robagg
