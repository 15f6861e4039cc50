#pragma once

// Worked applications: treatment diversification, the two-urn experiment,
// revealed-preference estimation, announcement-adjusted pricing, entropic
// SDF projection, shrinkage estimation, and two demonstrations of the
// aggregation results.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "robagg/aggregation.hpp"
#include "robagg/criteria.hpp"
#include "robagg/detail/solvers.hpp"
#include "robagg/divergences.hpp"
#include "robagg/simplex.hpp"

namespace robagg {

// ---------------------------------------------------------------------------
// Treatment choice

/// Welfare of treatments a (known response) and b (new) in states s1, s2.
struct WelfareTable {
    std::array<double, 2> a{2.0, 2.0};
    std::array<double, 2> b{1.0, 4.0};
};

struct TreatmentResult {
    double beta_hat = 0.0;
    double value = 0.0;
};

/// Maximizes the multiplier value of u0(beta) = beta b + (1 - beta) a under
/// q0 = (mu, 1 - mu) over beta in [0, 1].
inline TreatmentResult treatment_solve(const WelfareTable& table, const Lambda& lambda, double mu) {
    require(mu > 0.0 && mu < 1.0, ErrorCode::InvalidArgument, "mu must lie in (0, 1)");
    PolicyFamily fam;
    fam.utilities = [&table](double t) {
        return std::vector<StateVector>{
            StateVector{t * table.b[0] + (1.0 - t) * table.a[0], t * table.b[1] + (1.0 - t) * table.a[1]}};
    };
    fam.derivatives = [&table](double) {
        return std::vector<StateVector>{StateVector{table.b[0] - table.a[0], table.b[1] - table.a[1]}};
    };
    const auto r = optimal_policy(fam, {1.0}, 0.0, Dist{mu, 1.0 - mu}, lambda);
    return {r.t_opt, r.value};
}

/// Stationary point of the default table's criterion,
/// (lambda/3) log(2(1 - mu)/mu), before clipping to [0, 1].
inline double treatment_stationary_point(double lambda, double mu) {
    return lambda / 3.0 * std::log(2.0 * (1.0 - mu) / mu);
}

// ---------------------------------------------------------------------------
// Two-urn experiment

struct EllsbergReport {
    Dist belief;            // mixture belief about the unknown urn
    double v_bet_red = 0.0;       // bet on red, unknown urn
    double v_bet_black = 0.0;     // bet on black, unknown urn
    double v_lottery_red = 0.0;   // bet on red, known 50/50 urn
    double v_lottery_black = 0.0; // bet on black, known 50/50 urn
    std::string ranking;
    bool ambiguity_averse_pattern = false;  // piR ~ piB > fR ~ fB
    bool all_indifferent = false;
};

/// Indifference slack for ranking comparisons.
inline constexpr double ellsberg_indifference = 1e-12;

/// Stakes of 100 with u0(x) = x/100. The known-urn bets are lotteries with
/// expected utility 1/2, valued as sure amounts of utility.
inline EllsbergReport ellsberg_run(const Lambda& lambda, double p1, double p2, double mu) {
    for (double v : {p1, p2, mu})
        require(v >= 0.0 && v <= 1.0, ErrorCode::InvalidArgument, "probabilities must lie in [0, 1]");
    EllsbergReport r;
    r.belief = normalize(std::vector<double>{mu * p1 + (1.0 - mu) * p2, mu * (1.0 - p1) + (1.0 - mu) * (1.0 - p2)});
    const StateVector red{1.0, 0.0};
    const StateVector black{0.0, 1.0};
    auto value = [&](const StateVector& u) {
        return lambda.is_infinite() ? expectation(r.belief, u) : multiplier_value(u, r.belief, lambda.value());
    };
    r.v_bet_red = value(red);
    r.v_bet_black = value(black);
    r.v_lottery_red = 0.5;
    r.v_lottery_black = 0.5;

    auto same = [](double x, double y) { return std::abs(x - y) <= ellsberg_indifference; };
    const bool lotteries_same = same(r.v_lottery_red, r.v_lottery_black);
    const bool bets_same = same(r.v_bet_red, r.v_bet_black);
    const double best_bet = std::max(r.v_bet_red, r.v_bet_black);
    r.ambiguity_averse_pattern = lotteries_same && bets_same && r.v_lottery_red > best_bet + ellsberg_indifference;
    r.all_indifferent = lotteries_same && bets_same && same(r.v_lottery_red, r.v_bet_red);

    struct Item {
        const char* name;
        double v;
    };
    std::vector<Item> items{{"piR", r.v_lottery_red}, {"piB", r.v_lottery_black}, {"fR", r.v_bet_red}, {"fB", r.v_bet_black}};
    std::stable_sort(items.begin(), items.end(), [](const Item& x, const Item& y) { return x.v > y.v + ellsberg_indifference; });
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (k > 0) r.ranking += same(items[k - 1].v, items[k].v) ? " ~ " : " > ";
        r.ranking += items[k].name;
    }
    return r;
}

// ---------------------------------------------------------------------------
// Revealed-preference estimation (two agents, CRRA-type utilities)

struct EstimationInput {
    std::vector<double> wealth;      // omega_i
    std::vector<double> ce_lottery;  // c_i, each agent's CE of the 50/50 lottery
    double ce_social_lottery = 0.0;  // c_0
    double ce_ambiguous = 0.0;       // tau
    double stake = 100.0;
};

struct EstimationResult {
    std::vector<double> phi_hats;
    std::vector<double> beta_hats;
    double lambda_hat = 0.0;
    bool lambda_effectively_infinite = false;
    double max_ce_residual = 0.0;  // forward substitution check
};

struct EstimationTruth {
    std::vector<double> phi;
    double beta1 = 0.5;
    double lambda = 1.0;
    std::vector<double> wealth;
    double stake = 100.0;
};

namespace detail {

/// Power mean of order a of {x, y} with equal weights; geometric mean at a = 0.
inline double power_mean(double x, double y, double a) {
    const double lx = std::log(x), ly = std::log(y);
    if (std::abs(a) < 1e-10) return std::exp(0.5 * (lx + ly));
    const double m = std::max(a * lx, a * ly);
    const double lse = m + std::log(0.5 * std::exp(a * lx - m) + 0.5 * std::exp(a * ly - m));
    return std::exp(lse / a);
}

inline double crra(double omega, double x, double a) { return std::pow(omega + x, a); }

inline double social_u(const std::vector<double>& beta, const std::vector<double>& omega,
                       const std::vector<double>& a, double x) {
    double u = 0.0;
    for (std::size_t i = 0; i < beta.size(); ++i) u += beta[i] * crra(omega[i], x, a[i]);
    return u;
}

/// -lambda log(1/2 e^{-hi/lambda} + 1/2 e^{-lo/lambda}), hi >= lo.
inline double two_point_multiplier(double hi, double lo, double lambda) {
    return lo - lambda * std::log(0.5 * std::exp(-(hi - lo) / lambda) + 0.5);
}

/// x in [0, stake] with U(x) = target, U increasing.
inline double invert_increasing(const std::function<double(double)>& u, double target, double stake) {
    return bisect([&](double x) { return u(x) - target; }, 0.0, stake, 1e-14 * stake);
}

} // namespace detail

/// Certainty equivalents implied by ground-truth parameters.
inline EstimationInput estimation_forward(const EstimationTruth& t) {
    require(t.phi.size() == 2 && t.wealth.size() == 2, ErrorCode::InvalidArgument, "two agents required");
    EstimationInput in;
    in.wealth = t.wealth;
    in.stake = t.stake;
    std::vector<double> a{1.0 - t.phi[0], 1.0 - t.phi[1]};
    for (std::size_t i = 0; i < 2; ++i)
        in.ce_lottery.push_back(detail::power_mean(t.wealth[i] + t.stake, t.wealth[i], a[i]) - t.wealth[i]);
    const std::vector<double> beta{t.beta1, 1.0 - t.beta1};
    auto u = [&](double x) { return detail::social_u(beta, t.wealth, a, x); };
    const double hi = u(t.stake), lo = u(0.0);
    in.ce_social_lottery = detail::invert_increasing(u, 0.5 * hi + 0.5 * lo, t.stake);
    in.ce_ambiguous = detail::invert_increasing(u, detail::two_point_multiplier(hi, lo, t.lambda), t.stake);
    return in;
}

/// Solves the three root equations in sequence: curvature per agent, then the
/// taste weight, then lambda.
inline EstimationResult estimate_parameters(const EstimationInput& in) {
    require(in.wealth.size() == 2 && in.ce_lottery.size() == 2, ErrorCode::InvalidArgument,
            "the estimator is defined for exactly two agents");
    require(in.stake > 0.0, ErrorCode::InvalidArgument, "stake must be positive");
    for (std::size_t i = 0; i < 2; ++i) {
        require(in.wealth[i] > 0.0, ErrorCode::InvalidArgument, "wealth must be positive");
        require(in.ce_lottery[i] > 0.0 && in.ce_lottery[i] < in.stake, ErrorCode::InvalidArgument,
                "certainty equivalents must lie strictly inside (0, stake)");
    }
    require(in.ce_social_lottery > 0.0 && in.ce_social_lottery < in.stake, ErrorCode::InvalidArgument,
            "social certainty equivalent must lie strictly inside (0, stake)");
    require(in.ce_ambiguous > 0.0 && in.ce_ambiguous < in.stake, ErrorCode::InvalidArgument,
            "ambiguous certainty equivalent must lie strictly inside (0, stake)");

    EstimationResult r;
    std::vector<double> a(2);
    for (std::size_t i = 0; i < 2; ++i) {
        const double w = in.wealth[i];
        auto h = [&](double x) { return detail::power_mean(w + in.stake, w, x) - (w + in.ce_lottery[i]); };
        // the power mean increases in its order; expand around (0, 1)
        double lo = 0.0, hi = 1.0;
        int k = 0;
        while (h(lo) > 0.0 && k++ < tol::max_bracket_doublings) lo -= (hi - lo);
        k = 0;
        while (h(hi) < 0.0 && k++ < tol::max_bracket_doublings) hi += (hi - lo);
        a[i] = detail::bisect(h, lo, hi, 1e-15);
        r.phi_hats.push_back(1.0 - a[i]);
    }

    auto d = [&](std::size_t i) {
        const double w = in.wealth[i];
        return detail::crra(w, in.ce_social_lottery, a[i]) - 0.5 * detail::crra(w, in.stake, a[i]) -
               0.5 * detail::crra(w, 0.0, a[i]);
    };
    const double d1 = d(0), d2 = d(1);
    auto g = [&](double b1) { return b1 * d1 + (1.0 - b1) * d2; };
    require(std::signbit(g(0.0)) != std::signbit(g(1.0)) || g(0.0) == 0.0 || g(1.0) == 0.0,
            ErrorCode::InconsistentInputs, "no taste weight in [0, 1] reproduces the social certainty equivalent");
    require(d1 != d2, ErrorCode::InconsistentInputs, "taste weight is not identified");
    const double b1 = detail::bisect(g, 0.0, 1.0, 1e-16);
    r.beta_hats = {b1, 1.0 - b1};

    auto u = [&](double x) { return detail::social_u(r.beta_hats, in.wealth, a, x); };
    const double uhi = u(in.stake), ulo = u(0.0), utau = u(in.ce_ambiguous);
    auto f = [&](double loglam) { return detail::two_point_multiplier(uhi, ulo, std::exp(loglam)) - utau; };
    const double llo = std::log(1e-4), lhi = std::log(1e4);
    require(f(llo) <= 0.0, ErrorCode::NoRoot, "lambda root lies below the search bracket");
    if (f(lhi) < 0.0) {
        r.lambda_hat = std::numeric_limits<double>::infinity();
        r.lambda_effectively_infinite = true;
    } else {
        r.lambda_hat = std::exp(detail::bisect(f, llo, lhi, 1e-15));
    }

    // forward substitution
    EstimationTruth t{r.phi_hats, b1, r.lambda_effectively_infinite ? 1e4 : r.lambda_hat, in.wealth, in.stake};
    const auto back = estimation_forward(t);
    r.max_ce_residual = std::max({std::abs(back.ce_lottery[0] - in.ce_lottery[0]),
                                  std::abs(back.ce_lottery[1] - in.ce_lottery[1]),
                                  std::abs(back.ce_social_lottery - in.ce_social_lottery)});
    if (!r.lambda_effectively_infinite)
        r.max_ce_residual = std::max(r.max_ce_residual, std::abs(back.ce_ambiguous - in.ce_ambiguous));
    return r;
}

// ---------------------------------------------------------------------------
// Announcement-adjusted pricing

struct AsdfResult {
    Dist tilt;
    double pre_price = 0.0;
    StateVector post_prices;
    double premium = 0.0;
};

/// tilt proportional to q0 exp(-psi u0(C1)/lambda); post-announcement prices
/// are ratio * payoff; the premium is E_q0[post] - E_tilt[post].
inline AsdfResult asdf(const Dist& q0, const StateVector& u0_c1, double lambda, double psi,
                       const StateVector& payoff, const StateVector& u0prime_ratio) {
    require(lambda > 0.0 && psi > 0.0, ErrorCode::InvalidArgument, "lambda and psi must be positive");
    require_same_size(q0.size(), u0_c1.size(), "asdf: dimension mismatch");
    require_same_size(q0.size(), payoff.size(), "asdf: dimension mismatch");
    require_same_size(q0.size(), u0prime_ratio.size(), "asdf: dimension mismatch");
    AsdfResult r;
    r.tilt = worst_case_tilt(psi * u0_c1, q0, lambda);
    std::vector<double> post(q0.size());
    for (std::size_t s = 0; s < q0.size(); ++s) post[s] = u0prime_ratio[s] * payoff[s];
    r.post_prices = StateVector(post);
    r.pre_price = expectation(r.tilt, r.post_prices);
    r.premium = expectation(q0, r.post_prices) - r.pre_price;
    return r;
}

// ---------------------------------------------------------------------------
// Entropic SDF projection

struct SdfProjection {
    Dist tilt;
    Extended ell;  // +inf when no tilt is needed; may be negative
};

/// Exponential tilt q0 exp(-v/ell) whose mean of v equals the target.
/// Searches theta = 1/ell over the reals; E_theta[v] decreases in theta.
inline SdfProjection sdf_project(const Dist& q0, const StateVector& v, double target) {
    require_same_size(q0.size(), v.size(), "sdf_project: dimension mismatch");
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (std::size_t s = 0; s < q0.size(); ++s)
        if (q0[s] > 0.0) {
            vmin = std::min(vmin, v[s]);
            vmax = std::max(vmax, v[s]);
        }
    require(target > vmin && target < vmax, ErrorCode::TargetOutOfRange,
            "target must lie strictly between the smallest and largest payoff");
    auto tilted = [&](double theta) {
        // exponent shifted by its maximum over the support
        double m = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < q0.size(); ++s)
            if (q0[s] > 0.0) m = std::max(m, -theta * v[s]);
        std::vector<double> w(q0.size(), 0.0);
        for (std::size_t s = 0; s < q0.size(); ++s)
            if (q0[s] > 0.0) w[s] = q0[s] * std::exp(-theta * v[s] - m);
        return normalize(w);
    };
    auto gap = [&](double theta) { return expectation(tilted(theta), v) - target; };
    const double g0 = gap(0.0);
    if (std::abs(g0) <= 1e-15 * std::max(1.0, std::abs(target))) return {q0, Extended::infinity()};
    double lo = 0.0, hi = 0.0;
    double step = 1.0 / std::max(1e-300, vmax - vmin);
    int k = 0;
    if (g0 > 0.0) {
        hi = step;
        while (gap(hi) > 0.0 && k++ < tol::max_bracket_doublings) hi *= 2.0;
        require(gap(hi) <= 0.0, ErrorCode::NoRoot, "sdf_project: bracket expansion failed");
    } else {
        lo = -step;
        while (gap(lo) < 0.0 && k++ < tol::max_bracket_doublings) lo *= 2.0;
        require(gap(lo) >= 0.0, ErrorCode::NoRoot, "sdf_project: bracket expansion failed");
    }
    const double theta = detail::bisect(gap, lo, hi, 1e-16 * std::max(1.0, std::abs(hi - lo)));
    require(std::abs(gap(theta)) <= 1e-8, ErrorCode::NoRoot, "sdf_project: root not resolved to 1e-8");
    if (theta == 0.0) return {q0, Extended::infinity()};
    return {tilted(theta), Extended(1.0 / theta)};
}

// ---------------------------------------------------------------------------
// Weighted likelihood and shrinkage

/// Preset weights reproducing the shrinkage estimator s_bar + (1 - B)(s_0 - s_bar)
/// with s_bar the mean of all n + 1 signals and
/// B = (n - 3) / sum_{i >= 1} (s_i - s_bar)^2:
/// w_0 = 1 - n B/(n + 1), w_i = B/(n + 1).
inline std::vector<double> james_stein_weights(const std::vector<double>& signals) {
    require(signals.size() >= 4, ErrorCode::TooFewSignals, "shrinkage preset requires n >= 3 advisor signals");
    const std::size_t n = signals.size() - 1;
    double mean = 0.0;
    for (double s : signals) mean += s;
    mean /= static_cast<double>(n + 1);
    double ss = 0.0;
    for (std::size_t i = 1; i <= n; ++i) ss += (signals[i] - mean) * (signals[i] - mean);
    std::vector<double> w(n + 1);
    if (n == 3) {
        w.assign(n + 1, 0.0);
        w[0] = 1.0;
        return w;
    }
    require(ss > 0.0, ErrorCode::DomainError, "advisor signals have zero dispersion around the mean");
    const double b = static_cast<double>(n - 3) / ss;
    w[0] = 1.0 - static_cast<double>(n) * b / static_cast<double>(n + 1);
    for (std::size_t i = 1; i <= n; ++i) w[i] = b / static_cast<double>(n + 1);
    return w;
}

/// Closed form s_bar + (1 - B)(s_0 - s_bar).
inline double james_stein_closed_form(const std::vector<double>& signals) {
    require(signals.size() >= 4, ErrorCode::TooFewSignals, "shrinkage preset requires n >= 3 advisor signals");
    const std::size_t n = signals.size() - 1;
    double mean = 0.0;
    for (double s : signals) mean += s;
    mean /= static_cast<double>(n + 1);
    double ss = 0.0;
    for (std::size_t i = 1; i <= n; ++i) ss += (signals[i] - mean) * (signals[i] - mean);
    if (n == 3) return signals[0];
    require(ss > 0.0, ErrorCode::DomainError, "advisor signals have zero dispersion around the mean");
    const double b = static_cast<double>(n - 3) / ss;
    return mean + (1.0 - b) * (signals[0] - mean);
}

/// sum w_i s_i; the shrinkage preset when no weights are given.
inline double james_stein_wle(const std::vector<double>& signals,
                              const std::optional<std::vector<double>>& weights = std::nullopt) {
    require(!signals.empty(), ErrorCode::EmptyList, "no signals");
    const std::vector<double> w = weights ? *weights : james_stein_weights(signals);
    require(w.size() == signals.size(), ErrorCode::DimensionMismatch, "one weight per signal required");
    double sum = 0.0, est = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        require(std::isfinite(w[i]), ErrorCode::WeightSumError, "weights must be finite");
        sum += w[i];
        est += w[i] * signals[i];
    }
    require(std::abs(sum - 1.0) <= tol::simplex, ErrorCode::WeightSumError, "weights must sum to one");
    return est;
}

// ---------------------------------------------------------------------------
// Demonstrations

struct InvarianceReport {
    double value_finite = 0.0;     // entropic value over the generators
    double value_hull = 0.0;       // entropic value over their hull
    double min_sampled = 0.0;      // smallest value over sampled hull points
    double gap = 0.0;
    std::size_t minimizer = 0;     // generator attaining the minimum
    bool minimizer_is_generator = true;
    bool passed = false;
};

inline Dist sample_hull_point(const std::vector<Dist>& gens, std::mt19937_64& rng) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> w(gens.size());
    double sum = 0.0;
    for (double& x : w) sum += (x = expo(rng));
    for (double& x : w) x /= sum;
    std::vector<double> q(gens.front().size(), 0.0);
    for (std::size_t i = 0; i < gens.size(); ++i)
        for (std::size_t s = 0; s < q.size(); ++s) q[s] += w[i] * gens[i][s];
    return detail::repair(q);
}

/// Entropic value over a finite set against its hull, checked on sampled hull
/// points.
inline InvarianceReport demo_invariance(const StateVector& u0, const std::vector<Dist>& beliefs, const Lambda& lambda,
                                        std::size_t samples = 1000, std::uint64_t seed = 1) {
    require(!beliefs.empty(), ErrorCode::EmptyList, "no beliefs");
    InvarianceReport r;
    const auto fin = entropic_solve(u0, FiniteSet{beliefs}, lambda);
    r.value_finite = fin.value;
    r.value_hull = entropic_value(u0, HullOfFinite{beliefs}, lambda);
    r.minimizer_is_generator = false;
    for (std::size_t i = 0; i < beliefs.size(); ++i)
        if (beliefs[i] == fin.structured_belief) {
            r.minimizer = i;
            r.minimizer_is_generator = true;
            break;
        }
    auto value_at = [&](const Dist& q) {
        return lambda.is_infinite() ? expectation(q, u0) : multiplier_value(u0, q, lambda.value());
    };
    std::mt19937_64 rng(seed);
    r.min_sampled = r.value_finite;
    for (std::size_t k = 0; k < samples; ++k) r.min_sampled = std::min(r.min_sampled, value_at(sample_hull_point(beliefs, rng)));
    r.gap = std::max(std::abs(r.value_hull - r.value_finite), r.value_finite - r.min_sampled);
    r.passed = r.gap <= 1e-8 && r.minimizer_is_generator;
    return r;
}

struct DictatorReport {
    std::size_t selected = 0;
    Dist belief;
    std::vector<std::vector<double>> values;  // values[candidate][act]
    std::vector<double> min_advantage;         // min over acts of V(selected) - V(candidate)
    bool selected_dominates = false;
};

/// Selects the FOSD-greatest candidate and tabulates its welfare advantage
/// across a panel of common-taste acts.
inline DictatorReport demo_dictator(const std::vector<Dist>& candidates, const std::vector<StateVector>& acts,
                                    const Lambda& lambda) {
    const auto sel = welfare_dominant_belief(candidates);
    DictatorReport r;
    r.selected = sel.index;
    r.belief = sel.belief;
    for (const auto& c : candidates) {
        std::vector<double> row;
        for (const auto& u : acts) row.push_back(entropic_value(u, Singleton{c}, lambda));
        r.values.push_back(std::move(row));
    }
    r.selected_dominates = true;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        double adv = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < acts.size(); ++a) adv = std::min(adv, r.values[r.selected][a] - r.values[c][a]);
        if (acts.empty()) adv = 0.0;
        r.min_advantage.push_back(adv);
        if (adv < -1e-12) r.selected_dominates = false;
    }
    return r;
}

} // namespace robagg
