#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "robagg/applications.hpp"

using namespace robagg;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

void check_error(auto&& fn, ErrorCode code) {
    try {
        fn();
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

/// Direct one-dimensional maximization of the treatment criterion.
double treatment_oracle(double lambda, double mu) {
    return oracle::scan_min(
        [&](double t) { return -oracle::multiplier({2.0 - t, 2.0 + 2.0 * t}, {mu, 1.0 - mu}, lambda); }, 0.0, 1.0);
}

} // namespace

TEST_CASE("treatment choice matches the stationary point and a scan oracle", "[applications]") {
    for (double mu : {0.05, 0.1, 0.15, 0.2, 0.25})
        for (double lam : {0.2, 0.4, 0.6, 0.8, 1.0}) {
            const double stat = treatment_stationary_point(lam, mu);
            if (stat <= 0.0 || stat >= 1.0) continue;
            const auto r = treatment_solve(WelfareTable{}, Lambda(lam), mu);
            CHECK_THAT(r.beta_hat, WithinAbs(stat, 1e-9));
            CHECK_THAT(r.beta_hat, WithinAbs(treatment_oracle(lam, mu), 1e-6));
        }
    CHECK_THAT(treatment_solve(WelfareTable{}, Lambda(1.0), 0.2).beta_hat, WithinAbs(std::log(2.0), 1e-9));
}

TEST_CASE("treatment choice comparative statics and the linear limit", "[applications]") {
    double prev = -1.0;
    for (double lam : {0.1, 0.2, 0.3, 0.4}) {
        const double b = treatment_solve(WelfareTable{}, Lambda(lam), 0.2).beta_hat;
        CHECK(b >= prev);
        prev = b;
    }
    prev = 2.0;
    for (double mu : {0.1, 0.15, 0.2, 0.25, 0.3}) {
        const double b = treatment_solve(WelfareTable{}, Lambda(0.5), mu).beta_hat;
        CHECK(b <= prev);
        prev = b;
    }
    for (double mu : {0.1, 0.5, 0.9}) {
        const double b = treatment_solve(WelfareTable{}, Lambda::infinity(), mu).beta_hat;
        CHECK((b == 0.0 || b == 1.0));
    }
    // under the linear criterion the new treatment wins iff its mean exceeds 2
    CHECK(treatment_solve(WelfareTable{}, Lambda::infinity(), 0.2).beta_hat == 1.0);
    CHECK(treatment_solve(WelfareTable{}, Lambda::infinity(), 0.9).beta_hat == 0.0);
    check_error([] { treatment_solve(WelfareTable{}, Lambda(1.0), 0.0); }, ErrorCode::InvalidArgument);
}

TEST_CASE("two-urn rankings", "[applications]") {
    for (double lam : {0.5, 1.0, 5.0}) {
        for (const auto& [p1, p2, mu] : {std::tuple{0.9, 0.1, 0.5}, std::tuple{0.5, 0.5, 0.5}, std::tuple{1.0, 0.0, 0.5}}) {
            const auto r = ellsberg_run(Lambda(lam), p1, p2, mu);
            CHECK(r.ambiguity_averse_pattern);
            CHECK_FALSE(r.all_indifferent);
            CHECK(r.ranking == "piR ~ piB > fR ~ fB");
            // bets on the unknown urn are two-point multiplier values in utility units
            const double expected = -lam * std::log(0.5 * std::exp(-1.0 / lam) + 0.5);
            CHECK_THAT(r.v_bet_red, WithinAbs(expected, 1e-12));
        }
    }
    const auto lin = ellsberg_run(Lambda::infinity(), 0.9, 0.1, 0.5);
    CHECK(lin.all_indifferent);
    CHECK_FALSE(lin.ambiguity_averse_pattern);
    CHECK(lin.ranking == "piR ~ piB ~ fR ~ fB");
}

TEST_CASE("estimation round trip on a fixed truth", "[applications]") {
    const EstimationTruth truth{{0.5, 0.7}, 0.4, 2.0, {100.0, 100.0}, 100.0};
    const auto in = estimation_forward(truth);
    const auto r = estimate_parameters(in);
    CHECK_THAT(r.phi_hats[0], WithinAbs(0.5, 1e-8));
    CHECK_THAT(r.phi_hats[1], WithinAbs(0.7, 1e-8));
    CHECK_THAT(r.beta_hats[0], WithinAbs(0.4, 1e-8));
    CHECK_THAT(r.lambda_hat, WithinRel(2.0, 1e-6));
    CHECK(r.max_ce_residual <= 1e-8);
    // square-root utility: the lottery CE is the order-1/2 power mean of w + stake and w, minus w
    const double root = 0.5 * (std::sqrt(200.0) + std::sqrt(100.0));
    CHECK_THAT(in.ce_lottery[0], WithinAbs(root * root - 100.0, 1e-9));
}

TEST_CASE("property: estimation recovers randomized truths", "[applications][property]") {
    oracle::Gen g(601);
    for (int k = 0; k < 20; ++k) {
        const EstimationTruth truth{{g.uniform(0.1, 0.45), g.uniform(0.55, 0.9)}, g.uniform(0.2, 0.8), std::exp(g.uniform(-1.0, 2.0)),
                                    {g.uniform(50.0, 200.0), g.uniform(50.0, 200.0)}, 100.0};
        const auto r = estimate_parameters(estimation_forward(truth));
        CHECK(std::abs(r.phi_hats[0] - truth.phi[0]) <= 1e-4);
        CHECK(std::abs(r.phi_hats[1] - truth.phi[1]) <= 1e-4);
        CHECK(std::abs(r.beta_hats[0] - truth.beta1) <= 1e-4);
        CHECK(std::abs(r.lambda_hat - truth.lambda) <= 1e-4 * truth.lambda);
    }
}

TEST_CASE("estimation input validation", "[applications]") {
    EstimationInput in{{100.0}, {40.0}, 40.0, 30.0, 100.0};
    check_error([&] { estimate_parameters(in); }, ErrorCode::InvalidArgument);
    in = EstimationInput{{100.0, 100.0}, {40.0, 120.0}, 40.0, 30.0, 100.0};
    check_error([&] { estimate_parameters(in); }, ErrorCode::InvalidArgument);
    // identical agents leave the taste weight unidentified
    in = EstimationInput{{100.0, 100.0}, {45.0, 45.0}, 45.0, 30.0, 100.0};
    check_error([&] { estimate_parameters(in); }, ErrorCode::InconsistentInputs);
}

TEST_CASE("announcement premium examples", "[applications]") {
    const Dist q0{0.3, 0.5, 0.2};
    const StateVector payoff{1.0, 2.0, 3.0}, ratio{1.0, 1.0, 1.0};
    const auto flat = asdf(q0, StateVector{4.0, 4.0, 4.0}, 1.0, 1.0, payoff, ratio);
    CHECK_THAT(flat.premium, WithinAbs(0.0, 1e-15));
    CHECK(oracle::sup_dist(flat.tilt.vec(), q0.vec()) <= 1e-15);

    const auto comono = asdf(q0, StateVector{0.0, 1.0, 2.0}, 1.0, 1.0, payoff, ratio);
    CHECK(comono.premium > 0.0);
    const auto tilt = oracle::tilt_by_search({0.0, 1.0, 2.0}, q0.vec(), 1.0);
    CHECK(oracle::sup_dist(comono.tilt.vec(), tilt) <= 1e-6);
    CHECK(asdf(q0, StateVector{0.0, 1.0, 2.0}, 1e6, 1.0, payoff, ratio).premium <= 1e-4);
    check_error([&] { asdf(q0, StateVector{0.0, 1.0, 2.0}, 0.0, 1.0, payoff, ratio); }, ErrorCode::InvalidArgument);
}

TEST_CASE("property: co-monotone payoffs carry a nonnegative premium", "[applications][property]") {
    oracle::Gen g(602);
    for (int k = 0; k < 50; ++k) {
        const std::size_t dim = static_cast<std::size_t>(g.integer(2, 5));
        const Dist q0(g.dist(dim, 0.05));
        const StateVector u(g.monotone(dim, -2.0, 2.0)), pay(g.monotone(dim, 0.0, 5.0));
        const auto r = asdf(q0, u, g.uniform(0.1, 10.0), g.uniform(0.1, 2.0), pay, StateVector(std::vector<double>(dim, 1.0)));
        CHECK(r.premium >= -1e-10);
    }
}

TEST_CASE("entropic sdf projection", "[applications]") {
    // two states: q(s1) = target share solves t = q v1 + (1 - q) v2, and
    // q/(1 - q) = q0/(1 - q0) exp(-(v1 - v2)/ell)
    const Dist q0{0.5, 0.5};
    const StateVector v{1.0, 3.0};
    const double target = 1.5;
    const double q = (v[1] - target) / (v[1] - v[0]);
    const double ell = -(v[0] - v[1]) / std::log(q / (1 - q));
    const auto r = sdf_project(q0, v, target);
    CHECK_THAT(r.ell.value(), WithinRel(ell, 1e-8));
    CHECK_THAT(r.tilt[0], WithinAbs(q, 1e-9));
    CHECK(sdf_project(q0, v, 2.0).ell.is_infinite());
    // targets above the mean need a negative ell
    CHECK(sdf_project(q0, v, 2.5).ell.value() < 0.0);
    check_error([&] { sdf_project(q0, v, 3.0); }, ErrorCode::TargetOutOfRange);
    check_error([&] { sdf_project(q0, v, 0.5); }, ErrorCode::TargetOutOfRange);

    // lower targets need a stronger tilt, so a smaller positive ell
    double prev = std::numeric_limits<double>::infinity();
    for (double t : {1.9, 1.7, 1.5, 1.3, 1.1}) {
        const double e = sdf_project(q0, v, t).ell.value();
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("shrinkage estimator", "[applications]") {
    check_error([] { james_stein_weights({1.0, 2.0, 3.0}); }, ErrorCode::TooFewSignals);
    check_error([] { james_stein_wle({1.0, 2.0}, std::vector<double>{0.6, 0.6}); }, ErrorCode::WeightSumError);
    check_error([] { james_stein_wle({1.0, 2.0}, std::vector<double>{1.0}); }, ErrorCode::DimensionMismatch);
    // n = 3 gives B = 0: the estimator keeps the own signal
    CHECK(james_stein_wle({5.0, 1.0, 2.0, 3.0}) == 5.0);
    CHECK(james_stein_wle({1.0, 3.0}, std::vector<double>{0.5, 0.5}) == 2.0);

    oracle::Gen g(603);
    for (int n : {4, 6, 10})
        for (int k = 0; k < 50; ++k) {
            std::vector<double> s(static_cast<std::size_t>(n) + 1);
            for (double& x : s) x = 3.0 * g.normal();
            // independent closed form
            double mean = 0.0;
            for (double x : s) mean += x;
            mean /= n + 1;
            double ss = 0.0;
            for (int i = 1; i <= n; ++i) ss += (s[i] - mean) * (s[i] - mean);
            const double js = mean + (1.0 - (n - 3) / ss) * (s[0] - mean);
            CHECK_THAT(james_stein_wle(s), WithinAbs(js, 1e-10));
            CHECK_THAT(james_stein_closed_form(s), WithinAbs(js, 1e-10));
            double wsum = 0.0;
            for (double w : james_stein_weights(s)) wsum += w;
            CHECK_THAT(wsum, WithinAbs(1.0, 1e-12));
        }
}

TEST_CASE("invariance demonstration", "[applications]") {
    oracle::Gen g(604);
    for (int k = 0; k < 20; ++k) {
        const std::size_t dim = static_cast<std::size_t>(g.integer(2, 4));
        std::vector<Dist> beliefs;
        for (int i = 0; i < 3; ++i) beliefs.emplace_back(g.dist(dim, 0.05));
        const StateVector u(g.nonconstant(dim, 0.0, 3.0));
        for (const Lambda& lam : {Lambda(0.1), Lambda(1.0), Lambda(10.0), Lambda::infinity()}) {
            const auto r = demo_invariance(u, beliefs, lam, 200, 7);
            CHECK(r.passed);
            CHECK(r.gap <= 1e-8);
            CHECK(r.minimizer_is_generator);
        }
    }
    check_error([] { demo_invariance(StateVector{0.0, 1.0}, {}, Lambda(1.0)); }, ErrorCode::EmptyList);
}

TEST_CASE("dictator demonstration", "[applications]") {
    const std::vector<Dist> cands{Dist{0.5, 0.3, 0.2}, Dist{0.2, 0.3, 0.5}, Dist{0.3, 0.4, 0.3}};
    const std::vector<StateVector> acts{StateVector{0.0, 1.0, 2.0}, StateVector{0.0, 0.0, 1.0}, StateVector{1.0, 2.0, 2.0}};
    const auto r = demo_dictator(cands, acts, Lambda(1.0));
    CHECK(r.selected == 1);
    CHECK(r.belief == cands[1]);
    CHECK(r.selected_dominates);
    for (double adv : r.min_advantage) CHECK(adv >= 0.0);
    check_error([] { demo_dictator({Dist{0.2, 0.6, 0.2}, Dist{0.4, 0.2, 0.4}}, {}, Lambda(1.0)); }, ErrorCode::NoFosdOrder);
}
