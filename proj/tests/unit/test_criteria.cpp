#include <catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "robagg/criteria.hpp"

using namespace robagg;
using Catch::Matchers::WithinAbs;

namespace {

void check_error(auto&& fn, ErrorCode code) {
    try {
        fn();
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == code);
    }
}

std::vector<Dist> rand_dists(oracle::Gen& g, std::size_t n, std::size_t dim, double floor = 0.05) {
    std::vector<Dist> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(g.dist(dim, floor));
    return out;
}

} // namespace

TEST_CASE("lambda is positive or the infinity marker", "[criteria]") {
    check_error([] { Lambda l(0.0); }, ErrorCode::InvalidArgument);
    check_error([] { Lambda l(-1.0); }, ErrorCode::InvalidArgument);
    check_error([] { Lambda l(std::numeric_limits<double>::infinity()); }, ErrorCode::InvalidArgument);
    CHECK(Lambda::infinity().is_infinite());
    check_error([] { (void)Lambda::infinity().value(); }, ErrorCode::DomainError);
}

TEST_CASE("multiplier value examples", "[criteria]") {
    oracle::Gen g(401);
    for (int k = 0; k < 20; ++k) {
        const Dist q(g.dist(3, 0.0));
        CHECK_THAT(multiplier_value(StateVector{1.5, 1.5, 1.5}, q, g.uniform(0.1, 10)), WithinAbs(1.5, 1e-14));
    }
    const double v = multiplier_value(StateVector{0.0, 1.0}, Dist{0.5, 0.5}, 1.0);
    CHECK_THAT(v, WithinAbs(-std::log((1.0 + std::exp(-1.0)) / 2.0), 1e-15));
    CHECK_THAT(v, WithinAbs(0.3799, 1e-4));
    // cross-check: minimum of E_p[u] + kl(p||q) on a fine grid
    const auto p = oracle::grid_argmin(2, 1e-5, [](const oracle::Vec& x) { return x[1] + oracle::kl(x, {0.5, 0.5}); });
    CHECK_THAT(v, WithinAbs(p[1] + oracle::kl(p, {0.5, 0.5}), 1e-9));
    CHECK_THAT(multiplier_value(StateVector{0.0, 1.0}, Dist{0.3, 0.7}, 1e6), WithinAbs(0.7, 1e-3));
}

TEST_CASE("multiplier value survives extreme utility ranges", "[criteria]") {
    const double v = multiplier_value(StateVector{0.0, 10.0}, Dist{0.5, 0.5}, 1e-3);
    CHECK(std::isfinite(v));
    CHECK_THAT(v, WithinAbs(-1e-3 * std::log(0.5), 1e-12));
    const double w = multiplier_value(StateVector{1000.0, 1010.0}, Dist{0.5, 0.5}, 1e-3);
    CHECK_THAT(w, WithinAbs(1000.0 - 1e-3 * std::log(0.5), 1e-9));
}

TEST_CASE("worst-case tilt examples", "[criteria]") {
    const Dist q{0.2, 0.3, 0.5};
    CHECK(oracle::sup_dist(worst_case_tilt(StateVector{2.0, 2.0, 2.0}, q, 0.7).vec(), q.vec()) <= 1e-15);
    const Dist t = worst_case_tilt(StateVector{0.0, 1.0}, Dist{0.5, 0.5}, 1.0);
    CHECK_THAT(t[0], WithinAbs(1.0 / (1.0 + std::exp(-1.0)), 1e-15));
    CHECK_THAT(t[0], WithinAbs(0.7311, 1e-4));
    const auto grid = oracle::grid_argmin(2, 1e-5, [](const oracle::Vec& x) { return x[1] + oracle::kl(x, {0.5, 0.5}); });
    CHECK_THAT(t[0], WithinAbs(grid[0], 2e-5));
    CHECK(oracle::sup_dist(worst_case_tilt(StateVector{0.0, 1.0, 3.0}, q, 1e6).vec(), q.vec()) <= 1e-4);
}

TEST_CASE("property: the tilt attains the penalized minimum", "[criteria][property]") {
    oracle::Gen g(402);
    for (int k = 0; k < 50; ++k) {
        const std::size_t dim = static_cast<std::size_t>(g.integer(2, 4));
        const StateVector u(g.vector(dim, -2, 2));
        const Dist q(g.dist(dim));
        const double lam = g.uniform(0.1, 5);
        const Dist t = worst_case_tilt(u, q, lam);
        const double best = expectation(t, u) + lam * kl(t, q).value();
        CHECK_THAT(best, WithinAbs(multiplier_value(u, q, lam), 1e-10));
        for (int j = 0; j < 1000; ++j) {
            const Dist p(g.dist(dim, 0.0));
            CHECK(expectation(p, u) + lam * kl(p, q).as_double() >= best - 1e-12);
        }
    }
}

TEST_CASE("meu examples", "[criteria]") {
    const StateVector u{1.0, 4.0};
    CHECK(meu_value(u, Singleton{Dist{0.25, 0.75}}) == expectation(Dist{0.25, 0.75}, u));
    CHECK(meu_value(u, FiniteSet{{Dist{1.0, 0.0}, Dist{0.0, 1.0}}}) == 1.0);
    oracle::Gen g(403);
    for (int k = 0; k < 100; ++k) {
        const std::size_t dim = static_cast<std::size_t>(g.integer(2, 5));
        const auto gens = rand_dists(g, static_cast<std::size_t>(g.integer(1, 4)), dim, 0.0);
        const StateVector x(g.vector(dim, -3, 3));
        double oracle_min = 1e300;
        for (const auto& p : gens) oracle_min = std::min(oracle_min, oracle::dot(p.vec(), x.vec()));
        CHECK_THAT(meu_value(x, HullOfFinite{gens}), WithinAbs(oracle_min, 1e-12));
        CHECK(meu_value(x, HullOfFinite{gens}) == meu_value(x, FiniteSet{gens}));
    }
}

TEST_CASE("meu over a ball intersection matches a grid search", "[criteria]") {
    const std::vector<Ball> balls{Ball(Dist{0.6, 0.3, 0.1}, 0.3), Ball(Dist{0.2, 0.4, 0.4}, 0.3)};
    const StateVector u{0.0, 1.0, 3.0};
    double best = 1e300;
    oracle::simplex_grid(3, 2e-3, [&](const oracle::Vec& q) {
        if (oracle::kl(balls[0].center.vec(), q) <= 0.3 && oracle::kl(balls[1].center.vec(), q) <= 0.3)
            best = std::min(best, oracle::dot(q, u.vec()));
    });
    const double v = meu_value(u, BallIntersection{balls});
    CHECK(v <= best + 1e-12);
    CHECK(v >= best - 1e-2);
    check_error([&] { meu_value(u, BallIntersection{{Ball(Dist{0.98, 0.01, 0.01}, 0.01), Ball(Dist{0.01, 0.01, 0.98}, 0.01)}}); },
                ErrorCode::EmptyIntersection);
}

TEST_CASE("entropic value examples", "[criteria]") {
    const StateVector u{0.0, 1.0, 2.5};
    const Dist q{0.3, 0.3, 0.4};
    CHECK(entropic_value(u, Singleton{q}, Lambda(0.7)) == multiplier_value(u, q, 0.7));
    CHECK(entropic_value(u, Singleton{q}, Lambda::infinity()) == expectation(q, u));
    check_error([&] { entropic_value(u, Planner{Lambda(1.0), chi2_phi(), Singleton{q}}); }, ErrorCode::InvalidArgument);
    CHECK(entropic_value(u, Planner{Lambda(1.0), KLPenalty{}, Singleton{q}}) == multiplier_value(u, q, 1.0));
}

TEST_CASE("entropic value over a singleton intersection is the chernoff value", "[criteria]") {
    oracle::Gen g(404);
    for (int k = 0; k < 10; ++k) {
        const std::vector<Dist> centers = rand_dists(g, 2, 3, 0.1);
        const auto ch = chernoff_point(centers, KLFamily{});
        const BallIntersection q{{Ball(centers[0], ch.radius), Ball(centers[1], ch.radius)}};
        const StateVector u(g.vector(3, 0, 2));
        const double lam = g.uniform(0.2, 5);
        CHECK_THAT(entropic_value(u, q, Lambda(lam)), WithinAbs(multiplier_value(u, ch.point, lam), 1e-6));
    }
}

TEST_CASE("entropic value over a roomy intersection matches a grid search", "[criteria]") {
    const std::vector<Ball> balls{Ball(Dist{0.7, 0.3}, 0.1), Ball(Dist{0.4, 0.6}, 0.1)};
    const StateVector u{0.0, 2.0};
    for (double lam : {0.3, 1.0, 4.0}) {
        double best = 1e300;
        oracle::simplex_grid(2, 1e-6, [&](const oracle::Vec& q) {
            if (oracle::kl(balls[0].center.vec(), q) <= 0.1 && oracle::kl(balls[1].center.vec(), q) <= 0.1)
                best = std::min(best, oracle::multiplier(u.vec(), q, lam));
        });
        CHECK_THAT(entropic_value(u, BallIntersection{balls}, Lambda(lam)), WithinAbs(best, 1e-6));
    }
}

TEST_CASE("property: hull and finite set give the same entropic value", "[criteria][property]") {
    oracle::Gen g(405);
    for (int k = 0; k < 100; ++k) {
        const std::size_t dim = static_cast<std::size_t>(g.integer(2, 5));
        const auto gens = rand_dists(g, static_cast<std::size_t>(g.integer(1, 4)), dim);
        const StateVector u(g.vector(dim, -2, 2));
        const Lambda lam(g.uniform(0.1, 10));
        const double hull = entropic_value(u, HullOfFinite{gens}, lam);
        CHECK_THAT(hull, WithinAbs(entropic_value(u, FiniteSet{gens}, lam), 1e-8));
        // sampled hull points never beat the best generator
        for (int j = 0; j < 50; ++j) {
            const Dist mix = convex_combine(g.weights(gens.size()), gens);
            CHECK(multiplier_value(u, mix, lam.value()) >= hull - 1e-12);
        }
    }
}

TEST_CASE("property: enlarging a finite set never raises the entropic value", "[criteria][property]") {
    oracle::Gen g(406);
    for (int k = 0; k < 100; ++k) {
        const std::size_t dim = static_cast<std::size_t>(g.integer(2, 5));
        auto gens = rand_dists(g, 2, dim);
        const StateVector u(g.vector(dim, -2, 2));
        const Lambda lam(g.uniform(0.1, 10));
        const double before = entropic_value(u, FiniteSet{gens}, lam);
        gens.emplace_back(g.dist(dim));
        CHECK(entropic_value(u, FiniteSet{gens}, lam) <= before);
    }
}

TEST_CASE("property: certainty-equivalent bounds and monotonicity in lambda", "[criteria][property]") {
    oracle::Gen g(407);
    for (int k = 0; k < 200; ++k) {
        const std::size_t dim = static_cast<std::size_t>(g.integer(2, 5));
        const StateVector u(g.nonconstant(dim, -3, 3));
        const Dist q(g.dist(dim));
        const double lam = g.uniform(0.05, 10);
        const double v = multiplier_value(u, q, lam);
        CHECK(v > u.min());
        CHECK(v < expectation(q, u));
        CHECK(multiplier_value(u, q, lam * g.uniform(1.0, 3.0)) >= v - 1e-12);
    }
}

TEST_CASE("property: model-hybridization aversion", "[criteria][property]") {
    oracle::Gen g(408);
    for (int k = 0; k < 200; ++k) {
        const std::size_t dim = static_cast<std::size_t>(g.integer(2, 5));
        const StateVector u(g.nonconstant(dim, -3, 3));
        const Dist q1(g.dist(dim)), q2(g.dist(dim));
        const double lam = g.uniform(0.1, 10), z = g.uniform(0.05, 0.95);
        const double lhs = z * multiplier_value(u, q1, lam) + (1 - z) * multiplier_value(u, q2, lam);
        const double rhs = multiplier_value(u, convex_combine({z, 1 - z}, {q1, q2}), lam);
        CHECK(lhs >= rhs - 1e-12);
    }
}

TEST_CASE("phi dual value with the kl spec equals the multiplier value", "[criteria]") {
    oracle::Gen g(409);
    for (int k = 0; k < 50; ++k) {
        const std::size_t dim = static_cast<std::size_t>(g.integer(2, 5));
        const StateVector u(g.vector(dim, -2, 2));
        const Dist q(g.dist(dim));
        const double lam = g.uniform(0.2, 5);
        const Planner pl{Lambda(lam), kl_phi(), Singleton{q}};
        CHECK_THAT(variational_phi_value(u, pl), WithinAbs(multiplier_value(u, q, lam), 1e-6));
        const auto gens = rand_dists(g, 3, dim);
        const Planner pf{Lambda(lam), kl_phi(), FiniteSet{gens}};
        CHECK_THAT(variational_phi_value(u, pf), WithinAbs(entropic_value(u, FiniteSet{gens}, Lambda(lam)), 1e-6));
    }
}

TEST_CASE("phi dual value examples", "[criteria]") {
    const Dist q{0.5, 0.5};
    for (const auto& spec : {kl_phi(), chi2_phi()})
        CHECK_THAT(variational_phi_value(StateVector{1.3, 1.3}, Planner{Lambda(0.8), spec, Singleton{q}}),
                   WithinAbs(1.3, 1e-9));
    // chi-square penalty: brute force over p of E_p[u] + chi2(p||q)
    const StateVector u{0.0, 1.0};
    const auto p = oracle::grid_argmin(2, 1e-6, [](const oracle::Vec& x) {
        return x[1] + 0.5 * (0.5 * std::pow(x[0] / 0.5 - 1, 2) + 0.5 * std::pow(x[1] / 0.5 - 1, 2));
    });
    const double brute = p[1] + 0.5 * (0.5 * std::pow(p[0] / 0.5 - 1, 2) + 0.5 * std::pow(p[1] / 0.5 - 1, 2));
    CHECK_THAT(variational_phi_value(u, Planner{Lambda(1.0), chi2_phi(), Singleton{q}}), WithinAbs(brute, 1e-9));
    // a large lambda against chi-square keeps the tilt interior; a small one drives it to the boundary
    const auto pb = oracle::grid_argmin(2, 1e-6, [](const oracle::Vec& x) {
        return 5 * x[1] + 0.5 * (0.5 * std::pow(x[0] / 0.5 - 1, 2) + 0.5 * std::pow(x[1] / 0.5 - 1, 2));
    });
    CHECK(pb[1] == 0.0);
    const double bb = 5 * pb[1] + 0.5 * (0.5 * std::pow(pb[0] / 0.5 - 1, 2) + 0.5 * std::pow(pb[1] / 0.5 - 1, 2));
    CHECK_THAT(variational_phi_value(StateVector{0.0, 5.0}, Planner{Lambda(1.0), chi2_phi(), Singleton{q}}),
               WithinAbs(bb, 1e-9));
}

TEST_CASE("phi dual value errors", "[criteria]") {
    const Dist q{0.5, 0.5};
    const StateVector u{0.0, 1.0};
    check_error([&] { variational_phi_value(u, Planner{Lambda(1.0), KLPenalty{}, Singleton{q}}); },
                ErrorCode::InvalidArgument);
    check_error([&] { variational_phi_value(u, Planner{Lambda(1.0), chi2_phi(), HullOfFinite{{q}}}); },
                ErrorCode::InvalidArgument);
    // a wrong user-supplied conjugate makes the dual unbounded
    const PhiSpec broken("broken", [](double t) { return 0.5 * (t - 1) * (t - 1); }, [](double t) { return 0.5 * t; });
    check_error([&] { variational_phi_value(u, Planner{Lambda(1.0), broken, Singleton{q}}); },
                ErrorCode::BracketFailure);
    CHECK(variational_phi_value(u, Planner{Lambda::infinity(), chi2_phi(), Singleton{q}}) == 0.5);
}

TEST_CASE("mba examples", "[criteria]") {
    const FiniteSet p{{Dist{1.0, 0.0}, Dist{0.0, 1.0}}};
    const StateVector u{1.0, 4.0};
    CHECK(mba_value(u, p, 1.0) == meu_value(u, p));
    CHECK(mba_value(u, p, 0.0) == 4.0);
    CHECK(mba_value(u, p, 0.5) == 2.5);
    CHECK(mba_value(u, HullOfFinite{p.members}, 0.5) == 2.5);
    check_error([&] { mba_value(u, p, 1.5); }, ErrorCode::InvalidArgument);
}

TEST_CASE("exponential certainty equivalent pair", "[criteria]") {
    const ExponentialCE ce(Lambda(0.7));
    CHECK_THAT(ce.phi_inv(ce.phi(0.5)), WithinAbs(0.5, 1e-12));
    for (double l : {0.1, 1.0, 9.0}) CHECK(ExponentialCE(Lambda(l)).phi(0.0) == -1.0);
    const ExponentialCE inf(Lambda::infinity());
    CHECK(inf.phi(0.3) == 0.3);
    CHECK(inf.phi_inv(-2.0) == -2.0);
    CHECK(ce.certainty_equivalent(1.25) == 1.25);
    check_error([&] { (void)ce.phi_inv(0.0); }, ErrorCode::DomainError);
    oracle::Gen g(410);
    for (int k = 0; k < 100; ++k) {
        const double u = g.uniform(-5, 5);
        const ExponentialCE c(Lambda(g.uniform(0.2, 10)));
        CHECK_THAT(c.phi_inv(c.phi(u)), WithinAbs(u, 1e-12));
    }
}
