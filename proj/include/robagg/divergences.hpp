#pragma once

// Divergence families: relative entropy, phi-divergences with their Fenchel
// conjugates, the rho family, and Bregman divergences of a pluggable
// generator.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "robagg/simplex.hpp"

namespace robagg {

/// A real number or +infinity. Absolute-continuity failures produce the
/// infinite value rather than a sentinel float.
class Extended {
public:
    constexpr Extended(double v = 0.0) : value_(v), infinite_(false) {}
    static constexpr Extended infinity() {
        Extended e;
        e.infinite_ = true;
        return e;
    }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr bool is_finite() const noexcept { return !infinite_; }

    double value() const {
        require(!infinite_, ErrorCode::DomainError, "value() called on an infinite extended real");
        return value_;
    }
    /// Numeric view, mapping the infinite marker to IEEE +inf for comparisons.
    constexpr double as_double() const noexcept {
        return infinite_ ? std::numeric_limits<double>::infinity() : value_;
    }

    friend constexpr bool operator<=(Extended a, double b) { return !a.infinite_ && a.value_ <= b; }
    friend constexpr bool operator<(Extended a, double b) { return !a.infinite_ && a.value_ < b; }
    friend constexpr bool operator>(Extended a, double b) { return a.infinite_ || a.value_ > b; }
    friend constexpr bool operator>=(Extended a, double b) { return a.infinite_ || a.value_ >= b; }

private:
    double value_;
    bool infinite_;
};

/// Relative entropy R(p||q) = sum p log(p/q), +inf when p is not absolutely
/// continuous with respect to q.
inline Extended kl(const Dist& p, const Dist& q) {
    require_same_size(p.size(), q.size(), "kl: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return Extended::infinity();
        s += p[i] * std::log(p[i] / q[i]);
    }
    return Extended(std::max(s, 0.0));
}

// ---------------------------------------------------------------------------
// phi-divergences

/// Convex phi on [0, inf) with phi(1) = 0, together with its conjugate
/// phi*(t) = sup_{x >= 0} (t x - phi(x)). The conjugate is supplied
/// analytically; it is never computed numerically.
class PhiSpec {
public:
    using Fn = std::function<double(double)>;

    PhiSpec(std::string name, Fn phi, Fn conjugate)
        : name_(std::move(name)), phi_(std::move(phi)), conjugate_(std::move(conjugate)) {
        require(std::abs(phi_(1.0)) <= 1e-12, ErrorCode::InvalidArgument, "phi(1) must be 0");
        // midpoint convexity on a 100-point grid over [0, 10]
        for (int i = 0; i < 100; ++i) {
            for (int j = i + 2; j < 100; j += 7) {
                const double a = 10.0 * i / 99.0;
                const double b = 10.0 * j / 99.0;
                const double mid = phi_(0.5 * (a + b));
                require(mid <= 0.5 * (phi_(a) + phi_(b)) + 1e-12, ErrorCode::InvalidArgument,
                        "phi fails the midpoint convexity check");
            }
        }
    }

    const std::string& name() const noexcept { return name_; }
    double phi(double t) const { return phi_(t); }
    double conjugate(double t) const { return conjugate_(t); }

private:
    std::string name_;
    Fn phi_;
    Fn conjugate_;
};

/// phi(t) = t log t - t + 1, phi*(t) = e^t - 1.
inline PhiSpec kl_phi() {
    return PhiSpec(
        "kl", [](double t) { return t > 0.0 ? t * std::log(t) - t + 1.0 : 1.0; },
        [](double t) { return std::expm1(t); });
}

/// phi(t) = (t-1)^2 / 2; phi*(t) = t + t^2/2 for t >= -1 and -1/2 below.
inline PhiSpec chi2_phi() {
    return PhiSpec(
        "chi2", [](double t) { return 0.5 * (t - 1.0) * (t - 1.0); },
        [](double t) { return t >= -1.0 ? t + 0.5 * t * t : -0.5; });
}

/// D_phi(p||q) = E_q[phi(p/q)], +inf unless p << q.
inline Extended phi_divergence(const PhiSpec& spec, const Dist& p, const Dist& q) {
    require_same_size(p.size(), q.size(), "phi_divergence: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (q[i] == 0.0) {
            if (p[i] > 0.0) return Extended::infinity();
            continue;
        }
        s += q[i] * spec.phi(p[i] / q[i]);
    }
    return Extended(s);
}

// ---------------------------------------------------------------------------
// rho family

inline void check_rho(double rho) {
    require(rho > 0.0 && rho < 1.0, ErrorCode::RhoOutOfRange, "rho must lie in (0, 1)");
}

/// D_rho(p||q) = (1/(rho(1-rho))) sum_s p(s) [1 - (q(s)/p(s))^rho]; states with
/// p(s) = 0 contribute nothing.
inline double rho_divergence(double rho, const Dist& p, const Dist& q) {
    check_rho(rho);
    require_same_size(p.size(), q.size(), "rho_divergence: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        s += p[i] * (1.0 - std::pow(q[i] / p[i], rho));
    }
    return s / (rho * (1.0 - rho));
}

// ---------------------------------------------------------------------------
// Bregman

/// Legendre-type generator G for D_G(x||y) = G(x) - G(y) - <grad G(y), x - y>.
/// The Hessian callback is optional; when absent it is obtained by central
/// differences of the gradient.
struct BregmanGenerator {
    enum class Kind { NegativeEntropy, HalfSquaredNorm, Custom };

    using Value = std::function<double(const std::vector<double>&)>;
    using Gradient = std::function<std::vector<double>(const std::vector<double>&)>;
    using Hessian = std::function<Eigen::MatrixXd(const std::vector<double>&)>;

    std::string name;
    Value value;
    Gradient gradient;
    Hessian hessian{};
    Kind kind = Kind::Custom;
};

/// G(z) = sum z log z - z. On the simplex its Bregman divergence is the
/// relative entropy.
inline BregmanGenerator negative_entropy() {
    BregmanGenerator g;
    g.name = "negative-entropy";
    g.kind = BregmanGenerator::Kind::NegativeEntropy;
    g.value = [](const std::vector<double>& z) {
        double s = 0.0;
        for (double v : z) s += (v > 0.0 ? v * std::log(v) : 0.0) - v;
        return s;
    };
    g.gradient = [](const std::vector<double>& z) {
        std::vector<double> out(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) out[i] = std::log(z[i]);
        return out;
    };
    g.hessian = [](const std::vector<double>& z) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(z.size()),
                                                  static_cast<Eigen::Index>(z.size()));
        for (std::size_t i = 0; i < z.size(); ++i) h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0 / z[i];
        return h;
    };
    return g;
}

/// G(z) = ||z||^2 / 2.
inline BregmanGenerator half_squared_norm() {
    BregmanGenerator g;
    g.name = "half-squared-norm";
    g.kind = BregmanGenerator::Kind::HalfSquaredNorm;
    g.value = [](const std::vector<double>& z) {
        double s = 0.0;
        for (double v : z) s += 0.5 * v * v;
        return s;
    };
    g.gradient = [](const std::vector<double>& z) { return z; };
    g.hessian = [](const std::vector<double>& z) {
        return Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(z.size()), static_cast<Eigen::Index>(z.size()));
    };
    return g;
}

inline double bregman(const BregmanGenerator& g, std::span<const double> x, std::span<const double> y) {
    require_same_size(x.size(), y.size(), "bregman: dimension mismatch");
    const std::vector<double> xv(x.begin(), x.end());
    const std::vector<double> yv(y.begin(), y.end());
    if (g.kind == BregmanGenerator::Kind::NegativeEntropy)
        for (double v : yv)
            require(v > 0.0, ErrorCode::DomainError, "bregman: y lies on the boundary of the negative-entropy domain");
    const std::vector<double> grad = g.gradient(yv);
    double inner = 0.0;
    for (std::size_t i = 0; i < xv.size(); ++i) {
        require(std::isfinite(grad[i]), ErrorCode::DomainError, "bregman: gradient not finite at y");
        inner += grad[i] * (xv[i] - yv[i]);
    }
    const double d = g.value(xv) - g.value(yv) - inner;
    require(std::isfinite(d), ErrorCode::DomainError, "bregman: generator not finite at x or y");
    return d;
}

inline double bregman(const BregmanGenerator& g, const Dist& x, const Dist& y) {
    return bregman(g, x.values(), y.values());
}

/// Spot check of strict convexity: D_G(x||y) > 0 on random distinct pairs of
/// strictly positive simplex points.
inline bool spot_check_strict_convexity(const BregmanGenerator& g, std::size_t dim, std::uint64_t seed,
                                        int pairs = 100) {
    std::mt19937_64 rng(seed);
    std::exponential_distribution<double> expo(1.0);
    auto draw = [&] {
        std::vector<double> v(dim);
        for (double& x : v) x = expo(rng) + 1e-3;
        return normalize(v);
    };
    for (int k = 0; k < pairs; ++k) {
        const Dist x = draw();
        const Dist y = draw();
        if (x == y) continue;
        if (!(bregman(g, x, y) > 0.0)) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Families used as ball shapes

struct KLFamily {};
struct BregmanFamily {
    BregmanGenerator generator;
};
struct RhoFamily {
    double rho;
};
using DivergenceFamily = std::variant<KLFamily, BregmanFamily, RhoFamily>;

inline std::string family_name(const DivergenceFamily& f) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, KLFamily>) return "kl";
            else if constexpr (std::is_same_v<T, BregmanFamily>) return "bregman:" + v.generator.name;
            else return "rho:" + std::to_string(v.rho);
        },
        f);
}

/// D(center || q) under the given family.
inline Extended divergence(const DivergenceFamily& family, const Dist& center, const Dist& q) {
    return std::visit(
        [&](const auto& f) -> Extended {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, KLFamily>) {
                return kl(center, q);
            } else if constexpr (std::is_same_v<T, RhoFamily>) {
                return Extended(rho_divergence(f.rho, center, q));
            } else {
                if (f.generator.kind == BregmanGenerator::Kind::NegativeEntropy) return kl(center, q);
                return Extended(bregman(f.generator, center, q));
            }
        },
        family);
}

namespace detail {

/// Value, gradient and Hessian of y -> D(x || y) for a fixed center x.
struct SecondOrder {
    double value = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
};

inline Eigen::MatrixXd generator_hessian(const BregmanGenerator& g, const std::vector<double>& y) {
    if (g.hessian) return g.hessian(y);
    const auto n = static_cast<Eigen::Index>(y.size());
    Eigen::MatrixXd h(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double step = 1e-6 * std::max(1.0, std::abs(y[static_cast<std::size_t>(j)]));
        std::vector<double> yp = y, ym = y;
        yp[static_cast<std::size_t>(j)] += step;
        ym[static_cast<std::size_t>(j)] -= step;
        const auto gp = g.gradient(yp);
        const auto gm = g.gradient(ym);
        for (Eigen::Index i = 0; i < n; ++i)
            h(i, j) = (gp[static_cast<std::size_t>(i)] - gm[static_cast<std::size_t>(i)]) / (2.0 * step);
    }
    return 0.5 * (h + h.transpose());
}

/// Returns nullopt when y is outside the domain where D(x||.) is finite and
/// twice differentiable.
inline std::optional<SecondOrder> center_divergence(const DivergenceFamily& family, const Dist& x,
                                                    const Eigen::VectorXd& y) {
    const auto n = static_cast<Eigen::Index>(x.size());
    SecondOrder out;
    out.grad = Eigen::VectorXd::Zero(n);
    out.hess = Eigen::MatrixXd::Zero(n, n);

    auto kl_like = [&]() -> bool {
        for (Eigen::Index s = 0; s < n; ++s) {
            const double xs = x[static_cast<std::size_t>(s)];
            if (xs == 0.0) continue;
            const double ys = y(s);
            if (!(ys > 0.0)) return false;
            out.value += xs * std::log(xs / ys);
            out.grad(s) = -xs / ys;
            out.hess(s, s) = xs / (ys * ys);
        }
        return true;
    };

    return std::visit(
        [&](const auto& f) -> std::optional<SecondOrder> {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, KLFamily>) {
                if (!kl_like()) return std::nullopt;
                return out;
            } else if constexpr (std::is_same_v<T, RhoFamily>) {
                const double rho = f.rho;
                const double c = 1.0 / (rho * (1.0 - rho));
                double acc = 0.0;
                for (Eigen::Index s = 0; s < n; ++s) {
                    const double xs = x[static_cast<std::size_t>(s)];
                    if (xs == 0.0) continue;
                    const double ys = y(s);
                    if (!(ys > 0.0)) return std::nullopt;
                    const double xw = std::pow(xs, 1.0 - rho);
                    acc += xw * std::pow(ys, rho);
                    out.grad(s) = -xw * std::pow(ys, rho - 1.0) / (1.0 - rho);
                    out.hess(s, s) = xw * std::pow(ys, rho - 2.0);
                }
                out.value = c * (1.0 - acc);
                return out;
            } else {
                const auto& g = f.generator;
                if (g.kind == BregmanGenerator::Kind::NegativeEntropy) {
                    // Same as KL on the simplex up to a term whose gradient is
                    // constant along the simplex.
                    if (!kl_like()) return std::nullopt;
                    return out;
                }
                if (g.kind == BregmanGenerator::Kind::HalfSquaredNorm) {
                    for (Eigen::Index s = 0; s < n; ++s) {
                        const double d = y(s) - x[static_cast<std::size_t>(s)];
                        out.value += 0.5 * d * d;
                        out.grad(s) = d;
                    }
                    out.hess.setIdentity();
                    return out;
                }
                // Generic generator: gradient -H(y)(x - y), Hessian by central
                // differences of that gradient.
                std::vector<double> yv(y.data(), y.data() + n);
                auto grad_at = [&](const std::vector<double>& z) -> std::optional<Eigen::VectorXd> {
                    const Eigen::MatrixXd h = generator_hessian(g, z);
                    Eigen::VectorXd diff(n);
                    for (Eigen::Index s = 0; s < n; ++s)
                        diff(s) = x[static_cast<std::size_t>(s)] - z[static_cast<std::size_t>(s)];
                    Eigen::VectorXd gr = -h * diff;
                    if (!gr.allFinite()) return std::nullopt;
                    return gr;
                };
                const double gx = g.value(x.vec());
                const double gy = g.value(yv);
                const auto gy_grad = g.gradient(yv);
                double inner = 0.0;
                for (Eigen::Index s = 0; s < n; ++s)
                    inner += gy_grad[static_cast<std::size_t>(s)] * (x[static_cast<std::size_t>(s)] - yv[static_cast<std::size_t>(s)]);
                out.value = gx - gy - inner;
                if (!std::isfinite(out.value)) return std::nullopt;
                auto gr = grad_at(yv);
                if (!gr) return std::nullopt;
                out.grad = *gr;
                for (Eigen::Index j = 0; j < n; ++j) {
                    const double step = 1e-6;
                    std::vector<double> yp = yv, ym = yv;
                    yp[static_cast<std::size_t>(j)] += step;
                    ym[static_cast<std::size_t>(j)] -= step;
                    auto gp = grad_at(yp);
                    auto gm = grad_at(ym);
                    if (!gp || !gm) return std::nullopt;
                    out.hess.col(j) = (*gp - *gm) / (2.0 * step);
                }
                out.hess = 0.5 * (out.hess + out.hess.transpose()).eval();
                return out;
            }
        },
        family);
}

} // namespace detail
} // namespace robagg
