#pragma once

// Finite-state probability vectors and the handful of operations every other
// module is built on: expectations, entropy, stochastic dominance and mixing.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "robagg/error.hpp"
#include "robagg/tolerances.hpp"

namespace robagg {

/// Ordered list of state labels. Declaration order is the common-state order
/// used for stochastic dominance: later states are "higher".
class StateSpace {
public:
    StateSpace() = default;
    explicit StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
        require(!labels_.empty(), ErrorCode::EmptyList, "state space must be nonempty");
        std::unordered_set<std::string> seen;
        for (const auto& l : labels_)
            require(seen.insert(l).second, ErrorCode::InvalidArgument, "duplicate state label '" + l + "'");
    }

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& operator[](std::size_t i) const { return labels_.at(i); }

    std::size_t index_of(const std::string& label) const {
        auto it = std::find(labels_.begin(), labels_.end(), label);
        require(it != labels_.end(), ErrorCode::InvalidArgument, "unknown state '" + label + "'");
        return static_cast<std::size_t>(it - labels_.begin());
    }

private:
    std::vector<std::string> labels_;
};

/// Real-valued vector indexed by state (utility or payoff per state).
class StateVector {
public:
    StateVector() = default;
    StateVector(std::initializer_list<double> values) : StateVector(std::vector<double>(values)) {}
    explicit StateVector(std::vector<double> values) : x_(std::move(values)) {
        for (double v : x_)
            require(std::isfinite(v), ErrorCode::InvalidArgument, "state vector entries must be finite");
    }

    std::size_t size() const noexcept { return x_.size(); }
    double operator[](std::size_t i) const { return x_[i]; }
    std::span<const double> values() const noexcept { return x_; }
    const std::vector<double>& vec() const noexcept { return x_; }
    auto begin() const noexcept { return x_.begin(); }
    auto end() const noexcept { return x_.end(); }

    double min() const { return *std::min_element(x_.begin(), x_.end()); }
    double max() const { return *std::max_element(x_.begin(), x_.end()); }
    bool is_constant() const { return min() == max(); }

    friend StateVector operator+(const StateVector& a, const StateVector& b) {
        require(a.size() == b.size(), ErrorCode::DimensionMismatch, "state vector sizes differ");
        std::vector<double> out(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
        return StateVector(std::move(out));
    }
    friend StateVector operator*(double c, const StateVector& a) {
        std::vector<double> out(a.x_);
        for (double& v : out) v *= c;
        return StateVector(std::move(out));
    }
    friend StateVector operator+(const StateVector& a, double c) {
        std::vector<double> out(a.x_);
        for (double& v : out) v += c;
        return StateVector(std::move(out));
    }
    friend bool operator==(const StateVector&, const StateVector&) = default;

private:
    std::vector<double> x_;
};

/// Probability vector over a finite state space. Entries are nonnegative and
/// sum to one within tol::simplex; construction enforces both.
class Dist {
public:
    Dist() = default;
    Dist(std::initializer_list<double> values) : Dist(std::vector<double>(values)) {}
    explicit Dist(std::vector<double> values) : p_(std::move(values)) {
        require(!p_.empty(), ErrorCode::NotADistribution, "empty probability vector");
        double sum = 0.0;
        for (double v : p_) {
            require(std::isfinite(v) && v >= 0.0, ErrorCode::NotADistribution,
                    "probability entries must be finite and nonnegative");
            sum += v;
        }
        require(std::abs(sum - 1.0) <= tol::simplex, ErrorCode::NotADistribution,
                "probability entries must sum to one");
    }

    static Dist uniform(std::size_t n) { return Dist(std::vector<double>(n, 1.0 / static_cast<double>(n))); }
    static Dist point_mass(std::size_t n, std::size_t k) {
        std::vector<double> v(n, 0.0);
        v.at(k) = 1.0;
        return Dist(std::move(v));
    }

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t i) const { return p_[i]; }
    std::span<const double> values() const noexcept { return p_; }
    const std::vector<double>& vec() const noexcept { return p_; }
    auto begin() const noexcept { return p_.begin(); }
    auto end() const noexcept { return p_.end(); }

    bool full_support() const {
        return std::all_of(p_.begin(), p_.end(), [](double v) { return v > 0.0; });
    }

    friend bool operator==(const Dist&, const Dist&) = default;

private:
    std::vector<double> p_;
};

inline void require_same_size(std::size_t a, std::size_t b, const char* what) {
    require(a == b, ErrorCode::DimensionMismatch, what);
}

/// Scale a nonnegative vector to unit mass.
inline Dist normalize(std::span<const double> raw) {
    require(!raw.empty(), ErrorCode::EmptyList, "normalize: empty input");
    double sum = 0.0;
    for (double v : raw) {
        require(std::isfinite(v), ErrorCode::InvalidArgument, "normalize: nonfinite entry");
        require(v >= 0.0, ErrorCode::NegativeMass, "normalize: negative entry");
        sum += v;
    }
    require(sum > 0.0, ErrorCode::AllZero, "normalize: all entries are zero");
    std::vector<double> out(raw.begin(), raw.end());
    for (double& v : out) v /= sum;
    return Dist(std::move(out));
}

inline Dist normalize(const std::vector<double>& raw) { return normalize(std::span<const double>(raw)); }

namespace detail {

// Solver output that should be a distribution up to roundoff: clip tiny
// negatives and renormalize.
inline Dist repair(std::vector<double> v) {
    for (double& x : v)
        if (x < 0.0) x = 0.0;
    return normalize(v);
}

} // namespace detail

inline double expectation(const Dist& p, const StateVector& x) {
    require_same_size(p.size(), x.size(), "expectation: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p[i] * x[i];
    return s;
}

/// Shannon entropy in nats with 0 log 0 = 0.
inline double shannon_entropy(const Dist& q) {
    double h = 0.0;
    for (double v : q)
        if (v > 0.0) h -= v * std::log(v);
    return h;
}

enum class Dominance { PDominates, QDominates, Equal, Incomparable };

/// First-order stochastic dominance with respect to the state order: compares
/// upper-tail sums at every threshold.
inline Dominance fosd_compare(const Dist& p, const Dist& q) {
    require_same_size(p.size(), q.size(), "fosd_compare: dimension mismatch");
    bool p_above = false;
    bool q_above = false;
    double tail_p = 0.0;
    double tail_q = 0.0;
    for (std::size_t k = p.size(); k-- > 0;) {
        tail_p += p[k];
        tail_q += q[k];
        const double d = tail_p - tail_q;
        if (d > tol::simplex) p_above = true;
        if (d < -tol::simplex) q_above = true;
    }
    if (p_above && q_above) return Dominance::Incomparable;
    if (p_above) return Dominance::PDominates;
    if (q_above) return Dominance::QDominates;
    return Dominance::Equal;
}

inline void check_weights(std::span<const double> w) {
    require(!w.empty(), ErrorCode::EmptyList, "weights must be nonempty");
    double sum = 0.0;
    for (double v : w) {
        require(std::isfinite(v) && v >= 0.0, ErrorCode::WeightSumError, "weights must be nonnegative");
        sum += v;
    }
    require(std::abs(sum - 1.0) <= tol::simplex, ErrorCode::WeightSumError, "weights must sum to one");
}

/// Pointwise mixture sum_i w_i d_i.
inline Dist convex_combine(std::span<const double> weights, std::span<const Dist> dists) {
    require(weights.size() == dists.size(), ErrorCode::DimensionMismatch,
            "convex_combine: weight count differs from distribution count");
    check_weights(weights);
    const std::size_t n = dists.front().size();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < dists.size(); ++i) {
        require_same_size(dists[i].size(), n, "convex_combine: dimension mismatch");
        for (std::size_t s = 0; s < n; ++s) out[s] += weights[i] * dists[i][s];
    }
    return detail::repair(std::move(out));
}

inline Dist convex_combine(const std::vector<double>& weights, const std::vector<Dist>& dists) {
    return convex_combine(std::span<const double>(weights), std::span<const Dist>(dists));
}

} // namespace robagg
