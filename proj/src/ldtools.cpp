#include "vrrw/ldtools.hpp"

#include <cmath>
#include <stdexcept>

namespace vrrw {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void check_open_unit(double x, const char* name) {
    if (!(x > 0.0 && x < 1.0))
        throw std::invalid_argument(std::string(name) + " must lie strictly in (0,1)");
}

}  // namespace

double entropy(double a, double p) {
    check_open_unit(a, "entropy: a");
    check_open_unit(p, "entropy: p");
    return a * std::log(a / p) + (1.0 - a) * std::log((1.0 - a) / (1.0 - p));
}

double chernoff_bound(std::uint64_t n, double p, double a, TailSide side) {
    check_open_unit(p, "chernoff_bound: p");
    check_open_unit(a, "chernoff_bound: a");
    require(n >= 1, "chernoff_bound: n must be positive");
    if (side == TailSide::upper)
        require(a >= p, "chernoff_bound: upper side needs a >= p");
    else
        require(a <= p, "chernoff_bound: lower side needs a <= p");
    return std::exp(-static_cast<double>(n) * entropy(a, p));
}

EntropyApprox entropy_approx_check(double a, double p) {
    const double exact = entropy(a, p);
    const double delta = a - p;
    const double quadratic = delta * delta / (2.0 * p * (1.0 - p));
    EntropyApprox out{exact, quadratic, 0.0};
    if (exact > 0.0) out.relative_gap = std::abs(exact - quadratic) / exact;
    return out;
}

double entropy_small_p_approx(double a, double p) {
    check_open_unit(a, "entropy_small_p_approx: a");
    check_open_unit(p, "entropy_small_p_approx: p");
    const double r = a / p;
    return p * (r * std::log(r) - r + 1.0);
}

FrozenPrediction frozen_prediction(std::span<const double> alpha, double n_k) {
    require(!alpha.empty(), "frozen_prediction: empty alpha");
    double total = 0.0, denom = 0.0;
    for (double a : alpha) {
        require(a > 0.0 && a <= 1.0, "frozen_prediction: alpha entries must lie in (0,1]");
        total += a;
        denom += a * (1.0 - a);
    }
    require(total <= 1.0 + 1e-12, "frozen_prediction: alpha must sum to at most 1");
    require(denom > 0.0, "frozen_prediction: degenerate alpha (zero denominator)");
    FrozenPrediction out;
    out.shares.reserve(alpha.size());
    out.expected_counts.reserve(alpha.size());
    for (double a : alpha) {
        const double s = a * (1.0 - a) / denom;
        out.shares.push_back(s);
        out.expected_counts.push_back(s * n_k);
    }
    return out;
}

double ek_threshold(std::uint64_t k, double m, double nu) {
    require(k >= 1, "ek_threshold: k must be positive");
    require(m > 1.0, "ek_threshold: m must exceed 1");
    require(nu > 0.0, "ek_threshold: nu must be positive");
    return std::pow(static_cast<double>(k), (m - 1.0) / 2.0 + nu);
}

bool ek_check(std::span<const std::uint64_t> observed, std::span<const double> predicted,
              std::uint64_t k, double m, double nu) {
    require(observed.size() == predicted.size(), "ek_check: length mismatch");
    const double threshold = ek_threshold(k, m, nu);
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (std::abs(static_cast<double>(observed[i]) - predicted[i]) > threshold) return false;
    }
    return true;
}

}  // namespace vrrw
