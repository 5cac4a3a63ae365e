#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace vrrw {

// Relative entropy of Bernoulli(a) against Bernoulli(p), natural log:
//   H(a,p) = a log(a/p) + (1-a) log((1-a)/(1-p))
// Nonnegative, zero iff a = p. Both arguments must lie strictly in (0,1);
// the boundary is rejected rather than extended by continuity.
double entropy(double a, double p);

// exp(-n H(a,p)): upper bounds P(mean of n Bernoulli(p) >= a) for a in
// [p,1), and P(mean <= a) for a in (0,p].
enum class TailSide { upper, lower };
double chernoff_bound(std::uint64_t n, double p, double a, TailSide side);

// H(a,p) against its small-deviation quadratic delta^2 / (2p(1-p)),
// delta = a - p.
struct EntropyApprox {
    double exact;
    double quadratic;
    double relative_gap;  // |exact - quadratic| / exact, 0 when both vanish
};
EntropyApprox entropy_approx_check(double a, double p);

// Sparse-regime expansion for a = r p with both a and p small:
//   H(a,p) ~ p (r log r - r + 1).
// Exposed for diagnostics only; no quantitative guarantee away from the
// small-p regime.
double entropy_small_p_approx(double a, double p);

// Expected split of a block of N_k steps across vertices when weights are
// frozen: shares_i proportional to alpha_i (1 - alpha_i).
struct FrozenPrediction {
    std::vector<double> shares;
    std::vector<double> expected_counts;
};
FrozenPrediction frozen_prediction(std::span<const double> alpha, double n_k);

// Concentration-event deviation scale k^{(m-1)/2 + nu} and the check that
// every observed block count is within it of its prediction.
double ek_threshold(std::uint64_t k, double m, double nu);
bool ek_check(std::span<const std::uint64_t> observed, std::span<const double> predicted,
              std::uint64_t k, double m, double nu);

}  // namespace vrrw
