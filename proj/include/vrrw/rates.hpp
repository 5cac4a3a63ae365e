#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "vrrw/records.hpp"

namespace vrrw {

// Observation times round(k^m), k = 1..k_max, deduplicated and strictly
// increasing. Needs m > 1, which already guarantees strict growth.
std::vector<std::uint64_t> checkpoint_schedule(double m, std::uint64_t k_max);
std::vector<CheckpointSpec> checkpoint_schedule_specs(double m, std::uint64_t k_max);

// Ordinary least squares of log(value) on log(t). residual is the RMS of
// the log-space residuals. Needs >= 3 points, positive values, pairwise
// distinct positive t.
struct PowerFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0;
};
PowerFit fit_power_exponent(std::span<const std::pair<double, double>> points);

// Pointwise median across replica curves sharing one schedule. Even replica
// counts take the lower median, so the output is always an attained value.
std::vector<std::pair<std::uint64_t, double>> median_curve(
    const std::vector<std::vector<std::pair<std::uint64_t, double>>>& curves);

// Empirical lower quantile: sorted[floor(q * (n-1))]. q = 0.5 reproduces the
// lower-median convention above.
double lower_quantile(std::vector<double> values, double q);

// The decay-rate recursion
//   eta_{k+1} = eta_k [1 - C(1-eta_k)/k] + D/k^{1+beta_tilde}
// iterated inside the domain [0, 1-epsilon] (iterates are clamped to it;
// clamp activity is reported). `equality` forces equality in the defining
// inequality; `inequality_max` takes the largest next value the inequality
// and the domain permit -- for k0 > C the right side is increasing in
// eta_k, so the two modes generate the same extremal sequence.
struct RecursionParams {
    double C = 1;
    double D = 1;
    double beta_tilde = 0.5;
    double epsilon = 0.5;
    double eta0 = 0;
    std::uint64_t k0 = 1;
};

enum class RecursionForcing { equality, inequality_max };

// Rate function of the recursion: k^beta if beta < C, k^beta/log k at the
// boundary, k^C beyond it (branch chosen by exact comparison).
enum class RateBranch { below_c, at_c, above_c };

struct RecursionResult {
    std::vector<double> eta;  // eta[j] is the iterate at k = k0 + j
    std::uint64_t k0 = 1;
    RateBranch branch = RateBranch::below_c;
    double sup_eta_h = 0;  // over the whole run (log branch starts at k >= 2)
    std::uint64_t clamp_events = 0;

    double h(std::uint64_t k) const;
    // sup of eta_k h(k) over [k_lo, k_hi] intersected with the run
    double sup_over(std::uint64_t k_lo, std::uint64_t k_hi) const;

private:
    friend RecursionResult recursion_iterate(const RecursionParams&, std::uint64_t,
                                             RecursionForcing);
    double c_ = 0, beta_ = 0;
};

RecursionResult recursion_iterate(const RecursionParams& params, std::uint64_t K,
                                  RecursionForcing forcing = RecursionForcing::equality);

// Decay-exponent band for the occupation-measure distance: the distance
// falls at least as fast as t^-upper (1/3 for d in {3,4}, 1/(d-1) for
// d >= 5) and, when the graph has a leaf, no faster than t^-lower with
// lower = (d-2)/(d-1).
struct RateBand {
    double upper = 0;
    std::optional<double> lower;
};
RateBand theorem2_band(int d, bool has_leaf);

// Target growth exponent 1/(d-1) of the cumulative leaf weight.
double leaf_exponent_target(int d);

}  // namespace vrrw
