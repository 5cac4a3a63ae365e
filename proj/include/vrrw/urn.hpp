#pragma once

#include <cstdint>
#include <vector>

#include "vrrw/rng.hpp"

namespace vrrw {

// Two-color urn with reinforcement matrix ((a,b),(c,d)): drawing the first
// color adds (a,b) to (X,Y), drawing the second adds (c,d). Ball counts may
// be non-integer.
struct UrnParams {
    double a = 1, b = 0, c = 0, d = 1;
};

struct UrnState {
    double x = 1, y = 1;
    UrnParams params;
    std::uint64_t n = 0;
};

// One draw: with probability X/(X+Y) apply (a,b), else (c,d).
void urn_step(UrnState& state, SplitMix64& rng);

enum class RegimeStat {
    log_ratio,       // log X / log Y, the a>d=1, b=c=0 regime statistic
    shifted_ratio,   // X/(cY) - log Y, the a=d=1, b=0, c>0 regime statistic
};
double regime_statistic(const UrnState& state, RegimeStat which);

// d-color Polya urn: draw a ball uniformly, return it with one more of the
// same color. Counts are integers and sum to t.
struct MultiUrnState {
    std::vector<std::uint64_t> counts;
    std::uint64_t t = 0;
};

MultiUrnState multi_polya_init(int colors);  // one ball of each color
MultiUrnState multi_polya_init(std::vector<std::uint64_t> counts);
void multi_polya_step(MultiUrnState& state, SplitMix64& rng);

// M_i(t) = log t - log(counts[i] - 1): a nonnegative supermartingale of the
// multi-color Polya urn. Needs counts[i] >= 2.
double supermartingale_diag(const MultiUrnState& state, int color);

// Its one-step conditional drift, log(1 + 1/t) - (P_i/t) log(1 + 1/(P_i - 1)).
double supermartingale_drift(const MultiUrnState& state, int color);

}  // namespace vrrw
