#include "vrrw/urn.hpp"

#include <cmath>
#include <stdexcept>

namespace vrrw {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void urn_step(UrnState& state, SplitMix64& rng) {
    require(state.x + state.y > 0, "urn_step: X + Y must be positive");
    const double p_first = state.x / (state.x + state.y);
    if (rng.uniform() < p_first) {
        state.x += state.params.a;
        state.y += state.params.b;
    } else {
        state.x += state.params.c;
        state.y += state.params.d;
    }
    ++state.n;
}

double regime_statistic(const UrnState& state, RegimeStat which) {
    switch (which) {
        case RegimeStat::log_ratio:
            require(state.x > 1 && state.y > 1, "regime_statistic: needs X > 1 and Y > 1");
            return std::log(state.x) / std::log(state.y);
        case RegimeStat::shifted_ratio:
            require(state.y > 1, "regime_statistic: needs Y > 1");
            require(state.params.c > 0, "regime_statistic: needs c > 0");
            return state.x / (state.params.c * state.y) - std::log(state.y);
    }
    throw std::invalid_argument("regime_statistic: unknown statistic");
}

MultiUrnState multi_polya_init(int colors) {
    require(colors >= 2, "multi_polya: need at least 2 colors");
    return multi_polya_init(std::vector<std::uint64_t>(colors, 1));
}

MultiUrnState multi_polya_init(std::vector<std::uint64_t> counts) {
    require(counts.size() >= 2, "multi_polya: need at least 2 colors");
    MultiUrnState s;
    s.t = 0;
    for (std::uint64_t c : counts) {
        require(c >= 1, "multi_polya: counts must be positive");
        s.t += c;
    }
    s.counts = std::move(counts);
    return s;
}

void multi_polya_step(MultiUrnState& state, SplitMix64& rng) {
    std::uint64_t r = rng.bounded(state.t);
    std::size_t color = state.counts.size() - 1;
    for (std::size_t i = 0; i < state.counts.size(); ++i) {
        if (r < state.counts[i]) {
            color = i;
            break;
        }
        r -= state.counts[i];
    }
    ++state.counts[color];
    ++state.t;
}

double supermartingale_diag(const MultiUrnState& state, int color) {
    require(color >= 0 && color < static_cast<int>(state.counts.size()),
            "supermartingale_diag: bad color");
    const std::uint64_t c = state.counts[static_cast<std::size_t>(color)];
    require(c >= 2, "supermartingale_diag: undefined for counts below 2");
    return std::log(static_cast<double>(state.t)) - std::log(static_cast<double>(c - 1));
}

double supermartingale_drift(const MultiUrnState& state, int color) {
    require(color >= 0 && color < static_cast<int>(state.counts.size()),
            "supermartingale_drift: bad color");
    const double c = static_cast<double>(state.counts[static_cast<std::size_t>(color)]);
    require(c >= 2, "supermartingale_drift: undefined for counts below 2");
    const double t = static_cast<double>(state.t);
    return std::log1p(1.0 / t) - (c / t) * std::log1p(1.0 / (c - 1.0));
}

}  // namespace vrrw
