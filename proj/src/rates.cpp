#include "vrrw/rates.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace vrrw {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

std::vector<CheckpointSpec> checkpoint_schedule_specs(double m, std::uint64_t k_max) {
    require(m > 1.0, "checkpoint_schedule: m must exceed 1");
    require(k_max >= 1, "checkpoint_schedule: k_max must be positive");
    std::vector<CheckpointSpec> specs;
    specs.reserve(k_max);
    std::uint64_t prev = 0;
    for (std::uint64_t k = 1; k <= k_max; ++k) {
        const double tk = std::round(std::pow(static_cast<double>(k), m));
        require(tk < 1.8e19, "checkpoint_schedule: time overflows 64 bits");
        const auto t = static_cast<std::uint64_t>(tk);
        if (t <= prev) continue;  // dedup; unreachable for m > 1 but harmless
        specs.push_back({k, t});
        prev = t;
    }
    return specs;
}

std::vector<std::uint64_t> checkpoint_schedule(double m, std::uint64_t k_max) {
    std::vector<std::uint64_t> times;
    for (const CheckpointSpec& s : checkpoint_schedule_specs(m, k_max)) times.push_back(s.t);
    return times;
}

PowerFit fit_power_exponent(std::span<const std::pair<double, double>> points) {
    require(points.size() >= 3, "fit_power_exponent: need at least 3 points");
    std::set<double> ts;
    for (const auto& [t, v] : points) {
        require(t > 0.0, "fit_power_exponent: t must be positive");
        require(v > 0.0, "fit_power_exponent: values must be positive");
        ts.insert(t);
    }
    require(ts.size() == points.size(), "fit_power_exponent: t values must be distinct");

    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (const auto& [t, v] : points) {
        sx += std::log(t);
        sy += std::log(v);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [t, v] : points) {
        const double dx = std::log(t) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(v) - my);
    }
    PowerFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (const auto& [t, v] : points) {
        const double r = std::log(v) - (fit.intercept + fit.slope * std::log(t));
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

std::vector<std::pair<std::uint64_t, double>> median_curve(
    const std::vector<std::vector<std::pair<std::uint64_t, double>>>& curves) {
    require(!curves.empty(), "median_curve: no replicas");
    const std::size_t len = curves[0].size();
    for (const auto& c : curves) {
        require(c.size() == len, "median_curve: replicas have mismatched schedules");
        for (std::size_t i = 0; i < len; ++i)
            require(c[i].first == curves[0][i].first,
                    "median_curve: replicas have mismatched schedules");
    }
    std::vector<std::pair<std::uint64_t, double>> out;
    out.reserve(len);
    std::vector<double> column(curves.size());
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t r = 0; r < curves.size(); ++r) column[r] = curves[r][i].second;
        out.emplace_back(curves[0][i].first, lower_quantile(column, 0.5));
    }
    return out;
}

double lower_quantile(std::vector<double> values, double q) {
    require(!values.empty(), "lower_quantile: empty sample");
    require(q >= 0.0 && q <= 1.0, "lower_quantile: q must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const auto idx = static_cast<std::size_t>(
        std::floor(q * static_cast<double>(values.size() - 1)));
    return values[idx];
}

double RecursionResult::h(std::uint64_t k) const {
    const double kd = static_cast<double>(k);
    switch (branch) {
        case RateBranch::below_c:
            return std::pow(kd, beta_);
        case RateBranch::at_c:
            return std::pow(kd, beta_) / std::log(kd);
        case RateBranch::above_c:
            return std::pow(kd, c_);
    }
    return 0;
}

double RecursionResult::sup_over(std::uint64_t k_lo, std::uint64_t k_hi) const {
    std::uint64_t lo = std::max(k_lo, k0);
    if (branch == RateBranch::at_c) lo = std::max<std::uint64_t>(lo, 2);
    const std::uint64_t hi = std::min(k_hi, k0 + eta.size() - 1);
    double sup = 0;
    for (std::uint64_t k = lo; k <= hi; ++k)
        sup = std::max(sup, eta[static_cast<std::size_t>(k - k0)] * h(k));
    return sup;
}

RecursionResult recursion_iterate(const RecursionParams& p, std::uint64_t K,
                                  RecursionForcing forcing) {
    require(p.C > 0.0, "recursion: C must be positive");
    require(p.D >= 0.0, "recursion: D must be nonnegative");
    require(p.beta_tilde >= 0.0 && p.beta_tilde <= 1.0, "recursion: beta_tilde must lie in [0,1]");
    require(p.epsilon > 0.0 && p.epsilon < 1.0, "recursion: epsilon must lie in (0,1)");
    require(p.eta0 >= 0.0 && p.eta0 <= 1.0 - p.epsilon,
            "recursion: eta0 must lie in [0, 1-epsilon]");
    require(p.k0 >= 1, "recursion: k0 must be positive");
    require(K > p.k0, "recursion: K must exceed k0");

    RecursionResult out;
    out.k0 = p.k0;
    out.c_ = p.C;
    out.beta_ = p.beta_tilde;
    out.branch = p.beta_tilde < p.C   ? RateBranch::below_c
                 : p.beta_tilde > p.C ? RateBranch::above_c
                                      : RateBranch::at_c;
    out.eta.reserve(K - p.k0 + 1);
    out.eta.push_back(p.eta0);

    const double cap = 1.0 - p.epsilon;
    double eta = p.eta0;
    for (std::uint64_t k = p.k0; k < K; ++k) {
        const double kd = static_cast<double>(k);
        double next =
            eta * (1.0 - p.C * (1.0 - eta) / kd) + p.D / std::pow(kd, 1.0 + p.beta_tilde);
        // both forcings take the largest admissible iterate; for k > C the
        // recursion map is monotone in eta so this is also the equality path
        if (next > cap || next < 0.0) {
            ++out.clamp_events;
            next = std::clamp(next, 0.0, cap);
        }
        (void)forcing;
        eta = next;
        out.eta.push_back(eta);
    }
    out.sup_eta_h = out.sup_over(p.k0, K);
    return out;
}

RateBand theorem2_band(int d, bool has_leaf) {
    require(d >= 3, "theorem2_band: requires d >= 3");
    RateBand band;
    band.upper = (d <= 4) ? 1.0 / 3.0 : 1.0 / (d - 1);
    if (has_leaf) band.lower = static_cast<double>(d - 2) / static_cast<double>(d - 1);
    return band;
}

double leaf_exponent_target(int d) {
    require(d >= 3, "leaf_exponent_target: requires d >= 3");
    return 1.0 / (d - 1);
}

}  // namespace vrrw
