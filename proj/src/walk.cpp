#include "vrrw/walk.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace vrrw {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

// ---- ReinforcementSchedule ----

ReinforcementSchedule ReinforcementSchedule::affine(std::int64_t h0, std::uint64_t c) {
    require(c >= 1, "schedule: affine increment c must be >= 1");
    require(h0 + static_cast<std::int64_t>(c) >= 1, "schedule: H(1) must be >= 1");
    ReinforcementSchedule s;
    s.form_ = Form::affine;
    s.h0_ = h0;
    s.c_ = c;
    return s;
}

ReinforcementSchedule ReinforcementSchedule::table(std::vector<std::uint64_t> values) {
    require(!values.empty(), "schedule: empty table");
    require(values[0] >= 1, "schedule: H(1) must be >= 1");
    for (std::size_t k = 1; k < values.size(); ++k)
        require(values[k] >= values[k - 1] + 1, "schedule: H(k+1) >= H(k)+1 violated at k=" +
                                                    std::to_string(k + 1));
    ReinforcementSchedule s;
    s.form_ = Form::table;
    s.table_ = std::move(values);
    return s;
}

ReinforcementSchedule ReinforcementSchedule::adaptive(AdaptiveFn fn) {
    require(static_cast<bool>(fn), "schedule: null adaptive hook");
    ReinforcementSchedule s;
    s.form_ = Form::adaptive;
    s.fn_ = std::move(fn);
    return s;
}

std::uint64_t ReinforcementSchedule::value(std::uint64_t k, const Walk& state) const {
    switch (form_) {
        case Form::affine: {
            const std::int64_t h = h0_ + static_cast<std::int64_t>(c_ * k);
            return static_cast<std::uint64_t>(h);
        }
        case Form::table:
            if (k == 0 || k > table_.size())
                throw std::out_of_range("schedule: table exhausted at visit " + std::to_string(k));
            return table_[k - 1];
        case Form::adaptive:
            return fn_(state, k);
    }
    return 0;  // unreachable
}

// ---- Walk ----

Walk::Walk(const GraphTopology& g, std::vector<std::uint64_t> initial_weights, Vertex start,
           std::uint64_t seed, std::optional<SpecialSchedule> special)
    : graph_(&g), weights_(std::move(initial_weights)), rng_(seed), special_(std::move(special)) {
    require(static_cast<int>(weights_.size()) == g.num_vertices(),
            "init_walk: weight vector length must equal vertex count");
    for (std::uint64_t z : weights_)
        require(z >= 1, "init_walk: initial weights must be positive");
    require(g.contains(start) && !g.is_leaf(start), "init_walk: start must be an interior vertex");
    pos_ = start;
    t0_ = 0;
    for (std::uint64_t z : weights_) t0_ += z;
    t_ = t0_;
    if (special_) {
        require(g.contains(special_->special) && !g.is_leaf(special_->special),
                "init_walk: special vertex must be interior");
    }
}

void Walk::step() {
    const auto nbrs = graph_->neighbors(pos_);
    Vertex next;
    if (nbrs.size() == 1) {
        next = nbrs[0];  // a leaf returns to its attachment vertex surely
    } else {
        std::uint64_t total = 0;
        for (Vertex w : nbrs) total += weights_[static_cast<std::size_t>(w)];
        std::uint64_t r = rng_.bounded(total);
        next = nbrs.back();
        for (Vertex w : nbrs) {
            const std::uint64_t z = weights_[static_cast<std::size_t>(w)];
            if (r < z) {
                next = w;
                break;
            }
            r -= z;
        }
    }
    pos_ = next;
    ++t_;
    if (special_ && next == special_->special) {
        ++special_visits_;
        // the adaptive hook sees the arrival state, before the weight reset
        const std::uint64_t h = special_->schedule.value(special_visits_, *this);
        if (special_visits_ == 1) {
            if (h < 1) throw std::runtime_error("schedule: H(1) < 1");
        } else if (h < last_h_ + 1) {
            throw std::runtime_error("schedule: H(k+1) >= H(k)+1 violated at visit " +
                                     std::to_string(special_visits_));
        }
        last_h_ = h;
        weights_[static_cast<std::size_t>(next)] = h;
    } else {
        ++weights_[static_cast<std::size_t>(next)];
    }
#ifndef NDEBUG
    if (!special_) {
        std::uint64_t sum = 0;
        for (std::uint64_t z : weights_) sum += z;
        assert(sum == t_ && "weight conservation violated");
    }
#endif
}

std::vector<CheckpointRecord> Walk::run_to(std::uint64_t t_target,
                                           std::span<const CheckpointSpec> checkpoints) {
    require(t_target >= t_, "run_to: target time below current time");
    std::vector<CheckpointRecord> records;
    std::size_t ci = 0;
    while (ci < checkpoints.size() && checkpoints[ci].t < t_) ++ci;  // unreachable checkpoints
    for (;;) {
        std::uint64_t stop = t_target;
        bool at_checkpoint = false;
        if (ci < checkpoints.size() && checkpoints[ci].t <= t_target) {
            stop = checkpoints[ci].t;
            at_checkpoint = true;
        }
        while (t_ < stop) step();
        if (!at_checkpoint) break;
        records.push_back(checkpoint(checkpoints[ci].k));
        ++ci;
    }
    return records;
}

std::uint64_t Walk::group_weight(int group) const {
    std::uint64_t z = 0;
    for (Vertex v : graph_->group_members(group)) z += weights_[static_cast<std::size_t>(v)];
    return z;
}

std::uint64_t Walk::leaf_weight(int group) const {
    std::uint64_t l = 0;
    for (Vertex v : graph_->group_leaves(group)) l += weights_[static_cast<std::size_t>(v)];
    return l;
}

Vertex Walk::special_vertex() const {
    require(special_.has_value(), "walk has no special vertex");
    return special_->special;
}

WalkMetrics Walk::metrics() const {
    const GraphTopology& g = *graph_;
    const int d = g.d();
    WalkMetrics m;
    m.t = t_;
    const double td = static_cast<double>(t_);
    m.pi.resize(g.num_vertices());
    for (int v = 0; v < g.num_vertices(); ++v)
        m.pi[v] = static_cast<double>(weights_[static_cast<std::size_t>(v)]) / td;

    m.group_weight.resize(d);
    m.leaf_weight.resize(d);
    std::uint64_t min_group = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t leaf_sum = 0;
    for (int i = 0; i < d; ++i) {
        m.group_weight[i] = group_weight(i);
        m.leaf_weight[i] = leaf_weight(i);
        min_group = std::min(min_group, m.group_weight[i]);
        leaf_sum += m.leaf_weight[i];
    }

    // sup distance: per-vertex for complete-like, per aggregated class
    // coordinate for d-partite
    const double unif = 1.0 / d;
    double sup = 0.0;
    if (g.family() == GraphFamily::complete_like) {
        for (int v = 0; v < g.num_vertices(); ++v) {
            const double target = v < d ? unif : 0.0;
            sup = std::max(sup, std::abs(m.pi[v] - target));
        }
    } else {
        for (int i = 0; i < d; ++i) {
            sup = std::max(sup, std::abs(static_cast<double>(m.group_weight[i]) / td - unif));
            sup = std::max(sup, static_cast<double>(m.leaf_weight[i]) / td);
        }
    }
    m.sup_dist = sup;
    m.eta = 1.0 - d * (static_cast<double>(min_group) / td);
    m.theta = static_cast<double>(leaf_sum) / td;

    const double z1 = static_cast<double>(m.group_weight[0]);
    const double z2 = static_cast<double>(m.group_weight[1]);
    m.xi12 = z1 / (z1 + z2);
    if (m.group_weight[1] >= 2) m.Xi12 = std::log(z1 + z2) - std::log(z2 - 1.0);

    if (g.family() == GraphFamily::complete_like && d == 2 && g.leaf_count(0) >= 1 &&
        g.leaf_count(1) >= 1) {
        const double l = static_cast<double>(m.leaf_weight[0]);
        const double r = static_cast<double>(m.leaf_weight[1]);
        m.xi_left = l / (l + z2);
        m.xi_right = r / (r + z1);
    }
    return m;
}

CheckpointRecord Walk::checkpoint(std::uint64_t k) const {
    const WalkMetrics m = metrics();
    CheckpointRecord r;
    r.k = k;
    r.t = t_;
    r.pos = pos_;
    r.group_weight = m.group_weight;
    r.leaf_weight = m.leaf_weight;
    r.eta = m.eta;
    r.sup_dist = m.sup_dist;
    r.xi12 = m.xi12;
    r.Xi12 = m.Xi12 ? *m.Xi12 : std::nan("");
    return r;
}

std::vector<double> Walk::step_distribution() const {
    const auto nbrs = graph_->neighbors(pos_);
    std::uint64_t total = 0;
    for (Vertex w : nbrs) total += weights_[static_cast<std::size_t>(w)];
    std::vector<double> p(nbrs.size());
    for (std::size_t i = 0; i < nbrs.size(); ++i)
        p[i] = static_cast<double>(weights_[static_cast<std::size_t>(nbrs[i])]) /
               static_cast<double>(total);
    return p;
}

// ---- excursions ----

ExcursionTracker::ExcursionTracker(Vertex special, Vertex first, Vertex second, bool keep_records)
    : special_(special), first_(first), second_(second), keep_records_(keep_records) {
    if (special == first || special == second || first == second)
        throw std::invalid_argument("excursions: special/first/second must be distinct");
}

void ExcursionTracker::close_excursion() {
    if (visits_first_ + visits_second_ == 0) {
        ++stats_.leaf_only;
        return;
    }
    ExcursionClass cls;
    if (start_ == first_)
        cls = (last_ == first_) ? ExcursionClass::A : ExcursionClass::B;
    else
        cls = (last_ == second_) ? ExcursionClass::Abar : ExcursionClass::Bbar;
    ++stats_.completed;
    ExcursionRecord rec{stats_.completed, start_, visits_first_, visits_second_, cls};
    ++stats_.class_totals[static_cast<int>(cls)];
    ++stats_.m_histogram[rec.m()];
    if (keep_records_) stats_.records.push_back(rec);
}

void ExcursionTracker::observe(Vertex pos) {
    if (pos == special_) {
        if (armed_) close_excursion();
        armed_ = true;
        start_ = last_ = -1;
        visits_first_ = visits_second_ = 0;
        return;
    }
    if (!armed_) return;
    if (pos == first_) {
        if (start_ == -1) start_ = first_;
        ++visits_first_;
        last_ = first_;
    } else if (pos == second_) {
        if (start_ == -1) start_ = second_;
        ++visits_second_;
        last_ = second_;
    }
    // other vertices (leaves) leave the classification untouched
}

ExcursionStats excursion_stats(std::span<const Vertex> path, Vertex special, Vertex first,
                               Vertex second) {
    ExcursionTracker tracker(special, first, second);
    for (Vertex v : path) tracker.observe(v);
    return tracker.stats();
}

double excursion_tail_prob(std::uint64_t u, std::uint64_t v, std::uint64_t a, std::uint64_t m,
                           TailMode mode) {
    require(u >= 1 && v >= 1 && a >= 1, "excursion_tail_prob: u, v, a must be positive");
    require(m >= 1, "excursion_tail_prob: m must be >= 1");
    const double ud = static_cast<double>(u), vd = static_cast<double>(v),
                 ad = static_cast<double>(a);
    double p = ud / (ud + vd);
    if (mode == TailMode::exact) {
        for (std::uint64_t j = 0; j + 2 <= m; ++j) {
            const double jd = static_cast<double>(j);
            p *= (vd + jd) / (vd + jd + ad);
            p *= (ud + jd + 1.0) / (ud + jd + 1.0 + ad);
        }
        return p;
    }
    const double nu = (ud / (ad + ud)) * (vd / (ad + vd));
    return p * std::pow(nu, static_cast<double>(m - 1));
}

}  // namespace vrrw
