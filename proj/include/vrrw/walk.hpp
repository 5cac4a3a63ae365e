#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "vrrw/graph.hpp"
#include "vrrw/records.hpp"
#include "vrrw/rng.hpp"

namespace vrrw {

class Walk;

// Reinforcement value H(k) applied to the special vertex on its k-th visit.
// Must satisfy H(1) >= 1 and H(k+1) >= H(k)+1; affine/table forms are
// validated at construction, the adaptive form on every use (violation is a
// hard error mid-run).
class ReinforcementSchedule {
public:
    using AdaptiveFn = std::function<std::uint64_t(const Walk&, std::uint64_t k)>;

    static ReinforcementSchedule affine(std::int64_t h0, std::uint64_t c);  // H(k) = h0 + c*k
    static ReinforcementSchedule table(std::vector<std::uint64_t> values);  // H(1..n)
    static ReinforcementSchedule adaptive(AdaptiveFn fn);

    std::uint64_t value(std::uint64_t k, const Walk& state) const;

private:
    ReinforcementSchedule() = default;
    enum class Form { affine, table, adaptive } form_ = Form::affine;
    std::int64_t h0_ = 0;
    std::uint64_t c_ = 1;
    std::vector<std::uint64_t> table_;
    AdaptiveFn fn_;
};

struct SpecialSchedule {
    Vertex special;
    ReinforcementSchedule schedule;
};

// Snapshot of the occupation-measure observables at the current time.
struct WalkMetrics {
    std::uint64_t t = 0;
    std::vector<double> pi;                   // per vertex, Z(t,v)/t
    std::vector<std::uint64_t> group_weight;  // Z per interior/class
    std::vector<std::uint64_t> leaf_weight;   // total leaf weight per interior/class
    double sup_dist = 0.0;  // max-norm distance of pi to the uniform target
    double eta = 0.0;       // 1 - d * min_i Z_i/t over interior groups
    double theta = 0.0;     // total leaf weight / t
    double xi12 = 0.0;      // Z_1/(Z_1+Z_2) over the first two groups
    std::optional<double> Xi12;      // log(Z_1+Z_2) - log(Z_2 - 1), needs Z_2 >= 2
    std::optional<double> xi_left;   // d=2 with leaves on both sides only
    std::optional<double> xi_right;
};

// One walker stepping per the linear reinforcement rule: from v, move to
// neighbor w with probability Z(t,w) / sum of Z(t,y) over neighbors y of v.
// With a SpecialSchedule attached, arrival at the special vertex on its k-th
// visit sets that vertex's weight to H(k) instead of incrementing it (the
// global identity sum Z = t is deliberately broken in that mode; t always
// counts true elapsed steps).
//
// The topology is borrowed and must outlive the walk. Identical
// (graph, weights, start, seed, schedule) yields an identical trajectory.
class Walk {
public:
    Walk(const GraphTopology& g, std::vector<std::uint64_t> initial_weights, Vertex start,
         std::uint64_t seed, std::optional<SpecialSchedule> special = std::nullopt);

    void step();

    // Advances to exactly t_target, capturing a record at every checkpoint
    // time crossed (checkpoints sorted by t; times already past are skipped).
    std::vector<CheckpointRecord> run_to(std::uint64_t t_target,
                                         std::span<const CheckpointSpec> checkpoints = {});

    WalkMetrics metrics() const;
    CheckpointRecord checkpoint(std::uint64_t k) const;

    // Exact transition law out of the current position, aligned with
    // graph().neighbors(position()).
    std::vector<double> step_distribution() const;

    std::uint64_t t() const { return t_; }
    std::uint64_t t0() const { return t0_; }
    Vertex position() const { return pos_; }
    std::uint64_t weight(Vertex v) const { return weights_[static_cast<std::size_t>(v)]; }
    std::span<const std::uint64_t> weights() const { return weights_; }
    std::uint64_t group_weight(int group) const;
    std::uint64_t leaf_weight(int group) const;
    std::uint64_t special_visits() const { return special_visits_; }
    bool has_special() const { return special_.has_value(); }
    Vertex special_vertex() const;
    const GraphTopology& graph() const { return *graph_; }

private:
    const GraphTopology* graph_;
    std::vector<std::uint64_t> weights_;
    std::uint64_t t_ = 0;
    std::uint64_t t0_ = 0;
    Vertex pos_ = 0;
    SplitMix64 rng_;
    std::optional<SpecialSchedule> special_;
    std::uint64_t special_visits_ = 0;
    std::uint64_t last_h_ = 0;
};

// ---- Excursion bookkeeping (triangle with a special/observation vertex) ----

enum class ExcursionClass : int { A = 0, B = 1, Abar = 2, Bbar = 3 };

struct ExcursionRecord {
    std::uint64_t index;         // completed-excursion counter, from 1
    Vertex start;                // first tracked vertex entered after leaving special
    std::uint64_t visits_first;  // visits to the lower tracked vertex
    std::uint64_t visits_second;
    ExcursionClass cls;

    // Shuttle count m: visits to the start-side vertex (A_m/B_m count visits
    // to the first vertex, the barred classes count visits to the second).
    std::uint64_t m() const {
        return (cls == ExcursionClass::A || cls == ExcursionClass::B) ? visits_first
                                                                      : visits_second;
    }
};

struct ExcursionStats {
    std::vector<ExcursionRecord> records;
    std::map<std::uint64_t, std::uint64_t> m_histogram;  // combined over the four classes
    std::array<std::uint64_t, 4> class_totals{};         // indexed by ExcursionClass
    std::uint64_t completed = 0;
    std::uint64_t leaf_only = 0;  // excursions that never touched the tracked pair
};

// Feed the position stream (including the initial position); excursions are
// the segments between consecutive visits to `special`, classified by start
// and last tracked vertex. Leaf visits inside an excursion do not affect the
// classification.
class ExcursionTracker {
public:
    ExcursionTracker(Vertex special, Vertex first, Vertex second, bool keep_records = true);
    void observe(Vertex pos);
    const ExcursionStats& stats() const { return stats_; }

private:
    void close_excursion();
    Vertex special_, first_, second_;
    bool keep_records_;
    bool armed_ = false;  // becomes true at the first visit to special
    Vertex start_ = -1, last_ = -1;
    std::uint64_t visits_first_ = 0, visits_second_ = 0;
    ExcursionStats stats_;
};

ExcursionStats excursion_stats(std::span<const Vertex> path, Vertex special, Vertex first,
                               Vertex second);

// Probability that the non-special vertex entered first is visited at least
// m times during one excursion, given weights u, v at the tracked pair and a
// at the special vertex.  exact:
//   u/(u+v) * prod_{j=0}^{m-2} (v+j)/(v+j+a) * (u+j+1)/(u+j+1+a)
// geometric: u/(u+v) * nu^{m-1} with nu = (1-a/(a+u)) * (1-a/(a+v)).
enum class TailMode { exact, geometric };
double excursion_tail_prob(std::uint64_t u, std::uint64_t v, std::uint64_t a, std::uint64_t m,
                           TailMode mode);

}  // namespace vrrw
