#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vrrw/graph.hpp"
#include "vrrw/rates.hpp"
#include "vrrw/records.hpp"
#include "vrrw/urn.hpp"
#include "vrrw/walk.hpp"

namespace vrrw {

struct GraphSpec {
    GraphFamily family = GraphFamily::complete_like;
    int d = 3;
    std::vector<int> leaves;                      // complete-like
    std::vector<int> class_sizes;                 // d-partite
    std::vector<LeafAttachment> leaf_attachments;  // d-partite

    GraphTopology build() const;
    static GraphSpec from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

struct MvrrwSpec {
    Vertex special = -1;  // -1: last interior vertex
    std::string form = "affine";
    std::int64_t h0 = 0;
    std::uint64_t c = 2;
    std::vector<std::uint64_t> table;
    double xi_min_t = 1e4;  // running min of xi(t) is tracked from this time on

    ReinforcementSchedule build_schedule() const;
};

struct UrnSpec {
    double a = 1, b = 0, c = 0, d = 1;
    double x0 = 1, y0 = 1;
    std::uint64_t steps = 0;
    std::string stat = "auto";  // auto | log-ratio | shifted-ratio | none

    std::optional<RegimeStat> resolve_stat() const;
};

struct FitSpec {
    double t_min = 1e4;      // burn-in cut for exponent fits
    double t_max = 0;        // 0: unbounded
    double band_slack = 0.15;
};

struct EnsembleConfig {
    std::string mode = "vrrw";  // vrrw | mvrrw | urn
    GraphSpec graph;
    std::vector<std::uint64_t> initial_weights;  // empty: one per vertex
    Vertex start = 0;
    std::uint64_t t_max = 0;
    double schedule_m = 3.0;
    std::uint64_t schedule_k_max = 0;  // 0: derived from the horizon
    std::uint64_t replicas = 1;
    std::uint64_t replica_offset = 0;
    std::uint64_t base_seed = 0;
    int workers = 0;  // 0: all available
    std::string out_dir;
    MvrrwSpec mvrrw;
    UrnSpec urn;
    FitSpec fit;

    void validate() const;
    static EnsembleConfig from_json(const nlohmann::json& j);
    static EnsembleConfig from_json_file(const std::string& path);
    nlohmann::json to_json() const;
};

struct QuantileSet {
    double q10 = 0, q25 = 0, q50 = 0, q75 = 0, q90 = 0;
};
QuantileSet quantiles(const std::vector<double>& values);

struct CheckpointSummary {
    std::uint64_t k = 0, t = 0;
    QuantileSet sup_dist, eta, leaf_total;
};

struct UrnSample {
    std::uint64_t n = 0;
    double x = 0, y = 0;
    double stat = 0;  // NaN when undefined or not requested
};

struct MvrrwSummary {
    double xi_min_t = 0;
    std::vector<double> per_replica_min_xi;            // indexed by replica slot
    std::map<std::uint64_t, std::uint64_t> m_histogram;  // excursion shuttle counts, pooled
    std::array<std::uint64_t, 4> class_totals{};
};

struct EnsembleReport {
    std::string mode;
    int d = 0;
    bool has_leaf = false;
    bool d2_regime = false;  // d = 2 lies outside the d >= 3 band statements
    std::vector<CheckpointSummary> checkpoints;
    std::optional<PowerFit> fit_sup_dist, fit_eta, fit_leaf;
    std::optional<RateBand> band;
    std::string verdict_upper = "n/a", verdict_lower = "n/a";
    std::optional<MvrrwSummary> mvrrw;
    std::vector<std::pair<std::uint64_t, QuantileSet>> urn_stat;  // urn mode
    std::optional<double> urn_final_median_stat;
    double runtime_sec = 0;
    std::uint64_t total_steps = 0;
    double steps_per_sec = 0;

    nlohmann::json to_json(const nlohmann::json* config_echo = nullptr) const;
    // the report without its timing section; this part is a pure function
    // of the config
    nlohmann::json analytic_json() const;
};

struct EnsembleResult {
    EnsembleReport report;
    std::vector<std::vector<CheckpointRecord>> walk_records;  // per replica slot
    std::vector<std::vector<UrnSample>> urn_traces;           // per replica slot (urn mode)
};

// Runs the ensemble with OpenMP across replicas (workers = 1 or a build
// without OpenMP degrade to the serial path). Persists records_<replica>.csv
// and report.json when out_dir is set. Output is byte-identical to
// run_ensemble_serial for the same config.
EnsembleResult run_ensemble(const EnsembleConfig& cfg);

// Reference implementation: one replica after another, no threading.
EnsembleResult run_ensemble_serial(const EnsembleConfig& cfg);

// Rebuilds the analytic report from persisted record CSVs (walk modes).
EnsembleReport aggregate(const std::vector<std::string>& csv_paths, const FitSpec& fit);

// Report construction shared by run_ensemble and aggregate.
EnsembleReport build_walk_report(const std::vector<std::vector<CheckpointRecord>>& per_replica,
                                 int d, bool has_leaf, const FitSpec& fit,
                                 const std::string& mode);

// The checkpoint plan actually used for a horizon: schedule times inside
// [t_start, t_max], with a forced final checkpoint at t_max.
std::vector<CheckpointSpec> plan_checkpoints(double m, std::uint64_t k_max, std::uint64_t t_start,
                                             std::uint64_t t_max);

void write_urn_csv(const std::string& path, const std::vector<UrnSample>& samples,
                   std::uint64_t replica);

}  // namespace vrrw
