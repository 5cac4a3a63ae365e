#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vrrw/graph.hpp"

namespace vrrw {

// Scheduled observation time: t is the wall time of the snapshot, k the
// schedule index it came from (t = round(k^m) for power-law schedules).
struct CheckpointSpec {
    std::uint64_t k;
    std::uint64_t t;
};

// One row of trajectory telemetry. Weights are aggregated per group
// (interior vertex for complete-like graphs, class for d-partite ones).
// Xi12 is NaN when undefined (second group weight below 2).
struct CheckpointRecord {
    std::uint64_t replica = 0;
    std::uint64_t k = 0;
    std::uint64_t t = 0;
    Vertex pos = 0;
    std::vector<std::uint64_t> group_weight;  // Z_1..Z_d
    std::vector<std::uint64_t> leaf_weight;   // L_1..L_d
    double eta = 0.0;
    double sup_dist = 0.0;
    double xi12 = 0.0;
    double Xi12 = 0.0;

    double theta() const;                 // total leaf weight / t
    std::uint64_t leaf_total() const;
    std::vector<double> pi_groups() const;  // group weights / t
};

// CSV schema (header mandatory, floats with 17 significant digits):
//   replica,k,t,pos,Z_1..Z_d,L_1..L_d,eta,sup_dist,xi_12,Xi_12
std::string records_csv_header(int d);
void write_records_csv(const std::string& path, const std::vector<CheckpointRecord>& records,
                       int d);
std::vector<CheckpointRecord> read_records_csv(const std::string& path, int* d_out = nullptr);

// Locale-independent float formatting used for every CSV/JSON number we emit.
std::string format_double(double x);

}  // namespace vrrw
