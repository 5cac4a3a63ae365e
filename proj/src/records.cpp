#include "vrrw/records.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vrrw {

double CheckpointRecord::theta() const {
    return t == 0 ? 0.0 : static_cast<double>(leaf_total()) / static_cast<double>(t);
}

std::uint64_t CheckpointRecord::leaf_total() const {
    std::uint64_t s = 0;
    for (std::uint64_t l : leaf_weight) s += l;
    return s;
}

std::vector<double> CheckpointRecord::pi_groups() const {
    std::vector<double> pi(group_weight.size());
    for (std::size_t i = 0; i < pi.size(); ++i)
        pi[i] = static_cast<double>(group_weight[i]) / static_cast<double>(t);
    return pi;
}

std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

std::string records_csv_header(int d) {
    std::string h = "replica,k,t,pos";
    for (int i = 1; i <= d; ++i) h += ",Z_" + std::to_string(i);
    for (int i = 1; i <= d; ++i) h += ",L_" + std::to_string(i);
    h += ",eta,sup_dist,xi_12,Xi_12";
    return h;
}

void write_records_csv(const std::string& path, const std::vector<CheckpointRecord>& records,
                       int d) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << records_csv_header(d) << '\n';
    for (const CheckpointRecord& r : records) {
        if (static_cast<int>(r.group_weight.size()) != d ||
            static_cast<int>(r.leaf_weight.size()) != d)
            throw std::runtime_error("record width does not match d");
        out << r.replica << ',' << r.k << ',' << r.t << ',' << r.pos;
        for (std::uint64_t z : r.group_weight) out << ',' << z;
        for (std::uint64_t l : r.leaf_weight) out << ',' << l;
        out << ',' << format_double(r.eta) << ',' << format_double(r.sup_dist) << ','
            << format_double(r.xi12) << ',' << format_double(r.Xi12) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

std::uint64_t parse_u64(const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("bad integer field: '" + s + "'");
    return v;
}

double parse_f64(const std::string& s) {
    if (s == "nan" || s == "-nan") return std::nan("");
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw std::runtime_error("bad float field: '" + s + "'");
    return v;
}

}  // namespace

std::vector<CheckpointRecord> read_records_csv(const std::string& path, int* d_out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);

    // infer d from the header and insist on the exact schema
    const auto head = split_csv_line(line);
    int d = 0;
    for (const std::string& f : head)
        if (f.rfind("Z_", 0) == 0) ++d;
    if (d < 2 || line != records_csv_header(d))
        throw std::runtime_error("unexpected CSV schema in " + path);
    if (d_out) *d_out = d;

    std::vector<CheckpointRecord> records;
    const std::size_t width = 4 + 2 * static_cast<std::size_t>(d) + 4;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != width) throw std::runtime_error("bad CSV row width in " + path);
        CheckpointRecord r;
        r.replica = parse_u64(f[0]);
        r.k = parse_u64(f[1]);
        r.t = parse_u64(f[2]);
        r.pos = static_cast<Vertex>(parse_u64(f[3]));
        for (int i = 0; i < d; ++i) r.group_weight.push_back(parse_u64(f[4 + i]));
        for (int i = 0; i < d; ++i) r.leaf_weight.push_back(parse_u64(f[4 + d + i]));
        r.eta = parse_f64(f[4 + 2 * d]);
        r.sup_dist = parse_f64(f[5 + 2 * d]);
        r.xi12 = parse_f64(f[6 + 2 * d]);
        r.Xi12 = parse_f64(f[7 + 2 * d]);
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace vrrw
