#include "vrrw/ensemble.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vrrw {

namespace {

using nlohmann::json;

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::uint64_t get_u64(const json& j, const char* key) {
    const json& v = j.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
        const auto s = v.get<std::int64_t>();
        require(s >= 0, std::string(key) + " must be nonnegative");
        return static_cast<std::uint64_t>(s);
    }
    if (v.is_number_float()) {
        const double f = v.get<double>();
        require(f >= 0 && f < 1.9e19, std::string(key) + " out of range");
        return static_cast<std::uint64_t>(std::llround(f));
    }
    throw std::invalid_argument(std::string(key) + " must be a number");
}

std::uint64_t get_u64_or(const json& j, const char* key, std::uint64_t fallback) {
    return j.contains(key) ? get_u64(j, key) : fallback;
}

double nan_value() { return std::numeric_limits<double>::quiet_NaN(); }

}  // namespace

// ---- GraphSpec ----

GraphTopology GraphSpec::build() const {
    if (family == GraphFamily::complete_like) {
        std::vector<int> r = leaves;
        if (r.empty()) r.assign(d, 0);
        return GraphTopology::complete_like(d, r);
    }
    return GraphTopology::d_partite(class_sizes, leaf_attachments);
}

GraphSpec GraphSpec::from_json(const json& j) {
    GraphSpec spec;
    const std::string fam = j.value("family", "complete_like");
    if (fam == "complete_like") {
        spec.family = GraphFamily::complete_like;
        spec.d = static_cast<int>(get_u64(j, "d"));
        if (j.contains("leaves")) spec.leaves = j.at("leaves").get<std::vector<int>>();
    } else if (fam == "d_partite") {
        spec.family = GraphFamily::d_partite;
        spec.class_sizes = j.at("classes").get<std::vector<int>>();
        spec.d = static_cast<int>(spec.class_sizes.size());
        if (j.contains("leaf_attachments")) {
            for (const json& anchors : j.at("leaf_attachments")) {
                LeafAttachment la;
                la.anchors = anchors.get<std::vector<Vertex>>();
                spec.leaf_attachments.push_back(std::move(la));
            }
        }
    } else {
        throw std::invalid_argument("graph.family must be complete_like or d_partite");
    }
    return spec;
}

json GraphSpec::to_json() const {
    json j;
    if (family == GraphFamily::complete_like) {
        j["family"] = "complete_like";
        j["d"] = d;
        j["leaves"] = leaves.empty() ? std::vector<int>(d, 0) : leaves;
    } else {
        j["family"] = "d_partite";
        j["classes"] = class_sizes;
        json atts = json::array();
        for (const LeafAttachment& la : leaf_attachments) atts.push_back(la.anchors);
        j["leaf_attachments"] = atts;
    }
    return j;
}

// ---- MvrrwSpec / UrnSpec ----

ReinforcementSchedule MvrrwSpec::build_schedule() const {
    if (form == "affine") return ReinforcementSchedule::affine(h0, c);
    if (form == "table") return ReinforcementSchedule::table(table);
    throw std::invalid_argument("mvrrw.form must be affine or table");
}

std::optional<RegimeStat> UrnSpec::resolve_stat() const {
    if (stat == "log-ratio") return RegimeStat::log_ratio;
    if (stat == "shifted-ratio") return RegimeStat::shifted_ratio;
    if (stat == "none") return std::nullopt;
    if (stat == "auto") {
        if (b == 0 && c == 0 && d == 1 && a > d) return RegimeStat::log_ratio;
        if (a == 1 && d == 1 && b == 0 && c > 0) return RegimeStat::shifted_ratio;
        return std::nullopt;
    }
    throw std::invalid_argument("urn.stat must be auto, log-ratio, shifted-ratio or none");
}

// ---- EnsembleConfig ----

void EnsembleConfig::validate() const {
    require(mode == "vrrw" || mode == "mvrrw" || mode == "urn",
            "mode must be vrrw, mvrrw or urn");
    require(replicas >= 1, "replicas must be >= 1");
    require(workers >= 0, "workers must be >= 0");
    if (mode == "urn") {
        require(urn.steps >= 1, "urn.steps must be >= 1");
        require(urn.x0 >= 0 && urn.y0 >= 0 && urn.x0 + urn.y0 > 0,
                "urn initial counts must be nonnegative with positive sum");
        require(urn.a >= 0 && urn.b >= 0 && urn.c >= 0 && urn.d >= 0,
                "urn parameters must be nonnegative");
        (void)urn.resolve_stat();
        require(schedule_m > 1.0, "schedule.m must exceed 1");
        return;
    }
    require(t_max >= 1, "t_max must be set");
    require(schedule_m > 1.0, "schedule.m must exceed 1");
    if (mode == "mvrrw") {
        require(graph.family == GraphFamily::complete_like,
                "mvrrw mode needs a complete-like graph");
        require(graph.d >= 3, "mvrrw mode needs at least 3 interior vertices");
        require(mvrrw.special >= -1 && mvrrw.special < graph.d,
                "mvrrw.special must be an interior vertex");
        (void)mvrrw.build_schedule();
    }
}

EnsembleConfig EnsembleConfig::from_json(const json& j) {
    try {
        EnsembleConfig cfg;
        cfg.mode = j.value("mode", "vrrw");
        if (j.contains("graph")) cfg.graph = GraphSpec::from_json(j.at("graph"));
        if (j.contains("initial_weights"))
            cfg.initial_weights = j.at("initial_weights").get<std::vector<std::uint64_t>>();
        cfg.start = static_cast<Vertex>(get_u64_or(j, "start", 0));
        cfg.t_max = get_u64_or(j, "t_max", 0);
        if (j.contains("schedule")) {
            const json& s = j.at("schedule");
            cfg.schedule_m = s.value("m", 3.0);
            cfg.schedule_k_max = get_u64_or(s, "k_max", 0);
        }
        cfg.replicas = get_u64_or(j, "replicas", 1);
        cfg.replica_offset = get_u64_or(j, "replica_offset", 0);
        cfg.base_seed = get_u64_or(j, "base_seed", 0);
        cfg.workers = static_cast<int>(get_u64_or(j, "workers", 0));
        cfg.out_dir = j.value("out", "");
        if (j.contains("mvrrw")) {
            const json& m = j.at("mvrrw");
            cfg.mvrrw.special = m.contains("special")
                                    ? static_cast<Vertex>(get_u64(m, "special"))
                                    : -1;
            cfg.mvrrw.form = m.value("form", "affine");
            cfg.mvrrw.h0 = m.value("h0", std::int64_t{0});
            cfg.mvrrw.c = get_u64_or(m, "c", 2);
            if (m.contains("values"))
                cfg.mvrrw.table = m.at("values").get<std::vector<std::uint64_t>>();
            cfg.mvrrw.xi_min_t = m.value("xi_min_t", 1e4);
        }
        if (j.contains("urn")) {
            const json& u = j.at("urn");
            cfg.urn.a = u.value("a", 1.0);
            cfg.urn.b = u.value("b", 0.0);
            cfg.urn.c = u.value("c", 0.0);
            cfg.urn.d = u.value("d", 1.0);
            cfg.urn.x0 = u.value("x0", 1.0);
            cfg.urn.y0 = u.value("y0", 1.0);
            cfg.urn.steps = get_u64_or(u, "steps", 0);
            cfg.urn.stat = u.value("stat", "auto");
        }
        if (j.contains("fit")) {
            const json& f = j.at("fit");
            cfg.fit.t_min = f.value("t_min", 1e4);
            cfg.fit.t_max = f.value("t_max", 0.0);
            cfg.fit.band_slack = f.value("band_slack", 0.15);
        }
        cfg.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

EnsembleConfig EnsembleConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return from_json(j);
}

json EnsembleConfig::to_json() const {
    json j;
    j["mode"] = mode;
    if (mode != "urn") {
        j["graph"] = graph.to_json();
        if (!initial_weights.empty()) j["initial_weights"] = initial_weights;
        j["start"] = start;
        j["t_max"] = t_max;
    }
    j["schedule"] = {{"m", schedule_m}, {"k_max", schedule_k_max}};
    j["replicas"] = replicas;
    j["replica_offset"] = replica_offset;
    j["base_seed"] = base_seed;
    j["workers"] = workers;
    if (!out_dir.empty()) j["out"] = out_dir;
    if (mode == "mvrrw") {
        json m;
        m["special"] = mvrrw.special;
        m["form"] = mvrrw.form;
        if (mvrrw.form == "affine") {
            m["h0"] = mvrrw.h0;
            m["c"] = mvrrw.c;
        } else {
            m["values"] = mvrrw.table;
        }
        m["xi_min_t"] = mvrrw.xi_min_t;
        j["mvrrw"] = m;
    }
    if (mode == "urn") {
        j["urn"] = {{"a", urn.a},   {"b", urn.b},   {"c", urn.c},       {"d", urn.d},
                    {"x0", urn.x0}, {"y0", urn.y0}, {"steps", urn.steps}, {"stat", urn.stat}};
    }
    j["fit"] = {{"t_min", fit.t_min}, {"t_max", fit.t_max}, {"band_slack", fit.band_slack}};
    return j;
}

// ---- aggregation helpers ----

QuantileSet quantiles(const std::vector<double>& values) {
    std::vector<double> defined;
    defined.reserve(values.size());
    for (double v : values)
        if (!std::isnan(v)) defined.push_back(v);
    if (defined.empty()) return {nan_value(), nan_value(), nan_value(), nan_value(), nan_value()};
    QuantileSet q;
    q.q10 = lower_quantile(defined, 0.10);
    q.q25 = lower_quantile(defined, 0.25);
    q.q50 = lower_quantile(defined, 0.50);
    q.q75 = lower_quantile(defined, 0.75);
    q.q90 = lower_quantile(defined, 0.90);
    return q;
}

std::vector<CheckpointSpec> plan_checkpoints(double m, std::uint64_t k_max, std::uint64_t t_start,
                                             std::uint64_t t_max) {
    require(t_max >= t_start, "plan_checkpoints: horizon below start time");
    if (k_max == 0) {
        k_max = static_cast<std::uint64_t>(
                    std::floor(std::pow(static_cast<double>(t_max), 1.0 / m))) +
                1;
    }
    std::vector<CheckpointSpec> plan;
    for (const CheckpointSpec& s : checkpoint_schedule_specs(m, k_max)) {
        if (s.t >= t_start && s.t <= t_max) plan.push_back(s);
    }
    if (plan.empty() || plan.back().t != t_max) {
        const std::uint64_t next_k = plan.empty() ? 1 : plan.back().k + 1;
        plan.push_back({next_k, t_max});
    }
    return plan;
}

// ---- per-replica runners ----

namespace {

std::vector<std::uint64_t> resolve_weights(const EnsembleConfig& cfg, const GraphTopology& g) {
    if (cfg.initial_weights.empty())
        return std::vector<std::uint64_t>(static_cast<std::size_t>(g.num_vertices()), 1);
    return cfg.initial_weights;
}

struct MvrrwReplicaOut {
    double min_xi = std::numeric_limits<double>::infinity();
    ExcursionStats excursions;
};

void run_replica_vrrw(const GraphTopology& g, const EnsembleConfig& cfg,
                      std::span<const CheckpointSpec> plan, std::uint64_t slot,
                      std::vector<CheckpointRecord>& out) {
    const std::uint64_t id = cfg.replica_offset + slot;
    Walk walk(g, resolve_weights(cfg, g), cfg.start, replica_seed(cfg.base_seed, id));
    out = walk.run_to(cfg.t_max, plan);
    for (CheckpointRecord& r : out) r.replica = id;
}

void run_replica_mvrrw(const GraphTopology& g, const EnsembleConfig& cfg,
                       std::span<const CheckpointSpec> plan, std::uint64_t slot,
                       std::vector<CheckpointRecord>& out, MvrrwReplicaOut& extra) {
    const std::uint64_t id = cfg.replica_offset + slot;
    const Vertex special = cfg.mvrrw.special >= 0 ? cfg.mvrrw.special : g.d() - 1;
    Walk walk(g, resolve_weights(cfg, g), cfg.start, replica_seed(cfg.base_seed, id),
              SpecialSchedule{special, cfg.mvrrw.build_schedule()});
    // the tracked pair: first two interiors that are not the special vertex
    Vertex first = -1, second = -1;
    for (Vertex v = 0; v < g.num_interior(); ++v) {
        if (v == special) continue;
        if (first < 0)
            first = v;
        else if (second < 0) {
            second = v;
            break;
        }
    }
    ExcursionTracker tracker(special, first, second, /*keep_records=*/false);
    tracker.observe(walk.position());
    const auto xi_from = static_cast<std::uint64_t>(cfg.mvrrw.xi_min_t);
    std::size_t ci = 0;
    while (ci < plan.size() && plan[ci].t < walk.t()) ++ci;
    while (ci < plan.size() && plan[ci].t == walk.t()) {
        out.push_back(walk.checkpoint(plan[ci].k));
        ++ci;
    }
    while (walk.t() < cfg.t_max) {
        walk.step();
        tracker.observe(walk.position());
        if (walk.t() >= xi_from) {
            const double u = static_cast<double>(walk.weight(first));
            const double v = static_cast<double>(walk.weight(second));
            extra.min_xi = std::min(extra.min_xi, u / (u + v));
        }
        if (ci < plan.size() && walk.t() == plan[ci].t) {
            out.push_back(walk.checkpoint(plan[ci].k));
            ++ci;
        }
    }
    for (CheckpointRecord& r : out) r.replica = id;
    extra.excursions = tracker.stats();
}

void run_replica_urn(const EnsembleConfig& cfg, std::span<const CheckpointSpec> plan,
                     std::uint64_t slot, std::vector<UrnSample>& out) {
    const std::uint64_t id = cfg.replica_offset + slot;
    SplitMix64 rng(replica_seed(cfg.base_seed, id));
    UrnState state;
    state.x = cfg.urn.x0;
    state.y = cfg.urn.y0;
    state.params = {cfg.urn.a, cfg.urn.b, cfg.urn.c, cfg.urn.d};
    const std::optional<RegimeStat> which = cfg.urn.resolve_stat();
    auto sample_stat = [&]() -> double {
        if (!which) return nan_value();
        if (*which == RegimeStat::log_ratio) {
            if (state.x <= 1.0) return nan_value();
            if (state.y <= 1.0) return std::numeric_limits<double>::infinity();
            return std::log(state.x) / std::log(state.y);
        }
        if (state.y <= 1.0) return nan_value();
        return state.x / (cfg.urn.c * state.y) - std::log(state.y);
    };
    for (const CheckpointSpec& cp : plan) {
        while (state.n < cp.t) urn_step(state, rng);
        out.push_back({state.n, state.x, state.y, sample_stat()});
    }
}

}  // namespace

// ---- reporting ----

EnsembleReport build_walk_report(const std::vector<std::vector<CheckpointRecord>>& per_replica,
                                 int d, bool has_leaf, const FitSpec& fit,
                                 const std::string& mode) {
    require(!per_replica.empty(), "report: no replicas");
    const std::size_t len = per_replica[0].size();
    for (const auto& rec : per_replica) {
        require(rec.size() == len, "report: replicas have mismatched schedules");
        for (std::size_t i = 0; i < len; ++i)
            require(rec[i].k == per_replica[0][i].k && rec[i].t == per_replica[0][i].t,
                    "report: replicas have mismatched schedules");
    }

    EnsembleReport rep;
    rep.mode = mode;
    rep.d = d;
    rep.has_leaf = has_leaf;
    rep.d2_regime = (d == 2);

    std::vector<std::pair<std::uint64_t, double>> med_sup, med_eta, med_leaf;
    std::vector<double> column(per_replica.size());
    for (std::size_t i = 0; i < len; ++i) {
        CheckpointSummary cs;
        cs.k = per_replica[0][i].k;
        cs.t = per_replica[0][i].t;
        for (std::size_t r = 0; r < per_replica.size(); ++r)
            column[r] = per_replica[r][i].sup_dist;
        cs.sup_dist = quantiles(column);
        med_sup.emplace_back(cs.t, cs.sup_dist.q50);
        for (std::size_t r = 0; r < per_replica.size(); ++r) column[r] = per_replica[r][i].eta;
        cs.eta = quantiles(column);
        med_eta.emplace_back(cs.t, cs.eta.q50);
        for (std::size_t r = 0; r < per_replica.size(); ++r)
            column[r] = static_cast<double>(per_replica[r][i].leaf_total());
        cs.leaf_total = quantiles(column);
        med_leaf.emplace_back(cs.t, cs.leaf_total.q50);
        rep.checkpoints.push_back(cs);
    }

    const double window_hi = fit.t_max > 0 ? fit.t_max : std::numeric_limits<double>::infinity();
    auto fit_curve = [&](const std::vector<std::pair<std::uint64_t, double>>& curve)
        -> std::optional<PowerFit> {
        std::vector<std::pair<double, double>> pts;
        for (const auto& [t, v] : curve) {
            const double td = static_cast<double>(t);
            if (td >= fit.t_min && td <= window_hi && v > 0) pts.emplace_back(td, v);
        }
        if (pts.size() < 3) return std::nullopt;
        return fit_power_exponent(pts);
    };
    rep.fit_sup_dist = fit_curve(med_sup);
    rep.fit_eta = fit_curve(med_eta);
    if (has_leaf) rep.fit_leaf = fit_curve(med_leaf);

    if (mode == "vrrw" && d >= 3) {
        rep.band = theorem2_band(d, has_leaf);
        if (rep.fit_sup_dist) {
            rep.verdict_upper = rep.fit_sup_dist->slope <= -rep.band->upper + fit.band_slack
                                    ? "consistent"
                                    : "violated";
            if (rep.band->lower)
                rep.verdict_lower = rep.fit_sup_dist->slope >= -*rep.band->lower - fit.band_slack
                                        ? "consistent"
                                        : "violated";
        }
    }
    return rep;
}

namespace {

json quantiles_json(const QuantileSet& q) {
    return {{"q10", q.q10}, {"q25", q.q25}, {"q50", q.q50}, {"q75", q.q75}, {"q90", q.q90}};
}

json fit_json(const std::optional<PowerFit>& f) {
    if (!f) return nullptr;
    return {{"slope", f->slope}, {"intercept", f->intercept}, {"residual", f->residual}};
}

EnsembleReport build_urn_report(const std::vector<std::vector<UrnSample>>& traces) {
    EnsembleReport rep;
    rep.mode = "urn";
    const std::size_t len = traces.empty() ? 0 : traces[0].size();
    for (const auto& tr : traces)
        require(tr.size() == len, "report: replicas have mismatched schedules");
    std::vector<double> column(traces.size());
    for (std::size_t i = 0; i < len; ++i) {
        for (std::size_t r = 0; r < traces.size(); ++r) column[r] = traces[r][i].stat;
        rep.urn_stat.emplace_back(traces[0][i].n, quantiles(column));
    }
    if (len > 0) rep.urn_final_median_stat = rep.urn_stat.back().second.q50;
    return rep;
}

}  // namespace

json EnsembleReport::analytic_json() const {
    json j;
    j["mode"] = mode;
    if (mode != "urn") {
        j["d"] = d;
        j["has_leaf"] = has_leaf;
        j["d2_regime"] = d2_regime;
        json cps = json::array();
        for (const CheckpointSummary& c : checkpoints) {
            cps.push_back({{"k", c.k},
                           {"t", c.t},
                           {"sup_dist", quantiles_json(c.sup_dist)},
                           {"eta", quantiles_json(c.eta)},
                           {"leaf_total", quantiles_json(c.leaf_total)}});
        }
        j["checkpoints"] = cps;
        j["fits"] = {{"sup_dist", fit_json(fit_sup_dist)},
                     {"eta", fit_json(fit_eta)},
                     {"leaf", fit_json(fit_leaf)}};
        j["slope_sup_dist"] = fit_sup_dist ? json(fit_sup_dist->slope) : json(nullptr);
        j["slope_eta"] = fit_eta ? json(fit_eta->slope) : json(nullptr);
        j["slope_leaf"] = fit_leaf ? json(fit_leaf->slope) : json(nullptr);
        if (band) {
            j["band"] = {{"upper", band->upper},
                         {"lower", band->lower ? json(*band->lower) : json(nullptr)}};
        } else {
            j["band"] = nullptr;
        }
        j["verdicts"] = {{"upper", verdict_upper}, {"lower", verdict_lower}};
    }
    if (mvrrw) {
        json m;
        m["xi_min_t"] = mvrrw->xi_min_t;
        m["per_replica_min_xi"] = mvrrw->per_replica_min_xi;
        json hist = json::object();
        for (const auto& [mval, cnt] : mvrrw->m_histogram) hist[std::to_string(mval)] = cnt;
        m["excursion_m_histogram"] = hist;
        m["excursion_class_totals"] = {{"A", mvrrw->class_totals[0]},
                                       {"B", mvrrw->class_totals[1]},
                                       {"Abar", mvrrw->class_totals[2]},
                                       {"Bbar", mvrrw->class_totals[3]}};
        j["mvrrw"] = m;
    }
    if (mode == "urn") {
        json stats = json::array();
        for (const auto& [n, q] : urn_stat) stats.push_back({{"n", n}, {"stat", quantiles_json(q)}});
        j["urn"] = {{"stat_quantiles", stats},
                    {"final_median_stat",
                     urn_final_median_stat ? json(*urn_final_median_stat) : json(nullptr)}};
    }
    return j;
}

json EnsembleReport::to_json(const json* config_echo) const {
    json j = analytic_json();
    j["timing"] = {{"runtime_sec", runtime_sec},
                   {"total_steps", total_steps},
                   {"steps_per_sec", steps_per_sec}};
    if (config_echo) j["config"] = *config_echo;
    return j;
}

// ---- ensemble drivers ----

namespace {

void write_outputs(const EnsembleConfig& cfg, const EnsembleResult& result) {
    if (cfg.out_dir.empty()) return;
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory: " + cfg.out_dir);
    const int d = cfg.mode == "urn" ? 0 : cfg.graph.d;
    for (std::uint64_t slot = 0; slot < cfg.replicas; ++slot) {
        const std::uint64_t id = cfg.replica_offset + slot;
        const std::string path = cfg.out_dir + "/records_" + std::to_string(id) + ".csv";
        if (cfg.mode == "urn")
            write_urn_csv(path, result.urn_traces[slot], id);
        else
            write_records_csv(path, result.walk_records[slot], d);
    }
    std::ofstream out(cfg.out_dir + "/report.json", std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report.json in " + cfg.out_dir);
    const json echo = cfg.to_json();
    out << result.report.to_json(&echo).dump(2) << '\n';
    if (!out) throw std::runtime_error("write failed: report.json");
}

EnsembleResult run_impl(const EnsembleConfig& cfg, bool allow_parallel) {
    cfg.validate();
    const auto t_begin = std::chrono::steady_clock::now();
    EnsembleResult result;
    const auto replica_count = static_cast<std::int64_t>(cfg.replicas);
    std::vector<std::string> errors(cfg.replicas);

    int threads = 1;
#ifdef _OPENMP
    if (allow_parallel) threads = cfg.workers > 0 ? cfg.workers : omp_get_max_threads();
#else
    (void)allow_parallel;
#endif

    std::uint64_t steps_per_replica = 0;
    if (cfg.mode == "urn") {
        const auto plan = plan_checkpoints(cfg.schedule_m, cfg.schedule_k_max, 0, cfg.urn.steps);
        steps_per_replica = cfg.urn.steps;
        result.urn_traces.assign(cfg.replicas, {});
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
        for (std::int64_t slot = 0; slot < replica_count; ++slot) {
            try {
                run_replica_urn(cfg, plan, static_cast<std::uint64_t>(slot),
                                result.urn_traces[static_cast<std::size_t>(slot)]);
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(slot)] = e.what();
            }
        }
        for (const std::string& e : errors)
            if (!e.empty()) throw std::runtime_error("replica failed: " + e);
        result.report = build_urn_report(result.urn_traces);
    } else {
        const GraphTopology g = cfg.graph.build();
        const std::vector<std::uint64_t> weights = resolve_weights(cfg, g);
        std::uint64_t t0 = 0;
        for (std::uint64_t w : weights) t0 += w;
        require(cfg.t_max >= t0, "t_max is below the initial time t0 = sum of initial weights");
        steps_per_replica = cfg.t_max - t0;
        const auto plan = plan_checkpoints(cfg.schedule_m, cfg.schedule_k_max, t0, cfg.t_max);
        result.walk_records.assign(cfg.replicas, {});
        std::vector<MvrrwReplicaOut> extras(cfg.mode == "mvrrw" ? cfg.replicas : 0);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
        for (std::int64_t slot = 0; slot < replica_count; ++slot) {
            const auto s = static_cast<std::size_t>(slot);
            try {
                if (cfg.mode == "vrrw")
                    run_replica_vrrw(g, cfg, plan, static_cast<std::uint64_t>(slot),
                                     result.walk_records[s]);
                else
                    run_replica_mvrrw(g, cfg, plan, static_cast<std::uint64_t>(slot),
                                      result.walk_records[s], extras[s]);
            } catch (const std::exception& e) {
                errors[s] = e.what();
            }
        }
        for (const std::string& e : errors)
            if (!e.empty()) throw std::runtime_error("replica failed: " + e);
        result.report = build_walk_report(result.walk_records, g.d(), g.has_leaves(), cfg.fit,
                                          cfg.mode);
        if (cfg.mode == "mvrrw") {
            MvrrwSummary summary;
            summary.xi_min_t = cfg.mvrrw.xi_min_t;
            for (const MvrrwReplicaOut& ex : extras) {
                summary.per_replica_min_xi.push_back(ex.min_xi);
                for (const auto& [mval, cnt] : ex.excursions.m_histogram)
                    summary.m_histogram[mval] += cnt;
                for (int c = 0; c < 4; ++c) summary.class_totals[c] += ex.excursions.class_totals[c];
            }
            result.report.mvrrw = std::move(summary);
        }
    }

    const auto t_end = std::chrono::steady_clock::now();
    result.report.runtime_sec = std::chrono::duration<double>(t_end - t_begin).count();
    result.report.total_steps = steps_per_replica * cfg.replicas;
    result.report.steps_per_sec =
        result.report.runtime_sec > 0
            ? static_cast<double>(result.report.total_steps) / result.report.runtime_sec
            : 0;
    write_outputs(cfg, result);
    return result;
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
    return run_impl(cfg, cfg.workers != 1);
}

EnsembleResult run_ensemble_serial(const EnsembleConfig& cfg) { return run_impl(cfg, false); }

EnsembleReport aggregate(const std::vector<std::string>& csv_paths, const FitSpec& fit) {
    require(!csv_paths.empty(), "aggregate: no input files");
    int d = -1;
    std::map<std::uint64_t, std::vector<CheckpointRecord>> by_replica;
    for (const std::string& path : csv_paths) {
        int file_d = 0;
        std::vector<CheckpointRecord> rows = read_records_csv(path, &file_d);
        if (d < 0) d = file_d;
        if (d != file_d) throw std::runtime_error("aggregate: mixed d across input files");
        for (CheckpointRecord& r : rows) by_replica[r.replica].push_back(std::move(r));
    }
    bool has_leaf = false;
    std::vector<std::vector<CheckpointRecord>> per_replica;
    per_replica.reserve(by_replica.size());
    for (auto& [id, rows] : by_replica) {
        for (const CheckpointRecord& r : rows)
            if (r.leaf_total() > 0) has_leaf = true;
        per_replica.push_back(std::move(rows));
    }
    return build_walk_report(per_replica, d, has_leaf, fit, "vrrw");
}

void write_urn_csv(const std::string& path, const std::vector<UrnSample>& samples,
                   std::uint64_t replica) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "replica,n,X,Y,stat\n";
    for (const UrnSample& s : samples) {
        out << replica << ',' << s.n << ',' << format_double(s.x) << ',' << format_double(s.y)
            << ',' << format_double(s.stat) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace vrrw
