#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "vrrw/graph.hpp"
#include "vrrw/walk.hpp"

using namespace vrrw;

namespace {

// Independent oracle for the excursion tail probability: enumerate every
// excursion prefix of the frozen-special triangle dynamics (weights u, v at
// the shuttle pair, a at the special vertex, each shuttle visit adding 1)
// and accumulate the probability of reaching m visits to the first vertex.
double tail_prob_oracle(std::uint64_t u, std::uint64_t v, std::uint64_t a, std::uint64_t m) {
    double total = 0.0;
    // pos: 1 = first vertex, 2 = second vertex
    auto walk = [&](auto&& self, int pos, std::uint64_t i, std::uint64_t j, double prob) -> void {
        if (i >= m) {
            total += prob;
            return;
        }
        const double ad = static_cast<double>(a);
        if (pos == 1) {
            const double w2 = static_cast<double>(v + j);
            self(self, 2, i, j + 1, prob * w2 / (w2 + ad));
            // step to the special vertex ends the excursion
        } else {
            const double w1 = static_cast<double>(u + i);
            self(self, 1, i + 1, j, prob * w1 / (w1 + ad));
        }
    };
    // the event requires the excursion to open at the first vertex
    const double ud = static_cast<double>(u), vd = static_cast<double>(v);
    walk(walk, 1, 1, 0, ud / (ud + vd));
    return total;
}

GraphTopology triangle() { return GraphTopology::complete_like(3, {0, 0, 0}); }

}  // namespace

TEST_CASE("excursion tail probability agrees with path enumeration") {
    for (std::uint64_t u = 1; u <= 4; ++u)
        for (std::uint64_t v = 1; v <= 4; ++v)
            for (std::uint64_t a = 1; a <= 4; ++a)
                for (std::uint64_t m = 1; m <= 4; ++m) {
                    const double exact = excursion_tail_prob(u, v, a, m, TailMode::exact);
                    CHECK(exact == doctest::Approx(tail_prob_oracle(u, v, a, m)).epsilon(1e-12));
                }
}

TEST_CASE("excursion tail probability worked values") {
    CHECK(excursion_tail_prob(2, 1, 3, 2, TailMode::exact) ==
          doctest::Approx(1.0 / 12.0).epsilon(1e-14));
    // m = 1 is the empty product in both modes
    for (std::uint64_t u = 1; u <= 3; ++u)
        for (std::uint64_t v = 1; v <= 3; ++v) {
            const double first = static_cast<double>(u) / (u + v);
            CHECK(excursion_tail_prob(u, v, 2, 1, TailMode::exact) == doctest::Approx(first));
            CHECK(excursion_tail_prob(u, v, 2, 1, TailMode::geometric) == doctest::Approx(first));
        }
    // u = v = a gives nu = 1/4
    for (std::uint64_t m = 1; m <= 5; ++m) {
        CHECK(excursion_tail_prob(3, 3, 3, m, TailMode::geometric) ==
              doctest::Approx(0.5 * std::pow(4.0, 1.0 - static_cast<double>(m))).epsilon(1e-14));
    }
}

TEST_CASE("excursion tail probability is nonincreasing in m") {
    for (std::uint64_t u = 1; u <= 4; ++u)
        for (std::uint64_t v = 1; v <= 4; ++v)
            for (std::uint64_t a = 1; a <= 4; ++a) {
                double prev = 1.0;
                for (std::uint64_t m = 1; m <= 6; ++m) {
                    const double p = excursion_tail_prob(u, v, a, m, TailMode::exact);
                    CHECK(p <= prev + 1e-15);
                    prev = p;
                }
            }
    CHECK_THROWS_AS(excursion_tail_prob(0, 1, 1, 1, TailMode::exact), std::invalid_argument);
    CHECK_THROWS_AS(excursion_tail_prob(1, 1, 1, 0, TailMode::exact), std::invalid_argument);
}

TEST_CASE("initialization sets t0 and validates input") {
    const auto g = triangle();
    Walk w(g, {1, 1, 1}, 0, 42);
    CHECK(w.t0() == 3);
    CHECK(w.t() == 3);
    CHECK(w.position() == 0);
    const auto m = w.metrics();
    CHECK(m.pi == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
    CHECK(m.sup_dist == 0.0);
    CHECK(m.eta == 0.0);

    CHECK_THROWS_AS(Walk(g, {1, 0, 1}, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(Walk(g, {1, 1}, 0, 1), std::invalid_argument);
    const auto gl = GraphTopology::complete_like(3, {0, 0, 1});
    CHECK_THROWS_AS(Walk(gl, {1, 1, 1, 1}, 3, 1), std::invalid_argument);  // leaf start
}

TEST_CASE("schedule validation") {
    CHECK_NOTHROW(ReinforcementSchedule::affine(0, 1));  // H(k) = k
    CHECK_THROWS_AS(ReinforcementSchedule::affine(5, 0), std::invalid_argument);
    CHECK_THROWS_AS(ReinforcementSchedule::affine(-3, 1), std::invalid_argument);  // H(1) < 1
    CHECK_NOTHROW(ReinforcementSchedule::table({1, 2, 4}));
    CHECK_THROWS_AS(ReinforcementSchedule::table({1, 1, 3}), std::invalid_argument);
    CHECK_THROWS_AS(ReinforcementSchedule::table({0, 1}), std::invalid_argument);
}

TEST_CASE("step distribution matches the reinforcement rule") {
    const auto g = GraphTopology::complete_like(3, {0, 0, 1});
    // at vertex 2 with weights 2, 3 at the other interiors and 5 at the leaf
    Walk w(g, {2, 3, 1, 5}, 2, 9);
    const auto p = w.step_distribution();
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(0.2));
    CHECK(p[1] == doctest::Approx(0.3));
    CHECK(p[2] == doctest::Approx(0.5));
}

TEST_CASE("a leaf returns to its attachment vertex") {
    const auto g = GraphTopology::complete_like(3, {0, 0, 1});
    Walk w(g, {1, 1, 1, 50}, 2, 5);  // heavy leaf: the walk will visit it quickly
    bool seen_leaf = false;
    for (int s = 0; s < 200 && !seen_leaf; ++s) {
        w.step();
        if (w.position() == 3) {
            seen_leaf = true;
            w.step();
            CHECK(w.position() == 2);
        }
    }
    CHECK(seen_leaf);
}

TEST_CASE("weight conservation for the plain walk") {
    const auto g = GraphTopology::complete_like(4, {1, 0, 2, 0});
    Walk w(g, std::vector<std::uint64_t>(7, 1), 0, 123);
    for (int s = 0; s < 10000; ++s) {
        w.step();
        std::uint64_t sum = 0;
        for (std::uint64_t z : w.weights()) sum += z;
        REQUIRE(sum == w.t());
    }
}

TEST_CASE("special vertex weight follows the schedule") {
    const auto g = triangle();
    Walk w(g, {1, 1, 1}, 0, 7,
           SpecialSchedule{2, ReinforcementSchedule::affine(0, 2)});  // H(k) = 2k
    std::uint64_t visits = 0;
    for (int s = 0; s < 5000; ++s) {
        w.step();
        if (w.position() == 2) {
            ++visits;
            REQUIRE(w.special_visits() == visits);
            REQUIRE(w.weight(2) == 2 * visits);
        } else {
            REQUIRE(w.weight(2) == (visits == 0 ? 1 : 2 * visits));
        }
    }
    CHECK(visits >= 3);  // the H(k)=2k triangle revisits its special vertex often
    // sum of weights deliberately drifts away from t in this mode
    std::uint64_t sum = 0;
    for (std::uint64_t z : w.weights()) sum += z;
    CHECK(sum != w.t());
}

TEST_CASE("adaptive schedules are checked at use time") {
    const auto g = triangle();
    auto bad = ReinforcementSchedule::adaptive(
        [](const Walk&, std::uint64_t) -> std::uint64_t { return 5; });  // constant violates EH
    Walk w(g, {1, 1, 1}, 0, 3, SpecialSchedule{2, bad});
    CHECK_THROWS_AS(
        [&] {
            for (int s = 0; s < 10000; ++s) w.step();
        }(),
        std::runtime_error);

    // an admissible adaptive rule: H(k) = current time + k keeps H strictly growing
    auto ok = ReinforcementSchedule::adaptive(
        [](const Walk& state, std::uint64_t k) { return state.t() + k; });
    Walk w2(g, {1, 1, 1}, 0, 3, SpecialSchedule{2, ok});
    CHECK_NOTHROW([&] {
        for (int s = 0; s < 10000; ++s) w2.step();
    }());
}

TEST_CASE("run_to captures scheduled checkpoints exactly") {
    const auto g = triangle();
    Walk w(g, {1, 1, 1}, 0, 42);
    const auto none = w.run_to(3);
    CHECK(none.empty());
    CHECK(w.t() == 3);

    const std::vector<CheckpointSpec> plan{{2, 8}, {3, 27}};
    auto records = w.run_to(40, plan);
    REQUIRE(records.size() == 2);
    CHECK(records[0].t == 8);
    CHECK(records[0].k == 2);
    CHECK(records[1].t == 27);
    CHECK(records[1].k == 3);
    CHECK(w.t() == 40);
    CHECK_THROWS_AS(w.run_to(10), std::invalid_argument);
}

TEST_CASE("same seed gives identical trajectories") {
    const auto g = GraphTopology::complete_like(3, {0, 0, 1});
    const std::vector<CheckpointSpec> plan{{1, 100}, {2, 5000}, {3, 100000}};
    Walk a(g, {1, 1, 1, 1}, 0, 987);
    Walk b(g, {1, 1, 1, 1}, 0, 987);
    const auto ra = a.run_to(100000, plan);
    const auto rb = b.run_to(100000, plan);
    CHECK(std::vector<std::uint64_t>(a.weights().begin(), a.weights().end()) ==
          std::vector<std::uint64_t>(b.weights().begin(), b.weights().end()));
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].group_weight == rb[i].group_weight);
        CHECK(ra[i].pos == rb[i].pos);
        CHECK(ra[i].sup_dist == rb[i].sup_dist);
    }
    Walk c(g, {1, 1, 1, 1}, 0, 988);
    c.run_to(100000);
    CHECK(std::vector<std::uint64_t>(a.weights().begin(), a.weights().end()) !=
          std::vector<std::uint64_t>(c.weights().begin(), c.weights().end()));
}

TEST_CASE("leaf weight is bounded by the attachment weight plus the start") {
    const auto g = GraphTopology::complete_like(3, {0, 0, 2});
    Walk w(g, {1, 1, 1, 2, 1}, 0, 31);
    const std::uint64_t leaf0 = w.leaf_weight(2);
    std::uint64_t prev_leaf = leaf0;
    for (int s = 0; s < 100000; ++s) {
        w.step();
        REQUIRE(prev_leaf <= w.weight(2) + leaf0);
        prev_leaf = w.leaf_weight(2);
    }
}

TEST_CASE("single-step frequencies match the transition law") {
    const auto g = GraphTopology::complete_like(3, {1, 0, 1});
    const std::vector<std::uint64_t> weights{4, 7, 2, 3, 9};
    Walk probe(g, weights, 1, 0);
    const auto p = probe.step_distribution();
    const auto nbrs = g.neighbors(1);
    const int n = 100000;
    std::vector<int> counts(g.num_vertices(), 0);
    for (int i = 0; i < n; ++i) {
        Walk w(g, weights, 1, 7000 + static_cast<std::uint64_t>(i));
        w.step();
        ++counts[static_cast<std::size_t>(w.position())];
    }
    for (std::size_t j = 0; j < nbrs.size(); ++j) {
        const double freq = static_cast<double>(counts[static_cast<std::size_t>(nbrs[j])]) / n;
        const double se = std::sqrt(p[j] * (1 - p[j]) / n);
        CHECK(std::abs(freq - p[j]) <= 4 * se);
    }
}

TEST_CASE("metric formulas at a frozen state") {
    const auto g = triangle();
    Walk w(g, {4, 3, 3}, 0, 1);  // t = 10
    const auto m = w.metrics();
    CHECK(m.t == 10);
    CHECK(m.eta == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(m.xi12 == doctest::Approx(4.0 / 7.0).epsilon(1e-15));
    REQUIRE(m.Xi12.has_value());
    CHECK(*m.Xi12 == doctest::Approx(std::log(7.0) - std::log(2.0)).epsilon(1e-15));
    CHECK(*m.Xi12 == doctest::Approx(1.2527629684953681).epsilon(1e-12));
    CHECK(m.sup_dist == doctest::Approx(4.0 / 10.0 - 1.0 / 3.0).epsilon(1e-12));

    Walk low(g, {5, 1, 4}, 0, 1);
    CHECK_FALSE(low.metrics().Xi12.has_value());  // second weight below 2
}

TEST_CASE("d=2 side ratios appear only with leaves on both sides") {
    const auto both = GraphTopology::complete_like(2, {1, 1});
    Walk w(both, {3, 4, 2, 5}, 0, 1);
    const auto m = w.metrics();
    REQUIRE(m.xi_left.has_value());
    REQUIRE(m.xi_right.has_value());
    CHECK(*m.xi_left == doctest::Approx(2.0 / 6.0));
    CHECK(*m.xi_right == doctest::Approx(5.0 / 8.0));

    const auto one_side = GraphTopology::complete_like(2, {1, 0});
    Walk w2(one_side, {3, 4, 2}, 0, 1);
    CHECK_FALSE(w2.metrics().xi_left.has_value());
}

TEST_CASE("excursion classification of short paths") {
    // spec paths on the triangle with special vertex 2, tracked pair (0, 1)
    auto cls_of = [](std::vector<Vertex> path) {
        const auto stats = excursion_stats(path, 2, 0, 1);
        REQUIRE(stats.completed == 1);
        return stats.records.at(0);
    };
    auto a1 = cls_of({2, 0, 2});
    CHECK(a1.cls == ExcursionClass::A);
    CHECK(a1.m() == 1);
    auto b1 = cls_of({2, 0, 1, 2});
    CHECK(b1.cls == ExcursionClass::B);
    CHECK(b1.m() == 1);
    auto a2 = cls_of({2, 0, 1, 0, 2});
    CHECK(a2.cls == ExcursionClass::A);
    CHECK(a2.m() == 2);
    CHECK(a2.visits_second == 1);
    auto abar = cls_of({2, 1, 2});
    CHECK(abar.cls == ExcursionClass::Abar);
    CHECK(abar.m() == 1);
    auto bbar = cls_of({2, 1, 0, 2});
    CHECK(bbar.cls == ExcursionClass::Bbar);
    CHECK(bbar.m() == 1);
}

TEST_CASE("excursion classes partition the completed excursions") {
    const auto g = triangle();
    Walk w(g, {1, 1, 1}, 0, 77, SpecialSchedule{2, ReinforcementSchedule::affine(0, 1)});
    ExcursionTracker tracker(2, 0, 1);
    tracker.observe(w.position());
    std::uint64_t arrivals = 0;
    bool armed = false;
    for (int s = 0; s < 100000; ++s) {
        w.step();
        tracker.observe(w.position());
        if (w.position() == 2) {
            if (armed) ++arrivals;
            armed = true;
        }
    }
    const auto& stats = tracker.stats();
    CHECK(stats.completed == arrivals);
    CHECK(stats.leaf_only == 0);
    std::uint64_t by_class = 0, by_m = 0;
    for (std::uint64_t c : stats.class_totals) by_class += c;
    for (const auto& [m, c] : stats.m_histogram) by_m += c;
    CHECK(by_class == stats.completed);
    CHECK(by_m == stats.completed);
}

TEST_CASE("excursions to a leaf of the observation vertex are counted apart") {
    const auto g = GraphTopology::complete_like(3, {0, 0, 1});
    Walk w(g, {1, 1, 1, 5}, 0, 21);
    ExcursionTracker tracker(2, 0, 1);
    tracker.observe(w.position());
    for (int s = 0; s < 50000; ++s) {
        w.step();
        tracker.observe(w.position());
    }
    const auto& stats = tracker.stats();
    CHECK(stats.leaf_only > 0);  // shuttles 2 -> leaf -> 2
    std::uint64_t by_class = 0;
    for (std::uint64_t c : stats.class_totals) by_class += c;
    CHECK(by_class == stats.completed);
}
