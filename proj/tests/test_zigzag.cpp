#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "mscp/field.hpp"
#include "mscp/rng.hpp"
#include "mscp/synth.hpp"
#include "mscp/zigzag.hpp"

using namespace mscp;

TEST_CASE("zero field: ties resolve left, one step per row") {
    Series s;
    s.values.assign(12, 1.0);
    TriangleSpec spec{12, 2, 1};
    const auto field = compute_field(s, spec);
    const auto path = run_path(field, {6, 6});
    CHECK(path.steps == std::vector<int>{6, 5, 4, 3, 2});
    CHECK(path.end() == 2);
    CHECK(path.max_stat == 0.0);
    CHECK(path.stat_values.size() == path.steps.size());
}

TEST_CASE("start outside the triangle throws") {
    Series s;
    s.values.assign(40, 0.0);
    TriangleSpec spec{40, 5, 1};
    const auto field = compute_field(s, spec);
    CHECK_THROWS_AS(run_path(field, {3, 5}), std::domain_error);
    CHECK_THROWS_AS(run_path(field, {10, 4}), std::domain_error);
    CHECK_THROWS_AS(run_path(field, {10, 25}), std::domain_error);
}

TEST_CASE("steps move by at most one and stay inside their rows") {
    SeededRng rng(404);
    for (int rep = 0; rep < 20; ++rep) {
        Series s;
        s.values.resize(200);
        for (auto &v : s.values) v = rng.normal();
        TriangleSpec spec{200, 5, 1};
        const auto field = compute_field(s, spec);
        const int h = 5 + static_cast<int>(rng.uniform_int(96));
        const int t = h + static_cast<int>(rng.uniform_int(200 - 2 * h + 1));
        const auto path = run_path(field, {t, h});
        CHECK(path.steps.size() == static_cast<std::size_t>(h - 5 + 1));
        int prev = t;
        for (std::size_t k = 0; k < path.steps.size(); ++k) {
            const int row = h - static_cast<int>(k);
            CHECK(std::abs(path.steps[k] - prev) <= 1);
            CHECK(path.steps[k] >= row);
            CHECK(path.steps[k] <= 200 - row);
            CHECK(path.stat_values[k] == std::abs(field.at(path.steps[k], row)));
            prev = path.steps[k];
        }
        CHECK(path.max_stat ==
              *std::max_element(path.stat_values.begin(), path.stat_values.end()));
    }
}

TEST_CASE("oracle path: distance to the change shrinks by one per step") {
    TriangleSpec spec{1000, 20, 1};
    Geometry g({100, 300, 500, 700, 900}, spec);
    const auto path = oracle_path(g, {503, 25});
    // start three to the right of 500, room for h_s - delta + 1 = 6 steps
    CHECK(path.steps == std::vector<int>{502, 501, 500, 500, 500, 500});
    CHECK(path.end() == 500);
    CHECK_THROWS_AS(oracle_path(g, {200, 20}), std::domain_error);
}

TEST_CASE("descent on the centering field reproduces the oracle") {
    const auto scenario = scenario_by_label("1a");
    TriangleSpec spec{1000, 20, 1};
    const auto d = centering_field(scenario, spec);
    Geometry g(scenario.change_points, spec);
    SeededRng rng(777);
    int tried = 0;
    while (tried < 200) {
        const int h = 20 + static_cast<int>(rng.uniform_int(481));
        const int t = h + static_cast<int>(rng.uniform_int(1000 - 2 * h + 1));
        const int u = g.attraction_index(t, h);
        if (u < 0) continue;
        // on the lattice the line t+h = c_u has no post-change point in the
        // right window, so the centering field vanishes and the descent has
        // no signal to follow; the attraction guarantee needs t+h > c_u
        if (t + h == scenario.change_points[u]) continue;
        ++tried;
        const auto got = run_path(d, {t, h});
        const auto want = oracle_path(g, {t, h});
        CAPTURE(t);
        CAPTURE(h);
        CHECK(got.steps == want.steps);
    }
}

TEST_CASE("endpoint accuracy: exact on B_u, within delta-1 on A_u") {
    const auto scenario = scenario_by_label("1a");
    TriangleSpec spec{1000, 20, 1};
    const auto d = centering_field(scenario, spec);
    Geometry g(scenario.change_points, spec);
    for (std::size_t u = 0; u < 5; ++u) {
        const int c = scenario.change_points[u];
        for (const auto &p : g.enumerate_inner(u)) {
            const auto path = run_path(d, p);
            CHECK(path.end() == c);
        }
        for (const auto &p : g.enumerate_attraction(u)) {
            if (p.t + p.h == c) continue; // zero-overlap lattice boundary
            const auto path = run_path(d, p);
            CHECK(std::abs(path.end() - c) <= spec.delta - 1);
        }
    }
}

TEST_CASE("path JSON carries start, steps, end, and max") {
    Series s;
    s.values.assign(12, 0.0);
    TriangleSpec spec{12, 2, 1};
    const auto field = compute_field(s, spec);
    const auto path = run_path(field, {6, 4});
    const auto j = nlohmann::json::parse(path.to_json());
    CHECK(j["start"] == nlohmann::json::array({6, 4}));
    CHECK(j["steps"].size() == 3);
    CHECK(j["end"] == path.end());
    CHECK(j["max_stat"] == 0.0);
}
