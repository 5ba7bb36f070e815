// End-to-end acceptance checks. Each numbered check prints one PASS/FAIL
// line; the process exits nonzero if any check fails.
//
// usage: acceptance <mscp-binary> <data-dir>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "mscp/bench.hpp"
#include "mscp/calibrate.hpp"
#include "mscp/detector.hpp"
#include "mscp/field.hpp"
#include "mscp/geometry.hpp"
#include "mscp/parallel.hpp"
#include "mscp/rng.hpp"
#include "mscp/synth.hpp"
#include "mscp/zigzag.hpp"

using namespace mscp;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int idx, const char *title, bool ok, double seconds,
            const std::string &detail) {
    std::printf("%s: %2d %-34s (%.1fs) %s\n", ok ? "PASS" : "FAIL", idx, title, seconds,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double elapsed(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Scenario demo_config() {
    // T=200 with three changes at 65, 105, 145
    Scenario s;
    s.T = 200;
    s.change_points = {65, 105, 145};
    const double mu[4] = {1, 4, 1, -2};
    const double sig[4] = {1, 0.8, 1, 0.5};
    int prev = 0;
    for (int u = 0; u < 4; ++u) {
        const int end = u < 3 ? s.change_points[u] : 200;
        SegmentSpec seg;
        seg.length = end - prev;
        seg.mu = mu[u];
        seg.sigma = sig[u];
        s.segments.push_back(seg);
        prev = end;
    }
    return s;
}

Scenario single_change(int T, int c, double m1, double m2, double s1, double s2) {
    Scenario s;
    s.T = T;
    s.change_points = {c};
    SegmentSpec a, b;
    a.length = c;
    a.mu = m1;
    a.sigma = s1;
    b.length = T - c;
    b.mu = m2;
    b.sigma = s2;
    s.segments = {a, b};
    return s;
}

// --- 1: Welch statistic against an independent two-pass computation --------

bool check_welch_oracle(std::string &detail) {
    SeededRng rng(101);
    const int series_count = 20, triples_each = 500, T = 2000;
    int bad = 0;
    for (int s = 0; s < series_count; ++s) {
        std::vector<double> x(T);
        for (auto &v : x) v = rng.normal(rng.normal(0, 3), 0.5 + rng.uniform());
        const auto prefix = build_prefix_sums(x);
        TriangleSpec spec{T, 2, 1};
        for (int i = 0; i < triples_each; ++i) {
            const int h = 2 + static_cast<int>(rng.uniform_int(T / 2 - 1));
            const int t = h + static_cast<int>(rng.uniform_int(T - 2 * h + 1));
            long double sl = 0, sr = 0;
            for (int j = t - h; j < t; ++j) sl += x[j];
            for (int j = t; j < t + h; ++j) sr += x[j];
            const long double ml = sl / h, mr = sr / h;
            long double vl = 0, vr = 0;
            for (int j = t - h; j < t; ++j) vl += (x[j] - ml) * (x[j] - ml);
            for (int j = t; j < t + h; ++j) vr += (x[j] - mr) * (x[j] - mr);
            vl /= h;
            vr /= h;
            const double denom = static_cast<double>(vl + vr);
            const double want =
                denom > 0 ? static_cast<double>((mr - ml) / std::sqrt(denom / h)) : 0.0;
            const double got = mosum_at(prefix, spec, t, h);
            if (std::abs(got - want) > 1e-9 * (1.0 + std::abs(want))) ++bad;
        }
    }
    detail = std::to_string(series_count * triples_each) + " triples, " +
             std::to_string(bad) + " off";
    return bad == 0;
}

// --- 2: descent on the centering field equals the closed-form path ---------

bool check_zigzag_oracle(std::string &detail) {
    const auto scenario = scenario_by_label("1a");
    TriangleSpec spec{1000, 20, 1};
    const auto d = centering_field(scenario, spec);
    Geometry g(scenario.change_points, spec);
    SeededRng rng(202);
    int tried = 0, exact = 0;
    while (tried < 200) {
        const int h = 20 + static_cast<int>(rng.uniform_int(481));
        const int t = h + static_cast<int>(rng.uniform_int(1000 - 2 * h + 1));
        const int u = g.attraction_index(t, h);
        if (u < 0) continue;
        // skip the lattice line t+h = c_u where the right window holds no
        // post-change point and the centering field is identically zero
        if (t + h == scenario.change_points[u]) continue;
        ++tried;
        if (run_path(d, {t, h}).steps == oracle_path(g, {t, h}).steps) ++exact;
    }
    detail = std::to_string(exact) + "/200 exact";
    return exact == 200;
}

// --- 3: slope bounds of the centering field --------------------------------

bool check_slope_bounds(std::string &detail) {
    std::mt19937 gen(303);
    std::uniform_real_distribution<double> mu_d(-5.0, 5.0), sig_d(0.3, 3.0);
    const int T = 300, c = 150;
    int ok = 0;
    for (int rep = 0; rep < 50; ++rep) {
        double m1 = mu_d(gen), m2 = mu_d(gen);
        if (std::abs(m1 - m2) < 0.2) m2 = m1 + 1.0;
        const double s1 = sig_d(gen), s2 = sig_d(gen);
        // keep c +- h inside the row's t-range [h, T-h]
        const int h = 15 + static_cast<int>(gen() % 61);
        const auto sc = single_change(T, c, m1, m2, s1, s2);
        const auto d = centering_field(sc, TriangleSpec{T, 10, 1});
        const auto b = centering_slope_bounds(m1, m2, s1, s2);
        const double lo = std::sqrt(static_cast<double>(h)) * b.lower - 1e-6;
        const double hi = std::sqrt(static_cast<double>(h)) * b.upper + 1e-6;
        bool pass = true;
        for (int t = c - h + 1; t < c + h - 1; ++t) {
            if (t == c - 1 || t == c) continue; // step straddles the peak
            // slope per window length: one lattice step covers 1/h of the cone
            const double slope = h * std::abs(d.at(t + 1, h) - d.at(t, h));
            pass = pass && slope >= lo && slope <= hi;
        }
        if (pass) ++ok;
    }
    detail = std::to_string(ok) + "/50 configurations";
    return ok == 50;
}

// --- 4: regression on the three-change demo configuration ------------------

bool check_demo_regression(double kappa200, std::string &detail) {
    const auto scenario = demo_config();
    DetectorConfig cfg;
    cfg.delta = 20;
    // mesh finer than delta: the true changes are only 40 apart, so with
    // g = delta the surviving mid-region starts cannot travel and the
    // duplicate rule (spacing <= 2(delta-1) = 38) absorbs the middle
    // estimate; g = 5 puts an aligned inner-set start at each change,
    // which outranks the tall straddling starts whose endpoints err inward
    cfg.grid_g = 5;
    cfg.alpha = 0.01;
    cfg.kappa = kappa200;

    auto run_one = [&](std::uint64_t seed) {
        SeededRng rng(seed);
        const auto series = generate(scenario, 1, rng);
        DetectorConfig c = cfg;
        c.seed = seed;
        const auto report = detect(series, c);
        if (report.change_points.size() != 3) return false;
        for (std::size_t u = 0; u < 3; ++u)
            if (std::abs(report.change_points[u] - scenario.change_points[u]) > 19)
                return false;
        return true;
    };

    const bool fixed = run_one(4242);
    int good = 0;
    std::mutex m;
    parallel_for(0, 200, [&](long s) {
        const bool ok = run_one(10000 + static_cast<std::uint64_t>(s));
        std::lock_guard<std::mutex> lock(m);
        if (ok) good += 1;
    });
    detail = "fixed seed " + std::string(fixed ? "ok" : "MISSED") + ", " +
             std::to_string(good) + "/200 seeds";
    return fixed && good >= 190;
}

// --- 5 & 6: scenario bands --------------------------------------------------

bool check_easy_band(double kappa1000, std::string &detail) {
    DetectorConfig cfg;
    cfg.delta = 20;
    cfg.alpha = 0.01;
    cfg.kappa = kappa1000;
    const auto row = benchmark_one(scenario_by_label("1a"), DistVariant::Normal, 100, cfg,
                                   505, 0);
    const double rate = row.correct[0] / 500.0;
    const double mad = row.mad[0] ? *row.mad[0] : 99.0;
    std::ostringstream os;
    os << "corr10 " << row.correct[0] << "/500, M10 " << mad;
    detail = os.str();
    return rate >= 0.99 && mad <= 0.3;
}

bool check_hard_band(double kappa1000, std::string &detail) {
    DetectorConfig cfg;
    cfg.delta = 20;
    cfg.alpha = 0.01;
    cfg.kappa = kappa1000;
    const auto row = benchmark_one(scenario_by_label("3d"), DistVariant::Normal, 100, cfg,
                                   606, 0);
    const double ratio = row.total / 500.0;
    std::ostringstream os;
    os << "total " << row.total << "/500 (ratio " << ratio << ")";
    detail = os.str();
    return ratio >= 0.55 && ratio <= 0.69;
}

// --- 7: level under the null ------------------------------------------------

bool check_null_levels(std::string &detail) {
    const int T = 1000, reps = 500;
    const std::vector<double> alphas = {0.05, 0.01};
    const NullFamily families[] = {NullFamily::N01,       NullFamily::Pois1,
                                   NullFamily::Exp1,      NullFamily::Bin10Half,
                                   NullFamily::Gamma05_2, NullFamily::Gamma2_2};
    int cells = 0, passed = 0;
    double worst_excess = -1.0;
    std::string worst;
    for (int delta : {20, 30, 50}) {
        const auto recs = calibrate_kappa_multi(T, delta, alphas, 5000, 1);
        for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
            const double alpha = alphas[ai];
            const double bound = alpha + 3.0 * std::sqrt(alpha * (1 - alpha) / reps);
            for (NullFamily fam : families) {
                int rejections = 0;
                std::mutex m;
                parallel_for(0, reps, [&](long r) {
                    SeededRng rng(SeededRng::derive_seed(
                        700 + delta + 13 * static_cast<int>(fam) + 131 * static_cast<int>(ai),
                        static_cast<std::uint64_t>(r)));
                    const auto series = null_series(fam, T, rng);
                    DetectorConfig cfg;
                    cfg.delta = delta;
                    cfg.alpha = alpha;
                    cfg.kappa = recs[ai].kappa;
                    cfg.seed = static_cast<std::uint64_t>(r);
                    const bool rej = hypothesis_test(series, cfg).reject;
                    std::lock_guard<std::mutex> lock(m);
                    if (rej) ++rejections;
                });
                ++cells;
                const double rate = static_cast<double>(rejections) / reps;
                if (rate <= bound) ++passed;
                if (rate - bound > worst_excess) {
                    worst_excess = rate - bound;
                    std::ostringstream os;
                    os << null_family_name(fam) << " delta=" << delta << " alpha=" << alpha
                       << " rate=" << rate << " bound=" << bound;
                    worst = os.str();
                }
            }
        }
    }
    detail = std::to_string(passed) + "/" + std::to_string(cells) + " cells (worst: " +
             worst + ")";
    return passed == cells;
}

// --- 8: end-to-end on the vendored daily-counts fixture ---------------------

bool check_fixture(const std::string &binary, const std::string &data_dir,
                   std::string &detail) {
    namespace fs = std::filesystem;
    const fs::path fixture = fs::path(data_dir) / "zimbabwe_covid_2020.csv";
    if (!fs::exists(fixture)) {
        detail = "fixture missing: " + fixture.string();
        return false;
    }
    const fs::path work =
        fs::temp_directory_path() / ("mscp_acc_" + std::to_string(::getpid()));
    fs::create_directories(work);
    const std::string prefix = (work / "zim").string();
    const std::string cmd = "MSCP_CACHE_DIR=" + work.string() + " " + binary + " detect " +
                            fixture.string() + " --delta 20 --alpha 0.01 --out " + prefix +
                            " >" + (work / "log").string() + " 2>&1";
    const int rc = std::system(cmd.c_str());
    if (!WIFEXITED(rc) || WEXITSTATUS(rc) != 0) {
        detail = "detect exited with code " +
                 std::to_string(WIFEXITED(rc) ? WEXITSTATUS(rc) : -1);
        return false;
    }
    std::ifstream in(prefix + ".report.json");
    nlohmann::json j;
    in >> j;
    const std::vector<int> want_c = {68, 110, 173, 241};
    const std::vector<double> want_mu = {1, 17, 104, 22, 85};
    const std::vector<double> want_sd = {1, 18, 83, 16, 35};
    std::vector<int> got_c = j["change_points"].get<std::vector<int>>();
    std::ostringstream os;
    os << "estimates";
    for (int c : got_c) os << ' ' << c;
    bool ok = got_c.size() == 4;
    if (ok)
        for (std::size_t u = 0; u < 4; ++u) ok = ok && std::abs(got_c[u] - want_c[u]) <= 3;
    if (ok && j["segments"].size() == 5) {
        for (std::size_t u = 0; u < 5; ++u) {
            const double mean = j["segments"][u]["mean"];
            const double sd = std::sqrt(j["segments"][u]["var"].get<double>());
            ok = ok && std::abs(mean - want_mu[u]) <= 1.0 && std::abs(sd - want_sd[u]) <= 1.0;
        }
        os << "; moments within 1";
    } else if (ok) {
        ok = false;
    }
    detail = os.str();
    std::error_code ec;
    fs::remove_all(work, ec);
    return ok;
}

// --- 9: accuracy trend in the sampling rate ---------------------------------

bool check_rate_trend(double kappa1000, std::string &detail) {
    const auto scenario = scenario_by_label("1a");
    const int reps = 20;
    std::vector<int> good_by_n;
    for (int n : {1, 2, 4}) {
        int good = 0;
        std::mutex m;
        parallel_for(0, reps, [&](long r) {
            SeededRng rng(SeededRng::derive_seed(900 + n, static_cast<std::uint64_t>(r)));
            const auto series = generate(scenario, n, rng);
            DetectorConfig cfg;
            cfg.delta = 20;
            cfg.n = n;
            cfg.beta = 0.0; // the null sup is pivotal in n, keep kappa as is
            cfg.kappa = kappa1000;
            cfg.seed = static_cast<std::uint64_t>(r);
            const auto report = detect(series, cfg);
            bool ok = report.change_points.size() == 5;
            if (ok)
                for (std::size_t u = 0; u < 5; ++u) {
                    const int est_lattice = report.change_points[u] / n;
                    ok = ok && std::abs(est_lattice - scenario.change_points[u]) <= 19;
                }
            std::lock_guard<std::mutex> lock(m);
            if (ok) ++good;
        });
        good_by_n.push_back(good);
    }
    std::ostringstream os;
    os << "hits " << good_by_n[0] << "," << good_by_n[1] << "," << good_by_n[2] << "/"
       << reps;
    detail = os.str();
    return good_by_n[0] <= good_by_n[1] && good_by_n[1] <= good_by_n[2];
}

// --- 10: invariance property suite ------------------------------------------

bool check_invariances(std::string &detail) {
    SeededRng rng(1001);
    int failures = 0;

    // affine invariance of the detector and sign antisymmetry of the field
    for (int rep = 0; rep < 5; ++rep) {
        const auto series = generate(scenario_by_label(rep % 2 ? "2a" : "1a"), 1, rng);
        Series aff, neg;
        const double a = -3.0 + 6.0 * rng.uniform(), b = 10.0 * rng.uniform();
        const double scale = std::abs(a) < 0.1 ? 1.5 : a;
        for (double v : series.values) {
            aff.values.push_back(scale * v + b);
            neg.values.push_back(-v);
        }
        DetectorConfig cfg;
        cfg.delta = 20;
        cfg.kappa = 3.0;
        cfg.seed = rep;
        if (detect(series, cfg).change_points != detect(aff, cfg).change_points) ++failures;

        TriangleSpec spec{1000, 20, 1};
        const auto f = compute_field(series, spec);
        const auto fn = compute_field(neg, spec);
        for (int h = 20; h <= 500; h += 37)
            for (int t = h; t <= 1000 - h; t += 11)
                if (fn.at(t, h) != -f.at(t, h)) ++failures;
    }

    // exact variance decomposition of the window limits
    for (int rep = 0; rep < 20; ++rep) {
        const auto sc = single_change(200, 60 + static_cast<int>(rng.uniform_int(80)),
                                      rng.normal(0, 3), rng.normal(0, 3),
                                      0.3 + rng.uniform(), 0.3 + rng.uniform());
        const int h = 10 + static_cast<int>(rng.uniform_int(60));
        const int t = h + static_cast<int>(rng.uniform_int(200 - 2 * h + 1));
        for (Side side : {Side::Left, Side::Right}) {
            const auto lim = window_limits(sc, t, h, side);
            if (lim.sigma_tilde_sq != lim.sigma_tilde2_sq + lim.err_sq) ++failures;
            if (lim.err_sq < 0.0) ++failures;
        }
    }

    // set-inclusion chain B subset A subset K subset triangle
    for (int rep = 0; rep < 5; ++rep) {
        const int T = 100 + static_cast<int>(rng.uniform_int(200));
        const int delta = 3 + static_cast<int>(rng.uniform_int(8));
        std::vector<int> C = {T / 4, T / 2, (3 * T) / 4};
        TriangleSpec spec{T, delta, 1};
        Geometry g(C, spec);
        for (std::size_t u = 0; u < C.size(); ++u) {
            for (const auto &p : g.enumerate_inner(u))
                if (!g.in_attraction(u, p.t, p.h)) ++failures;
            for (const auto &p : g.enumerate_attraction(u))
                if (!g.in_cone(C[u], p.t, p.h) || !spec.contains(p)) ++failures;
        }
    }

    // accepted estimates are spaced by more than 2(delta-1)
    for (int rep = 0; rep < 5; ++rep) {
        const auto series = generate(scenario_by_label("3e"), 1, rng);
        DetectorConfig cfg;
        cfg.delta = 20;
        cfg.grid_g = 10;
        cfg.kappa = 2.5;
        cfg.seed = rep;
        const auto cs = detect(series, cfg).change_points;
        for (std::size_t i = 1; i < cs.size(); ++i)
            if (cs[i] - cs[i - 1] <= 2 * (20 - 1)) ++failures;
    }

    detail = failures == 0 ? "all properties hold" :
                             std::to_string(failures) + " property violations";
    return failures == 0;
}

} // namespace

int main(int argc, char **argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <mscp-binary> <data-dir>\n");
        return 1;
    }
    const std::string binary = argv[1], data_dir = argv[2];

    std::string detail;
    Clock::time_point t0;

    t0 = Clock::now();
    {
        const bool ok = check_welch_oracle(detail);
        const double s = elapsed(t0);
        report(1, "window statistic oracle", ok && s < 5.0, s, detail);
    }

    t0 = Clock::now();
    {
        const bool ok = check_zigzag_oracle(detail);
        const double s = elapsed(t0);
        report(2, "descent path oracle", ok && s < 10.0, s, detail);
    }

    t0 = Clock::now();
    report(3, "slope bounds", check_slope_bounds(detail), elapsed(t0), detail);

    // shared calibrations
    const double kappa200 = calibrate_kappa(200, 20, 0.01, 10000, 1).kappa;
    const double kappa1000 = calibrate_kappa(1000, 20, 0.01, 5000, 1).kappa;

    t0 = Clock::now();
    {
        const bool ok = check_demo_regression(kappa200, detail);
        const double s = elapsed(t0);
        report(4, "three-change regression", ok && s < 120.0, s, detail);
    }

    t0 = Clock::now();
    {
        const bool ok = check_easy_band(kappa1000, detail);
        const double s = elapsed(t0);
        report(5, "easy-scenario band", ok && s < 120.0, s, detail);
    }

    t0 = Clock::now();
    report(6, "hard-scenario band", check_hard_band(kappa1000, detail), elapsed(t0),
           detail);

    t0 = Clock::now();
    {
        const bool ok = check_null_levels(detail);
        const double s = elapsed(t0);
        report(7, "null level bands", ok && s < 900.0, s, detail);
    }

    t0 = Clock::now();
    report(8, "daily-counts fixture", check_fixture(binary, data_dir, detail),
           elapsed(t0), detail);

    t0 = Clock::now();
    report(9, "sampling-rate trend", check_rate_trend(kappa1000, detail), elapsed(t0),
           detail);

    t0 = Clock::now();
    report(10, "invariance suite", check_invariances(detail), elapsed(t0), detail);

    if (g_failures) {
        std::printf("%d acceptance check(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance checks passed\n");
    return 0;
}
