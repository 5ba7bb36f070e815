#include "mscp/bench.hpp"

#include <cmath>
#include <iostream>
#include <mutex>
#include <sstream>

#include "mscp/parallel.hpp"

namespace mscp {

std::string BenchRow::csv_header() {
    return "scenario,distribution,replicates,total,corr10,mad10,corr5,mad5,corr2,mad2";
}

std::string BenchRow::csv_line() const {
    std::ostringstream out;
    out << scenario << ',' << distribution << ',' << replicates << ',' << total;
    for (int i = 0; i < 3; ++i) {
        out << ',' << correct[i] << ',';
        if (mad[i])
            out << *mad[i];
        else
            out << "null";
    }
    return out.str();
}

BenchRow benchmark_one(const Scenario &base, DistVariant variant, int replicates,
                       const DetectorConfig &config, std::uint64_t seed,
                       unsigned threads) {
    if (replicates < 1) throw std::invalid_argument("benchmark: replicates must be >= 1");
    const Scenario scenario = base.with_variant(variant);
    static const int levels[3] = {10, 5, 2};

    BenchRow row;
    row.scenario = base.label;
    row.distribution = variant_name(variant);
    row.replicates = replicates;
    long sum_dev[3] = {0, 0, 0};
    std::mutex merge;

    parallel_for(0, replicates, [&](long r) {
        SeededRng rng(SeededRng::derive_seed(seed, static_cast<std::uint64_t>(r)));
        const Series series = generate(scenario, 1, rng);
        DetectorConfig cfg = config;
        cfg.seed = SeededRng::derive_seed(seed ^ 0xB5AD4ECEDA1CE2A9ULL,
                                          static_cast<std::uint64_t>(r));
        const auto report = detect(series, cfg);

        long tot = static_cast<long>(report.change_points.size());
        long corr[3] = {0, 0, 0};
        long dev[3] = {0, 0, 0};
        for (int est : report.change_points) {
            int m = scenario.T;
            for (int c : scenario.change_points) m = std::min(m, std::abs(est - c));
            for (int i = 0; i < 3; ++i) {
                if (m <= levels[i]) {
                    ++corr[i];
                    dev[i] += m;
                }
            }
        }
        std::lock_guard<std::mutex> lock(merge);
        row.total += tot;
        for (int i = 0; i < 3; ++i) {
            row.correct[i] += corr[i];
            sum_dev[i] += dev[i];
        }
    }, threads);

    for (int i = 0; i < 3; ++i)
        if (row.correct[i] > 0)
            row.mad[i] = static_cast<double>(sum_dev[i]) / row.correct[i];
    return row;
}

std::vector<BenchRow> benchmark(const std::vector<Scenario> &scenarios,
                                const std::vector<DistVariant> &variants, int replicates,
                                const DetectorConfig &config, std::uint64_t seed,
                                unsigned threads, bool progress) {
    std::vector<BenchRow> rows;
    for (const auto &s : scenarios) {
        for (auto v : variants) {
            if (progress)
                std::cerr << "bench: " << s.label << " / " << variant_name(v) << "...\n";
            rows.push_back(benchmark_one(s, v, replicates, config, seed, threads));
        }
    }
    return rows;
}

} // namespace mscp
