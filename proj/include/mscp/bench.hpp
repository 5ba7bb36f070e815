#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mscp/detector.hpp"
#include "mscp/synth.hpp"

namespace mscp {

struct BenchRow {
    std::string scenario;
    std::string distribution;
    int replicates = 0;
    long total = 0;               // all estimates across replicates
    long correct[3] = {0, 0, 0};  // within V = 10, 5, 2 of some true change
    std::optional<double> mad[3]; // mean abs. deviation of the correct ones

    static std::string csv_header();
    std::string csv_line() const;
};

// Runs `replicates` seeded simulations of each (scenario, variant) pair
// and scores the estimates against the ground truth. Replicates fan out
// across threads with seeds derived from `seed`.
BenchRow benchmark_one(const Scenario &scenario, DistVariant variant, int replicates,
                       const DetectorConfig &config, std::uint64_t seed,
                       unsigned threads = 0);

std::vector<BenchRow> benchmark(const std::vector<Scenario> &scenarios,
                                const std::vector<DistVariant> &variants, int replicates,
                                const DetectorConfig &config, std::uint64_t seed,
                                unsigned threads = 0, bool progress = false);

} // namespace mscp
