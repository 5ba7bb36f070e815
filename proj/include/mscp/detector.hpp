#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mscp/field.hpp"
#include "mscp/series.hpp"
#include "mscp/triangle.hpp"
#include "mscp/zigzag.hpp"

namespace mscp {

struct DetectorConfig {
    int delta = 20;
    int grid_g = 0;      // 0 -> defaults to delta
    double kappa = 0.0;  // breaking threshold, must be > 0
    double alpha = 0.01; // level kappa was calibrated for (documentation)
    int n = 1;
    double beta = 0.5;   // threshold exponent; only matters for n > 1
    std::optional<int> delta_c_hint; // enables the early-break rule
    std::uint64_t seed = 0;          // tie-break sampling
    double p_doc = 2.0;  // moment order, documentation only
    double v_doc = 0.5;  // rate exponent, documentation only

    int effective_grid() const { return grid_g > 0 ? grid_g : delta; }
    double threshold() const;
};

struct StartSet {
    std::vector<TrianglePoint> points;
};

// Grid (g*i, g*j) restricted to the triangle. Throws if empty.
StartSet build_grid(const TriangleSpec &spec, int g);

enum class Disposition { Accepted, RejectedDuplicate, BreakTriggered };

const char *disposition_name(Disposition d);

struct PathAudit {
    ZigzagPath path;
    Disposition disposition;
    bool tie_sampled = false; // start selection hit an exact tie
};

struct SegmentMoments {
    int start = 0; // 1-based, inclusive
    int end = 0;
    double mean = 0.0;
    double var = 0.0;
};

struct DetectionReport {
    DetectorConfig config;
    int T = 0;
    double kappa_used = 0.0;
    std::vector<int> change_points; // sorted ascending
    std::vector<SegmentMoments> segments;
    std::vector<PathAudit> paths; // discovery order

    std::string to_json() const;
};

// Iterative detection: launch the strongest remaining start, descend,
// suppress near-duplicates by cone cutting, stop once a path stays below
// the threshold.
DetectionReport detect(const Series &series, const DetectorConfig &config);
DetectionReport detect(const MosumField &field, const Series &series,
                       const DetectorConfig &config);

// Per-section sample mean and variance (divisor = section length).
std::vector<SegmentMoments> segment_moments(const Series &series,
                                            const std::vector<int> &change_points);

struct TestResult {
    bool reject = false;
    double max_stat_on_first_path = 0.0;
};

// H0: no change. Rejects iff detection returns any estimate.
TestResult hypothesis_test(const Series &series, const DetectorConfig &config);

} // namespace mscp
