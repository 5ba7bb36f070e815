#include "mscp/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "mscp/rng.hpp"

namespace mscp {

double DetectorConfig::threshold() const {
    return n == 1 ? kappa : kappa * std::pow(static_cast<double>(n), beta);
}

StartSet build_grid(const TriangleSpec &spec, int g) {
    spec.validate();
    if (g < 1) throw std::invalid_argument("build_grid: g must be >= 1");
    StartSet out;
    for (int h = ((spec.delta + g - 1) / g) * g; h <= spec.h_max(); h += g)
        for (int t = ((h + g - 1) / g) * g; t <= spec.T - h; t += g)
            out.points.push_back({t, h});
    if (out.points.empty())
        throw std::invalid_argument("build_grid: mesh too coarse, grid is empty");
    return out;
}

const char *disposition_name(Disposition d) {
    switch (d) {
        case Disposition::Accepted: return "accepted";
        case Disposition::RejectedDuplicate: return "rejected_duplicate";
        case Disposition::BreakTriggered: return "break_triggered";
    }
    return "?";
}

std::vector<SegmentMoments> segment_moments(const Series &series,
                                            const std::vector<int> &change_points) {
    const int len = series.size();
    int prev = 0;
    std::vector<SegmentMoments> out;
    for (std::size_t u = 0; u <= change_points.size(); ++u) {
        const int end = u < change_points.size() ? change_points[u] : len;
        if (end <= prev || end > len)
            throw std::domain_error("segment_moments: change points not sorted within range");
        SegmentMoments seg;
        seg.start = prev + 1;
        seg.end = end;
        long double sum = 0.0L;
        for (int i = prev; i < end; ++i) sum += series.values[i];
        const long double mean = sum / (end - prev);
        long double ss = 0.0L;
        for (int i = prev; i < end; ++i) {
            const long double d = series.values[i] - mean;
            ss += d * d;
        }
        seg.mean = static_cast<double>(mean);
        seg.var = static_cast<double>(ss / (end - prev));
        out.push_back(seg);
        prev = end;
    }
    return out;
}

DetectionReport detect(const MosumField &field, const Series &series,
                       const DetectorConfig &config) {
    const auto &spec = field.spec();
    if (config.kappa <= 0.0) throw std::invalid_argument("detect: kappa must be > 0");
    const int delta = spec.delta;

    auto grid = build_grid(spec, config.effective_grid());
    std::vector<TrianglePoint> open = grid.points;
    std::vector<double> weight(open.size());
    for (std::size_t i = 0; i < open.size(); ++i)
        weight[i] = std::abs(field.at(open[i])) /
                    std::sqrt(static_cast<double>(spec.n) * open[i].h);

    SeededRng rng(config.seed);
    DetectionReport report;
    report.config = config;
    report.T = spec.T;
    report.kappa_used = config.kappa;

    std::vector<int> estimates; // lattice t, discovery order
    const double threshold = config.threshold();

    auto cut = [&](int t0, std::size_t start_idx) {
        // remove the endpoint's cone plus the launched start itself
        std::vector<TrianglePoint> kept;
        std::vector<double> kept_w;
        kept.reserve(open.size());
        kept_w.reserve(open.size());
        for (std::size_t i = 0; i < open.size(); ++i) {
            const auto p = open[i];
            const bool in_cone = p.t - p.h < t0 && t0 <= p.t + p.h;
            if (in_cone || i == start_idx) continue;
            kept.push_back(p);
            kept_w.push_back(weight[i]);
        }
        open = std::move(kept);
        weight = std::move(kept_w);
    };

    while (!open.empty()) {
        // strongest signal-to-noise start; exact ties sampled uniformly
        double best = -1.0;
        for (double w : weight) best = std::max(best, w);
        std::vector<std::size_t> ties;
        for (std::size_t i = 0; i < open.size(); ++i)
            if (weight[i] == best) ties.push_back(i);
        const std::size_t pick =
            ties.size() == 1 ? ties[0]
                             : ties[rng.uniform_int(ties.size())];

        PathAudit audit;
        audit.tie_sampled = ties.size() > 1;
        audit.path = run_path(field, open[pick]);
        const int t_e = audit.path.end();

        int min_dist = std::numeric_limits<int>::max();
        for (int c : estimates) min_dist = std::min(min_dist, std::abs(t_e - c));

        if (min_dist <= 2 * (delta - 1)) {
            audit.disposition = Disposition::RejectedDuplicate;
            report.paths.push_back(std::move(audit));
            cut(t_e, pick);
            continue;
        }
        if (audit.path.max_stat < threshold) {
            audit.disposition = Disposition::BreakTriggered;
            report.paths.push_back(std::move(audit));
            break;
        }
        if (config.delta_c_hint && !estimates.empty() &&
            min_dist < *config.delta_c_hint - 2 * (delta - 1)) {
            audit.disposition = Disposition::BreakTriggered;
            report.paths.push_back(std::move(audit));
            break;
        }
        audit.disposition = Disposition::Accepted;
        report.paths.push_back(std::move(audit));
        estimates.push_back(t_e);
        cut(t_e, pick);
    }

    for (int t : estimates) report.change_points.push_back(spec.n * t);
    std::sort(report.change_points.begin(), report.change_points.end());
    report.segments = segment_moments(series, report.change_points);
    return report;
}

DetectionReport detect(const Series &series, const DetectorConfig &config) {
    if (config.n < 1) throw std::invalid_argument("detect: n must be >= 1");
    if (series.size() % config.n != 0)
        throw std::invalid_argument("detect: series length must be a multiple of n");
    TriangleSpec spec{series.size() / config.n, config.delta, config.n};
    if (series.size() < 2 * config.delta * config.n)
        throw std::invalid_argument("detect: series shorter than 2*delta");
    spec.validate();
    const auto field = compute_field(series, spec);
    return detect(field, series, config);
}

TestResult hypothesis_test(const Series &series, const DetectorConfig &config) {
    const auto report = detect(series, config);
    TestResult out;
    out.reject = !report.change_points.empty();
    if (!report.paths.empty()) out.max_stat_on_first_path = report.paths.front().path.max_stat;
    return out;
}

std::string DetectionReport::to_json() const {
    nlohmann::json j;
    j["config"] = {{"T", T},
                   {"delta", config.delta},
                   {"g", config.effective_grid()},
                   {"kappa", kappa_used},
                   {"alpha", config.alpha},
                   {"seed", config.seed}};
    j["change_points"] = change_points;
    j["segments"] = nlohmann::json::array();
    for (const auto &s : segments)
        j["segments"].push_back(
            {{"start", s.start}, {"end", s.end}, {"mean", s.mean}, {"var", s.var}});
    j["paths"] = nlohmann::json::array();
    for (const auto &a : paths) {
        nlohmann::json p;
        p["start"] = {a.path.start.t, a.path.start.h};
        p["steps"] = a.path.steps;
        p["end"] = a.path.end();
        p["max_stat"] = a.path.max_stat;
        p["disposition"] = disposition_name(a.disposition);
        if (a.tie_sampled) p["tie_sampled"] = true;
        j["paths"].push_back(std::move(p));
    }
    return j.dump(2);
}

} // namespace mscp
