#include "mscp/zigzag.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace mscp {

std::string ZigzagPath::to_json() const {
    nlohmann::json j;
    j["start"] = {start.t, start.h};
    j["steps"] = steps;
    j["end"] = end();
    j["max_stat"] = max_stat;
    return j.dump();
}

namespace {

// smallest t among {prev-1, prev, prev+1} maximizing |field| at row h
int step_argmax(const MosumField &field, int prev, int h) {
    const auto &spec = field.spec();
    const int lo = std::max(prev - 1, spec.t_min(h));
    const int hi = std::min(prev + 1, spec.t_max(h));
    int best_t = lo;
    double best = -1.0;
    for (int t = lo; t <= hi; ++t) {
        const double v = std::abs(field.at(t, h));
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    return best_t;
}

} // namespace

ZigzagPath run_path(const MosumField &field, TrianglePoint start) {
    const auto &spec = field.spec();
    if (!spec.contains(start)) throw std::domain_error("run_path: start outside the triangle");
    ZigzagPath path;
    path.start = start;
    const int total = start.h - spec.delta;
    path.steps.reserve(total + 1);
    path.stat_values.reserve(total + 1);
    int t = start.t;
    for (int k = 0; k <= total; ++k) {
        const int h = start.h - k;
        t = step_argmax(field, t, h);
        path.steps.push_back(t);
        path.stat_values.push_back(std::abs(field.at(t, h)));
    }
    path.max_stat = *std::max_element(path.stat_values.begin(), path.stat_values.end());
    return path;
}

ZigzagPath oracle_path(const Geometry &geometry, TrianglePoint start) {
    const int u = geometry.attraction_index(start.t, start.h);
    if (u < 0) throw std::domain_error("oracle_path: start not in any attraction area");
    const int c = geometry.change_points()[static_cast<std::size_t>(u)];
    ZigzagPath path;
    path.start = start;
    const int total = start.h - geometry.spec().delta;
    int t = start.t;
    for (int k = 0; k <= total; ++k) {
        if (t < c)
            ++t;
        else if (t > c)
            --t;
        path.steps.push_back(t);
    }
    path.stat_values.assign(path.steps.size(), 0.0);
    path.max_stat = 0.0;
    return path;
}

} // namespace mscp
