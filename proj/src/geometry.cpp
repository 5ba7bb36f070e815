#include "mscp/geometry.hpp"

#include <cstdlib>
#include <stdexcept>

#include <json.hpp>

namespace mscp {

Geometry::Geometry(std::vector<int> change_points, TriangleSpec spec)
    : c_(std::move(change_points)), spec_(spec) {
    spec_.validate();
    int prev = 0;
    for (int c : c_) {
        if (c <= prev || c >= spec_.T)
            throw std::invalid_argument("geometry: change points must be strictly increasing in (0,T)");
        prev = c;
    }
}

bool Geometry::in_attraction(std::size_t u, int t, int h) const {
    if (u >= c_.size() || !spec_.contains(t, h)) return false;
    const int lo = u == 0 ? 0 : c_[u - 1];
    const int hi = u + 1 < c_.size() ? c_[u + 1] : spec_.T;
    const int c = c_[u];
    return lo <= t - h && t - h < c && c <= t + h && t + h < hi;
}

bool Geometry::in_inner(std::size_t u, int t, int h) const {
    return in_attraction(u, t, h) && std::abs(t - c_[u]) <= h - spec_.delta + 1;
}

bool Geometry::in_cone(int t0, int t, int h) const {
    return spec_.contains(t, h) && t - h < t0 && t0 <= t + h;
}

bool Geometry::in_remainder(int t, int h) const {
    if (!spec_.contains(t, h)) return false;
    for (int c : c_)
        if (in_cone(c, t, h)) return false;
    return true;
}

int Geometry::attraction_index(int t, int h) const {
    for (std::size_t u = 0; u < c_.size(); ++u)
        if (in_attraction(u, t, h)) return static_cast<int>(u);
    return -1;
}

namespace {

template <typename Pred>
std::vector<TrianglePoint> scan(const TriangleSpec &spec, Pred pred) {
    std::vector<TrianglePoint> out;
    for (int h = spec.delta; h <= spec.h_max(); ++h)
        for (int t = h; t <= spec.T - h; ++t)
            if (pred(t, h)) out.push_back({t, h});
    return out;
}

} // namespace

std::vector<TrianglePoint> Geometry::enumerate_attraction(std::size_t u) const {
    return scan(spec_, [&](int t, int h) { return in_attraction(u, t, h); });
}

std::vector<TrianglePoint> Geometry::enumerate_inner(std::size_t u) const {
    return scan(spec_, [&](int t, int h) { return in_inner(u, t, h); });
}

std::vector<TrianglePoint> Geometry::enumerate_cone(int t0) const {
    return scan(spec_, [&](int t, int h) { return in_cone(t0, t, h); });
}

std::vector<TrianglePoint> Geometry::enumerate_remainder() const {
    return scan(spec_, [&](int t, int h) { return in_remainder(t, h); });
}

std::string Geometry::to_json() const {
    nlohmann::json j;
    j["change_points"] = c_;
    auto points = [](const std::vector<TrianglePoint> &pts) {
        nlohmann::json arr = nlohmann::json::array();
        for (auto p : pts) arr.push_back({p.t, p.h});
        return arr;
    };
    j["attraction"] = nlohmann::json::array();
    j["inner"] = nlohmann::json::array();
    j["cones"] = nlohmann::json::array();
    for (std::size_t u = 0; u < c_.size(); ++u) {
        j["attraction"].push_back(points(enumerate_attraction(u)));
        j["inner"].push_back(points(enumerate_inner(u)));
        j["cones"].push_back(points(enumerate_cone(c_[u])));
    }
    j["remainder"] = points(enumerate_remainder());
    return j.dump();
}

} // namespace mscp
