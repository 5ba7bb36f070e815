#pragma once

#include <string>
#include <vector>

#include "mscp/triangle.hpp"

namespace mscp {

// Triangle regions tied to a change set C: attraction areas A_u, inner
// sets B_u, cones K, and the remainder R. c_0 = 0 and c_{|C|+1} = T.
class Geometry {
public:
    Geometry(std::vector<int> change_points, TriangleSpec spec);

    const std::vector<int> &change_points() const { return c_; }
    const TriangleSpec &spec() const { return spec_; }

    // A_u: c_{u-1} <= t-h < c_u <= t+h < c_{u+1}   (u is 0-based here)
    bool in_attraction(std::size_t u, int t, int h) const;
    // B_u: in A_u with |t - c_u| <= h - delta + 1
    bool in_inner(std::size_t u, int t, int h) const;
    // K_{t0}: t-h < t0 <= t+h
    bool in_cone(int t0, int t, int h) const;
    // R: no cone of any c_u covers (t,h)
    bool in_remainder(int t, int h) const;

    // index of the attraction area containing (t,h), or -1
    int attraction_index(int t, int h) const;

    std::vector<TrianglePoint> enumerate_attraction(std::size_t u) const;
    std::vector<TrianglePoint> enumerate_inner(std::size_t u) const;
    std::vector<TrianglePoint> enumerate_cone(int t0) const;
    std::vector<TrianglePoint> enumerate_remainder() const;

    // {"change_points": [...], "attraction": [[...]], "inner": [[...]],
    //  "cones": [[...]], "remainder": [...]} with points as [t, h]
    std::string to_json() const;

private:
    std::vector<int> c_;
    TriangleSpec spec_;
};

} // namespace mscp
