#pragma once

#include <string>
#include <vector>

#include "mscp/field.hpp"
#include "mscp/geometry.hpp"
#include "mscp/triangle.hpp"

namespace mscp {

// A descent through the triangle: one row down per step, t moving by at
// most one. steps[k] is the t-coordinate at row h_s - k.
struct ZigzagPath {
    TrianglePoint start;
    std::vector<int> steps;       // k = 0 .. h_s - delta
    std::vector<double> stat_values; // |field| along the path
    double max_stat = 0.0;

    int end() const { return steps.back(); }

    // {"start":[t,h], "steps":[...], "end":t_e, "max_stat":v}
    std::string to_json() const;
};

// Local argmax descent on |field|: at each row the candidates are the
// previous t and its two neighbors, clipped to the row's t-range; exact
// ties resolve to the smallest t.
ZigzagPath run_path(const MosumField &field, TrianglePoint start);

// Closed-form path for starts inside an attraction area: t moves one step
// toward the change point per row (including the initial step) until it
// reaches it. Evaluates no field; test oracle for run_path on centering
// fields.
ZigzagPath oracle_path(const Geometry &geometry, TrianglePoint start);

} // namespace mscp
