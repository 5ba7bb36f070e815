#pragma once

#include <stdexcept>

namespace mscp {

// Integer lattice point of the (time, bandwidth) triangle.
struct TrianglePoint {
    int t = 0;
    int h = 0;

    friend bool operator==(const TrianglePoint &a, const TrianglePoint &b) {
        return a.t == b.t && a.h == b.h;
    }
};

// The feasible (t,h) domain: h in [delta, T/2], t in [h, T-h]. The scale
// factor n only affects how window indices map onto the data (length n*T);
// the lattice itself stays on the unit scale.
struct TriangleSpec {
    int T = 0;
    int delta = 0;
    int n = 1;

    void validate() const {
        if (T < 2) throw std::domain_error("triangle: T must be >= 2");
        if (delta < 1 || delta > T / 2)
            throw std::domain_error("triangle: delta must lie in [1, T/2]");
        if (n < 1) throw std::domain_error("triangle: n must be >= 1");
    }

    int h_max() const { return T / 2; }
    int t_min(int h) const { return h; }
    int t_max(int h) const { return T - h; }

    bool contains(int t, int h) const {
        return h >= delta && h <= h_max() && t >= h && t <= T - h;
    }
    bool contains(TrianglePoint p) const { return contains(p.t, p.h); }

    long lattice_size() const {
        long total = 0;
        for (int h = delta; h <= h_max(); ++h) total += T - 2 * h + 1;
        return total;
    }
};

} // namespace mscp
