#pragma once

#include <span>
#include <string>
#include <vector>

#include "mscp/series.hpp"
#include "mscp/synth.hpp"
#include "mscp/triangle.hpp"

namespace mscp {

// Cumulative sums of X and X^2, accumulated in extended precision so that
// window moments stay within 1e-9 of a two-pass computation even for long
// series. S1[0] = S2[0] = 0, S1[k] = sum of the first k values.
struct PrefixSums {
    std::vector<long double> s1;
    std::vector<long double> s2;

    int size() const { return static_cast<int>(s1.size()) - 1; }
};

PrefixSums build_prefix_sums(std::span<const double> values);

enum class Side { Left, Right };

struct WindowMoments {
    double mu1 = 0.0; // window mean
    double mu2 = 0.0; // second raw moment
    double var = 0.0; // empirical variance, divisor = window length
};

// Moments of the left window {n(t-h)+1,...,nt} or right {nt+1,...,n(t+h)}.
WindowMoments window_moments(const PrefixSums &prefix, int t, int h, Side side, int n = 1);

// Welch-type contrast (mu_r - mu_l) / sqrt((var_r + var_l) / (n*h));
// exactly 0 when the variance denominator vanishes.
double mosum_at(const PrefixSums &prefix, const TriangleSpec &spec, int t, int h);

enum class FieldKind { Empirical, Centering };

// Dense evaluation over the triangle lattice, stored row-major by h-slice.
class MosumField {
public:
    MosumField(TriangleSpec spec, FieldKind kind);

    const TriangleSpec &spec() const { return spec_; }
    FieldKind kind() const { return kind_; }

    double at(int t, int h) const { return values_[index(t, h)]; }
    double at(TrianglePoint p) const { return at(p.t, p.h); }
    void set(int t, int h, double v) { values_[index(t, h)] = v; }

    // columns t, h, value
    void write_tsv(const std::string &path) const;

private:
    std::size_t index(int t, int h) const;

    TriangleSpec spec_;
    FieldKind kind_;
    std::vector<std::size_t> row_offset_; // by h - delta
    std::vector<double> values_;
};

// Empirical field D over the lattice. Refuses series longer than
// max_length (memory guard; the field holds ~T^2/4 doubles).
MosumField compute_field(const Series &series, const TriangleSpec &spec,
                         long max_length = 100000);
MosumField compute_field(const PrefixSums &prefix, const TriangleSpec &spec);

// Per-window population limits under a known scenario: moments weighted by
// the time spent in each section, split into the pure variance mixture and
// the mean-violation error.
struct LimitDecomposition {
    double mu_tilde = 0.0;
    double sigma_tilde_sq = 0.0;  // = sigma_tilde2_sq + err_sq
    double sigma_tilde2_sq = 0.0; // variance mixture only
    double err_sq = 0.0;
};

LimitDecomposition window_limits(const Scenario &scenario, int t, int h, Side side);

// The deterministic centering field d computed from the true (C, mu, sigma).
MosumField centering_field(const Scenario &scenario, const TriangleSpec &spec);

// Lower/upper bounds on the t-derivative of the centering field near an
// isolated change, measured per window length: h * |d(t+1,h) - d(t,h)|
// lies in sqrt(n*h) * [lower, upper]. Requires distinct means.
struct SlopeBounds {
    double lower = 0.0; // kappa_a
    double upper = 0.0; // kappa_b
};

SlopeBounds centering_slope_bounds(double mu_left, double mu_right, double sigma_left,
                                   double sigma_right);

} // namespace mscp
