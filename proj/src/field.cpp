#include "mscp/field.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "mscp/parallel.hpp"

namespace mscp {

PrefixSums build_prefix_sums(std::span<const double> values) {
    if (values.size() < 2) throw std::domain_error("prefix sums: series too short");
    PrefixSums p;
    const std::size_t n = values.size();
    p.s1.resize(n + 1);
    p.s2.resize(n + 1);
    p.s1[0] = 0.0L;
    p.s2[0] = 0.0L;
    // Kahan accumulation keeps window moments stable for long series.
    long double sum1 = 0.0L, c1 = 0.0L, sum2 = 0.0L, c2 = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const long double x = values[i];
        long double y = x - c1;
        long double t = sum1 + y;
        c1 = (t - sum1) - y;
        sum1 = t;
        y = x * x - c2;
        t = sum2 + y;
        c2 = (t - sum2) - y;
        sum2 = t;
        p.s1[i + 1] = sum1;
        p.s2[i + 1] = sum2;
    }
    return p;
}

WindowMoments window_moments(const PrefixSums &prefix, int t, int h, Side side, int n) {
    const long len = static_cast<long>(n) * h;
    const long lo = side == Side::Left ? static_cast<long>(n) * (t - h) : static_cast<long>(n) * t;
    const long hi = lo + len;
    if (lo < 0 || hi > prefix.size() || len < 1)
        throw std::domain_error("window_moments: window outside the series");
    const long double m1 = (prefix.s1[hi] - prefix.s1[lo]) / len;
    const long double m2 = (prefix.s2[hi] - prefix.s2[lo]) / len;
    long double var = m2 - m1 * m1;
    // A window of identical values must yield exactly 0 so the
    // zero-denominator convention downstream is well-defined.
    if (var < 1e-12L * (std::abs(m2) + m1 * m1)) var = 0.0L;
    WindowMoments out;
    out.mu1 = static_cast<double>(m1);
    out.mu2 = static_cast<double>(m2);
    out.var = static_cast<double>(var);
    return out;
}

double mosum_at(const PrefixSums &prefix, const TriangleSpec &spec, int t, int h) {
    if (!spec.contains(t, h)) throw std::domain_error("mosum_at: (t,h) outside the triangle");
    const auto left = window_moments(prefix, t, h, Side::Left, spec.n);
    const auto right = window_moments(prefix, t, h, Side::Right, spec.n);
    const double denom_sq = left.var + right.var;
    if (denom_sq <= 0.0) return 0.0;
    const double nh = static_cast<double>(spec.n) * h;
    return (right.mu1 - left.mu1) / std::sqrt(denom_sq / nh);
}

MosumField::MosumField(TriangleSpec spec, FieldKind kind) : spec_(spec), kind_(kind) {
    spec_.validate();
    row_offset_.reserve(spec_.h_max() - spec_.delta + 1);
    std::size_t total = 0;
    for (int h = spec_.delta; h <= spec_.h_max(); ++h) {
        row_offset_.push_back(total);
        total += static_cast<std::size_t>(spec_.T - 2 * h + 1);
    }
    values_.assign(total, 0.0);
}

std::size_t MosumField::index(int t, int h) const {
    if (!spec_.contains(t, h)) throw std::domain_error("field: (t,h) outside the triangle");
    return row_offset_[h - spec_.delta] + static_cast<std::size_t>(t - h);
}

void MosumField::write_tsv(const std::string &path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t\th\tvalue\n";
    for (int h = spec_.delta; h <= spec_.h_max(); ++h)
        for (int t = h; t <= spec_.T - h; ++t)
            out << t << '\t' << h << '\t' << at(t, h) << '\n';
}

MosumField compute_field(const PrefixSums &prefix, const TriangleSpec &spec) {
    spec.validate();
    if (prefix.size() < static_cast<long>(spec.n) * spec.T)
        throw std::domain_error("compute_field: series shorter than n*T");
    MosumField field(spec, FieldKind::Empirical);
    const int h_lo = spec.delta, h_hi = spec.h_max();
    parallel_for(h_lo, h_hi + 1, [&](long h) {
        for (int t = static_cast<int>(h); t <= spec.T - h; ++t)
            field.set(t, static_cast<int>(h), mosum_at(prefix, spec, t, static_cast<int>(h)));
    });
    return field;
}

MosumField compute_field(const Series &series, const TriangleSpec &spec, long max_length) {
    if (series.size() > max_length)
        throw std::domain_error("compute_field: series length exceeds the configured cap");
    const auto prefix = build_prefix_sums(series.values);
    return compute_field(prefix, spec);
}

LimitDecomposition window_limits(const Scenario &scenario, int t, int h, Side side) {
    // window interval (a, b] on the unit time scale
    const int a = side == Side::Left ? t - h : t;
    const int b = a + h;
    LimitDecomposition out;
    double prev = 0.0;
    std::vector<double> weights(scenario.segments.size(), 0.0);
    for (std::size_t u = 0; u < scenario.segments.size(); ++u) {
        const double lo = prev;
        const double hi = u < scenario.change_points.size()
                              ? static_cast<double>(scenario.change_points[u])
                              : static_cast<double>(scenario.T);
        const double overlap = std::max(0.0, std::min<double>(b, hi) - std::max<double>(a, lo));
        weights[u] = overlap / h;
        prev = hi;
    }
    for (std::size_t u = 0; u < scenario.segments.size(); ++u)
        out.mu_tilde += weights[u] * scenario.segments[u].mu;
    for (std::size_t u = 0; u < scenario.segments.size(); ++u) {
        const double s = scenario.segments[u].effective_sigma();
        const double dm = out.mu_tilde - scenario.segments[u].mu;
        out.sigma_tilde2_sq += weights[u] * s * s;
        out.err_sq += weights[u] * dm * dm;
    }
    out.sigma_tilde_sq = out.sigma_tilde2_sq + out.err_sq;
    return out;
}

MosumField centering_field(const Scenario &scenario, const TriangleSpec &spec) {
    scenario.validate();
    spec.validate();
    if (spec.T != scenario.T) throw std::domain_error("centering_field: T mismatch");
    MosumField field(spec, FieldKind::Centering);
    const double n = spec.n;
    parallel_for(spec.delta, spec.h_max() + 1, [&](long hl) {
        const int h = static_cast<int>(hl);
        for (int t = h; t <= spec.T - h; ++t) {
            const auto left = window_limits(scenario, t, h, Side::Left);
            const auto right = window_limits(scenario, t, h, Side::Right);
            const double denom_sq = left.sigma_tilde_sq + right.sigma_tilde_sq;
            double d = 0.0;
            if (denom_sq > 0.0)
                d = (right.mu_tilde - left.mu_tilde) / std::sqrt(denom_sq / (n * h));
            field.set(t, h, d);
        }
    });
    return field;
}

SlopeBounds centering_slope_bounds(double mu_left, double mu_right, double sigma_left,
                                   double sigma_right) {
    if (sigma_left <= 0.0 || sigma_right <= 0.0)
        throw std::domain_error("slope bounds: sigmas must be positive");
    if (mu_left == mu_right)
        throw std::domain_error("slope bounds: means must differ");
    const double dm = std::abs(mu_right - mu_left);
    const double lo_var = std::min(sigma_left * sigma_left, sigma_right * sigma_right);
    const double hi_var = std::max(sigma_left * sigma_left, sigma_right * sigma_right);
    SlopeBounds out;
    out.lower = dm * 2.0 * lo_var / std::pow(2.0 * hi_var + dm * dm / 4.0, 1.5);
    out.upper = dm * (2.0 * hi_var + dm * dm) / std::pow(2.0 * lo_var, 1.5);
    return out;
}

} // namespace mscp
