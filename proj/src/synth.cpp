#include "mscp/synth.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace mscp {

const char *family_name(Family f) {
    switch (f) {
        case Family::Normal: return "normal";
        case Family::Gamma: return "gamma";
        case Family::Poisson: return "poisson";
        case Family::Binomial10: return "binomial10";
    }
    return "?";
}

Family family_from_name(const std::string &name) {
    if (name == "normal") return Family::Normal;
    if (name == "gamma") return Family::Gamma;
    if (name == "poisson") return Family::Poisson;
    if (name == "binomial10" || name == "binomial") return Family::Binomial10;
    throw std::invalid_argument("unknown family: " + name);
}

const char *variant_name(DistVariant v) {
    switch (v) {
        case DistVariant::Normal: return "normal";
        case DistVariant::Gamma: return "gamma";
        case DistVariant::Poisson: return "poisson";
        case DistVariant::Binomial: return "binomial";
        case DistVariant::Mix: return "mix";
    }
    return "?";
}

DistVariant variant_from_name(const std::string &name) {
    if (name == "normal") return DistVariant::Normal;
    if (name == "gamma") return DistVariant::Gamma;
    if (name == "poisson") return DistVariant::Poisson;
    if (name == "binomial" || name == "binomial10") return DistVariant::Binomial;
    if (name == "mix") return DistVariant::Mix;
    throw std::invalid_argument("unknown distribution variant: " + name);
}

double SegmentSpec::effective_sigma() const {
    switch (family) {
        case Family::Poisson: return std::sqrt(mu);
        case Family::Binomial10: return std::sqrt(mu * (1.0 - mu / 10.0));
        default: return sigma;
    }
}

void SegmentSpec::validate(int index) const {
    auto fail = [index](const std::string &msg) {
        throw std::invalid_argument("segment " + std::to_string(index) + ": " + msg);
    };
    if (length < 1) fail("length must be >= 1");
    switch (family) {
        case Family::Normal:
            if (sigma <= 0.0) fail("normal requires sigma > 0");
            break;
        case Family::Gamma:
            if (mu <= 0.0) fail("gamma requires mu > 0");
            if (sigma <= 0.0) fail("gamma requires sigma > 0");
            break;
        case Family::Poisson:
            if (mu <= 0.0) fail("poisson requires mu > 0");
            break;
        case Family::Binomial10:
            if (mu <= 0.0 || mu >= 10.0) fail("binomial10 requires 0 < mu < 10");
            break;
    }
}

void Scenario::validate() const {
    if (T < 1) throw std::invalid_argument("scenario: T must be >= 1");
    if (segments.size() != change_points.size() + 1)
        throw std::invalid_argument("scenario: need |C|+1 segments");
    int prev = 0;
    for (std::size_t u = 0; u < change_points.size(); ++u) {
        const int c = change_points[u];
        if (c <= prev || c >= T)
            throw std::invalid_argument("scenario: change points must be strictly increasing in (0,T)");
        prev = c;
    }
    int total = 0;
    for (std::size_t u = 0; u < segments.size(); ++u) {
        segments[u].validate(static_cast<int>(u));
        total += segments[u].length;
    }
    if (total != T) throw std::invalid_argument("scenario: segment lengths must sum to T");
    // lengths must agree with the gaps of C
    prev = 0;
    for (std::size_t u = 0; u < change_points.size(); ++u) {
        if (segments[u].length != change_points[u] - prev)
            throw std::invalid_argument("scenario: segment length mismatch with change points");
        prev = change_points[u];
    }
}

int Scenario::min_gap() const {
    int gap = T;
    int prev = 0;
    for (int c : change_points) {
        gap = std::min(gap, c - prev);
        prev = c;
    }
    gap = std::min(gap, T - prev);
    return gap;
}

Scenario Scenario::with_variant(DistVariant v) const {
    static const Family mix_order[6] = {Family::Normal, Family::Gamma, Family::Poisson,
                                        Family::Binomial10, Family::Normal, Family::Gamma};
    Scenario out = *this;
    for (std::size_t u = 0; u < out.segments.size(); ++u) {
        switch (v) {
            case DistVariant::Normal: out.segments[u].family = Family::Normal; break;
            case DistVariant::Gamma: out.segments[u].family = Family::Gamma; break;
            case DistVariant::Poisson: out.segments[u].family = Family::Poisson; break;
            case DistVariant::Binomial: out.segments[u].family = Family::Binomial10; break;
            case DistVariant::Mix: out.segments[u].family = mix_order[u % 6]; break;
        }
    }
    out.validate();
    return out;
}

namespace {

double draw(const SegmentSpec &seg, SeededRng &rng) {
    switch (seg.family) {
        case Family::Normal:
            return rng.normal(seg.mu, seg.sigma);
        case Family::Gamma: {
            // moment matched: shape = mu^2/sigma^2, rate = mu/sigma^2
            const double shape = seg.mu * seg.mu / (seg.sigma * seg.sigma);
            const double rate = seg.mu / (seg.sigma * seg.sigma);
            return rng.gamma(shape, rate);
        }
        case Family::Poisson:
            return static_cast<double>(rng.poisson(seg.mu));
        case Family::Binomial10:
            return static_cast<double>(rng.binomial(10, seg.mu / 10.0));
    }
    return 0.0;
}

} // namespace

Series generate(const Scenario &scenario, int n, SeededRng &rng) {
    scenario.validate();
    if (n < 1) throw std::invalid_argument("generate: n must be >= 1");
    Series out;
    out.values.reserve(static_cast<std::size_t>(n) * scenario.T);
    for (const auto &seg : scenario.segments) {
        const long count = static_cast<long>(seg.length) * n;
        for (long i = 0; i < count; ++i) out.values.push_back(draw(seg, rng));
    }
    for (int c : scenario.change_points) out.truth.push_back(n * c);
    return out;
}

namespace {

Scenario make(const std::string &label, std::vector<int> C, std::vector<double> mu,
              std::vector<double> sigma) {
    Scenario s;
    s.label = label;
    s.T = 1000;
    s.change_points = std::move(C);
    int prev = 0;
    for (std::size_t u = 0; u <= s.change_points.size(); ++u) {
        const int end = u < s.change_points.size() ? s.change_points[u] : s.T;
        SegmentSpec seg;
        seg.length = end - prev;
        seg.mu = mu[u];
        seg.sigma = sigma[u];
        s.segments.push_back(seg);
        prev = end;
    }
    s.validate();
    return s;
}

} // namespace

std::vector<Scenario> standard_scenarios() {
    const std::vector<int> C1 = {100, 300, 500, 700, 900};
    const std::vector<int> C2 = {300, 400, 500, 600, 700};
    const std::vector<int> C3 = {200, 500, 550, 600, 750};
    const std::vector<double> mu_hi = {1, 4, 1, 8, 1, 4};
    const std::vector<double> mu_lo = {0.5, 2, 0.5, 4, 0.5, 2};
    const std::vector<double> sig_const = {1, 1, 1, 1, 1, 1};
    const std::vector<double> sig_alt = {1, 2, 1, 2, 1, 2};
    return {
        make("1a", C1, mu_hi, sig_const),
        make("1b", C1, mu_hi, sig_alt),
        make("1c", C1, mu_lo, sig_const),
        make("2a", C2, mu_hi, sig_const),
        make("2b", C2, mu_hi, sig_alt),
        make("2c", C2, mu_lo, sig_const),
        make("3a", C3, mu_hi, sig_const),
        make("3b", C3, mu_hi, sig_alt),
        make("3c", C3, mu_lo, sig_const),
        make("3d", C3, mu_lo, sig_alt),
        make("3e", C3, {1, 2, 4, 8, 4, 2}, sig_const),
    };
}

Scenario scenario_by_label(const std::string &label) {
    for (auto &s : standard_scenarios())
        if (s.label == label) return s;
    throw std::invalid_argument("unknown scenario label: " + label);
}

const char *null_family_name(NullFamily f) {
    switch (f) {
        case NullFamily::N01: return "N01";
        case NullFamily::Pois1: return "Pois1";
        case NullFamily::Exp1: return "Exp1";
        case NullFamily::Bin10Half: return "Bin10Half";
        case NullFamily::Gamma05_2: return "Gamma05_2";
        case NullFamily::Gamma2_2: return "Gamma2_2";
    }
    return "?";
}

NullFamily null_family_from_name(const std::string &name) {
    if (name == "N01") return NullFamily::N01;
    if (name == "Pois1") return NullFamily::Pois1;
    if (name == "Exp1") return NullFamily::Exp1;
    if (name == "Bin10Half") return NullFamily::Bin10Half;
    if (name == "Gamma05_2") return NullFamily::Gamma05_2;
    if (name == "Gamma2_2") return NullFamily::Gamma2_2;
    throw std::invalid_argument("unknown null family: " + name);
}

Series null_series(NullFamily family, int T, SeededRng &rng) {
    if (T < 2) throw std::invalid_argument("null_series: T must be >= 2");
    Series out;
    out.values.reserve(T);
    for (int i = 0; i < T; ++i) {
        switch (family) {
            case NullFamily::N01: out.values.push_back(rng.normal()); break;
            case NullFamily::Pois1: out.values.push_back(static_cast<double>(rng.poisson(1.0))); break;
            case NullFamily::Exp1: out.values.push_back(rng.exponential(1.0)); break;
            case NullFamily::Bin10Half:
                out.values.push_back(static_cast<double>(rng.binomial(10, 0.5)));
                break;
            case NullFamily::Gamma05_2: out.values.push_back(rng.gamma(0.5, 2.0)); break;
            case NullFamily::Gamma2_2: out.values.push_back(rng.gamma(2.0, 2.0)); break;
        }
    }
    return out;
}

std::string scenario_to_json(const Scenario &s) {
    nlohmann::json j;
    j["label"] = s.label;
    j["T"] = s.T;
    j["change_points"] = s.change_points;
    j["segments"] = nlohmann::json::array();
    for (const auto &seg : s.segments) {
        j["segments"].push_back({{"length", seg.length},
                                 {"family", family_name(seg.family)},
                                 {"mu", seg.mu},
                                 {"sigma", seg.sigma}});
    }
    return j.dump(2);
}

Scenario scenario_from_json(const std::string &text) {
    const auto j = nlohmann::json::parse(text);
    Scenario s;
    s.label = j.value("label", "");
    s.T = j.at("T").get<int>();
    s.change_points = j.at("change_points").get<std::vector<int>>();
    int prev = 0;
    std::size_t u = 0;
    for (const auto &js : j.at("segments")) {
        SegmentSpec seg;
        seg.family = family_from_name(js.at("family").get<std::string>());
        seg.mu = js.at("mu").get<double>();
        seg.sigma = js.value("sigma", 1.0);
        if (js.contains("length")) {
            seg.length = js.at("length").get<int>();
        } else {
            // derive from the gaps of C
            const int end = u < s.change_points.size() ? s.change_points[u] : s.T;
            seg.length = end - prev;
        }
        prev += seg.length;
        ++u;
        s.segments.push_back(seg);
    }
    s.validate();
    return s;
}

} // namespace mscp
