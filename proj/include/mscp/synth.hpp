#pragma once

#include <string>
#include <vector>

#include "mscp/rng.hpp"
#include "mscp/series.hpp"

namespace mscp {

enum class Family { Normal, Gamma, Poisson, Binomial10 };

const char *family_name(Family f);
Family family_from_name(const std::string &name);

// Distribution variants used by the simulation studies: each scenario can
// be run with every section normal/gamma/Poisson/binomial, or with a mix
// that cycles Normal, Gamma, Poisson, Binomial10, Normal, Gamma over the
// sections.
enum class DistVariant { Normal, Gamma, Poisson, Binomial, Mix };

const char *variant_name(DistVariant v);
DistVariant variant_from_name(const std::string &name);

struct SegmentSpec {
    int length = 0;
    Family family = Family::Normal;
    double mu = 0.0;
    double sigma = 1.0; // ignored for Poisson/Binomial10

    // Std. dev. actually realized: for Poisson sqrt(mu), for Binomial10
    // sqrt(mu * (1 - mu/10)), otherwise sigma.
    double effective_sigma() const;

    void validate(int index) const; // throws std::invalid_argument
};

struct Scenario {
    std::string label;
    int T = 0;
    std::vector<int> change_points; // strictly increasing, in (0, T)
    std::vector<SegmentSpec> segments;

    void validate() const;
    int min_gap() const; // delta_C

    // Replace every segment family according to the variant. Gamma requires
    // mu > 0; Poisson mu > 0; Binomial10 0 < mu < 10.
    Scenario with_variant(DistVariant v) const;
};

// Draw n*T observations: segment u spans indices n*c_{u-1}+1 .. n*c_u and
// is i.i.d. from its family with mean mu_u and variance sigma_u^2. The
// ground-truth change set {n*c_u} is attached.
Series generate(const Scenario &scenario, int n, SeededRng &rng);

// The eleven tabulated scenarios 1a-1c, 2a-2c, 3a-3e with T = 1000,
// families defaulted to Normal (apply with_variant for the others).
std::vector<Scenario> standard_scenarios();
Scenario scenario_by_label(const std::string &label);

enum class NullFamily { N01, Pois1, Exp1, Bin10Half, Gamma05_2, Gamma2_2 };

const char *null_family_name(NullFamily f);
NullFamily null_family_from_name(const std::string &name);

// i.i.d. sequence with no change points, used for size studies.
Series null_series(NullFamily family, int T, SeededRng &rng);

// Scenario JSON: {label, T, change_points, segments:[{family, mu, sigma}]}
std::string scenario_to_json(const Scenario &s);
Scenario scenario_from_json(const std::string &text);

} // namespace mscp
