#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mscp/rng.hpp"
#include "mscp/triangle.hpp"

namespace mscp {

// One draw of sup |L| over the triangle lattice, where L is the
// double-increment contrast of a unit-step Brownian path:
// L_{t,h} = (W_{t+h} - 2 W_t + W_{t-h}) / sqrt(2h).
double simulate_sup(const TriangleSpec &spec, SeededRng &rng);

struct KappaRecord {
    int T = 0;
    int delta = 0;
    double alpha = 0.0;
    int replicates = 0;
    int lattice_step = 1;
    std::uint64_t seed = 0;
    double kappa = 0.0;
    double standard_error = 0.0;
};

// Empirical (1-alpha)-quantile of replicated sup draws; the quantile is
// the order statistic at index ceil((1-alpha)*R). The standard error
// comes from the binomial band around that order statistic.
KappaRecord calibrate_kappa(int T, int delta, double alpha, int replicates,
                            std::uint64_t seed, unsigned threads = 0);

// Shares one batch of sup draws across several levels.
std::vector<KappaRecord> calibrate_kappa_multi(int T, int delta,
                                               const std::vector<double> &alphas,
                                               int replicates, std::uint64_t seed,
                                               unsigned threads = 0);

// JSON-array cache of records keyed by (T, delta, alpha, replicates,
// lattice_step, seed). Corrupt files are discarded with a warning and
// recomputed. Writes go through a temp file + rename.
class KappaCache {
public:
    explicit KappaCache(std::string path);

    const std::string &path() const { return path_; }

    bool load(int T, int delta, double alpha, int replicates, std::uint64_t seed,
              KappaRecord &out) const;
    void store(const KappaRecord &record);
    KappaRecord get_or_compute(int T, int delta, double alpha, int replicates,
                               std::uint64_t seed, unsigned threads = 0);

private:
    std::vector<KappaRecord> read_all() const;

    std::string path_;
};

// Cache location: $MSCP_CACHE_DIR/kappa_cache.json, falling back to the
// working directory.
std::string default_cache_path();

} // namespace mscp
