#include "mscp/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <stdexcept>
#include <unistd.h>

#include <json.hpp>

#include "mscp/parallel.hpp"

namespace mscp {

double simulate_sup(const TriangleSpec &spec, SeededRng &rng) {
    spec.validate();
    // Brownian path at unit steps as a prefix sum of N(0,1) increments.
    std::vector<double> w(spec.T + 1);
    w[0] = 0.0;
    for (int i = 1; i <= spec.T; ++i) w[i] = w[i - 1] + rng.normal();
    double sup = 0.0;
    for (int h = spec.delta; h <= spec.h_max(); ++h) {
        const double scale = 1.0 / std::sqrt(2.0 * h);
        for (int t = h; t <= spec.T - h; ++t) {
            const double l = (w[t + h] - 2.0 * w[t] + w[t - h]) * scale;
            sup = std::max(sup, std::abs(l));
        }
    }
    return sup;
}

namespace {

std::vector<double> sup_draws(int T, int delta, int replicates, std::uint64_t seed,
                              unsigned threads) {
    TriangleSpec spec{T, delta, 1};
    spec.validate();
    std::vector<double> draws(replicates);
    parallel_for(0, replicates, [&](long r) {
        SeededRng rng(SeededRng::derive_seed(seed, static_cast<std::uint64_t>(r)));
        draws[r] = simulate_sup(spec, rng);
    }, threads);
    std::sort(draws.begin(), draws.end());
    return draws;
}

KappaRecord quantile_record(const std::vector<double> &sorted, int T, int delta,
                            double alpha, std::uint64_t seed) {
    const int R = static_cast<int>(sorted.size());
    const int k = std::max(1, static_cast<int>(std::ceil((1.0 - alpha) * R)));
    KappaRecord rec;
    rec.T = T;
    rec.delta = delta;
    rec.alpha = alpha;
    rec.replicates = R;
    rec.seed = seed;
    rec.kappa = sorted[k - 1];
    // binomial band around the order statistic
    const double band = std::sqrt(alpha * (1.0 - alpha) * R);
    const int lo = std::clamp(static_cast<int>(k - band), 1, R);
    const int hi = std::clamp(static_cast<int>(std::ceil(k + band)), 1, R);
    rec.standard_error = (sorted[hi - 1] - sorted[lo - 1]) / 2.0;
    return rec;
}

} // namespace

KappaRecord calibrate_kappa(int T, int delta, double alpha, int replicates,
                            std::uint64_t seed, unsigned threads) {
    if (alpha <= 0.0 || alpha >= 1.0)
        throw std::invalid_argument("calibrate: alpha must lie in (0,1)");
    if (replicates < 100)
        throw std::invalid_argument("calibrate: need at least 100 replicates");
    const auto draws = sup_draws(T, delta, replicates, seed, threads);
    return quantile_record(draws, T, delta, alpha, seed);
}

std::vector<KappaRecord> calibrate_kappa_multi(int T, int delta,
                                               const std::vector<double> &alphas,
                                               int replicates, std::uint64_t seed,
                                               unsigned threads) {
    if (replicates < 100)
        throw std::invalid_argument("calibrate: need at least 100 replicates");
    for (double a : alphas)
        if (a <= 0.0 || a >= 1.0)
            throw std::invalid_argument("calibrate: alpha must lie in (0,1)");
    const auto draws = sup_draws(T, delta, replicates, seed, threads);
    std::vector<KappaRecord> out;
    for (double a : alphas) out.push_back(quantile_record(draws, T, delta, a, seed));
    return out;
}

KappaCache::KappaCache(std::string path) : path_(std::move(path)) {}

std::vector<KappaRecord> KappaCache::read_all() const {
    std::ifstream in(path_);
    if (!in) return {};
    std::vector<KappaRecord> out;
    try {
        nlohmann::json j;
        in >> j;
        for (const auto &e : j) {
            KappaRecord r;
            r.T = e.at("T").get<int>();
            r.delta = e.at("delta").get<int>();
            r.alpha = e.at("alpha").get<double>();
            r.replicates = e.at("replicates").get<int>();
            r.lattice_step = e.value("lattice_step", 1);
            r.seed = e.at("seed").get<std::uint64_t>();
            r.kappa = e.at("kappa").get<double>();
            r.standard_error = e.at("standard_error").get<double>();
            out.push_back(r);
        }
    } catch (const std::exception &ex) {
        std::cerr << "warning: kappa cache unreadable (" << ex.what()
                  << "), recomputing\n";
        return {};
    }
    return out;
}

bool KappaCache::load(int T, int delta, double alpha, int replicates,
                      std::uint64_t seed, KappaRecord &out) const {
    for (const auto &r : read_all()) {
        if (r.T == T && r.delta == delta && r.alpha == alpha &&
            r.replicates == replicates && r.lattice_step == 1 && r.seed == seed) {
            out = r;
            return true;
        }
    }
    return false;
}

void KappaCache::store(const KappaRecord &record) {
    auto all = read_all();
    bool replaced = false;
    for (auto &r : all) {
        if (r.T == record.T && r.delta == record.delta && r.alpha == record.alpha &&
            r.replicates == record.replicates && r.seed == record.seed) {
            r = record;
            replaced = true;
        }
    }
    if (!replaced) all.push_back(record);
    nlohmann::json j = nlohmann::json::array();
    for (const auto &r : all) {
        j.push_back({{"T", r.T},
                     {"delta", r.delta},
                     {"alpha", r.alpha},
                     {"replicates", r.replicates},
                     {"lattice_step", r.lattice_step},
                     {"seed", r.seed},
                     {"kappa", r.kappa},
                     {"standard_error", r.standard_error}});
    }
    const std::string tmp = path_ + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp);
        if (!out) throw std::runtime_error("cannot write kappa cache at " + tmp);
        out << j.dump(2) << '\n';
    }
    if (std::rename(tmp.c_str(), path_.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error("cannot move kappa cache into place at " + path_);
    }
}

KappaRecord KappaCache::get_or_compute(int T, int delta, double alpha, int replicates,
                                       std::uint64_t seed, unsigned threads) {
    KappaRecord rec;
    if (load(T, delta, alpha, replicates, seed, rec)) return rec;
    rec = calibrate_kappa(T, delta, alpha, replicates, seed, threads);
    store(rec);
    return rec;
}

std::string default_cache_path() {
    if (const char *dir = std::getenv("MSCP_CACHE_DIR"))
        return std::string(dir) + "/kappa_cache.json";
    return "kappa_cache.json";
}

} // namespace mscp
