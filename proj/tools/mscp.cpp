#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mscp/bench.hpp"
#include "mscp/calibrate.hpp"
#include "mscp/detector.hpp"
#include "mscp/field.hpp"
#include "mscp/synth.hpp"

namespace {

constexpr const char *kVersion = "0.1.0";

// exit codes: 0 ok, 2 parse/configuration error, 3 internal failure
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> read_csv_values(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open input file: " + path);
    std::vector<double> values;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip trailing CR and whitespace
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
        if (line.empty()) continue;
        // two-column "index,value" files: the index column is ignored,
        // values are taken in file order
        std::string cell = line;
        const auto comma = line.find(',');
        if (comma != std::string::npos) cell = line.substr(comma + 1);
        try {
            std::size_t used = 0;
            const double v = std::stod(cell, &used);
            while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used])))
                ++used;
            if (used != cell.size()) throw std::invalid_argument("trailing junk");
            values.push_back(v);
        } catch (const std::exception &) {
            if (lineno == 1 && values.empty()) continue; // optional header
            throw UsageError("non-numeric row at line " + std::to_string(lineno) + " of " + path);
        }
    }
    if (values.empty()) throw UsageError("no numeric rows in " + path);
    return values;
}

void write_manifest(const std::string &path, const std::string &subcommand,
                    const std::vector<std::string> &inputs,
                    const std::vector<std::string> &outputs, const nlohmann::json &config,
                    std::uint64_t seed, double wall_seconds) {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["config"] = config;
    j["version"] = kVersion;
    j["seed"] = seed;
    j["wall_clock_seconds"] = wall_seconds;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << j.dump(2) << '\n';
}

mscp::KappaCache open_cache() { return mscp::KappaCache(mscp::default_cache_path()); }

int cmd_detect(const std::string &input, int delta, int grid, double alpha,
               std::optional<double> kappa_override, std::uint64_t seed,
               std::optional<int> delta_c, int cal_reps, std::uint64_t cal_seed,
               const std::string &prefix, unsigned threads) {
    const auto t0 = std::chrono::steady_clock::now();
    mscp::Series series;
    series.values = read_csv_values(input);
    if (series.size() < 2 * delta)
        throw UsageError("series length " + std::to_string(series.size()) +
                         " is shorter than 2*delta");

    mscp::DetectorConfig cfg;
    cfg.delta = delta;
    cfg.grid_g = grid;
    cfg.alpha = alpha;
    cfg.seed = seed;
    cfg.delta_c_hint = delta_c;
    if (kappa_override) {
        cfg.kappa = *kappa_override;
    } else {
        auto cache = open_cache();
        cfg.kappa = cache.get_or_compute(series.size(), delta, alpha, cal_reps,
                                         cal_seed, threads).kappa;
    }

    mscp::TriangleSpec spec{series.size(), delta, 1};
    const auto field = mscp::compute_field(series, spec);
    const auto report = mscp::detect(field, series, cfg);

    const std::string report_path = prefix + ".report.json";
    const std::string field_path = prefix + ".field.tsv";
    const std::string paths_path = prefix + ".paths.tsv";
    const std::string segs_path = prefix + ".segments.tsv";
    const std::string manifest_path = prefix + ".manifest.json";

    {
        auto j = nlohmann::json::parse(report.to_json());
        j["manifest"] = manifest_path;
        std::ofstream out(report_path);
        out << j.dump(2) << '\n';
    }
    field.write_tsv(field_path);
    {
        std::ofstream out(paths_path);
        out << "path\tk\tt\th\tstat\tdisposition\n";
        int idx = 0;
        for (const auto &a : report.paths) {
            for (std::size_t k = 0; k < a.path.steps.size(); ++k)
                out << idx << '\t' << k << '\t' << a.path.steps[k] << '\t'
                    << a.path.start.h - static_cast<int>(k) << '\t'
                    << a.path.stat_values[k] << '\t'
                    << mscp::disposition_name(a.disposition) << '\n';
            ++idx;
        }
    }
    {
        std::ofstream out(segs_path);
        out << "start\tend\tmean\tvar\n";
        for (const auto &s : report.segments)
            out << s.start << '\t' << s.end << '\t' << s.mean << '\t' << s.var << '\n';
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(manifest_path, "detect", {input},
                   {report_path, field_path, paths_path, segs_path},
                   {{"delta", delta}, {"grid", cfg.effective_grid()}, {"alpha", alpha},
                    {"kappa", cfg.kappa}, {"delta_c", delta_c ? *delta_c : -1}},
                   seed, wall);

    std::cout << "change points:";
    for (int c : report.change_points) std::cout << ' ' << c;
    std::cout << "\nreport: " << report_path << '\n';
    return 0;
}

int cmd_simulate(const std::string &label, const std::string &scenario_file,
                 const std::string &dist, const std::string &null_family, int T, int n,
                 std::uint64_t seed, const std::string &prefix) {
    const auto t0 = std::chrono::steady_clock::now();
    mscp::SeededRng rng(seed);
    mscp::Series series;
    nlohmann::json truth;

    if (!null_family.empty()) {
        const auto fam = mscp::null_family_from_name(null_family);
        series = mscp::null_series(fam, T, rng);
        truth["change_points"] = nlohmann::json::array();
        truth["family"] = null_family;
        truth["T"] = T;
    } else {
        mscp::Scenario scenario;
        if (!scenario_file.empty()) {
            std::ifstream in(scenario_file);
            if (!in) throw UsageError("cannot open scenario file: " + scenario_file);
            std::stringstream buf;
            buf << in.rdbuf();
            scenario = mscp::scenario_from_json(buf.str());
        } else {
            scenario = mscp::scenario_by_label(label).with_variant(
                mscp::variant_from_name(dist));
        }
        series = mscp::generate(scenario, n, rng);
        truth = nlohmann::json::parse(mscp::scenario_to_json(scenario));
        truth["scaled_change_points"] = series.truth;
        truth["n"] = n;
    }

    const std::string csv_path = prefix + ".csv";
    const std::string truth_path = prefix + ".truth.json";
    const std::string manifest_path = prefix + ".manifest.json";
    {
        std::ofstream out(csv_path);
        out.precision(17);
        for (double v : series.values) out << v << '\n';
    }
    truth["manifest"] = manifest_path;
    {
        std::ofstream out(truth_path);
        out << truth.dump(2) << '\n';
    }
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(manifest_path, "simulate", {}, {csv_path, truth_path},
                   {{"label", label}, {"dist", dist}, {"null", null_family},
                    {"T", T}, {"n", n}},
                   seed, wall);
    std::cout << "wrote " << series.size() << " values to " << csv_path << '\n';
    return 0;
}

int cmd_calibrate(int T, int delta, double alpha, int reps, std::uint64_t seed,
                  unsigned threads) {
    auto cache = open_cache();
    const auto rec = cache.get_or_compute(T, delta, alpha, reps, seed, threads);
    std::cout << "kappa = " << rec.kappa << "  (se " << rec.standard_error << ", T=" << rec.T
              << ", delta=" << rec.delta << ", alpha=" << rec.alpha << ", reps="
              << rec.replicates << ", seed=" << rec.seed << ")\n";
    return 0;
}

int cmd_bench(const std::vector<std::string> &scenario_labels,
              const std::vector<std::string> &dists, int reps, int delta, int grid,
              double alpha, std::optional<double> kappa_override, std::uint64_t seed,
              int cal_reps, std::uint64_t cal_seed, const std::string &out_path,
              unsigned threads) {
    std::vector<mscp::Scenario> scenarios;
    if (scenario_labels.empty()) {
        scenarios = mscp::standard_scenarios();
    } else {
        for (const auto &l : scenario_labels) scenarios.push_back(mscp::scenario_by_label(l));
    }
    std::vector<mscp::DistVariant> variants;
    if (dists.empty()) {
        variants = {mscp::DistVariant::Normal, mscp::DistVariant::Gamma,
                    mscp::DistVariant::Poisson, mscp::DistVariant::Binomial,
                    mscp::DistVariant::Mix};
    } else {
        for (const auto &d : dists) variants.push_back(mscp::variant_from_name(d));
    }

    mscp::DetectorConfig cfg;
    cfg.delta = delta;
    cfg.grid_g = grid;
    cfg.alpha = alpha;
    if (kappa_override) {
        cfg.kappa = *kappa_override;
    } else {
        auto cache = open_cache();
        cfg.kappa = cache.get_or_compute(scenarios.front().T, delta, alpha, cal_reps,
                                         cal_seed, threads).kappa;
    }

    const auto rows = mscp::benchmark(scenarios, variants, reps, cfg, seed, threads, true);
    std::ostream *out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw std::runtime_error("cannot write " + out_path);
        out = &file;
    }
    *out << mscp::BenchRow::csv_header() << '\n';
    for (const auto &r : rows) *out << r.csv_line() << '\n';
    return 0;
}

int cmd_scenarios(const std::string &out_dir) {
    for (const auto &s : mscp::standard_scenarios()) {
        const std::string path = out_dir + "/scenario_" + s.label + ".json";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << mscp::scenario_to_json(s) << '\n';
        std::cout << path << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multiscale change point detection for univariate sequences"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware)");

    // detect
    auto *det = app.add_subcommand("detect", "detect change points in a CSV series");
    std::string det_input, det_prefix = "mscp_detect";
    int det_delta = 20, det_grid = 0, det_cal_reps = 10000;
    double det_alpha = 0.01;
    std::optional<double> det_kappa;
    std::optional<int> det_delta_c;
    std::uint64_t det_seed = 0, det_cal_seed = 1;
    det->add_option("input", det_input, "CSV with one value per line")->required();
    det->add_option("--delta", det_delta, "minimal window");
    det->add_option("--grid", det_grid, "start grid mesh (default = delta)");
    det->add_option("--alpha", det_alpha, "significance level for kappa");
    det->add_option("--kappa", det_kappa, "threshold override, skips calibration");
    det->add_option("--seed", det_seed, "tie-break seed");
    det->add_option("--delta-c", det_delta_c, "known minimal spacing (early break)");
    det->add_option("--cal-reps", det_cal_reps, "calibration replicates");
    det->add_option("--cal-seed", det_cal_seed, "calibration seed");
    det->add_option("--out", det_prefix, "output file prefix");

    // simulate
    auto *sim = app.add_subcommand("simulate", "generate a scenario series");
    std::string sim_label, sim_file, sim_dist = "normal", sim_null,
                sim_prefix = "mscp_sim";
    int sim_T = 1000, sim_n = 1;
    std::uint64_t sim_seed = 0;
    sim->add_option("label", sim_label, "built-in scenario label (e.g. 1a)");
    sim->add_option("--file", sim_file, "scenario JSON file");
    sim->add_option("--dist", sim_dist, "normal|gamma|poisson|binomial|mix");
    sim->add_option("--null", sim_null,
                    "null family: N01|Pois1|Exp1|Bin10Half|Gamma05_2|Gamma2_2");
    sim->add_option("--T", sim_T, "length for --null");
    sim->add_option("--n", sim_n, "scale factor");
    sim->add_option("--seed", sim_seed, "rng seed");
    sim->add_option("--out", sim_prefix, "output file prefix");

    // calibrate
    auto *cal = app.add_subcommand("calibrate", "derive the breaking threshold kappa");
    int cal_T = 1000, cal_delta = 20, cal_reps = 10000;
    double cal_alpha = 0.01;
    std::uint64_t cal_seed = 1;
    cal->add_option("--T", cal_T, "observation horizon");
    cal->add_option("--delta", cal_delta, "minimal window");
    cal->add_option("--alpha", cal_alpha, "significance level");
    cal->add_option("--reps", cal_reps, "Monte Carlo replicates");
    cal->add_option("--seed", cal_seed, "rng seed");

    // bench
    auto *ben = app.add_subcommand("bench", "scenario benchmark metrics");
    std::vector<std::string> ben_scenarios, ben_dists;
    int ben_reps = 100, ben_delta = 20, ben_grid = 0, ben_cal_reps = 10000;
    double ben_alpha = 0.01;
    std::optional<double> ben_kappa;
    std::uint64_t ben_seed = 0, ben_cal_seed = 1;
    std::string ben_out;
    ben->add_option("--scenario", ben_scenarios, "scenario labels (default: all)");
    ben->add_option("--dist", ben_dists, "distribution variants (default: all)");
    ben->add_option("--reps", ben_reps, "replicates per cell");
    ben->add_option("--delta", ben_delta, "minimal window");
    ben->add_option("--grid", ben_grid, "start grid mesh");
    ben->add_option("--alpha", ben_alpha, "significance level for kappa");
    ben->add_option("--kappa", ben_kappa, "threshold override");
    ben->add_option("--seed", ben_seed, "master seed");
    ben->add_option("--cal-reps", ben_cal_reps, "calibration replicates");
    ben->add_option("--cal-seed", ben_cal_seed, "calibration seed");
    ben->add_option("-o,--out", ben_out, "CSV output path (default stdout)");

    // scenarios
    auto *sc = app.add_subcommand("scenarios", "export the built-in scenario set");
    std::string sc_dir = ".";
    sc->add_option("--dir", sc_dir, "output directory");

    try {
        app.parse(argc, argv);
        if (det->parsed())
            return cmd_detect(det_input, det_delta, det_grid, det_alpha, det_kappa,
                              det_seed, det_delta_c, det_cal_reps, det_cal_seed,
                              det_prefix, threads);
        if (sim->parsed()) {
            if (sim_label.empty() && sim_file.empty() && sim_null.empty())
                throw UsageError("simulate: give a scenario label, --file, or --null");
            return cmd_simulate(sim_label, sim_file, sim_dist, sim_null, sim_T, sim_n,
                                sim_seed, sim_prefix);
        }
        if (cal->parsed())
            return cmd_calibrate(cal_T, cal_delta, cal_alpha, cal_reps, cal_seed, threads);
        if (ben->parsed())
            return cmd_bench(ben_scenarios, ben_dists, ben_reps, ben_delta, ben_grid,
                             ben_alpha, ben_kappa, ben_seed, ben_cal_reps, ben_cal_seed,
                             ben_out, threads);
        if (sc->parsed()) return cmd_scenarios(sc_dir);
        return 2;
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
