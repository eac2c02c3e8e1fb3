// SPDX-License-Identifier: Apache-2.0
//
// had-doa command line: RMSE sweeps, single estimates, complexity report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "haddoa/sim_harness.hpp"

namespace {

struct GeometryArgs {
    int antennas = 64;
    int subarray_size = 4;
    double spacing = 0.5;
    int snapshots = 8;
};

void add_geometry_options(CLI::App* cmd, GeometryArgs& geo) {
    cmd->add_option("--antennas", geo.antennas, "Total antenna count N")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--subarray-size", geo.subarray_size,
                    "Antennas per subarray M (K = N / M)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--spacing", geo.spacing,
                    "Element spacing over wavelength d/lambda")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--snapshots", geo.snapshots, "Snapshots per time slot L")
        ->check(CLI::PositiveNumber);
}

haddoa::Method parse_method(const std::string& name) {
    if (name == "fast") {
        return haddoa::Method::fast;
    }
    if (name == "baseline") {
        return haddoa::Method::baseline;
    }
    throw std::invalid_argument("unknown method: " + name);
}

int run_sweep(const GeometryArgs& geo, double theta0, const std::vector<double>& snr,
              int trials, std::uint64_t seed, const std::vector<std::string>& methods,
              const std::string& out_path) {
    haddoa::ExperimentConfig ec;
    ec.array = haddoa::ArrayConfig::create(geo.antennas, geo.subarray_size, geo.spacing);
    ec.theta0 = haddoa::Angle::from_degrees(theta0);
    ec.snapshots_per_slot = geo.snapshots;
    ec.snr_grid_db = snr;
    ec.trials = trials;
    ec.master_seed = seed;
    for (const auto& m : methods) {
        ec.methods.push_back(parse_method(m));
    }

    const haddoa::RmseTable table = haddoa::run_rmse_sweep(ec);
    if (out_path.empty()) {
        haddoa::write_csv(table, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) {
            throw std::runtime_error("cannot open output path: " + out_path);
        }
        haddoa::write_csv(table, out);
        if (!out) {
            throw std::runtime_error("failed writing: " + out_path);
        }
    }
    return 0;
}

int run_estimate(const GeometryArgs& geo, double theta0, double snr,
                 std::uint64_t seed, const std::string& method) {
    const auto cfg =
        haddoa::ArrayConfig::create(geo.antennas, geo.subarray_size, geo.spacing);
    const haddoa::SourceScenario scn{haddoa::Angle::from_degrees(theta0), snr,
                                     geo.snapshots};
    haddoa::RandomStream rng(seed);
    const haddoa::Method m = parse_method(method);
    const haddoa::EstimateResult res = m == haddoa::Method::fast
                                           ? haddoa::estimate_fast(scn, cfg, rng)
                                           : haddoa::estimate_baseline(scn, cfg, rng);

    nlohmann::json candidates = nlohmann::json::array();
    for (const auto& c : res.profile.per_candidate) {
        candidates.push_back({{"angle_deg", c.angle.deg()},
                              {"avg_power", c.average_power}});
    }
    const nlohmann::json j = {
        {"method", haddoa::method_name(res.method)},
        {"theta_hat_deg", res.theta_hat.deg()},
        {"slots_consumed", res.slots_consumed},
        {"selected_index", res.profile.selected_index},
        {"candidates", candidates},
        {"theta0_deg", theta0},
        {"snr_db", snr},
        {"seed", seed},
    };
    std::cout << j.dump() << '\n';
    return 0;
}

int run_complexity(const GeometryArgs& geo) {
    const auto cfg =
        haddoa::ArrayConfig::create(geo.antennas, geo.subarray_size, geo.spacing);
    const haddoa::ComplexityReport rep =
        haddoa::complexity_flops(cfg, geo.snapshots);
    std::printf("c_original_flops: %lld\n", static_cast<long long>(rep.c_original));
    std::printf("c_proposed_flops: %lld\n", static_cast<long long>(rep.c_proposed));
    std::printf("elimination_term_ratio: %g\n", rep.reduction_term_ratio);
    std::printf("delay_ratio: %g\n", haddoa::delay_ratio(cfg));
    return 0;
}

// Values like "-20,-15,-10" after a flag look like options to the parser;
// rewrite "--flag -20,..." into "--flag=-20,..." when the value is numeric.
std::vector<std::string> normalize_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::vector<std::string> out;
    out.reserve(args.size());
    for (std::size_t i = 0; i < args.size(); ++i) {
        const bool flag = args[i].size() > 2 && args[i].rfind("--", 0) == 0 &&
                          args[i].find('=') == std::string::npos;
        if (flag && i + 1 < args.size() && args[i + 1].size() > 1 &&
            args[i + 1][0] == '-' &&
            (std::isdigit(static_cast<unsigned char>(args[i + 1][1])) ||
             args[i + 1][1] == '.')) {
            out.push_back(args[i] + "=" + args[i + 1]);
            ++i;
        } else {
            out.push_back(args[i]);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-stage DOA estimation for a sub-connected hybrid "
                 "analog-digital ULA receiver"};
    app.require_subcommand(1);

    GeometryArgs sweep_geo, est_geo, cx_geo;
    double theta0 = 41.345;
    std::vector<double> snr_grid;
    int trials = 2000;
    std::uint64_t seed = 0;
    std::vector<std::string> methods{"fast", "baseline"};
    std::string out_path;

    CLI::App* sweep = app.add_subcommand("sweep", "Monte Carlo RMSE-vs-SNR sweep, CSV output");
    add_geometry_options(sweep, sweep_geo);
    sweep->add_option("--theta0", theta0, "True emitter direction, degrees");
    sweep->add_option("--snr", snr_grid, "SNR grid in dB, comma separated")
        ->required()
        ->delimiter(',');
    sweep->add_option("--trials", trials, "Monte Carlo trials per point")
        ->check(CLI::PositiveNumber);
    sweep->add_option("--seed", seed, "Master seed");
    sweep->add_option("--methods", methods, "Methods to run, comma separated")
        ->delimiter(',')
        ->check(CLI::IsMember({"fast", "baseline"}));
    sweep->add_option("--out", out_path, "Output CSV path (default: stdout)");

    double est_theta0 = 41.345;
    double est_snr = 0.0;
    std::uint64_t est_seed = 0;
    std::string est_method = "fast";
    CLI::App* estimate = app.add_subcommand("estimate", "Single estimate, one-line JSON output");
    add_geometry_options(estimate, est_geo);
    estimate->add_option("--theta0", est_theta0, "True emitter direction, degrees");
    estimate->add_option("--snr", est_snr, "SNR in dB (inf disables noise)");
    estimate->add_option("--seed", est_seed, "RNG seed");
    estimate->add_option("--method", est_method, "Estimator")
        ->check(CLI::IsMember({"fast", "baseline"}));

    CLI::App* complexity = app.add_subcommand("complexity", "Closed-form FLOP counts and ratios");
    add_geometry_options(complexity, cx_geo);

    const std::vector<std::string> args = normalize_args(argc, argv);
    try {
        // CLI11 parses reversed argv
        app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed()) {
            return run_sweep(sweep_geo, theta0, snr_grid, trials, seed, methods, out_path);
        }
        if (estimate->parsed()) {
            return run_estimate(est_geo, est_theta0, est_snr, est_seed, est_method);
        }
        return run_complexity(cx_geo);
    } catch (const std::invalid_argument& e) {
        std::cerr << "had-doa: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "had-doa: " << e.what() << '\n';
        return 1;
    }
}
