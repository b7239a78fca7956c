// Command-line front end: simulate | estimate | mc | theory.

#include "fou/errors.hpp"
#include "fou/estimators.hpp"
#include "fou/fgn.hpp"
#include "fou/filters.hpp"
#include "fou/io.hpp"
#include "fou/montecarlo.hpp"
#include "fou/process.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

enum ExitCode : int {
    kOk = 0,
    kParameter = 2,
    kInput = 3,
    kNumerical = 4,
    kDegenerate = 5,
    kExperiment = 6,
};

struct ModelFlags {
    double lambda = 1.0;
    double sigma = 1.0;
    double hurst = 0.5;
    double y0 = 0.0;

    fou::FouParams params() const { return {lambda, sigma, hurst, y0}; }
};

void add_model_flags(CLI::App* cmd, ModelFlags& m) {
    cmd->add_option("--lambda", m.lambda, "drift lambda > 0")->capture_default_str();
    cmd->add_option("--sigma", m.sigma, "diffusion sigma > 0")->capture_default_str();
    cmd->add_option("--hurst", m.hurst, "Hurst exponent in (0, 1)")->capture_default_str();
    cmd->add_option("--x0,--y0", m.y0, "initial value")->capture_default_str();
}

// Mesh from (T, n) or (delta, n); the rule delta = log n / n when neither is given.
double resolve_delta(const std::optional<double>& horizon, const std::optional<double>& delta, std::size_t n) {
    if (horizon && delta) throw fou::ParameterError("--T and --delta are mutually exclusive");
    if (n < 1) throw fou::ParameterError("--n must be at least 1");
    if (horizon) {
        if (!(*horizon > 0.0)) throw fou::ParameterError("--T must be positive");
        return *horizon / static_cast<double>(n);
    }
    if (delta) {
        if (!(*delta > 0.0)) throw fou::ParameterError("--delta must be positive");
        return *delta;
    }
    const double nn = static_cast<double>(n);
    return std::log(nn) / nn;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw fou::InputError("cannot open '" + path + "' for writing");
    return out;
}

// Turns key=value lines of a config file into "--key value" arguments placed
// before the command-line flags, so explicit flags take precedence.
std::vector<std::string> expand_config(std::vector<std::string> args) {
    std::vector<std::string> config_args;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            std::ifstream in(args[i + 1]);
            if (!in) throw fou::InputError("cannot read config file '" + args[i + 1] + "'");
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                const auto first = line.find_first_not_of(" \t");
                if (first == std::string::npos || line[first] == '#' || line[first] == ';' || line[first] == '[')
                    continue;
                const auto eq = line.find('=');
                if (eq == std::string::npos) throw fou::InputError("config line without '=': " + line);
                auto trim = [](std::string s) {
                    const auto b = s.find_first_not_of(" \t\"");
                    const auto e = s.find_last_not_of(" \t\"");
                    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
                };
                config_args.push_back("--" + trim(line.substr(0, eq)));
                config_args.push_back(trim(line.substr(eq + 1)));
            }
            ++i;
        } else {
            rest.push_back(args[i]);
        }
    }
    if (config_args.empty()) return rest;
    // rest[0] is the program name, rest[1] the subcommand.
    std::vector<std::string> out(rest.begin(), rest.begin() + std::min<std::size_t>(2, rest.size()));
    out.insert(out.end(), config_args.begin(), config_args.end());
    if (rest.size() > 2) out.insert(out.end(), rest.begin() + 2, rest.end());
    return out;
}

std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) {
        try {
            parts.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw fou::ParameterError("--variogram-grid: cannot parse '" + tok + "'");
        }
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0])
        throw fou::ParameterError("--variogram-grid expects start:stop:step with step > 0");
    const auto count = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = parts[0] + static_cast<double>(i) * parts[2];
    return grid;
}

fou::EstimatorSet parse_estimators(const std::string& list) {
    fou::EstimatorSet set{false, false, false};
    std::stringstream ss(list);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok == "H" || tok == "hurst") set.hurst = true;
        else if (tok == "sigma") set.sigma = true;
        else if (tok == "lambda") set.lambda = true;
        else throw fou::ParameterError("--estimators: unknown estimator '" + tok + "'");
    }
    return set;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional Ornstein-Uhlenbeck simulation and estimation"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    std::uint64_t seed = 1;
    std::string out_path;
    std::string filter_spec = "daubechies2";
    std::string variant_name = "corrected";
    unsigned threads = 0;

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a regularly sampled path, CSV t,x");
    ModelFlags sim_model;
    std::string model = "fou";
    std::size_t sim_n = 1000;
    std::optional<double> sim_T;
    std::optional<double> sim_delta;
    add_model_flags(sim, sim_model);
    sim->add_option("--model", model, "fou | fbm | fou-exact")
        ->check(CLI::IsMember({"fou", "fbm", "fou-exact"}))
        ->capture_default_str();
    sim->add_option("--n", sim_n, "number of steps N")->capture_default_str();
    sim->add_option("--T", sim_T, "horizon T = N * delta");
    sim->add_option("--delta", sim_delta, "mesh delta");
    sim->add_option("--seed", seed, "RNG seed")->capture_default_str();
    sim->add_option("--out", out_path, "output CSV (stdout when omitted)");
    sim->add_option("--threads", threads, "unused; accepted for uniformity");

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate H, sigma, mu2 and lambda from a t,x CSV");
    std::string in_path;
    double est_burn_in = 0.0;
    est->add_option("input,--in", in_path, "input CSV with header t,x")->required();
    est->add_option("--filter", filter_spec, "daubechies2 | classical:K | comma-separated coefficients")
        ->capture_default_str();
    est->add_option("--burn-in", est_burn_in, "fraction of leading observations to discard")
        ->capture_default_str();
    est->add_option("--out", out_path, "write the key=value report here as well");
    est->add_option("--seed", seed, "echoed only");

    // mc
    auto* mc = app.add_subcommand("mc", "Monte-Carlo experiment for one parameter cell");
    ModelFlags mc_model;
    std::size_t mc_n = 1000;
    std::size_t mc_m = 500;
    std::optional<double> mc_T;
    std::string mesh_rule;
    std::string estimator_list = "H,sigma,lambda";
    double mc_burn_in = 0.0;
    std::string prefix = "mc";
    std::size_t density_points = 401;
    add_model_flags(mc, mc_model);
    mc->add_option("--n", mc_n, "observed steps N")->capture_default_str();
    mc->add_option("--M", mc_m, "replications")->capture_default_str();
    mc->add_option("--T", mc_T, "horizon T");
    mc->add_option("--mesh-rule", mesh_rule, "logN/N: delta = log N / N when --T is absent")
        ->check(CLI::IsMember({"logN/N"}));
    mc->add_option("--filter", filter_spec, "filter selector")->capture_default_str();
    mc->add_option("--estimators", estimator_list, "subset of H,sigma,lambda")->capture_default_str();
    mc->add_option("--burn-in", mc_burn_in, "fraction of each simulated path discarded")->capture_default_str();
    mc->add_option("--seed", seed, "RNG seed")->capture_default_str();
    mc->add_option("--threads", threads, "worker cap (default FOU_THREADS or all cores)");
    mc->add_option("--out", prefix, "output prefix for _table.csv, _samples.csv, _density.csv")
        ->capture_default_str();
    mc->add_option("--density-points", density_points, "grid size of the density CSV")->capture_default_str();
    mc->add_option("--sigma-h-variant", variant_name, "corrected | printed")->capture_default_str();

    // theory
    auto* th = app.add_subcommand("theory", "closed-form quantities mu2, sigma_H^2, Gamma_3 and the variogram");
    ModelFlags th_model;
    std::string grid_spec;
    add_model_flags(th, th_model);
    th->add_option("--variogram-grid", grid_spec, "start:stop:step grid for v(t)");
    th->add_option("--sigma-h-variant", variant_name, "corrected | printed")->capture_default_str();

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(std::move(args));
    } catch (const fou::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
    std::vector<const char*> cargs;
    for (const auto& a : args) cargs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*sim) {
            const double delta = resolve_delta(sim_T, sim_delta, sim_n);
            fou::SamplePath path;
            if (model == "fou") {
                path = fou::simulate_euler(sim_model.params(), sim_n, delta, seed);
            } else if (model == "fou-exact") {
                path = fou::sample_stationary_exact(sim_model.params(), sim_n + 1, delta, seed);
            } else {
                const fou::FgnSpec spec{sim_model.hurst, sim_n, delta, sim_model.sigma};
                path.delta = delta;
                path.values = fou::cumulative_path(fou::sample_fgn_circulant(spec, seed));
            }
            std::ostringstream summary;
            summary << "model=" << model << " N=" << path.steps() << " delta=" << fou::format_double(delta)
                    << " T=" << fou::format_double(path.horizon()) << " seed=" << seed;
            if (path.meta)
                for (const auto& w : path.meta->warnings) summary << " warning=\"" << w << '"';
            if (out_path.empty()) {
                fou::write_path_csv(std::cout, path);
                std::cerr << summary.str() << '\n';
            } else {
                auto out = open_output(out_path);
                fou::write_path_csv(out, path);
                if (!out) throw fou::InputError("failed writing '" + out_path + "'");
                std::cout << summary.str() << '\n';
            }
            return kOk;
        }

        if (*est) {
            std::ifstream in(in_path);
            if (!in) throw fou::InputError("cannot read '" + in_path + "'");
            auto path = fou::read_path_csv(in);
            if (!(est_burn_in >= 0.0 && est_burn_in < 1.0))
                throw fou::ParameterError("--burn-in must lie in [0, 1)");
            const auto discard = static_cast<std::size_t>(est_burn_in * static_cast<double>(path.values.size()));
            path.values.erase(path.values.begin(), path.values.begin() + discard);
            const auto filter = fou::parse_filter(filter_spec);
            const auto result = fou::estimate_all(path, filter);
            std::ostringstream report;
            report << "N=" << path.steps() << '\n' << "delta=" << fou::format_double(path.delta) << '\n';
            fou::write_estimation_kv(report, result);
            std::cout << report.str();
            if (!out_path.empty()) {
                auto out = open_output(out_path);
                out << report.str();
            }
            return kOk;
        }

        if (*mc) {
            fou::McConfig config;
            config.params = mc_model.params();
            if (mc_T && !mesh_rule.empty()) std::cerr << "note: --T overrides --mesh-rule\n";
            config.horizon = mc_T;
            config.n_obs = mc_n;
            config.replications = mc_m;
            config.filter = fou::parse_filter(filter_spec);
            config.seed = seed;
            config.estimators = parse_estimators(estimator_list);
            config.burn_in_fraction = mc_burn_in;
            config.threads = threads;
            const auto variant = fou::parse_sigma_h_variant(variant_name);

            const auto summary = fou::run_experiment(config);
            {
                auto out = open_output(prefix + "_table.csv");
                fou::write_table_csv(out, summary);
            }
            {
                auto out = open_output(prefix + "_samples.csv");
                fou::write_samples_csv(out, summary);
            }
            fou::write_table_csv(std::cout, summary);
            std::cout << "seed=" << seed << " delta=" << fou::format_double(summary.delta)
                      << " successes=" << summary.successes() << " failures=" << summary.failures.size()
                      << " warnings=" << summary.warning_count << '\n';
            for (const auto& f : summary.failures)
                std::cout << "failed replication=" << f.replication << " stream=" << f.stream << ": " << f.message
                          << '\n';

            if (config.estimators.lambda && summary.lambda_errors.size() >= 2) {
                try {
                    const double g3 = fou::gamma3(config.params.lambda, config.params.hurst, variant);
                    auto out = open_output(prefix + "_density.csv");
                    fou::write_density_csv(out, summary.lambda_errors, g3, density_points);
                    fou::RunningStats s;
                    for (double e : summary.lambda_errors) s.push(e);
                    std::cout << "gamma3[" << fou::to_string(variant) << "]=" << fou::format_double(g3)
                              << " ks_distance=" << fou::format_double(fou::ks_distance(summary.lambda_errors, 0.0, g3))
                              << " variance_ratio=" << fou::format_double(s.variance() / g3) << '\n';
                } catch (const fou::ParameterError& e) {
                    std::cout << "gamma3 unavailable: " << e.what() << '\n';
                }
            }
            return kOk;
        }

        if (*th) {
            const auto params = th_model.params();
            const auto variant = fou::parse_sigma_h_variant(variant_name);
            std::cout << "mu2=" << fou::format_double(fou::stationary_variance(params)) << '\n';
            int status = kOk;
            try {
                std::cout << "sigma_H2[" << fou::to_string(variant)
                          << "]=" << fou::format_double(fou::sigma_H_squared(params.hurst, variant)) << '\n';
                std::cout << "gamma3=" << fou::format_double(fou::gamma3(params.lambda, params.hurst, variant))
                          << '\n';
            } catch (const fou::ParameterError& e) {
                std::cerr << "error: " << e.what() << '\n';
                status = kParameter;
            }
            if (!grid_spec.empty()) {
                std::cout << "t,v\n";
                for (double t : parse_grid(grid_spec))
                    std::cout << fou::format_double(t) << ','
                              << fou::format_double(fou::stationary_variogram(params, t)) << '\n';
            }
            return status;
        }
    } catch (const fou::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kParameter;
    } catch (const fou::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kInput;
    } catch (const fou::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const fou::EstimationError& e) {
        std::cerr << "degenerate data: " << e.what() << '\n';
        return kDegenerate;
    } catch (const fou::ExperimentError& e) {
        std::cerr << "experiment error: " << e.what() << '\n';
        return kExperiment;
    } catch (const fou::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    }
    return kOk;
}
