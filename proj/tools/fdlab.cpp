// Command-line front end: every pipeline stage as a subcommand with JSON
// configs, flag overrides (flags win), and checksummed artifacts.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdlab/blowup.hpp"
#include "fdlab/geometry.hpp"
#include "fdlab/io.hpp"
#include "fdlab/pde.hpp"
#include "fdlab/pipeline.hpp"
#include "fdlab/profiles.hpp"

using nlohmann::json;
using namespace fdlab;

namespace {

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file " + path);
    json j;
    in >> j;
    if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");
    return j;
}

double num(const json& cfg, const std::string& key, double fallback) {
    return cfg.contains(key) ? cfg.at(key).get<double>() : fallback;
}

std::string str(const json& cfg, const std::string& key, const std::string& fallback) {
    return cfg.contains(key) ? cfg.at(key).get<std::string>() : fallback;
}

DiffusionModel parse_model(const json& cfg) {
    const bool has_p = cfg.contains("p"), has_m = cfg.contains("m");
    if (has_p == has_m)
        throw std::invalid_argument("specify exactly one of p (p-Laplace) or m (porous medium)");
    return has_p ? DiffusionModel::p_laplace(cfg.at("p").get<double>())
                 : DiffusionModel::porous_medium(cfg.at("m").get<double>());
}

RadialDomain parse_domain(const json& cfg) {
    const int N = int(num(cfg, "N", 2));
    const std::string shape = str(cfg, "shape", "ball");
    if (shape == "ball") return RadialDomain::ball(num(cfg, "rho", 1.0), N);
    if (shape == "exterior_ball") return RadialDomain::exterior_ball(num(cfg, "rho", 1.0), N);
    if (shape == "annulus")
        return RadialDomain::annulus(num(cfg, "rho_in", 1.0), num(cfg, "rho_out", 2.0), N);
    throw std::invalid_argument("unknown shape: " + shape);
}

BoundaryComponent parse_touched(const json& cfg, const RadialDomain& dom) {
    const std::string fallback =
        dom.shape() == DomainShape::ExteriorBall ? "inner" : "outer";
    const std::string t = str(cfg, "touched", fallback);
    if (t == "inner") return BoundaryComponent::Inner;
    if (t == "outer") return BoundaryComponent::Outer;
    throw std::invalid_argument("touched must be inner or outer");
}

ProfileVariant parse_variant(const json& cfg) {
    const std::string side_s = str(cfg, "side", "half_line");
    ProfileSide side;
    if (side_s == "half_line") side = ProfileSide::HalfLine;
    else if (side_s == "whole_line") side = ProfileSide::WholeLine;
    else throw std::invalid_argument("side must be half_line or whole_line");

    const std::string pert = str(cfg, "perturbation", "none");
    if (pert == "none") return ProfileVariant{side};
    const double eps = num(cfg, "eps", 0.05);
    if (pert == "plus") return ProfileVariant::perturbed(side, PerturbationSign::Plus, eps);
    if (pert == "minus") return ProfileVariant::perturbed(side, PerturbationSign::Minus, eps);
    throw std::invalid_argument("perturbation must be none, plus, or minus");
}

ProblemKind parse_problem(const json& cfg) {
    const std::string s = str(cfg, "problem", "initial_boundary");
    if (s == "initial_boundary") return ProblemKind::InitialBoundary;
    if (s == "cauchy") return ProblemKind::Cauchy;
    throw std::invalid_argument("problem must be initial_boundary or cauchy");
}

std::vector<double> parse_times(const json& cfg) {
    std::vector<double> times;
    if (cfg.contains("times")) {
        for (const auto& t : cfg.at("times")) times.push_back(t.get<double>());
    } else {
        for (int i = 0; i < 16; ++i) times.push_back(1e-6 * std::pow(10.0, 3.0 * i / 15.0));
    }
    return times;
}

GridSpec parse_grid(const json& cfg) {
    GridSpec g;
    g.n_space = std::size_t(num(cfg, "n_space", double(g.n_space)));
    g.n_time = std::size_t(num(cfg, "n_time", double(g.n_time)));
    g.refinement_ratio = num(cfg, "refinement_ratio", g.refinement_ratio);
    g.regularization_sigma = num(cfg, "sigma", g.regularization_sigma);
    g.truncation_radius = num(cfg, "truncation_radius", g.truncation_radius);
    g.time_grading = num(cfg, "time_grading", g.time_grading);
    return g;
}

SimilarityProfile build_profile_cfg(const json& cfg) {
    const DiffusionModel model = parse_model(cfg);
    const ProfileVariant variant = parse_variant(cfg);
    const double beta = num(cfg, "beta", 1.0);
    if (model.is_p_laplace()) {
        const double lambda = solve_lambda(model, variant, beta);
        return tabulate_plaplace_profile(model, variant, beta, lambda);
    }
    return solve_pme_profile(model, variant, beta);
}

// -------- command executors ------------------------------------------------

int exec_profile(const json& cfg, const std::string& out, std::uint64_t) {
    const SimilarityProfile prof = build_profile_cfg(cfg);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < prof.xi_grid.size(); ++i)
        rows.push_back({prof.xi_grid[i], prof.values[i]});
    write_csv(out + "/profile.csv", {"xi", "value"}, rows);
    std::ofstream(out + "/profile.json") << profile_to_json(prof).dump(2) << "\n";
    write_manifest(out, cfg, {"profile.csv", "profile.json"}, 0.0);
    std::cout << "profile: " << prof.variant.name() << ", tail constant "
              << format_double(prof.matched_tail) << " (predicted "
              << format_double(prof.predicted_tail) << ")\n";
    return 0;
}

int exec_blowup(const json& cfg, const std::string& out, std::uint64_t) {
    const DiffusionModel model = parse_model(cfg);
    const RadialDomain dom = parse_domain(cfg);
    const double offset = num(cfg, "delta", 1e-4 * dom.scale());
    BlowupGridSpec grid;
    grid.n_points = std::size_t(num(cfg, "n_points", double(grid.n_points)));
    const BlowupSolution sol = solve_blowup(model, dom, offset, grid);

    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < sol.field.r_grid.size(); ++i)
        rows.push_back({sol.field.r_grid[i], sol.field.values[i]});
    write_csv(out + "/blowup.csv", {"r", "v"}, rows);

    std::vector<std::vector<double>> rate;
    for (const BoundaryRateRow& row : boundary_rate_report(sol.field, model))
        rate.push_back({row.d, row.ratio});
    write_csv(out + "/rate.csv", {"d", "ratio"}, rate);

    json meta = field_to_json(sol.field);
    meta["delta"] = sol.delta;
    meta["residual"] = sol.residual;
    meta["newton_iterations"] = sol.newton_iterations;
    if (std::isfinite(sol.r_infinity)) meta["r_infinity"] = sol.r_infinity;
    meta["blowup_constant"] = blowup_constant(model);
    std::ofstream(out + "/blowup.json") << meta.dump(2) << "\n";
    write_manifest(out, cfg, {"blowup.csv", "rate.csv", "blowup.json"}, 0.0);
    std::cout << "blowup: residual " << format_double(sol.residual) << " after "
              << sol.newton_iterations << " Newton iterations\n";
    return 0;
}

int exec_simulate(const json& cfg, const std::string& out, std::uint64_t) {
    EvolutionSpec spec{parse_model(cfg), parse_domain(cfg), parse_problem(cfg),
                       num(cfg, "beta", 1.0), parse_grid(cfg), parse_times(cfg)};
    const std::vector<RadialField> fields = simulate(spec);

    std::vector<std::string> files;
    json meta;
    meta["times"] = json::array();
    for (std::size_t k = 0; k < fields.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "u_%03zu.csv", k);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < fields[k].r_grid.size(); ++i)
            rows.push_back({fields[k].r_grid[i], fields[k].values[i]});
        write_csv(out + "/" + name, {"r", "u"}, rows);
        files.push_back(name);
        meta["times"].push_back(*fields[k].time);
    }
    meta["field"] = field_to_json(fields.front());
    std::ofstream(out + "/simulate.json") << meta.dump(2) << "\n";
    files.push_back("simulate.json");
    write_manifest(out, cfg, files, 0.0);
    std::cout << "simulate: " << fields.size() << " output times written\n";
    return 0;
}

int exec_geometry(const json& cfg, const std::string& out, std::uint64_t seed) {
    const RadialDomain dom = parse_domain(cfg);
    const double R = num(cfg, "R", 0.5 * dom.scale());
    const TouchingBallConfig config(dom, parse_touched(cfg, dom), R);

    std::vector<double> s_values;
    if (cfg.contains("s_values")) {
        for (const auto& s : cfg.at("s_values")) s_values.push_back(s.get<double>());
    } else {
        for (int e = 1; e <= 4; ++e) s_values.push_back(R * std::pow(10.0, -e));
    }
    const std::size_t samples = std::size_t(num(cfg, "mc_samples", 200000));

    const LevelAreaLimitReport report = level_area_limit_check(config, s_values);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        double err = 0.0;
        const double mc = level_area_monte_carlo(config, report.rows[i].s, samples,
                                                 seed + i, &err);
        rows.push_back({report.rows[i].s, report.rows[i].area, report.rows[i].scaled,
                        report.divergent ? 0.0 : report.predicted, mc, err});
    }
    write_csv(out + "/geometry.csv", {"s", "area", "scaled", "predicted", "mc", "mc_err"}, rows);
    json meta;
    meta["divergent"] = report.divergent;
    if (!report.divergent) meta["predicted"] = report.predicted;
    meta["seed"] = seed;
    meta["mc_samples"] = samples;
    std::ofstream(out + "/geometry.json") << meta.dump(2) << "\n";
    write_manifest(out, cfg, {"geometry.csv", "geometry.json"}, 0.0);
    std::cout << (report.divergent
                      ? std::string("geometry: degenerate configuration (divergent limit)\n")
                      : "geometry: predicted limit " + format_double(report.predicted) + "\n");
    return 0;
}

int exec_constant(const json& cfg, const std::string& out, std::uint64_t) {
    const DiffusionModel model = parse_model(cfg);
    const int N = int(num(cfg, "N", 2));
    const double alpha = num(cfg, "alpha", 1.0);
    json prof_cfg = cfg;
    prof_cfg["side"] =
        parse_problem(cfg) == ProblemKind::Cauchy ? "whole_line" : "half_line";
    const SimilarityProfile prof = build_profile_cfg(prof_cfg);
    const ConstantResult c = compute_c(prof, alpha, N);

    json meta;
    meta["c"] = c.c;
    meta["tail_fraction"] = c.tail_fraction;
    meta["near_threshold"] = c.near_threshold;
    meta["alpha"] = alpha;
    meta["alpha_threshold"] = alpha_threshold(model, N);
    std::ofstream(out + "/constant.json") << meta.dump(2) << "\n";
    write_manifest(out, cfg, {"constant.json"}, 0.0);
    std::cout << "c = " << format_double(c.c) << " (tail fraction "
              << format_double(c.tail_fraction) << ")\n";
    if (c.near_threshold)
        std::cerr << "warning: alpha is within 10% of the finiteness threshold; "
                     "the tail quadrature dominates\n";
    return 0;
}

int exec_verify(const json& cfg, const std::string& out, std::uint64_t) {
    const RadialDomain dom = parse_domain(cfg);
    TheoremConfig tc{parse_model(cfg),
                     num(cfg, "alpha", 1.0),
                     TouchingBallConfig(dom, parse_touched(cfg, dom),
                                        num(cfg, "R", 0.5 * dom.scale())),
                     num(cfg, "beta", 1.0),
                     parse_problem(cfg),
                     parse_times(cfg),
                     parse_grid(cfg)};
    const VerificationReport report = verify_theorem(tc);

    std::vector<std::vector<double>> rows;
    for (const PerTimeRow& row : report.per_time)
        rows.push_back({row.t, row.integral, row.scaled});
    write_csv(out + "/per_time.csv", {"t", "integral", "scaled"}, rows);
    std::ofstream(out + "/report.json") << report_to_json(report).dump(2) << "\n";
    write_manifest(out, cfg, {"per_time.csv", "report.json"}, 0.0);

    if (report.divergent) {
        std::cout << "verify: degenerate configuration, scaled integral grows "
                  << format_double(report.per_time.back().scaled) << " at t = "
                  << format_double(report.per_time.back().t) << "\n";
    } else {
        std::cout << "verify: L_hat = " << format_double(report.fitted_limit)
                  << ", predicted = " << format_double(report.predicted)
                  << ", relative error = " << format_double(report.relative_error)
                  << ", theta_fitted = " << format_double(report.theta_fitted) << "\n";
    }
    return 0;
}

using Executor = int (*)(const json&, const std::string&, std::uint64_t);

int run_with_sweep(Executor exec, json cfg, const std::string& out, std::uint64_t seed,
                   int jobs) {
    std::filesystem::create_directories(out);
    const auto t0 = std::chrono::steady_clock::now();
    int status = 0;
    if (cfg.contains("sweep")) {
        const json sweep = cfg.at("sweep");
        cfg.erase("sweep");
        std::vector<json> merged;
        for (const auto& entry : sweep) {
            json job = cfg;
            job.update(entry);
            merged.push_back(std::move(job));
        }
        std::atomic<int> failed{0};
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t i; (i = next.fetch_add(1)) < merged.size();) {
                const std::string job_out = out + "/job_" + std::to_string(i);
                std::filesystem::create_directories(job_out);
                try {
                    exec(merged[i], job_out, seed + i);
                } catch (const std::invalid_argument& e) {
                    std::cerr << "job " << i << ": " << e.what() << "\n";
                    failed = std::max(failed.load(), 2);
                } catch (const std::exception& e) {
                    std::cerr << "job " << i << ": " << e.what() << "\n";
                    failed = std::max(failed.load(), 3);
                }
            }
        };
        std::vector<std::thread> pool;
        for (int j = 0; j < std::max(jobs, 1); ++j) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        status = failed.load();
    } else {
        status = exec(cfg, out, seed);
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "done in " << secs << " s\n";
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical laboratory for short-time fast diffusion asymptotics"};
    app.require_subcommand(1);

    std::string config_path, out = "out";
    std::uint64_t seed = 12345;
    int jobs = 1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out, "Output directory");
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--jobs", jobs, "Parallel jobs for config sweeps");

    // Numeric overrides shared across subcommands; flags win over the config.
    struct Override {
        std::string key;
        double value = 0.0;
        CLI::Option* opt = nullptr;
    };
    std::vector<Override> overrides = {{"p"},     {"m"},   {"alpha"},  {"beta"},
                                       {"R"},     {"rho"}, {"rho_in"}, {"rho_out"},
                                       {"N"},     {"eps"}, {"delta"},  {"n_space"},
                                       {"n_time"}};
    std::vector<std::pair<std::string, std::string>> string_overrides_spec = {
        {"shape", ""}, {"problem", ""}, {"side", ""}, {"perturbation", ""}, {"touched", ""}};
    std::vector<CLI::Option*> string_opts;
    for (auto& o : overrides)
        o.opt = app.add_option("--" + o.key, o.value, "Override config key '" + o.key + "'");
    for (auto& s : string_overrides_spec)
        string_opts.push_back(
            app.add_option("--" + s.first, s.second, "Override config key '" + s.first + "'"));

    std::map<std::string, Executor> commands = {
        {"profile", exec_profile},   {"blowup", exec_blowup},     {"simulate", exec_simulate},
        {"geometry", exec_geometry}, {"constant", exec_constant}, {"verify", exec_verify}};
    for (const auto& [name, fn] : commands) {
        (void)fn;
        app.add_subcommand(name)->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        json cfg = load_config(config_path);
        for (const auto& o : overrides)
            if (o.opt->count() > 0) cfg[o.key] = o.value;
        for (std::size_t i = 0; i < string_opts.size(); ++i)
            if (string_opts[i]->count() > 0)
                cfg[string_overrides_spec[i].first] = string_overrides_spec[i].second;

        const std::string name = app.get_subcommands().front()->get_name();
        return run_with_sweep(commands.at(name), cfg, out, seed, jobs);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
