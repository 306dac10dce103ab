// Command-line front end: every experiment is a subcommand that writes its
// module's CSV/JSON artifact plus a JSON sidecar with the full effective
// configuration. stdout carries a one-line summary, stderr diagnostics.
// Exit codes: 0 success, 1 numerical failure (blow-up), 2 config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "setler/analysis.hpp"
#include "setler/continuous.hpp"
#include "setler/core.hpp"
#include "setler/csv.hpp"
#include "setler/discrete.hpp"
#include "setler/entropy.hpp"
#include "setler/lorenz.hpp"
#include "setler/quadrature.hpp"

using json = nlohmann::ordered_json;
using namespace setler;

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << content;
}

void write_sidecar(const std::string& artifact_path, const json& config) {
    json side;
    side["artifact"] = artifact_path;
    side["config"] = config;
    write_file(artifact_path + ".config.json", side.dump(2) + "\n");
}

// dynamical-system options shared by several subcommands
struct DynOptions {
    double lambda, beta, gamma, delta_f, omega;
    double alpha0, delta0, r0;
};

void add_dyn_options(CLI::App* sub, DynOptions& d) {
    sub->add_option("--lambda", d.lambda, "nonlinearity strength")
        ->capture_default_str();
    sub->add_option("--beta", d.beta, "alpha forcing amplitude")
        ->capture_default_str();
    sub->add_option("--gamma", d.gamma, "delta forcing amplitude")
        ->capture_default_str();
    sub->add_option("--delta-f", d.delta_f, "r forcing amplitude")
        ->capture_default_str();
    sub->add_option("--omega", d.omega, "forcing angular frequency")
        ->capture_default_str();
    sub->add_option("--alpha0", d.alpha0, "initial right ascension")
        ->capture_default_str();
    sub->add_option("--delta0", d.delta0, "initial declination")
        ->capture_default_str();
    sub->add_option("--r0", d.r0, "initial radial distance")->capture_default_str();
}

SetlerParams params_of(const DynOptions& d) {
    return {d.lambda, d.beta, d.gamma, d.delta_f, d.omega};
}

SphericalState state_of(const DynOptions& d) {
    return {d.alpha0, d.delta0, d.r0};
}

json dyn_json(const DynOptions& d) {
    return json{{"lambda", d.lambda},   {"beta", d.beta},
                {"gamma", d.gamma},     {"delta_f", d.delta_f},
                {"omega", d.omega},     {"alpha0", d.alpha0},
                {"delta0", d.delta0},   {"r0", d.r0}};
}

json extents_json(const Extents& e) {
    return json{{"min", {e.min[0], e.min[1], e.min[2]}},
                {"max", {e.max[0], e.max[1], e.max[2]}}};
}

std::string cloud_csv(const PointCloud& cloud) {
    std::ostringstream os;
    os << "x,y,z\n";
    for (const Vec3& p : cloud.points)
        os << format_full(p[0]) << ',' << format_full(p[1]) << ','
           << format_full(p[2]) << '\n';
    return os.str();
}

void configure_sub(CLI::App* sub) {
    sub->set_help_flag("--help", "print this help message");  // frees -h for --h
    sub->add_option("--config", "flat key = value config file");
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// flat `key = value` file: one pair per line, '#'/';' comment lines
std::vector<std::pair<std::string, std::string>> read_flat_config(
    const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file: " + path);
    std::vector<std::pair<std::string, std::string>> pairs;
    std::string line;
    while (std::getline(is, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line missing '=': " + t);
        std::string key = trim(t.substr(0, eq));
        std::string value = trim(t.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
            value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        if (key.empty())
            throw std::invalid_argument("config line with empty key: " + t);
        pairs.emplace_back(std::move(key), std::move(value));
    }
    return pairs;
}

// Applies the config file of the parsed subcommand, if any: every key must
// name an option of that subcommand; values for options already given on the
// command line are ignored (flags take precedence). Returns an exit code,
// or -1 to continue.
int apply_config_file(CLI::App& app, int argc, char** argv) {
    if (app.get_subcommands().empty()) return -1;
    CLI::App* sub = app.get_subcommands().front();
    const CLI::Option* copt = sub->get_option_no_throw("--config");
    if (!copt || copt->count() == 0) return -1;
    const std::string path = copt->results().front();
    std::vector<std::string> inject;
    try {
        for (const auto& [key, value] : read_flat_config(path)) {
            CLI::Option* opt = sub->get_option_no_throw("--" + key);
            if (!opt) {
                std::cerr << "config error: unknown key: " << key << "\n";
                return 2;
            }
            if (key != "config" && opt->count() == 0)
                inject.push_back("--" + key + "=" + value);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (inject.empty()) return -1;
    std::vector<std::string> args;
    args.emplace_back(argv[1]);  // subcommand name
    for (auto& s : inject) args.push_back(std::move(s));
    for (int i = 2; i < argc; ++i) args.emplace_back(argv[i]);
    std::reverse(args.begin(), args.end());
    app.clear();
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    return -1;
}

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const DivergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"setler: stellar-position dynamics toolkit"};
    app.set_help_flag("--help", "print this help message");
    app.require_subcommand(1);
    std::function<int()> action;

    // ------------------------------------------------------------ simulate
    auto* simulate = app.add_subcommand(
        "simulate", "integrate the continuous system with fixed-step RK4");
    {
        configure_sub(simulate);
        auto dyn = std::make_shared<DynOptions>(
            DynOptions{1.0, 23.0 / 8.0, 8.0 / 3.0, 0.5, 0.5, 0.1, 0.2, 0.3});
        auto t0 = std::make_shared<double>(0.0);
        auto t1 = std::make_shared<double>(10.0);
        auto h = std::make_shared<double>(0.01);
        auto every = std::make_shared<std::size_t>(1);
        auto cartesian = std::make_shared<bool>(false);
        auto output = std::make_shared<std::string>("simulate.csv");
        add_dyn_options(simulate, *dyn);
        simulate->add_option("--t0", *t0, "start time")->capture_default_str();
        simulate->add_option("--t1", *t1, "end time")->capture_default_str();
        simulate->add_option("--h", *h, "step size")->capture_default_str();
        simulate->add_option("--checkpoint-every", *every,
                             "keep every Nth sample in the CSV")
            ->capture_default_str();
        simulate->add_flag("--cartesian", *cartesian, "append x,y,z columns");
        simulate->add_option("--output", *output, "trajectory CSV path")
            ->capture_default_str();
        simulate->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    const TimeGrid grid{*t0, *t1, *h};
                    json cfg{{"subcommand", "simulate"},
                             {"params", dyn_json(*dyn)},
                             {"t0", *t0},
                             {"t1", *t1},
                             {"h", *h},
                             {"checkpoint_every", *every},
                             {"cartesian", *cartesian},
                             {"output", *output}};
                    try {
                        const Trajectory traj =
                            integrate(state_of(*dyn), grid, params_of(*dyn));
                        std::ostringstream os;
                        write_trajectory_csv(os, traj, *cartesian, *every);
                        write_file(*output, os.str());
                        write_sidecar(*output, cfg);
                        std::cout << "simulate: wrote " << traj.size()
                                  << " samples to " << *output << "\n";
                    } catch (const DivergenceError& e) {
                        if (e.partial()) {
                            std::ostringstream os;
                            write_trajectory_csv(os, *e.partial(), *cartesian,
                                                 *every);
                            write_file(*output, os.str());
                            write_sidecar(*output, cfg);
                        }
                        throw;
                    }
                });
            };
        });
    }

    // ----------------------------------------------------------------- map
    auto* map_cmd =
        app.add_subcommand("map", "iterate the forced discrete map");
    {
        configure_sub(map_cmd);
        auto dyn = std::make_shared<DynOptions>(
            DynOptions{1.0, 0.5, 0.5, 0.5, 1.0, 0.1, 0.2, 4.24});
        auto steps = std::make_shared<std::size_t>(1000);
        auto output = std::make_shared<std::string>("map.csv");
        add_dyn_options(map_cmd, *dyn);
        map_cmd->add_option("--steps", *steps, "number of map iterations")
            ->capture_default_str();
        map_cmd->add_option("--output", *output, "trajectory CSV path")
            ->capture_default_str();
        map_cmd->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    json cfg{{"subcommand", "map"},
                             {"params", dyn_json(*dyn)},
                             {"steps", *steps},
                             {"output", *output}};
                    try {
                        const Trajectory traj =
                            iterate_map(state_of(*dyn), params_of(*dyn), *steps);
                        std::ostringstream os;
                        write_trajectory_csv(os, traj);
                        write_file(*output, os.str());
                        write_sidecar(*output, cfg);
                        std::cout << "map: wrote " << traj.size()
                                  << " samples to " << *output << "\n";
                    } catch (const DivergenceError& e) {
                        if (e.partial()) {
                            std::ostringstream os;
                            write_trajectory_csv(os, *e.partial());
                            write_file(*output, os.str());
                            write_sidecar(*output, cfg);
                        }
                        throw;
                    }
                });
            };
        });
    }

    // ------------------------------------------------------------ lyapunov
    auto* lyap = app.add_subcommand(
        "lyapunov", "largest Lyapunov exponent (two-trajectory or scalar map)");
    {
        configure_sub(lyap);
        auto dyn = std::make_shared<DynOptions>(
            DynOptions{1.0, 0.5, 0.5, 0.5, 1.0, 0.1, 0.2, 4.24});
        auto method = std::make_shared<std::string>("two-trajectory");
        auto t1 = std::make_shared<double>(300.0);
        auto h = std::make_shared<double>(0.01);
        auto d0 = std::make_shared<double>(1e-8);
        auto renorm = std::make_shared<int>(10);
        auto transient = std::make_shared<double>(20.0);
        auto map_name = std::make_shared<std::string>("logistic");
        auto map_a = std::make_shared<double>(4.0);
        auto map_x0 = std::make_shared<double>(0.3);
        auto map_n = std::make_shared<long>(100000);
        auto output = std::make_shared<std::string>("lyapunov.json");
        add_dyn_options(lyap, *dyn);
        lyap->add_option("--method", *method)
            ->check(CLI::IsMember({"two-trajectory", "map1d"}))
            ->capture_default_str();
        lyap->add_option("--t1", *t1, "integration end time")->capture_default_str();
        lyap->add_option("--h", *h, "step size")->capture_default_str();
        lyap->add_option("--d0", *d0, "initial separation")->capture_default_str();
        lyap->add_option("--renorm-every", *renorm, "steps between renormalizations")
            ->capture_default_str();
        lyap->add_option("--transient", *transient,
                         "discarded lead-in (time, or iterations for map1d)")
            ->capture_default_str();
        lyap->add_option("--map", *map_name, "scalar map for map1d")
            ->check(CLI::IsMember({"logistic", "linear"}))
            ->capture_default_str();
        lyap->add_option("--a", *map_a, "scalar map parameter")->capture_default_str();
        lyap->add_option("--x0", *map_x0, "scalar map start")->capture_default_str();
        lyap->add_option("--n", *map_n, "scalar map iterations")->capture_default_str();
        lyap->add_option("--output", *output, "result JSON path")
            ->capture_default_str();
        lyap->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    LyapunovEstimate est;
                    json params;
                    if (*method == "two-trajectory") {
                        est = lyapunov_two_trajectory(params_of(*dyn), state_of(*dyn),
                                                      {0.0, *t1, *h}, *d0, *renorm,
                                                      *transient);
                        params = dyn_json(*dyn);
                        params["t1"] = *t1;
                        params["h"] = *h;
                        params["d0"] = *d0;
                        params["renorm_every"] = *renorm;
                    } else {
                        Map1d map;
                        if (*map_name == "logistic")
                            map = {[](double x, double a) { return a * x * (1.0 - x); },
                                   [](double x, double a) { return a - 2.0 * a * x; }};
                        else
                            map = {[](double x, double a) { return a * x; },
                                   [](double, double a) { return a; }};
                        est = lyapunov_1d(map, *map_x0, *map_a, *map_n,
                                          static_cast<long>(*transient));
                        params = json{{"map", *map_name},
                                      {"a", *map_a},
                                      {"x0", *map_x0},
                                      {"n", *map_n}};
                    }
                    const json out{{"method", est.method},
                                   {"params", params},
                                   {"exponent", est.exponent},
                                   {"n", est.n},
                                   {"transient", est.transient},
                                   {"warnings", est.warnings}};
                    write_file(*output, out.dump(2) + "\n");
                    write_sidecar(*output,
                                  json{{"subcommand", "lyapunov"},
                                       {"method", *method},
                                       {"params", params},
                                       {"transient", *transient},
                                       {"output", *output}});
                    std::cout << "lyapunov: exponent " << est.exponent << " ("
                              << est.method << ") written to " << *output << "\n";
                });
            };
        });
    }

    // ----------------------------------------------------------- bifurcate
    auto* bif = app.add_subcommand(
        "bifurcate", "post-transient wrapped-alpha scan over lambda");
    {
        configure_sub(bif);
        auto dyn = std::make_shared<DynOptions>(
            DynOptions{1.0, 0.5, 0.5, 0.5, 1.0, 0.1, 0.2, 4.24});
        auto lo = std::make_shared<double>(0.5);
        auto hi = std::make_shared<double>(1.5);
        auto n_lambda = std::make_shared<int>(1000);
        auto transient = std::make_shared<int>(500);
        auto keep = std::make_shared<int>(200);
        auto output = std::make_shared<std::string>("bifurcation.csv");
        add_dyn_options(bif, *dyn);
        bif->add_option("--lambda-min", *lo, "scan start")->capture_default_str();
        bif->add_option("--lambda-max", *hi, "scan end")->capture_default_str();
        bif->add_option("--n-lambda", *n_lambda, "number of columns")
            ->capture_default_str();
        bif->add_option("--transient", *transient, "discarded iterations")
            ->capture_default_str();
        bif->add_option("--keep", *keep, "samples kept per column")
            ->capture_default_str();
        bif->add_option("--output", *output, "scan CSV path")->capture_default_str();
        bif->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    const BifurcationData data =
                        bifurcation_scan(params_of(*dyn), *lo, *hi, *n_lambda,
                                         *transient, *keep, state_of(*dyn));
                    std::ostringstream os;
                    os << "lambda,sample_index,alpha_wrapped\n";
                    std::size_t flagged = 0;
                    for (std::size_t i = 0; i < data.lambdas.size(); ++i) {
                        if (data.diverged[i]) {
                            ++flagged;
                            continue;
                        }
                        for (std::size_t j = 0; j < data.samples[i].size(); ++j)
                            os << format_full(data.lambdas[i]) << ',' << j << ','
                               << format_full(data.samples[i][j]) << '\n';
                    }
                    write_file(*output, os.str());
                    write_sidecar(*output, json{{"subcommand", "bifurcate"},
                                                {"params", dyn_json(*dyn)},
                                                {"lambda_min", *lo},
                                                {"lambda_max", *hi},
                                                {"n_lambda", *n_lambda},
                                                {"transient", *transient},
                                                {"keep", *keep},
                                                {"output", *output}});
                    std::cout << "bifurcate: " << data.lambdas.size() << " columns ("
                              << flagged << " diverged) written to " << *output
                              << "\n";
                });
            };
        });
    }

    // ----------------------------------------------------------- attractor
    auto* att = app.add_subcommand(
        "attractor", "post-transient attractor point cloud");
    {
        configure_sub(att);
        auto system = std::make_shared<std::string>("setler");
        auto dyn = std::make_shared<DynOptions>(DynOptions{
            0.5, 8.0 / 3.0, 28.0 / 3.0, 10.0, 0.1, 0.1, 0.2, 4.24});
        auto sigma = std::make_shared<double>(10.0);
        auto rho = std::make_shared<double>(28.0);
        auto beta_l = std::make_shared<double>(8.0 / 3.0);
        auto x0 = std::make_shared<double>(1.0);
        auto y0 = std::make_shared<double>(1.0);
        auto z0 = std::make_shared<double>(1.0);
        auto t1 = std::make_shared<double>(200.0);
        auto h = std::make_shared<double>(0.01);
        auto transient = std::make_shared<double>(20.0);
        auto output = std::make_shared<std::string>("attractor.csv");
        att->add_option("--system", *system)
            ->check(CLI::IsMember({"setler", "lorenz"}))
            ->capture_default_str();
        add_dyn_options(att, *dyn);
        att->add_option("--sigma", *sigma, "lorenz sigma")->capture_default_str();
        att->add_option("--rho", *rho, "lorenz rho")->capture_default_str();
        att->add_option("--beta-l", *beta_l, "lorenz beta")->capture_default_str();
        att->add_option("--x0", *x0, "lorenz initial x")->capture_default_str();
        att->add_option("--y0", *y0, "lorenz initial y")->capture_default_str();
        att->add_option("--z0", *z0, "lorenz initial z")->capture_default_str();
        att->add_option("--t1", *t1, "end time")->capture_default_str();
        att->add_option("--h", *h, "step size")->capture_default_str();
        att->add_option("--transient", *transient, "discarded lead-in time")
            ->capture_default_str();
        att->add_option("--output", *output, "point cloud CSV path")
            ->capture_default_str();
        att->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    PointCloud cloud =
                        *system == "lorenz"
                            ? attractor_sample(LorenzParams{*sigma, *rho, *beta_l},
                                               Vec3{*x0, *y0, *z0}, {0.0, *t1, *h},
                                               *transient)
                            : attractor_sample(params_of(*dyn), state_of(*dyn),
                                               {0.0, *t1, *h}, *transient);
                    write_file(*output, cloud_csv(cloud));
                    json cfg{{"subcommand", "attractor"},
                             {"system", *system},
                             {"t1", *t1},
                             {"h", *h},
                             {"transient", *transient},
                             {"output", *output}};
                    if (*system == "lorenz")
                        cfg["params"] = json{{"sigma", *sigma},
                                             {"rho", *rho},
                                             {"beta_l", *beta_l},
                                             {"x0", *x0},
                                             {"y0", *y0},
                                             {"z0", *z0}};
                    else
                        cfg["params"] = dyn_json(*dyn);
                    write_sidecar(*output, cfg);
                    std::cout << "attractor: " << cloud.points.size() << " "
                              << *system << " points written to " << *output
                              << "\n";
                });
            };
        });
    }

    // ------------------------------------------------------------- compare
    auto* cmp = app.add_subcommand(
        "compare", "sample two attractors and report extents and exponents");
    {
        configure_sub(cmp);
        struct Side {
            std::string system;
            DynOptions dyn;
            double sigma, rho, beta_l, x0, y0, z0, t1, h, transient;
        };
        auto a = std::make_shared<Side>(Side{
            "lorenz", {0.5, 8.0 / 3.0, 28.0 / 3.0, 10.0, 0.1, 0.1, 0.2, 4.24},
            10.0, 28.0, 8.0 / 3.0, 1.0, 1.0, 1.0, 100.0, 0.01, 10.0});
        auto b = std::make_shared<Side>(Side{
            "setler", {0.5, 8.0 / 3.0, 28.0 / 3.0, 10.0, 0.1, 0.1, 0.2, 4.24},
            10.0, 28.0, 8.0 / 3.0, 1.0, 1.0, 1.0, 200.0, 0.01, 20.0});
        auto out_a = std::make_shared<std::string>("cloud_a.csv");
        auto out_b = std::make_shared<std::string>("cloud_b.csv");
        auto output = std::make_shared<std::string>("comparison.json");
        auto add_side = [&](const std::string& prefix, Side& s) {
            cmp->add_option("--" + prefix + "-system", s.system)
                ->check(CLI::IsMember({"setler", "lorenz"}))
                ->capture_default_str();
            cmp->add_option("--" + prefix + "-lambda", s.dyn.lambda)
                ->capture_default_str();
            cmp->add_option("--" + prefix + "-beta", s.dyn.beta)
                ->capture_default_str();
            cmp->add_option("--" + prefix + "-gamma", s.dyn.gamma)
                ->capture_default_str();
            cmp->add_option("--" + prefix + "-delta-f", s.dyn.delta_f)
                ->capture_default_str();
            cmp->add_option("--" + prefix + "-omega", s.dyn.omega)
                ->capture_default_str();
            cmp->add_option("--" + prefix + "-alpha0", s.dyn.alpha0)
                ->capture_default_str();
            cmp->add_option("--" + prefix + "-delta0", s.dyn.delta0)
                ->capture_default_str();
            cmp->add_option("--" + prefix + "-r0", s.dyn.r0)->capture_default_str();
            cmp->add_option("--" + prefix + "-sigma", s.sigma)->capture_default_str();
            cmp->add_option("--" + prefix + "-rho", s.rho)->capture_default_str();
            cmp->add_option("--" + prefix + "-beta-l", s.beta_l)
                ->capture_default_str();
            cmp->add_option("--" + prefix + "-x0", s.x0)->capture_default_str();
            cmp->add_option("--" + prefix + "-y0", s.y0)->capture_default_str();
            cmp->add_option("--" + prefix + "-z0", s.z0)->capture_default_str();
            cmp->add_option("--" + prefix + "-t1", s.t1)->capture_default_str();
            cmp->add_option("--" + prefix + "-h", s.h)->capture_default_str();
            cmp->add_option("--" + prefix + "-transient", s.transient)
                ->capture_default_str();
        };
        add_side("a", *a);
        add_side("b", *b);
        cmp->add_option("--output-a", *out_a, "first cloud CSV")
            ->capture_default_str();
        cmp->add_option("--output-b", *out_b, "second cloud CSV")
            ->capture_default_str();
        cmp->add_option("--output", *output, "comparison report JSON")
            ->capture_default_str();
        cmp->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    auto sample = [](const Side& s) {
                        if (s.system == "lorenz")
                            return attractor_sample(
                                LorenzParams{s.sigma, s.rho, s.beta_l},
                                Vec3{s.x0, s.y0, s.z0}, {0.0, s.t1, s.h},
                                s.transient);
                        return attractor_sample(params_of(s.dyn), state_of(s.dyn),
                                                {0.0, s.t1, s.h}, s.transient);
                    };
                    auto side_json = [](const Side& s) {
                        json j{{"system", s.system},
                               {"t1", s.t1},
                               {"h", s.h},
                               {"transient", s.transient}};
                        if (s.system == "lorenz")
                            j["params"] = json{{"sigma", s.sigma},
                                               {"rho", s.rho},
                                               {"beta_l", s.beta_l},
                                               {"x0", s.x0},
                                               {"y0", s.y0},
                                               {"z0", s.z0}};
                        else
                            j["params"] = dyn_json(s.dyn);
                        return j;
                    };
                    const PointCloud cloud_a = sample(*a);
                    const PointCloud cloud_b = sample(*b);
                    const ComparisonReport rep =
                        compare_attractors(cloud_a, cloud_b);
                    write_file(*out_a, cloud_csv(cloud_a));
                    write_file(*out_b, cloud_csv(cloud_b));
                    const json rep_json{
                        {"bbox_a", extents_json(rep.bbox_a)},
                        {"bbox_b", extents_json(rep.bbox_b)},
                        {"largest_lyapunov_a", rep.largest_lyapunov_a},
                        {"largest_lyapunov_b", rep.largest_lyapunov_b},
                        {"lobe_note", rep.lobe_note}};
                    write_file(*output, rep_json.dump(2) + "\n");
                    const json cfg{{"subcommand", "compare"},
                                   {"a", side_json(*a)},
                                   {"b", side_json(*b)},
                                   {"output_a", *out_a},
                                   {"output_b", *out_b},
                                   {"output", *output}};
                    write_sidecar(*output, cfg);
                    std::cout << "compare: exponents " << rep.largest_lyapunov_a
                              << " vs " << rep.largest_lyapunov_b
                              << ", report written to " << *output << "\n";
                });
            };
        });
    }

    // --------------------------------------------------------- sensitivity
    auto* sens = app.add_subcommand(
        "sensitivity", "integrate two parameterizations from one start");
    {
        configure_sub(sens);
        auto preset = std::make_shared<std::string>("A");
        auto lambda_a = std::make_shared<double>(10.0);
        auto lambda_b = std::make_shared<double>(17.2);
        auto dyn = std::make_shared<DynOptions>(
            DynOptions{0.0, 0.5, 0.5, 0.5, 0.5, 0.1, 2.9, 4.24});
        auto t1 = std::make_shared<double>(40.0);
        auto h = std::make_shared<double>(0.001);
        auto output = std::make_shared<std::string>("sensitivity.csv");
        sens->add_option("--case", *preset,
                         "A (10 vs 17.2), B (1000 vs 7e-5) or custom")
            ->check(CLI::IsMember({"A", "B", "custom"}))
            ->capture_default_str();
        sens->add_option("--lambda-a", *lambda_a, "first lambda (custom case)")
            ->capture_default_str();
        sens->add_option("--lambda-b", *lambda_b, "second lambda (custom case)")
            ->capture_default_str();
        add_dyn_options(sens, *dyn);
        sens->add_option("--t1", *t1, "end time")->capture_default_str();
        sens->add_option("--h", *h, "step size")->capture_default_str();
        sens->add_option("--output", *output, "divergence CSV path")
            ->capture_default_str();
        sens->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    DynOptions d = *dyn;
                    double la = *lambda_a, lb = *lambda_b;
                    double T = *t1, step = *h;
                    if (*preset == "A") {
                        la = 10.0;
                        lb = 17.2;
                    } else if (*preset == "B") {
                        // resolved integration of the fast lambda needs a
                        // small step; alpha races to pi while the slow run
                        // stays frozen
                        la = 1000.0;
                        lb = 7e-5;
                        d = DynOptions{0.0, 0.0, 0.5, 0.5, 0.5, 0.005, 1e-4, 4.24};
                        T = 20.0;
                        step = 2e-5;
                    }
                    SetlerParams pa{la, d.beta, d.gamma, d.delta_f, d.omega};
                    SetlerParams pb{lb, d.beta, d.gamma, d.delta_f, d.omega};
                    const DivergenceSeries series =
                        sensitivity_pair(pa, pb, state_of(d), {0.0, T, step});
                    std::ostringstream os;
                    os << "t,alpha_a,alpha_b,separation\n";
                    for (std::size_t i = 0; i < series.times.size(); ++i)
                        os << format_full(series.times[i]) << ','
                           << format_full(series.alpha_a[i]) << ','
                           << format_full(series.alpha_b[i]) << ','
                           << format_full(series.separation[i]) << '\n';
                    write_file(*output, os.str());
                    json cfg{{"subcommand", "sensitivity"},
                             {"case", *preset},
                             {"lambda_a", la},
                             {"lambda_b", lb},
                             {"params", dyn_json(d)},
                             {"t1", T},
                             {"h", step},
                             {"truncated", series.truncated},
                             {"output", *output}};
                    write_sidecar(*output, cfg);
                    std::cout << "sensitivity: " << series.times.size()
                              << " samples (case " << *preset
                              << (series.truncated ? ", truncated" : "")
                              << ") written to " << *output << "\n";
                });
            };
        });
    }

    // ------------------------------------------------------------ jacobian
    auto* jac = app.add_subcommand(
        "jacobian", "unforced-field Jacobian and spectrum at a state");
    {
        configure_sub(jac);
        auto lambda = std::make_shared<double>(1.0);
        auto alpha0 = std::make_shared<double>(0.0);
        auto delta0 = std::make_shared<double>(0.0);
        auto r0 = std::make_shared<double>(0.0);
        auto output = std::make_shared<std::string>("jacobian.json");
        jac->add_option("--lambda", *lambda, "nonlinearity strength")
            ->capture_default_str();
        jac->add_option("--alpha0", *alpha0, "evaluation alpha")
            ->capture_default_str();
        jac->add_option("--delta0", *delta0, "evaluation delta")
            ->capture_default_str();
        jac->add_option("--r0", *r0, "evaluation r")->capture_default_str();
        jac->add_option("--output", *output, "report JSON path")
            ->capture_default_str();
        jac->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    const JacobianReport rep =
                        jacobian_autonomous({*alpha0, *delta0, *r0}, *lambda);
                    json m = json::array();
                    for (const auto& row : rep.matrix)
                        m.push_back({row[0], row[1], row[2]});
                    json eig = json::array();
                    for (const auto& mu : rep.eigenvalues)
                        eig.push_back({{"re", mu.real()}, {"im", mu.imag()}});
                    const json out{{"lambda", *lambda},
                                   {"state", {*alpha0, *delta0, *r0}},
                                   {"matrix", m},
                                   {"eigenvalues", eig}};
                    write_file(*output, out.dump(2) + "\n");
                    write_sidecar(*output, json{{"subcommand", "jacobian"},
                                                {"lambda", *lambda},
                                                {"alpha0", *alpha0},
                                                {"delta0", *delta0},
                                                {"r0", *r0},
                                                {"output", *output}});
                    std::cout << "jacobian: eigenvalues";
                    for (const auto& mu : rep.eigenvalues)
                        std::cout << " " << mu.real()
                                  << (mu.imag() != 0.0 ? "+i*" : "")
                                  << (mu.imag() != 0.0
                                          ? std::to_string(mu.imag())
                                          : std::string());
                    std::cout << ", written to " << *output << "\n";
                });
            };
        });
    }

    // ------------------------------------------------------------ entropy-f
    auto* ef = app.add_subcommand(
        "entropy-f", "F-functional with dual reported/computed values");
    {
        configure_sub(ef);
        auto which = std::make_shared<std::string>("gaussian");
        auto sigma = std::make_shared<double>(1.0);
        auto curvature = std::make_shared<double>(0.0);
        auto r_max = std::make_shared<double>(10.0);
        auto grid_n = std::make_shared<int>(16384);
        auto mc_samples = std::make_shared<std::size_t>(1000000);
        auto seed = std::make_shared<std::uint64_t>(0xC0FFEE);
        auto drop = std::make_shared<bool>(false);
        auto output = std::make_shared<std::string>("entropy_f.json");
        ef->add_option("--case", *which)
            ->check(CLI::IsMember({"gaussian", "quadratic", "perturbed"}))
            ->capture_default_str();
        ef->add_option("--sigma", *sigma, "gaussian spread")->capture_default_str();
        ef->add_option("--scalar-curvature", *curvature, "constant R")
            ->capture_default_str();
        ef->add_option("--r-max", *r_max, "radial truncation")->capture_default_str();
        ef->add_option("--grid-n", *grid_n, "radial grid density")
            ->capture_default_str();
        ef->add_option("--mc-samples", *mc_samples, "Monte Carlo sample count")
            ->capture_default_str();
        ef->add_option("--seed", *seed, "Monte Carlo seed")->capture_default_str();
        ef->add_flag("--drop-exp-f", *drop, "drop the e^{-f} factor (gaussian)");
        ef->add_option("--output", *output, "result JSON path")
            ->capture_default_str();
        ef->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    EntropySpec spec;
                    spec.scalar_curvature = *curvature;
                    spec.r_max = *r_max;
                    spec.quadrature.grid_n = *grid_n;
                    spec.quadrature.mc_samples = *mc_samples;
                    spec.quadrature.mc_seed = *seed;
                    spec.drop_exp_f = *drop;
                    FunctionalResult res;
                    if (*which == "gaussian")
                        res = f_functional_gaussian(GaussianProfile{*sigma}, spec);
                    else if (*which == "quadratic")
                        res = f_functional_quadratic(spec);
                    else
                        res = f_functional_perturbed(GaussianProfile{*sigma}, spec);
                    const json settings{{"sigma", *sigma},
                                        {"scalar_curvature", *curvature},
                                        {"r_max", *r_max},
                                        {"grid_n", *grid_n},
                                        {"mc_samples", *mc_samples},
                                        {"mc_seed", *seed},
                                        {"drop_exp_f", *drop}};
                    const json out{{"case", res.case_name},
                                   {"paper_value", res.paper_value},
                                   {"quadrature_value", res.quadrature_value},
                                   {"mc_value", res.mc_value},
                                   {"mc_stderr", res.mc_stderr},
                                   {"discrepancy_flag", res.discrepancy_flag},
                                   {"settings", settings},
                                   {"warnings", res.warnings}};
                    write_file(*output, out.dump(2) + "\n");
                    write_sidecar(*output, json{{"subcommand", "entropy-f"},
                                                {"case", *which},
                                                {"settings", settings},
                                                {"output", *output}});
                    std::cout << "entropy-f " << res.case_name << ": paper "
                              << res.paper_value << ", quadrature "
                              << res.quadrature_value << ", discrepancy "
                              << (res.discrepancy_flag ? "yes" : "no")
                              << ", written to " << *output << "\n";
                });
            };
        });
    }

    // ----------------------------------------------------------- closed-form
    auto* cf = app.add_subcommand(
        "closed-form", "separable frozen-coordinate solutions alpha/delta/r");
    {
        configure_sub(cf);
        auto lambda = std::make_shared<double>(1.0);
        auto beta = std::make_shared<double>(0.5);
        auto gamma = std::make_shared<double>(0.5);
        auto omega = std::make_shared<double>(1.0);
        auto alpha0 = std::make_shared<double>(0.0);
        auto delta0 = std::make_shared<double>(0.0);
        auto C1 = std::make_shared<double>(0.0);
        auto C2 = std::make_shared<double>(0.0);
        auto C3 = std::make_shared<double>(0.0);
        auto t0 = std::make_shared<double>(0.0);
        auto t1 = std::make_shared<double>(10.0);
        auto h = std::make_shared<double>(0.1);
        auto output = std::make_shared<std::string>("closed_form.csv");
        cf->add_option("--lambda", *lambda)->capture_default_str();
        cf->add_option("--beta", *beta)->capture_default_str();
        cf->add_option("--gamma", *gamma)->capture_default_str();
        cf->add_option("--omega", *omega, "must be nonzero")->capture_default_str();
        cf->add_option("--alpha0", *alpha0, "frozen alpha for delta(tau)")
            ->capture_default_str();
        cf->add_option("--delta0", *delta0, "frozen delta for alpha(tau)")
            ->capture_default_str();
        cf->add_option("--c1-const", *C1, "integration constant C1")
            ->capture_default_str();
        cf->add_option("--c2-const", *C2, "integration constant C2")
            ->capture_default_str();
        cf->add_option("--c3-const", *C3, "integration constant C3")
            ->capture_default_str();
        cf->add_option("--t0", *t0, "series start")->capture_default_str();
        cf->add_option("--t1", *t1, "series end")->capture_default_str();
        cf->add_option("--h", *h, "series step")->capture_default_str();
        cf->add_option("--output", *output, "series CSV path")
            ->capture_default_str();
        cf->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    const ClosedFormParams p{*lambda, *beta,  *gamma,
                                             *omega,  *alpha0, *delta0,
                                             *C1,     *C2,     *C3};
                    const TimeGrid grid{*t0, *t1, *h};
                    std::ostringstream os;
                    os << "tau,alpha,delta,r\n";
                    std::size_t saturations = 0;
                    for (std::size_t k = 0; k <= grid.steps(); ++k) {
                        const double tau = grid.time_at(k);
                        bool sat_a = false, sat_d = false;
                        const double a = closed_form_alpha(tau, p, &sat_a);
                        const double d = closed_form_delta(tau, p, &sat_d);
                        saturations += sat_a + sat_d;
                        os << format_full(tau) << ',' << format_full(a) << ','
                           << format_full(d) << ',' << format_full(closed_form_r(tau, p))
                           << '\n';
                    }
                    write_file(*output, os.str());
                    const ResidualReport res =
                        closed_form_residual(p, grid);
                    write_sidecar(*output,
                                  json{{"subcommand", "closed-form"},
                                       {"lambda", *lambda},
                                       {"beta", *beta},
                                       {"gamma", *gamma},
                                       {"omega", *omega},
                                       {"alpha0", *alpha0},
                                       {"delta0", *delta0},
                                       {"c1_const", *C1},
                                       {"c2_const", *C2},
                                       {"c3_const", *C3},
                                       {"t0", *t0},
                                       {"t1", *t1},
                                       {"h", *h},
                                       {"separable_residual", res.max_residual},
                                       {"saturated_points", saturations},
                                       {"output", *output}});
                    std::cout << "closed-form: " << grid.steps() + 1
                              << " samples (separable residual "
                              << res.max_residual << ") written to " << *output
                              << "\n";
                });
            };
        });
    }

    // ------------------------------------------------------------ entropy-w
    auto* ew = app.add_subcommand(
        "entropy-w", "W-functional series and growth-rate estimate");
    {
        configure_sub(ew);
        auto c1 = std::make_shared<double>(1e-4);
        auto kappa1 = std::make_shared<double>(0.1);
        auto c2 = std::make_shared<double>(0.0);
        auto kappa2 = std::make_shared<double>(0.0);
        auto curvature = std::make_shared<double>(0.0);
        auto r_max = std::make_shared<double>(10.0);
        auto t0 = std::make_shared<double>(0.0);
        auto t1 = std::make_shared<double>(40.0);
        auto h = std::make_shared<double>(0.25);
        auto wmin = std::make_shared<double>(std::nan(""));
        auto wmax = std::make_shared<double>(std::nan(""));
        auto output = std::make_shared<std::string>("entropy_w.csv");
        ew->add_option("--c1", *c1, "first amplitude")->capture_default_str();
        ew->add_option("--kappa1", *kappa1, "first growth rate")
            ->capture_default_str();
        ew->add_option("--c2", *c2, "second amplitude")->capture_default_str();
        ew->add_option("--kappa2", *kappa2, "second growth rate")
            ->capture_default_str();
        ew->add_option("--scalar-curvature", *curvature, "constant R")
            ->capture_default_str();
        ew->add_option("--r-max", *r_max, "radial truncation")->capture_default_str();
        ew->add_option("--t0", *t0, "series start")->capture_default_str();
        ew->add_option("--t1", *t1, "series end")->capture_default_str();
        ew->add_option("--h", *h, "series step")->capture_default_str();
        ew->add_option("--window-min", *wmin,
                       "growth-rate window start (default: pre-suppression)");
        ew->add_option("--window-max", *wmax,
                       "growth-rate window end (default: pre-suppression)");
        ew->add_option("--output", *output, "W-series CSV path")
            ->capture_default_str();
        ew->callback([=, &action] {
            action = [=] {
                return guarded([&] {
                    AsymptoticFit fit;
                    fit.c1 = *c1;
                    fit.kappa1 = *kappa1;
                    fit.c2 = *c2;
                    fit.kappa2 = *kappa2;
                    EntropySpec spec;
                    spec.scalar_curvature = *curvature;
                    spec.r_max = *r_max;
                    const WSeries series = w_series(fit, {*t0, *t1, *h}, spec);
                    std::ostringstream os;
                    os << "tau,W,f,dfdtau\n";
                    for (std::size_t i = 0; i < series.tau.size(); ++i)
                        os << format_full(series.tau[i]) << ','
                           << format_full(series.w[i]) << ','
                           << format_full(series.f[i]) << ','
                           << format_full(series.dfdtau[i]) << '\n';
                    write_file(*output, os.str());
                    double lo = *wmin, hi = *wmax;
                    if (std::isnan(lo) || std::isnan(hi)) {
                        const auto window =
                            pre_suppression_window(series.tau, series.f);
                        if (std::isnan(lo)) lo = window.first;
                        if (std::isnan(hi)) hi = window.second;
                    }
                    const double slope =
                        entropy_growth_rate(series.tau, series.w, lo, hi);
                    json cfg{{"subcommand", "entropy-w"},
                             {"c1", *c1},
                             {"kappa1", *kappa1},
                             {"c2", *c2},
                             {"kappa2", *kappa2},
                             {"scalar_curvature", *curvature},
                             {"r_max", *r_max},
                             {"t0", *t0},
                             {"t1", *t1},
                             {"h", *h},
                             {"window_min", lo},
                             {"window_max", hi},
                             {"growth_rate", slope},
                             {"kappa1_ratio",
                              *kappa1 != 0.0 ? slope / *kappa1 : 0.0},
                             {"output", *output}};
                    write_sidecar(*output, cfg);
                    std::cout << "entropy-w: growth rate " << slope
                              << " over window [" << lo << ", " << hi
                              << "], series written to " << *output << "\n";
                });
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    const int config_status = apply_config_file(app, argc, argv);
    if (config_status >= 0) return config_status;
    return action ? action() : 2;
}
