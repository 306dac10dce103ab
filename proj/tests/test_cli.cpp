// End-to-end checks of the command-line front end: defaults, config file
// handling, exit codes, artifact formats, determinism. The binary path is
// passed as the last command-line argument (see tests/CMakeLists.txt).
#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string g_cli;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

RunResult run_cli(const std::string& args, const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = "cd '" + dir.string() + "' && '" + g_cli + "' " + args +
                            " > stdout.txt 2> stderr.txt";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("setler_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("simulate: empty config gives first-case defaults and 10/h+1 rows") {
    const fs::path dir = fresh_dir("sim_default");
    std::ofstream(dir / "empty.ini") << "";
    const RunResult r = run_cli("simulate --config empty.ini", dir);
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("simulate:") == 0);
    const std::string csv = slurp(dir / "simulate.csv");
    CHECK(count_lines(csv) == 1002);  // header + floor(10/0.01)+1 samples

    const json side = json::parse(slurp(dir / "simulate.csv.config.json"));
    const json& p = side["config"]["params"];
    CHECK(p["lambda"].get<double>() == 1.0);
    CHECK(p["beta"].get<double>() == 23.0 / 8.0);
    CHECK(p["gamma"].get<double>() == 8.0 / 3.0);
    CHECK(p["omega"].get<double>() == 0.5);
    CHECK(p["alpha0"].get<double>() == 0.1);
    CHECK(p["delta0"].get<double>() == 0.2);
    CHECK(p["r0"].get<double>() == 0.3);
}

TEST_CASE("config keys are validated and flags take precedence") {
    const fs::path dir = fresh_dir("config_rules");
    std::ofstream(dir / "run.ini") << "lambda = 1.0\nsteps = 10\n";
    RunResult r = run_cli("map --config run.ini --lambda 1.5", dir);
    CHECK(r.exit_code == 0);
    const json side = json::parse(slurp(dir / "map.csv.config.json"));
    CHECK(side["config"]["params"]["lambda"].get<double>() == 1.5);
    CHECK(side["config"]["steps"].get<int>() == 10);

    std::ofstream(dir / "bad.ini") << "no_such_option = 1\n";
    r = run_cli("map --config bad.ini", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("no_such_option") != std::string::npos);

    std::ofstream(dir / "badval.ini") << "steps = banana\n";
    r = run_cli("map --config badval.ini", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("steps") != std::string::npos);
}

TEST_CASE("closed-form rejects omega = 0 from the config") {
    const fs::path dir = fresh_dir("omega_zero");
    std::ofstream(dir / "om.ini") << "omega = 0\n";
    const RunResult r = run_cli("closed-form --config om.ini", dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("omega") != std::string::npos);
}

TEST_CASE("map blow-up: exit 1, partial CSV retained, step named on stderr") {
    const fs::path dir = fresh_dir("map_blowup");
    const RunResult r = run_cli("map --lambda 1e306 --steps 2000", dir);
    CHECK(r.exit_code == 1);
    CHECK(r.err.find("step") != std::string::npos);
    const std::string csv = slurp(dir / "map.csv");
    CHECK(count_lines(csv) > 2);      // partial trajectory retained
    CHECK(count_lines(csv) < 2002);   // but shorter than a full run

    // the additive map needs near-overflow lambda to diverge; 1e6 runs clean
    const RunResult ok = run_cli("map --lambda 1e6 --steps 1000", fresh_dir("map_1e6"));
    CHECK(ok.exit_code == 0);
}

TEST_CASE("entropy-f quadratic: reported value, quadrature, and flag") {
    const fs::path dir = fresh_dir("entropy_quadratic");
    const RunResult r =
        run_cli("entropy-f --case quadratic --mc-samples 100000", dir);
    CHECK(r.exit_code == 0);
    const json out = json::parse(slurp(dir / "entropy_f.json"));
    CHECK(out["paper_value"].get<double>() == doctest::Approx(2.7842).epsilon(1e-4));
    CHECK(out["quadrature_value"].get<double>() ==
          doctest::Approx(33.40996798).epsilon(1e-6));
    CHECK(out["discrepancy_flag"].get<bool>());
    CHECK(out["settings"]["mc_samples"].get<long>() == 100000);
}

TEST_CASE("lyapunov subcommand emits the result schema") {
    const fs::path dir = fresh_dir("lyap_json");
    const RunResult r = run_cli(
        "lyapunov --method map1d --map logistic --a 4 --n 20000 --transient 500",
        dir);
    CHECK(r.exit_code == 0);
    const json out = json::parse(slurp(dir / "lyapunov.json"));
    CHECK(out["method"] == "algorithm1");
    CHECK(out["exponent"].get<double>() == doctest::Approx(0.693).epsilon(0.02));
    CHECK(out.contains("warnings"));
    CHECK(out["n"].get<long>() == 20000);
}

TEST_CASE("sensitivity CSV has the documented columns") {
    const fs::path dir = fresh_dir("sens_csv");
    const RunResult r = run_cli("sensitivity --case A --t1 2 --h 0.01", dir);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "sensitivity.csv");
    CHECK(csv.rfind("t,alpha_a,alpha_b,separation\n", 0) == 0);
    CHECK(count_lines(csv) == 202);
}

TEST_CASE("bifurcate CSV has the documented columns") {
    const fs::path dir = fresh_dir("bif_csv");
    const RunResult r =
        run_cli("bifurcate --n-lambda 5 --transient 50 --keep 10", dir);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "bifurcation.csv");
    CHECK(csv.rfind("lambda,sample_index,alpha_wrapped\n", 0) == 0);
    CHECK(count_lines(csv) == 1 + 5 * 10);
}

TEST_CASE("help output enumerates every config key") {
    const fs::path dir = fresh_dir("help_keys");
    const struct {
        const char* sub;
        std::vector<const char*> keys;
    } expected[] = {
        {"simulate",
         {"--lambda", "--beta", "--gamma", "--delta-f", "--omega", "--alpha0",
          "--delta0", "--r0", "--t0", "--t1", "--h", "--checkpoint-every",
          "--cartesian", "--output", "--config"}},
        {"map",
         {"--lambda", "--beta", "--gamma", "--delta-f", "--omega", "--alpha0",
          "--delta0", "--r0", "--steps", "--output", "--config"}},
        {"lyapunov",
         {"--method", "--t1", "--h", "--d0", "--renorm-every", "--transient",
          "--map", "--a", "--x0", "--n", "--output", "--config"}},
        {"bifurcate",
         {"--lambda-min", "--lambda-max", "--n-lambda", "--transient", "--keep",
          "--output", "--config"}},
        {"attractor",
         {"--system", "--sigma", "--rho", "--beta-l", "--x0", "--y0", "--z0",
          "--t1", "--h", "--transient", "--output", "--config"}},
        {"compare",
         {"--a-system", "--b-system", "--a-sigma", "--b-lambda", "--a-t1",
          "--b-h", "--output-a", "--output-b", "--output", "--config"}},
        {"sensitivity",
         {"--case", "--lambda-a", "--lambda-b", "--t1", "--h", "--output",
          "--config"}},
        {"jacobian", {"--lambda", "--alpha0", "--delta0", "--r0", "--output",
                      "--config"}},
        {"closed-form",
         {"--lambda", "--beta", "--gamma", "--omega", "--alpha0", "--delta0",
          "--c1-const", "--c2-const", "--c3-const", "--t0", "--t1", "--h",
          "--output", "--config"}},
        {"entropy-f",
         {"--case", "--sigma", "--scalar-curvature", "--r-max", "--grid-n",
          "--mc-samples", "--seed", "--drop-exp-f", "--output", "--config"}},
        {"entropy-w",
         {"--c1", "--kappa1", "--c2", "--kappa2", "--scalar-curvature",
          "--r-max", "--t0", "--t1", "--h", "--window-min", "--window-max",
          "--output", "--config"}},
    };
    for (const auto& sub : expected) {
        const RunResult r = run_cli(std::string(sub.sub) + " --help", dir);
        CHECK(r.exit_code == 0);
        for (const char* key : sub.keys) {
            CAPTURE(sub.sub);
            CAPTURE(key);
            CHECK(r.out.find(key) != std::string::npos);
        }
    }
}

TEST_CASE("config round-trip: every documented key is accepted from a file") {
    const fs::path dir = fresh_dir("config_roundtrip");
    std::ofstream(dir / "sim.ini") << "lambda = 1.0\nbeta = 2.875\ngamma = 2.5\n"
                                   << "delta-f = 0.5\nomega = 0.5\nalpha0 = 0.1\n"
                                   << "delta0 = 0.2\nr0 = 0.3\nt0 = 0\nt1 = 1\n"
                                   << "h = 0.01\ncheckpoint-every = 2\n"
                                   << "cartesian = true\noutput = out.csv\n";
    const RunResult r = run_cli("simulate --config sim.ini", dir);
    CHECK(r.exit_code == 0);
    const std::string csv = slurp(dir / "out.csv");
    CHECK(csv.rfind("t,alpha,delta,r,x,y,z\n", 0) == 0);
}

TEST_CASE("artifacts are byte-reproducible across identical runs") {
    const char* runs[] = {
        "simulate --t1 2 --output artifact.csv",
        "map --steps 300 --output artifact.csv",
        "entropy-f --case gaussian --mc-samples 50000 --output artifact.json",
        "entropy-w --output artifact.csv",
        "jacobian --lambda 2 --output artifact.json",
    };
    int idx = 0;
    for (const char* args : runs) {
        const fs::path d1 = fresh_dir("det_a" + std::to_string(idx));
        const fs::path d2 = fresh_dir("det_b" + std::to_string(idx));
        CHECK(run_cli(args, d1).exit_code == 0);
        CHECK(run_cli(args, d2).exit_code == 0);
        for (const auto& entry : fs::directory_iterator(d1)) {
            const std::string name = entry.path().filename().string();
            if (name == "stdout.txt" || name == "stderr.txt") continue;
            CAPTURE(args);
            CAPTURE(name);
            CHECK(slurp(entry.path()) == slurp(d2 / name));
        }
        ++idx;
    }
}

int main(int argc, char** argv) {
    if (argc > 1 && argv[argc - 1][0] != '-') {
        g_cli = argv[argc - 1];
        --argc;
    } else if (const char* env = std::getenv("SETLER_CLI")) {
        g_cli = env;
    }
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli [doctest args] <path-to-setler-cli>\n");
        return 1;
    }
    g_cli = fs::absolute(g_cli).string();
    doctest::Context ctx;
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}
