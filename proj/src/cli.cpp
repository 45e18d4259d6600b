#include "ocl/cli.hpp"

#include "ocl/bounds.hpp"
#include "ocl/montecarlo.hpp"
#include "ocl/selftest.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ocl::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(trim(item));
    return parts;
}

double parse_real(const std::string& s) {
    if (s == "inf" || s == "+inf") return infinite_time;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw UsageError("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& p : split(text, ',')) out.push_back(parse_real(p));
    if (out.empty()) throw UsageError("empty list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& p : split(text, ',')) {
        const double v = parse_real(p);
        if (!(v >= 0.0) || v != std::floor(v) || std::isinf(v))
            throw UsageError("not a non-negative integer: '" + p + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty()) throw UsageError("empty list");
    return out;
}

std::vector<double> parse_rho_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_real_list(text);
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw UsageError("rho grid must be start:stop:count");
    const double a = parse_real(parts[0]);
    const double b = parse_real(parts[1]);
    const auto count = parse_size_list(parts[2]).front();
    if (!(a > 0.0) || !(b >= a) || std::isinf(b) || count < 1)
        throw UsageError("geometric rho grid needs 0 < start <= stop and count >= 1");
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
        out[k] = a * std::pow(b / a, f);
    }
    out.back() = b;
    return out;
}

namespace {

// Flags shared by every subcommand.
struct Common {
    std::uint64_t seed = 1;
    std::string out;
    int threads = 0;
};

struct Physics {
    std::string n = "10";
    std::string rho = "0.1:1000:41";
    double sigma2 = 1.0;
    double lambda_r = 1.0;
    std::string dist = "gaussian";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Base seed of the random streams");
    cmd->add_option("--out", c.out, "Output file (stdout when omitted)");
    cmd->add_option("--threads", c.threads, "Worker threads (falls back to OCL_THREADS)");
}

void add_physics(CLI::App* cmd, Physics& p) {
    cmd->add_option("--n", p.n, "System sizes, comma separated");
    cmd->add_option("--rho", p.rho, "Rate ratios: start:stop:count (geometric) or a list");
    cmd->add_option("--sigma2", p.sigma2, "Value variance");
    cmd->add_option("--lambda-r", p.lambda_r, "Replacement rate per agent");
    cmd->add_option("--dist", p.dist, "Value distribution: gaussian or rademacher");
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("OCL_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    return 0;
}

SystemParams make_params(const Physics& p, std::size_t n, double rho) {
    SystemParams params{n, p.lambda_r, rho * p.lambda_r, p.sigma2, parse_value_dist(p.dist)};
    const auto errors = validate_params(params);
    if (!errors.empty()) throw UsageError(errors.front());
    return params;
}

// Writes to --out when given, else to the default stream.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
        if (path.empty()) return;
        file_.open(path);
        if (!file_) throw UsageError("cannot open '" + path + "' for writing");
        os_ = &file_;
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

// ---------------------------------------------------------------------------

struct BoundArgs {
    std::string model;
    std::string t = "inf";
};

void write_bound_rows(std::ostream& os, BoundModel model, const Physics& phys,
                      const std::vector<std::size_t>& ns, const std::vector<double>& rhos,
                      const std::vector<double>& ts) {
    const bool expansion = model == BoundModel::sis_approx || model == BoundModel::sis_log;
    for (auto n : ns) {
        if (expansion && n < 4) throw UsageError("N must be >= 4");
        const auto base = make_params(phys, n, 0.0);
        for (double rho : rhos) {
            if (!(rho >= 0.0) || std::isinf(rho)) throw UsageError("rho must be finite and >= 0");
            if (expansion && !(rho > 0.0)) throw UsageError("rho must be > 0 for " + std::string(to_string(model)));
        }
        const std::vector<double> times = expansion ? std::vector<double>{infinite_time} : ts;
        for (double t : times) {
            if (!(t >= 0.0)) throw UsageError("t must be >= 0");
            write_bound_csv_rows(os, evaluate_curve(model, base, rhos, t));
        }
    }
}

int cmd_bound(const BoundArgs& a, const Physics& phys, const Common& c, std::ostream& out) {
    const auto model = parse_bound_model(a.model);
    const auto ns = parse_size_list(phys.n);
    const auto rhos = parse_rho_grid(phys.rho);
    const auto ts = parse_real_list(a.t);
    std::ostringstream buffer;
    write_bound_csv_header(buffer);
    write_bound_rows(buffer, model, phys, ns, rhos, ts);
    Sink sink(c.out, out);
    sink.stream() << buffer.str();
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string algorithm;
    std::string model = "gossip";
    std::optional<std::size_t> events;
    std::optional<double> horizon;
    std::string sample_times = "final";
    std::size_t realizations = 500;
};

ExperimentSpec make_spec(const SimulateArgs& a, const Physics& phys, std::size_t n, double rho,
                         std::uint64_t seed) {
    ExperimentSpec spec;
    spec.params = make_params(phys, n, rho);
    spec.model = parse_model(a.model);
    spec.algorithm = parse_algorithm(a.algorithm);
    spec.realizations = a.realizations;
    spec.seed = seed;
    if (a.events && a.horizon) throw UsageError("--events and --horizon are exclusive");
    if (a.events)
        spec.stop = EventCount{*a.events};
    else
        spec.stop = Horizon{a.horizon ? *a.horizon : steady_state_horizon(spec.params, spec.model)};
    if (a.sample_times != "final") spec.sample_times = parse_real_list(a.sample_times);
    const auto errors = validate_spec(spec);
    if (!errors.empty()) throw UsageError(errors.front());
    return spec;
}

int cmd_simulate(const SimulateArgs& a, const Physics& phys, const Common& c, std::ostream& out) {
    const auto ns = parse_size_list(phys.n);
    const auto rhos = parse_rho_grid(phys.rho);
    std::vector<ExperimentSpec> specs;
    for (auto n : ns)
        for (double rho : rhos) specs.push_back(make_spec(a, phys, n, rho, c.seed));
    std::ostringstream buffer;
    write_mc_csv_header(buffer);
    for (const auto& spec : specs) {
        const auto points = estimate_mse(spec, resolve_threads(c.threads));
        write_mc_csv_rows(buffer, spec, points);
    }
    Sink sink(c.out, out);
    sink.stream() << buffer.str();
    return exit_ok;
}

// ---------------------------------------------------------------------------

struct ReproduceArgs {
    std::string figure;
    std::string out_dir;
    std::size_t realizations = 500;
};

std::ofstream open_in(const std::filesystem::path& dir, const std::string& name) {
    std::ofstream f(dir / name);
    if (!f) throw UsageError("cannot write '" + (dir / name).string() + "'");
    return f;
}

const std::vector<double> figure_times = {0.0, 0.05, 0.2, 0.5, 1.0, 2.0, infinite_time};

void reproduce_fig3(const std::filesystem::path& dir) {
    auto f = open_in(dir, "fig3_ping.csv");
    write_bound_csv_header(f);
    const auto rhos = parse_rho_grid("0.1:1000:81");
    const auto base = SystemParams::from_ratio(10, 0.0);
    for (double t : figure_times) write_bound_csv_rows(f, evaluate_curve(BoundModel::ping, base, rhos, t));
}

void reproduce_fig5(const std::filesystem::path& dir) {
    auto f = open_in(dir, "fig5_sis.csv");
    write_bound_csv_header(f);
    const auto rhos = parse_rho_grid("0.1:1000:81");
    const auto base = SystemParams::from_ratio(10, 0.0);
    for (double t : figure_times) write_bound_csv_rows(f, evaluate_curve(BoundModel::sis, base, rhos, t));
    write_bound_csv_rows(f, evaluate_curve(BoundModel::sis_approx, base, rhos, infinite_time));
}

ExperimentSpec steady_gossip(std::size_t n, double rho, std::size_t realizations,
                             std::uint64_t seed) {
    ExperimentSpec spec;
    spec.params = SystemParams::from_ratio(n, rho);
    spec.model = Model::gossip;
    spec.algorithm = Algorithm::gossip;
    spec.stop = Horizon{steady_state_horizon(spec.params, spec.model)};
    spec.realizations = realizations;
    spec.seed = seed;
    return spec;
}

void reproduce_fig6(const std::filesystem::path& dir, std::size_t realizations,
                    std::uint64_t seed, int threads) {
    auto fb = open_in(dir, "fig6_bounds.csv");
    auto fs = open_in(dir, "fig6_gossip.csv");
    write_bound_csv_header(fb);
    write_mc_csv_header(fs);
    const auto rhos = parse_rho_grid("1:100:11");
    for (std::size_t n : {5, 10, 20}) {
        const auto base = SystemParams::from_ratio(n, 0.0);
        write_bound_csv_rows(fb, evaluate_curve(BoundModel::ping, base, rhos, infinite_time));
        write_bound_csv_rows(fb, evaluate_curve(BoundModel::sis, base, rhos, infinite_time));
        for (double rho : rhos) {
            const auto spec = steady_gossip(n, rho, realizations, seed);
            write_mc_csv_rows(fs, spec, estimate_mse(spec, threads));
        }
    }
}

void reproduce_fig7(const std::filesystem::path& dir, std::size_t realizations,
                    std::uint64_t seed, int threads) {
    auto fb = open_in(dir, "fig7_bounds.csv");
    auto fs = open_in(dir, "fig7_gossip.csv");
    write_bound_csv_header(fb);
    write_mc_csv_header(fs);
    for (double rho : {1.0, 10.0, 100.0}) {
        for (std::size_t n = 2; n <= 20; ++n) {
            const std::vector<double> one{rho};
            write_bound_csv_rows(
                fb, evaluate_curve(BoundModel::sis, SystemParams::from_ratio(n, 0.0), one,
                                   infinite_time));
            const auto spec = steady_gossip(n, rho, realizations, seed);
            write_mc_csv_rows(fs, spec, estimate_mse(spec, threads));
        }
    }
}

int cmd_reproduce(const ReproduceArgs& a, const Common& c, std::ostream& out) {
    std::filesystem::path dir = !a.out_dir.empty() ? a.out_dir : c.out;
    if (dir.empty()) throw UsageError("reproduce needs --out-dir");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir))
        throw UsageError("cannot create output directory '" + dir.string() + "'");
    if (a.realizations < 1) throw UsageError("realizations must be >= 1");
    const int threads = resolve_threads(c.threads);
    if (a.figure == "fig3")
        reproduce_fig3(dir);
    else if (a.figure == "fig5")
        reproduce_fig5(dir);
    else if (a.figure == "fig6")
        reproduce_fig6(dir, a.realizations, c.seed, threads);
    else if (a.figure == "fig7")
        reproduce_fig7(dir, a.realizations, c.seed, threads);
    else
        throw UsageError("unknown figure '" + a.figure + "' (fig3, fig5, fig6, fig7)");
    out << "wrote " << a.figure << " CSVs to " << dir.string() << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------

int cmd_selftest(const SelftestOptions& opts, const Common& c, std::ostream& out,
                 std::ostream& err) {
    const auto results = run_selftest(opts);
    Sink sink(c.out, out);
    print_report(sink.stream(), results);
    if (all_passed(results)) return exit_ok;
    std::string names;
    for (const auto& r : results)
        if (!r.passed) names += (names.empty() ? "" : ", ") + r.name;
    err << "selftest failed: " << names << '\n';
    return exit_selftest_failed;
}

// ---------------------------------------------------------------------------

// Appends `--key=value` from a flat key=value file for every key the command
// line does not already set, so flags take precedence over the file.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string path;
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            kept.push_back(args[i]);
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const std::string flag = "--" + key;
        bool given = false;
        for (const auto& a : kept)
            if (a == flag || a.rfind(flag + "=", 0) == 0) given = true;
        if (!given) kept.push_back(flag + "=" + value);
    }
    return kept;
}

}  // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    try {
        args = merge_config(std::move(args));
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    CLI::App app{"Average consensus in open multi-agent systems: bounds and simulation"};
    app.require_subcommand(1);
    app.add_option("--config", "Flat key=value file; command-line flags take precedence");

    Common common;
    Physics phys;

    BoundArgs bound_args;
    auto* bound = app.add_subcommand("bound", "Evaluate a lower bound on a grid");
    bound->add_option("model", bound_args.model, "ping, sis, sis-approx or sis-log")->required();
    bound->add_option("--t", bound_args.t, "Times, comma separated; 'inf' for the limit");
    add_physics(bound, phys);
    add_common(bound, common);

    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the expected MSE");
    simulate->add_option("algorithm", sim_args.algorithm, "gossip or optimal")->required();
    simulate->add_option("--model", sim_args.model, "Interaction model: gossip or ping");
    simulate->add_option("--events", sim_args.events, "Stop after this many events");
    simulate->add_option("--horizon", sim_args.horizon, "Stop at this time");
    simulate->add_option("--sample-times", sim_args.sample_times, "'final' or a list of times");
    simulate->add_option("--realizations", sim_args.realizations, "Independent realizations");
    add_physics(simulate, phys);
    add_common(simulate, common);

    ReproduceArgs rep_args;
    auto* reproduce = app.add_subcommand("reproduce", "Write the CSV series of a figure");
    reproduce->add_option("figure", rep_args.figure, "fig3, fig5, fig6 or fig7")->required();
    reproduce->add_option("--out-dir", rep_args.out_dir, "Output directory");
    reproduce->add_option("--realizations", rep_args.realizations, "Realizations per point");
    add_common(reproduce, common);

    SelftestOptions st_opts;
    auto* selftest = app.add_subcommand("selftest", "Run the cross-oracle checks");
    selftest->add_flag("--corrupt-generator", st_opts.corrupt_generator)->group("");
    add_common(selftest, common);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

#ifdef _OPENMP
    if (const int threads = resolve_threads(common.threads); threads > 0)
        omp_set_num_threads(threads);
#endif
    try {
        if (*bound) return cmd_bound(bound_args, phys, common, out);
        if (*simulate) return cmd_simulate(sim_args, phys, common, out);
        if (*reproduce) return cmd_reproduce(rep_args, common, out);
        st_opts.seed = common.seed;
        return cmd_selftest(st_opts, common, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
}

}  // namespace ocl::cli
