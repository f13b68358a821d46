#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "landau/errors.hpp"
#include "landau/serialize.hpp"

using namespace landau;

namespace {

constexpr int kOk = 0, kViolated = 1, kInputError = 2, kInconclusive = 3;

struct CliError {
    std::string tag;
    std::string message;
};

[[noreturn]] void cli_fail(const std::string& tag, const std::string& msg) { throw CliError{tag, msg}; }

std::optional<std::string> env(const char* name) {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
}

template <class T>
T parse_env(const std::string& name, const std::string& text) {
    std::istringstream is(text);
    T v{};
    is >> v;
    if (!is || !is.eof()) cli_fail("usage", name + ": cannot parse \"" + text + "\"");
    return v;
}

std::vector<double> parse_list(const std::string& name, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_env<double>(name, item));
    return out;
}

// command line > LANDAU_* environment > input file > default
template <class T>
T resolve(const CLI::Option* opt, const T& cli, const char* env_name, const std::optional<T>& file, const T& def) {
    if (opt && opt->count()) return cli;
    if (auto e = env(env_name)) return parse_env<T>(env_name, *e);
    if (file) return *file;
    return def;
}

std::vector<double> resolve_list(const CLI::Option* opt, const std::vector<double>& cli, const char* env_name,
                                 const std::optional<std::vector<double>>& file, const std::vector<double>& def) {
    if (opt && opt->count()) return cli;
    if (auto e = env(env_name)) return parse_list(env_name, *e);
    if (file) return *file;
    return def;
}

Json load_json(const std::string& path, const char* what) {
    if (path.empty()) cli_fail("missing-input", std::string(what) + " is required (--input)");
    std::ifstream in(path);
    if (!in) cli_fail("missing-input", "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        cli_fail("schema", path + ": " + e.what());
    }
}

template <class T>
std::optional<T> file_value(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) return std::nullopt;
    try {
        return j[key].get<T>();
    } catch (const Json::exception&) {
        cli_fail("schema", std::string("\"") + key + "\" has the wrong type");
    }
}

struct Common {
    std::string input, output, format = "json";
    std::uint64_t seed = 1;
    double epsilon = 0.25;
    std::size_t grid_budget = 4'000'000, point_budget = 20'000'000;
    CLI::Option *o_seed = nullptr, *o_eps = nullptr, *o_grid = nullptr, *o_point = nullptr, *o_format = nullptr,
                *o_output = nullptr;
};

struct Outcome {
    Json result;
    Json config;
    std::string csv;
    std::string verdict_line;
    int status = kOk;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--input", c.input, "descriptor or scenario file (JSON)");
    c.o_output = sub->add_option("--output", c.output, "output path (default stdout)");
    c.o_format = sub->add_option("--format", c.format, "json | csv | text")->check(CLI::IsMember({"json", "csv", "text"}));
    c.o_seed = sub->add_option("--seed", c.seed, "random seed");
    c.o_eps = sub->add_option("--epsilon", c.epsilon, "epsilon");
    c.o_grid = sub->add_option("--grid-budget", c.grid_budget, "maximum quadrature nodes");
    c.o_point = sub->add_option("--point-budget", c.point_budget, "maximum enumerated points");
}

Json base_config(const Common& c, const std::uint64_t seed) {
    return {{"input", c.input}, {"seed", seed}};
}

// ---------------------------------------------------------------------------

Outcome run_density(Common& c, const std::string& set_path, const CLI::Option* o_h, const std::vector<double>& h_cli) {
    std::string path = !set_path.empty() ? set_path : c.input;
    Json j = load_json(path, "a set descriptor");
    Json set_j = j;
    std::optional<std::vector<double>> file_h;
    if (j.is_object() && j.contains("set")) {
        require_keys(j, {"set", "h", "seed"}, "density request");
        set_j = j["set"];
        file_h = file_value<std::vector<double>>(j, "h");
    }
    auto set = set_from_json(set_j);
    auto seed = resolve<std::uint64_t>(c.o_seed, c.seed, "LANDAU_SEED", file_value<std::uint64_t>(j, "seed"), 1);
    set.point_budget = resolve<std::size_t>(c.o_point, c.point_budget, "LANDAU_POINT_BUDGET", set.point_budget,
                                            set.point_budget);
    auto h = resolve_list(o_h, h_cli, "LANDAU_H", file_h, {10, 100, 1000});
    auto est = beurling_density(set, h);
    Outcome o;
    o.config = base_config(c, seed);
    o.config["h"] = h;
    o.config["point_budget"] = set.point_budget;
    o.result = {{"set", to_json(set)}, {"density", to_json(est)}};
    o.csv = density_csv(est);
    char buf[128];
    std::snprintf(buf, sizeof buf, "density: lower %.6g upper %.6g at h = %g", est.lower(), est.upper(),
                  h.empty() ? 0.0 : h.back());
    o.verdict_line = buf;
    return o;
}

Outcome run_compare(Common& c) {
    Json j = load_json(c.input, "a comparison request");
    require_keys(j, {"a", "alpha_a", "b", "alpha_b", "epsilon", "windows", "radii", "seed"}, "comparison request");
    auto a = set_from_json(j.at("a"));
    auto b = set_from_json(j.at("b"));
    if (!a.group.same_factors(b.group)) cli_fail("schema", "comparison sets live in different groups");
    auto seed = resolve<std::uint64_t>(c.o_seed, c.seed, "LANDAU_SEED", file_value<std::uint64_t>(j, "seed"), 1);
    double eps = resolve<double>(c.o_eps, c.epsilon, "LANDAU_EPSILON", file_value<double>(j, "epsilon"), 0.25);
    a.point_budget = b.point_budget =
        resolve<std::size_t>(c.o_point, c.point_budget, "LANDAU_POINT_BUDGET", std::nullopt, a.point_budget);
    double alpha_a = file_value<double>(j, "alpha_a").value_or(1);
    double alpha_b = file_value<double>(j, "alpha_b").value_or(1);
    auto sides = file_value<std::vector<double>>(j, "windows").value_or(std::vector<double>{64, 256, 1024});
    ExpansionSchedule sched;
    sched.radii = file_value<std::vector<double>>(j, "radii").value_or(ExpansionSchedule::doubling(1, 64).radii);
    auto v = comparison_check(a, alpha_a, b, alpha_b, eps, default_test_windows(a.group, sides), sched);
    Outcome o;
    o.config = base_config(c, seed);
    o.config.update({{"epsilon", eps}, {"alpha_a", alpha_a}, {"alpha_b", alpha_b}, {"windows", sides},
                     {"radii", sched.radii}, {"point_budget", a.point_budget}});
    o.result = to_json(v);
    o.csv = "status,witness_radius,max_violation,windows_tested,expansions_tried\n" + std::string(to_string(v.status)) +
            "," + std::to_string(v.witness_radius) + "," + std::to_string(v.max_violation) + "," +
            std::to_string(v.windows_tested) + "," + std::to_string(v.expansions_tried) + "\n";
    o.verdict_line = std::string("comparison: ") + to_string(v.status);
    o.status = v.status == Verdict::Holds ? kOk : kInconclusive;
    return o;
}

Scenario load_scenario(Common& c, const Json& j, std::uint64_t& seed) {
    auto s = scenario_from_json(j);
    seed = resolve<std::uint64_t>(c.o_seed, c.seed, "LANDAU_SEED", file_value<std::uint64_t>(j, "seed"), 1);
    s.seed = seed;
    s.epsilon = resolve<double>(c.o_eps, c.epsilon, "LANDAU_EPSILON", file_value<double>(j, "epsilon"), s.epsilon);
    s.grid_budget = resolve<std::size_t>(c.o_grid, c.grid_budget, "LANDAU_GRID_BUDGET",
                                         file_value<std::size_t>(j, "grid_budget"), s.grid_budget);
    s.set.point_budget = resolve<std::size_t>(c.o_point, c.point_budget, "LANDAU_POINT_BUDGET", s.set.point_budget,
                                              s.set.point_budget);
    return s;
}

Outcome run_frames(Common& c, const CLI::Option* o_h, const std::vector<double>& h_cli) {
    Json j = load_json(c.input, "a scenario");
    std::uint64_t seed = 1;
    auto s = load_scenario(c, j, seed);
    auto h = resolve_list(o_h, h_cli, "LANDAU_H", std::nullopt, {s.windows.back()});
    if (h.empty()) cli_fail("usage", "--h needs a window length");
    const double side = h.back();
    auto window = cube_window(s.set.group, std::vector<double>(s.set.group.rank(), 0.0), side);
    GridPolicy policy;
    policy.node_budget = s.grid_budget;
    auto sys = synthesize_system(s.set, window, s.spectrum, policy);
    auto fr = frame_bounds(sys);
    auto rz = riesz_bounds(sys);
    CarlesonOptions co;
    co.seed = seed;
    auto cr = carleson_constant(s.set, window, s.spectrum, co, policy);
    Outcome o;
    o.config = base_config(c, seed);
    o.config.update({{"window", side}, {"grid_budget", s.grid_budget}, {"point_budget", s.set.point_budget}});
    o.result = {{"frame", to_json(fr)},
                {"riesz", to_json(rz)},
                {"points", sys.size()},
                {"carleson",
                 {{"empirical", cr.empirical}, {"exact", cr.exact}, {"analytic", cr.analytic}, {"trials", cr.trials},
                  {"seed", cr.seed}}}};
    o.csv = eigenvalue_csv(fr.gram_spectrum);
    char buf[160];
    std::snprintf(buf, sizeof buf, "frames: A %.6g B %.6g a %.6g b %.6g (%zu points, window %g)", fr.lower, fr.upper,
                  rz.lower, rz.upper, sys.size(), side);
    o.verdict_line = buf;
    return o;
}

Outcome run_cubes(Common& c) {
    Json j = load_json(c.input, "a cube request");
    require_keys(j, {"spectrum", "epsilon", "tile_width", "window", "seed", "grid_budget"}, "cube request");
    auto spectrum = spectrum_from_json(j.at("spectrum"));
    auto seed = resolve<std::uint64_t>(c.o_seed, c.seed, "LANDAU_SEED", file_value<std::uint64_t>(j, "seed"), 1);
    double eps = resolve<double>(c.o_eps, c.epsilon, "LANDAU_EPSILON", file_value<double>(j, "epsilon"), 0.25);
    auto budget = resolve<std::size_t>(c.o_grid, c.grid_budget, "LANDAU_GRID_BUDGET",
                                       file_value<std::size_t>(j, "grid_budget"), 4'000'000);
    ApproximationOptions ao;
    ao.initial_width = file_value<std::vector<double>>(j, "tile_width").value_or(std::vector<double>{});
    double radius = file_value<double>(j, "window").value_or(8);
    auto app = approximate_spectrum(spectrum, eps, ao);
    auto atlas = make_atlas(app.cube);
    GridPolicy policy;
    policy.node_budget = budget;
    auto grid = build_grid(app.omega_star, policy);
    auto hadamard = sylvester_hadamard_order(app.n);
    Json tiles = Json::array();
    for (const auto& t : app.tiles) tiles.push_back(t);
    Outcome o;
    o.config = base_config(c, seed);
    o.config.update({{"epsilon", eps}, {"tile_width", ao.initial_width}, {"window", radius}, {"grid_budget", budget}});
    o.result = {{"omega_star", to_json(app.omega_star)},
                {"tiles", tiles},
                {"n", app.n},
                {"missing", app.missing},
                {"excess", app.excess},
                {"refinements", app.refinements},
                {"hadamard_order", hadamard.order},
                {"hadamard_exact", hadamard_exact(hadamard)},
                {"atlas", to_json(atlas, expansion_box(dual(spectrum.dual_group), radius))},
                {"grid_nodes", grid.size()}};
    o.csv = grid_csv(grid);
    char buf[160];
    std::snprintf(buf, sizeof buf, "cubes: %zu tiles, missing %.3g, excess %.3g", app.n, app.missing, app.excess);
    o.verdict_line = buf;
    return o;
}

Outcome run_landau(Common& c) {
    Json j = load_json(c.input, "a scenario batch");
    std::vector<Scenario> batch;
    std::uint64_t seed = 1;
    if (j.is_object() && j.contains("scenarios")) {
        batch = batch_from_json(j);
        seed = resolve<std::uint64_t>(c.o_seed, c.seed, "LANDAU_SEED", std::nullopt, 1);
        for (auto& s : batch) {
            s.seed = seed;
            if (c.o_eps->count() || env("LANDAU_EPSILON"))
                s.epsilon = resolve<double>(c.o_eps, c.epsilon, "LANDAU_EPSILON", std::nullopt, s.epsilon);
            s.grid_budget = resolve<std::size_t>(c.o_grid, c.grid_budget, "LANDAU_GRID_BUDGET", s.grid_budget,
                                                 s.grid_budget);
            s.set.point_budget = resolve<std::size_t>(c.o_point, c.point_budget, "LANDAU_POINT_BUDGET",
                                                      s.set.point_budget, s.set.point_budget);
        }
    } else {
        batch.push_back(load_scenario(c, j, seed));
    }
    auto b = run_scenarios(batch);
    Outcome o;
    o.config = base_config(c, seed);
    o.config["scenarios"] = Json::array();
    for (const auto& s : batch) o.config["scenarios"].push_back(to_json(s));
    o.result = to_json(b);
    std::ostringstream csv;
    csv << "scenario,verdict,nyquist,lower_density,upper_density\n";
    for (const auto& s : b.outcomes) {
        csv << s.name << ',' << (s.report ? to_string(s.report->verdict) : "error");
        if (s.report) csv << ',' << s.report->nyquist << ',' << s.report->uniform.lower << ',' << s.report->uniform.upper;
        else csv << ",,,";
        csv << '\n';
    }
    o.csv = csv.str();
    o.status = b.violated ? kViolated : (b.inconclusive || b.errors) ? kInconclusive : kOk;
    o.verdict_line = "landau: " + std::to_string(b.consistent) + " consistent, " + std::to_string(b.violated) +
                     " violated, " + std::to_string(b.inconclusive) + " inconclusive, " + std::to_string(b.errors) +
                     " errors";
    return o;
}

Outcome run_replay(Common& c, const std::string& builtin) {
    Scenario s;
    std::uint64_t seed = 1;
    if (!builtin.empty()) {
        if (builtin == "canonical") s = canonical_scenario();
        else if (builtin == "two-interval") s = two_interval_scenario();
        else if (builtin == "undersampled") s = undersampled_scenario();
        else cli_fail("usage", "unknown scenario " + builtin + " (canonical, two-interval, undersampled)");
        seed = resolve<std::uint64_t>(c.o_seed, c.seed, "LANDAU_SEED", std::nullopt, 1);
        s.epsilon = resolve<double>(c.o_eps, c.epsilon, "LANDAU_EPSILON", std::nullopt, s.epsilon);
        s.grid_budget = resolve<std::size_t>(c.o_grid, c.grid_budget, "LANDAU_GRID_BUDGET", std::nullopt, s.grid_budget);
    } else {
        s = load_scenario(c, load_json(c.input, "a scenario (or --scenario)"), seed);
    }
    auto r = replay_proof_pipeline(s);
    Outcome o;
    o.config = base_config(c, seed);
    o.config.update({{"scenario", s.name}, {"epsilon", s.epsilon}, {"grid_budget", s.grid_budget}});
    o.result = to_json(r);
    std::ostringstream csv;
    csv << "stage,passed\n";
    for (const auto& st : r.stages) csv << st.name << ',' << (st.passed ? 1 : 0) << '\n';
    o.csv = csv.str();
    if (r.completed) {
        o.verdict_line = "replay: completed, slack " + std::to_string(r.slack);
    } else {
        o.verdict_line = "replay: stopped at " + r.failed_stage + (r.hypothesis_failure ? " (hypothesis failure)" : "");
        o.status = r.hypothesis_failure ? kInconclusive : kViolated;
    }
    return o;
}

Outcome run_eigencount(Common& c, const CLI::Option* o_a, double a_cli, const CLI::Option* o_h,
                       const std::vector<double>& h_cli, const CLI::Option* o_t, double t_cli) {
    Json j = c.input.empty() ? Json::object() : load_json(c.input, "an eigencount request");
    require_keys(j, {"a", "h", "threshold", "seed", "grid_budget"}, "eigencount request");
    auto seed = resolve<std::uint64_t>(c.o_seed, c.seed, "LANDAU_SEED", file_value<std::uint64_t>(j, "seed"), 1);
    double a = resolve<double>(o_a, a_cli, "LANDAU_A", file_value<double>(j, "a"), 0.5);
    double t = resolve<double>(o_t, t_cli, "LANDAU_THRESHOLD", file_value<double>(j, "threshold"), 0.5);
    auto h = resolve_list(o_h, h_cli, "LANDAU_H", file_value<std::vector<double>>(j, "h"), {32, 64, 128, 256});
    GridPolicy policy;
    policy.node_budget = resolve<std::size_t>(c.o_grid, c.grid_budget, "LANDAU_GRID_BUDGET",
                                              file_value<std::size_t>(j, "grid_budget"), 4'000'000);
    auto r = eigenvalue_count_experiment(a, h, t, policy);
    Outcome o;
    o.config = base_config(c, seed);
    o.config.update({{"a", a}, {"threshold", t}, {"h", h}, {"grid_budget", policy.node_budget}});
    o.result = to_json(r);
    std::ostringstream csv;
    csv << "h,count,expected,residual,envelope\n";
    for (const auto& row : r.rows)
        csv << row.h << ',' << row.count << ',' << row.expected << ',' << row.residual << ',' << row.envelope << '\n';
    o.csv = csv.str();
    char buf[128];
    std::snprintf(buf, sizeof buf, "eigencount: %s, exponent %.3g", r.within_envelope ? "within envelope" : "outside envelope",
                  r.exponent);
    o.verdict_line = buf;
    o.status = r.within_envelope ? kOk : kInconclusive;
    return o;
}

std::string text_report(const RunRecord& rec, const Outcome& o) {
    std::ostringstream os;
    os << o.verdict_line << '\n';
    os << "command: " << rec.command << '\n';
    os << "seed: " << rec.seed << '\n';
    os << "config: " << canonical_json(rec.config) << '\n';
    os << "result: " << rec.result.dump(2) << '\n';
    char buf[64];
    std::snprintf(buf, sizeof buf, "wall time: %.3f s\n", rec.wall_time);
    os << buf;
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Density and spectral tools for sampling and interpolation on LCA groups"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(0, 1);
    Common c;
    std::string set_path, builtin;
    std::vector<double> h;
    double a = 0.5, threshold = 0.5;

    auto* density = app.add_subcommand("density", "Beurling density table of a discrete set");
    add_common(density, c);
    density->add_option("--set", set_path, "set descriptor file");
    auto* o_h_density = density->add_option("--h", h, "window sides")->delimiter(',');

    auto* compare = app.add_subcommand("compare", "weighted comparison alpha A <=_eps beta B");
    add_common(compare, c);

    auto* frames = app.add_subcommand("frames", "frame, Riesz and Carleson bounds of a truncated system");
    add_common(frames, c);
    auto* o_h_frames = frames->add_option("--h", h, "window side")->delimiter(',');

    auto* cubes = app.add_subcommand("cubes", "tile approximation of a spectrum and its quasi-lattice");
    add_common(cubes, c);

    auto* landau_cmd = app.add_subcommand("landau", "necessity verdicts for a scenario batch");
    add_common(landau_cmd, c);

    auto* replay = app.add_subcommand("replay", "staged replay of the necessity argument");
    add_common(replay, c);
    replay->add_option("--scenario", builtin, "built-in scenario: canonical, two-interval, undersampled");

    auto* eigencount = app.add_subcommand("eigencount", "eigenvalue counts of the time-frequency concentration operator");
    add_common(eigencount, c);
    auto* o_a = eigencount->add_option("--a", a, "band half-width in units of pi");
    auto* o_h_eig = eigencount->add_option("--h", h, "window lengths")->delimiter(',');
    auto* o_t = eigencount->add_option("--threshold", threshold, "eigenvalue threshold");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error[usage]: " << e.what() << '\n';
        return kInputError;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << "error[usage]: no command given\n" << app.help();
        return kInputError;
    }
    auto* sub = app.get_subcommands().front();
    const std::string command = sub->get_name();
    c.o_output = sub->get_option("--output");
    c.o_format = sub->get_option("--format");
    c.o_seed = sub->get_option("--seed");
    c.o_eps = sub->get_option("--epsilon");
    c.o_grid = sub->get_option("--grid-budget");
    c.o_point = sub->get_option("--point-budget");

    try {
        if (!c.o_format->count())
            if (auto e = env("LANDAU_FORMAT")) c.format = *e;
        if (c.format != "json" && c.format != "csv" && c.format != "text")
            cli_fail("usage", "format must be json, csv or text");
        if (!c.o_output->count())
            if (auto e = env("LANDAU_OUTPUT")) c.output = *e;

        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        if (command == "density") o = run_density(c, set_path, o_h_density, h);
        else if (command == "compare") o = run_compare(c);
        else if (command == "frames") o = run_frames(c, o_h_frames, h);
        else if (command == "cubes") o = run_cubes(c);
        else if (command == "landau") o = run_landau(c);
        else if (command == "replay") o = run_replay(c, builtin);
        else o = run_eigencount(c, o_a, a, o_h_eig, h, o_t, threshold);
        RunRecord rec;
        rec.command = command;
        rec.config = o.config;
        rec.seed = o.config.value("seed", std::uint64_t{1});
        rec.result = o.result;
        rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        std::string text;
        if (c.format == "json") text = canonical_json(to_json(rec)) + "\n";
        else if (c.format == "csv") text = o.csv;
        else text = text_report(rec, o);

        if (c.output.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(c.output, std::ios::binary);
            if (!out || !(out << text)) cli_fail("output", "cannot write " + c.output);
        }
        return o.status;
    } catch (const CliError& e) {
        std::cerr << "error[" << e.tag << "]: " << e.message << '\n';
        return kInputError;
    } catch (const Error& e) {
        const bool schema = e.kind() == ErrorKind::Schema;
        std::cerr << "error[" << (schema ? "schema" : to_string(e.kind())) << "]: " << e.what() << '\n';
        return kInputError;
    } catch (const Json::exception& e) {
        std::cerr << "error[schema]: " << e.what() << '\n';
        return kInputError;
    }
}
