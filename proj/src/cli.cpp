#include "mtgai/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mtgai/bounds.hpp"
#include "mtgai/environments.hpp"
#include "mtgai/errors.hpp"
#include "mtgai/harness.hpp"
#include "mtgai/io.hpp"
#include "mtgai/report.hpp"

namespace mtgai::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Bad flags or names: exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string env;
    std::string thresholds;
    std::string algo = "all";
    double delta = 0.005;
    double epsilon = 0.005;
    std::optional<std::string> delta_grid;
    std::optional<std::string> epsilon_grid;
    std::uint64_t reps = 1;
    std::uint64_t seed = 0;
    std::uint64_t max_pulls = kDefaultMaxPulls;
    unsigned threads = 0;
    std::optional<double> epsilon0;
    bool epsilon0_auto = false;
    std::string out = "mtgai-out";
    bool trace = false;
    bool show_std = false;
    bool show_error_rate = false;
    std::vector<std::string> inputs;
};

BanditEnvironment resolve_environment(const std::string& name) {
    if (auto env = bundled_environment(name)) return *env;
    if (!fs::exists(name)) {
        std::string names;
        for (const auto& n : bundled_environment_names()) names += (names.empty() ? "" : "|") + n;
        throw UsageError("unknown environment '" + name + "'; expected " + names +
                         " or a path to an environment file");
    }
    return load_environment_file(name);
}

std::vector<double> resolve_thresholds(const Options& o, const BanditEnvironment& env) {
    if (o.thresholds.empty()) {
        if (!env.thresholds) {
            throw UsageError("environment '" + env.name + "' has no thresholds; pass --thresholds");
        }
        return *env.thresholds;
    }
    std::vector<double> xi;
    std::stringstream ss(o.thresholds);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            xi.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--thresholds: '" + item + "' is not a number");
        }
    }
    if (xi.size() != env.num_objectives) {
        throw UsageError("--thresholds: expected " + std::to_string(env.num_objectives) +
                         " values, got " + std::to_string(xi.size()));
    }
    return xi;
}

std::vector<SelectionRule> resolve_algorithms(const std::string& name) {
    if (name == "all") return {std::begin(kAllRules), std::end(kAllRules)};
    if (auto r = parse_rule(name)) return {*r};
    throw UsageError("unknown algorithm '" + name + "'; expected one of tucb|hdoc|lucb|apt|all");
}

// "A:B:STEP" -> A, A+STEP, ..., <= B. Points are rounded to 12 decimals so
// 0.005:0.05:0.005 yields exactly 0.005, 0.01, ..., 0.05.
std::vector<double> parse_grid(const std::string& spec, const char* flag) {
    double a = 0, b = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream ss(spec);
    if (!(ss >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(ss >> std::ws).eof()) {
        throw UsageError(std::string(flag) + ": expected A:B:STEP, got '" + spec + "'");
    }
    if (!(step > 0.0) || b < a) {
        throw UsageError(std::string(flag) + ": need STEP > 0 and A <= B");
    }
    const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
    std::vector<double> grid;
    for (std::size_t k = 0; k < n; ++k) {
        grid.push_back(std::round((a + static_cast<double>(k) * step) * 1e12) / 1e12);
    }
    return grid;
}

// Writes every file only after all contents exist, each through a temporary.
void commit(const fs::path& dir, const std::vector<std::pair<std::string, std::string>>& files) {
    fs::create_directories(dir);
    for (const auto& [name, content] : files) {
        const fs::path tmp = dir / (name + ".tmp");
        {
            std::ofstream os(tmp, std::ios::binary);
            if (!os) throw std::runtime_error("cannot write " + tmp.string());
            os << content;
        }
        fs::rename(tmp, dir / name);
    }
}

std::string summary_line(const CellStats& c) {
    std::ostringstream os;
    os << to_string(c.algorithm) << " delta=" << format_double(c.delta)
       << " epsilon=" << format_double(c.epsilon) << " reps=" << c.repetitions
       << " mean=" << format_double(c.mean_stop_time) << " std=" << format_double(c.std_stop_time)
       << " error_rate=" << format_double(c.error_rate) << "% timeouts=" << c.timeouts;
    return os.str();
}

ExperimentPlan make_plan(const Options& o, const BanditEnvironment& env) {
    ExperimentPlan plan;
    plan.environment = env;
    plan.thresholds = resolve_thresholds(o, env);
    plan.algorithms = resolve_algorithms(o.algo);
    plan.repetitions = o.reps;
    plan.max_pulls = o.max_pulls;
    plan.master_seed = o.seed;
    plan.threads = o.threads;
    return plan;
}

int cmd_run(const Options& o, std::ostream& out) {
    const auto env = resolve_environment(o.env);
    ExperimentPlan plan = make_plan(o, env);
    plan.deltas = {o.delta};
    plan.epsilons = {o.epsilon};
    try {
        plan.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }

    const auto records = run_experiment(plan);
    const auto cells = aggregate(records);

    std::ostringstream csv;
    write_records_csv(csv, records);
    const SummaryMeta meta{env.name, plan.max_pulls, plan.master_seed};
    std::vector<std::pair<std::string, std::string>> files = {
        {"records.csv", csv.str()},
        {"summary.json", summary_json(cells, meta).dump(2) + "\n"},
    };

    if (o.trace) {
        std::ostringstream trace;
        bool header = true;
        const RewardSampler sampler = [&env](std::size_t arm, Rng& rng, std::vector<double>& z) {
            env.sample(arm, rng, z);
        };
        for (const auto& r : records) {
            ProblemSpec spec{env.num_arms, env.num_objectives, plan.thresholds,
                             r.delta,      r.epsilon,          env.noise_scale()};
            Rng rng(r.seed);
            std::vector<TraceRow> rows;
            run_policy(spec, r.algorithm, sampler, plan.max_pulls, rng, &rows);
            write_trace_csv(trace, r.rep, rows, header);
            header = false;
        }
        files.emplace_back("trace.csv", trace.str());
    }

    commit(o.out, files);
    for (const auto& c : cells) out << summary_line(c) << '\n';
    return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
    if (o.delta_grid.has_value() == o.epsilon_grid.has_value()) {
        throw UsageError("sweep: pass exactly one of --delta-grid or --epsilon-grid");
    }
    const auto env = resolve_environment(o.env);
    ExperimentPlan plan = make_plan(o, env);
    if (o.delta_grid) {
        plan.deltas = parse_grid(o.delta_grid->empty() ? "0.005:0.05:0.005" : *o.delta_grid,
                                 "--delta-grid");
        plan.epsilons = {o.epsilon};
    } else {
        plan.deltas = {o.delta};
        plan.epsilons = parse_grid(o.epsilon_grid->empty() ? "0.002:0.02:0.002" : *o.epsilon_grid,
                                   "--epsilon-grid");
    }
    try {
        plan.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }

    const auto records = run_experiment(plan);
    const auto cells = aggregate(records);

    std::ostringstream csv;
    write_records_csv(csv, records);
    std::ostringstream table_csv;
    table_csv << "algorithm,delta,epsilon,repetitions,mean_stop_time,std_stop_time,error_rate,"
                 "timeouts\n";
    for (const auto& c : cells) {
        table_csv << to_string(c.algorithm) << ',' << format_double(c.delta) << ','
                  << format_double(c.epsilon) << ',' << c.repetitions << ','
                  << format_double(c.mean_stop_time) << ',' << format_double(c.std_stop_time)
                  << ',' << format_double(c.error_rate) << ',' << c.timeouts << '\n';
    }
    const SummaryMeta meta{env.name, plan.max_pulls, plan.master_seed};
    commit(o.out, {{"records.csv", csv.str()},
                   {"sweep.csv", table_csv.str()},
                   {"summary.json", summary_json(cells, meta).dump(2) + "\n"}});
    out << render_report(cells, {o.show_std, o.show_error_rate}).table;
    return kExitOk;
}

json json_number(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

int cmd_bounds(const Options& o, std::ostream& out) {
    if (o.epsilon0.has_value() == o.epsilon0_auto) {
        throw UsageError("bounds: pass exactly one of --epsilon0 or --epsilon0-auto");
    }
    const auto env = resolve_environment(o.env);
    const auto xi = resolve_thresholds(o, env);
    ProblemSpec spec{env.num_arms, env.num_objectives, xi, o.delta, o.epsilon, env.noise_scale()};
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    const auto gaps = env.true_gaps(xi);

    const auto regime = detect_regime(gaps, spec.epsilon);
    if (!regime) {
        throw PreconditionError(
            "the best arm is epsilon-good but not good (0 < min g_i <= epsilon); neither the "
            "good-arm nor the no-epsilon-good-arm upper bound applies");
    }
    double e0 = 0.0;
    double upper = 0.0;
    if (o.epsilon0_auto) {
        const auto best = best_upper_bound(spec, gaps, *regime);
        e0 = best.epsilon0;
        upper = best.value;
    } else {
        e0 = *o.epsilon0;
        upper = upper_bound(BoundInputs{spec, gaps, e0, *regime});
    }
    const BoundInputs inputs{spec, gaps, e0, *regime};

    json doc;
    doc["environment"] = env.name;
    doc["delta"] = spec.delta;
    doc["epsilon"] = spec.epsilon;
    doc["sigma"] = spec.sigma;
    doc["thresholds"] = xi;
    doc["true_gaps"] = gaps;
    doc["regime"] = *regime == Regime::good_arm_exists ? "good_arm_exists" : "no_eps_good_arm";
    doc["epsilon0"] = e0;
    doc["epsilon0_mode"] = o.epsilon0_auto ? "auto" : "fixed";
    json ts = json::array();
    for (const auto& t : t_values(inputs)) ts.push_back(t ? json(*t) : json(nullptr));
    doc["t_i"] = ts;
    doc["upper_bound"] = upper;
    doc["asymptotic_constant"] = asymptotic_constant(inputs);

    bool unit = std::all_of(xi.begin(), xi.end(), [](double x) { return x >= 0 && x <= 1; });
    for (const auto& row : env.means) {
        unit = unit && std::all_of(row.begin(), row.end(), [](double x) { return x >= 0 && x <= 1; });
    }
    if (unit) {
        const Regime lb_regime = std::any_of(gaps.begin(), gaps.end(), is_good)
                                     ? Regime::good_arm_exists
                                     : Regime::no_eps_good_arm;
        doc["lower_bound"] = json_number(lower_bound({env.means, xi, spec.delta}, lb_regime));
        doc["lower_bound_note"] =
            "Bernoulli-instance lower bound for (delta, 0)-successful algorithms; it is not a "
            "bound for the Gaussian environment itself";
    } else {
        doc["lower_bound"] = nullptr;
        doc["lower_bound_note"] = "means or thresholds outside [0,1]; lower bound not evaluated";
    }
    const bool interior = std::all_of(xi.begin(), xi.end(), [](double x) { return x > 0 && x < 1; });
    doc["pinsker_constant"] = interior ? json(pinsker_constant(xi)) : json(nullptr);

    const std::string text = doc.dump(2) + "\n";
    commit(o.out, {{"bounds.json", text}});
    out << text;
    return kExitOk;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int cmd_report(const Options& o, std::ostream& out) {
    std::vector<CellStats> cells;
    for (const auto& path : o.inputs) {
        const std::string text = read_file(path);
        if (fs::path(path).extension() == ".json") {
            const auto part = cells_from_summary(text, path);
            cells.insert(cells.end(), part.begin(), part.end());
        } else {
            std::istringstream is(text);
            const auto records = read_records_csv(is, path);
            if (records.empty()) throw ParseError(path + ": no records");
            const auto part = aggregate(records);
            cells.insert(cells.end(), part.begin(), part.end());
        }
    }
    if (cells.empty()) throw ParseError("report: inputs contain no cells");
    const auto report = render_report(cells, {o.show_std, o.show_error_rate});
    commit(o.out, {{"report.csv", report.tidy_csv}, {"report.txt", report.table}});
    out << report.table;
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Multi-threshold good arm identification benchmark"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--env", o.env, "Bundled environment name or config path")->required();
        sub->add_option("--thresholds", o.thresholds, "Comma-separated thresholds (overrides the environment's)");
        sub->add_option("--out", o.out, "Output directory")->capture_default_str();
    };
    auto add_experiment = [&](CLI::App* sub) {
        sub->add_option("--reps", o.reps, "Repetitions per cell")->capture_default_str()
            ->check(CLI::PositiveNumber);
        sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
        sub->add_option("--max-pulls", o.max_pulls, "Pull budget per run")->capture_default_str();
        sub->add_option("--threads", o.threads, "Worker threads (0: all cores)")->capture_default_str();
        sub->add_flag("--std", o.show_std, "Show standard deviations in the table");
        sub->add_flag("--error-rate", o.show_error_rate, "Show error rates in the table");
    };

    auto* run_cmd = app.add_subcommand("run", "Run repetitions of one (algorithm, delta, epsilon) cell");
    add_common(run_cmd);
    add_experiment(run_cmd);
    run_cmd->add_option("--algo", o.algo, "tucb|hdoc|lucb|apt|all")->required();
    run_cmd->add_option("--delta", o.delta)->required();
    run_cmd->add_option("--epsilon", o.epsilon)->required();
    run_cmd->add_flag("--trace", o.trace, "Write a per-round trace.csv");

    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep a delta or epsilon grid");
    add_common(sweep_cmd);
    add_experiment(sweep_cmd);
    sweep_cmd->add_option("--algo", o.algo, "tucb|hdoc|lucb|apt|all")->capture_default_str();
    sweep_cmd->add_option("--delta", o.delta, "Fixed delta for an epsilon sweep")->capture_default_str();
    sweep_cmd->add_option("--epsilon", o.epsilon, "Fixed epsilon for a delta sweep")->capture_default_str();
    sweep_cmd->add_option("--delta-grid", o.delta_grid, "A:B:STEP (default 0.005:0.05:0.005)")
        ->expected(0, 1);
    sweep_cmd->add_option("--epsilon-grid", o.epsilon_grid, "A:B:STEP (default 0.002:0.02:0.002)")
        ->expected(0, 1);

    auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate theoretical stopping-time bounds");
    add_common(bounds_cmd);
    bounds_cmd->add_option("--delta", o.delta)->required();
    bounds_cmd->add_option("--epsilon", o.epsilon)->required();
    auto* e0 = bounds_cmd->add_option("--epsilon0", o.epsilon0, "Fixed slack epsilon0");
    bounds_cmd->add_flag("--epsilon0-auto", o.epsilon0_auto, "Minimise over a 20-point epsilon0 grid")
        ->excludes(e0);

    auto* report_cmd = app.add_subcommand("report", "Render records/summary files as a table");
    report_cmd->add_option("inputs", o.inputs, "records CSV or summary JSON files")->required();
    report_cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
    report_cmd->add_flag("--std", o.show_std);
    report_cmd->add_flag("--error-rate", o.show_error_rate);

    std::vector<const char*> argv{"mtgai"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(o, out);
        if (sweep_cmd->parsed()) return cmd_sweep(o, out);
        if (bounds_cmd->parsed()) return cmd_bounds(o, out);
        return cmd_report(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace mtgai::cli
