// mecaoi: command-line front end for the AoI models.
//
// Exit codes: 0 success, 1 validation failure (or numerical failure),
// 2 malformed input, 3 unstable configuration.

#include "mecaoi/des.hpp"
#include "mecaoi/experiment.hpp"
#include "mecaoi/partition.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

using namespace mecaoi;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitUnstable = 3;

struct Globals {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> messages;
    std::string out;
    std::string spec;
    std::string preset;
    bool allow_unstable = false;
    unsigned threads = 0;
};

struct RateArgs {
    std::string scheme = "partial";
    double mu_l = 1.0;
    double mu_t = 1.0;
    double mu_s = 1.0;
    std::string time_model = "exponential";
};

TimeModel parse_time_model(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        const auto k = parse_time_kind(text);
        return {k, k};
    }
    return {parse_time_kind(text.substr(0, comma)), parse_time_kind(text.substr(comma + 1))};
}

void add_rate_options(CLI::App* cmd, RateArgs& args) {
    cmd->add_option("--scheme", args.scheme, "local | remote | partial")->capture_default_str();
    cmd->add_option("--mu-l", args.mu_l, "local computing rate")->capture_default_str();
    cmd->add_option("--mu-t", args.mu_t, "transmission rate")->capture_default_str();
    cmd->add_option("--mu-s", args.mu_s, "remote computing rate")->capture_default_str();
    cmd->add_option("--time-model", args.time_model, "exponential | deterministic | <local>,<remote>")
        ->capture_default_str();
}

/// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw InvalidArgument("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

void write_estimate(std::ostream& out, Scheme scheme, const AoiEstimate& est) {
    out << "scheme,aoi_mean,aoi_ci,method\n"
        << to_string(scheme) << ',' << format_number(est.mean) << ','
        << (est.ci_halfwidth ? format_number(*est.ci_halfwidth) : "") << ',' << to_string(est.method) << '\n';
}

SweepSpec resolve_spec(const Globals& g) {
    if (g.spec.empty() == g.preset.empty()) throw InvalidArgument("give exactly one of --spec or --preset");
    SweepSpec spec = g.spec.empty() ? preset(g.preset) : load_sweep_spec(g.spec);
    if (g.seed) spec.seed = *g.seed;
    if (g.messages) spec.messages = *g.messages;
    if (g.allow_unstable) spec.allow_unstable = true;
    spec.validate();
    return spec;
}

int run_analytic(const Globals& g, const RateArgs& a) {
    const Scheme scheme = parse_scheme(a.scheme);
    const SchemeParams params{a.mu_l, a.mu_t, a.mu_s};
    const auto est = aoi_analytic(scheme, params, parse_time_model(a.time_model));
    Output out(g.out);
    write_estimate(out.stream(), scheme, est);
    return 0;
}

int run_simulate(const Globals& g, const RateArgs& a, std::uint64_t batches) {
    SimConfig config;
    config.scheme = parse_scheme(a.scheme);
    config.params = {a.mu_l, a.mu_t, a.mu_s};
    config.time_model = parse_time_model(a.time_model);
    if (g.seed) config.seed = *g.seed;
    if (g.messages) config.n_messages = *g.messages;
    config.batch_count = static_cast<int>(batches);
    const auto result = simulate(config);
    Output out(g.out);
    write_estimate(out.stream(), config.scheme, result.aoi);
    return 0;
}

int run_sweep_cmd(const Globals& g) {
    const auto spec = resolve_spec(g);
    SweepOptions options;
    options.threads = g.threads;
    const auto rows = run_sweep(spec, options);
    Output out(g.out);
    write_csv(out.stream(), rows);
    return 0;
}

struct OptimizeArgs {
    RateArgs rates;
    TaskProfile profile;
    bool use_profile = false;
    std::string evaluator = "analytic";
};

int run_optimize(const Globals& g, OptimizeArgs& a) {
    OptimizeOptions options;
    options.threads = g.threads;
    options.evaluation.evaluator = parse_evaluator(a.evaluator);
    if (g.seed) options.evaluation.seed = *g.seed;
    if (g.messages) options.evaluation.sim_messages = *g.messages;
    const TimeModel tm = parse_time_model(a.rates.time_model);
    const auto best = a.use_profile ? optimize_alpha(a.profile, tm, options)
                                    : optimize_alpha(SchemeParams{a.rates.mu_l, a.rates.mu_t, a.rates.mu_s}, tm, options);
    Output out(g.out);
    out.stream() << "alpha,scheme,mu_l,mu_t,mu_s,aoi_mean,aoi_ci,method\n";
    out.stream() << format_number(best.alpha) << ',' << to_string(best.scheme) << ',' << format_number(best.params.mu_l)
                 << ',' << format_number(best.params.mu_t) << ',' << format_number(best.params.mu_s) << ','
                 << format_number(best.aoi->mean) << ','
                 << (best.aoi->ci_halfwidth ? format_number(*best.aoi->ci_halfwidth) : "") << ','
                 << to_string(best.aoi->method) << '\n';
    return 0;
}

int run_crossover(const Globals& g, const std::string& a, const std::string& b, double tol) {
    const auto spec = resolve_spec(g);
    const Scheme sa = parse_scheme(a);
    const Scheme sb = parse_scheme(b);
    const auto found = find_crossovers(sa, sb, spec, tol);
    Output out(g.out);
    out.stream() << "scheme_a,scheme_b,variable,value,bracket_lo,bracket_hi,rel_width\n";
    for (const auto& c : found)
        out.stream() << to_string(sa) << ',' << to_string(sb) << ',' << to_string(spec.variable) << ','
                     << format_number(c.value) << ',' << format_number(c.bracket_lo) << ','
                     << format_number(c.bracket_hi) << ',' << format_number(c.tolerance) << '\n';
    return 0;
}

int run_validate(const Globals& g, const std::string& grid_kind) {
    ValidationOptions options;
    options.threads = g.threads;
    if (g.seed) options.seed = *g.seed;
    if (g.messages) options.messages = *g.messages;
    const auto grid = default_validation_grid(parse_time_model(grid_kind));
    const auto report = validate(grid, options);
    Output out(g.out);
    out.stream() << "scheme,mu_l,mu_t,mu_s,analytic,simulated,ci,pass\n";
    for (const auto& r : report.records)
        out.stream() << to_string(r.point.scheme) << ',' << format_number(r.point.params.mu_l) << ','
                     << format_number(r.point.params.mu_t) << ',' << format_number(r.point.params.mu_s) << ','
                     << format_number(r.analytic) << ',' << format_number(r.simulated) << ','
                     << format_number(r.ci_halfwidth) << ',' << (r.pass ? "true" : "false") << '\n';
    return report.all_pass() ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Age-of-information models for local, remote and partial computing"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "simulation seed");
    app.add_option("--messages", g.messages, "simulated messages per run");
    app.add_option("--out", g.out, "write output to this file");
    app.add_option("--spec", g.spec, "sweep spec file");
    app.add_option("--preset", g.preset, "built-in sweep spec");
    app.add_flag("--allow-unstable-rows", g.allow_unstable, "emit unstable sweep points instead of failing");
    app.add_option("--threads", g.threads, "worker threads (0 = all cores)");
    app.add_flag_callback("--list-presets", [] {
        for (const auto& [name, text] : preset_specs()) std::cout << name << '\n';
        throw CLI::Success();
    }, "print preset names and exit");

    RateArgs analytic_args;
    auto* analytic_cmd = app.add_subcommand("analytic", "closed-form or quadrature AoI");
    add_rate_options(analytic_cmd, analytic_args);

    RateArgs sim_args;
    std::uint64_t batches = 30;
    auto* sim_cmd = app.add_subcommand("simulate", "discrete-event simulation");
    add_rate_options(sim_cmd, sim_args);
    sim_cmd->add_option("--batches", batches, "batch-means batch count")->capture_default_str();

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep a spec and print CSV");

    OptimizeArgs opt_args;
    auto* opt_cmd = app.add_subcommand("optimize-alpha", "AoI-minimizing offloading fraction");
    add_rate_options(opt_cmd, opt_args.rates);
    auto* profile_group = opt_cmd->add_option_group("profile", "task profile instead of base rates");
    for (auto [flag, target] : {std::pair{"--l", &opt_args.profile.l}, {"--c", &opt_args.profile.c},
                                {"--R", &opt_args.profile.R}, {"--f-l", &opt_args.profile.f_l},
                                {"--f-s", &opt_args.profile.f_s}})
        profile_group->add_option(flag, *target)->capture_default_str();
    opt_cmd->add_flag("--profile", opt_args.use_profile, "derive base rates from --l --c --R --f-l --f-s");
    opt_cmd->add_option("--evaluator", opt_args.evaluator, "analytic | simulation")->capture_default_str();

    std::string cross_a = "local";
    std::string cross_b = "remote";
    double cross_tol = 1e-4;
    auto* cross_cmd = app.add_subcommand("crossover", "where two schemes' AoI curves meet");
    cross_cmd->add_option("--a", cross_a, "first scheme")->capture_default_str();
    cross_cmd->add_option("--b", cross_b, "second scheme")->capture_default_str();
    cross_cmd->add_option("--tol", cross_tol, "relative bisection tolerance")->capture_default_str();

    std::string grid_kind = "exponential";
    auto* validate_cmd = app.add_subcommand("validate", "analytic vs simulation on the {0.3,1,3}^3 grid");
    validate_cmd->add_option("--time-model", grid_kind, "exponential | deterministic")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitMalformed;
    }

    try {
        if (*analytic_cmd) return run_analytic(g, analytic_args);
        if (*sim_cmd) return run_simulate(g, sim_args, batches);
        if (*sweep_cmd) return run_sweep_cmd(g);
        if (*opt_cmd) return run_optimize(g, opt_args);
        if (*cross_cmd) return run_crossover(g, cross_a, cross_b, cross_tol);
        if (*validate_cmd) return run_validate(g, grid_kind);
    } catch (const UnstableConfiguration& e) {
        std::cerr << "unstable: " << e.what() << '\n';
        return kExitUnstable;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMalformed;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitMalformed;
}
