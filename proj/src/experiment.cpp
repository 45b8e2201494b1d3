#include "mecaoi/experiment.hpp"

#include "mecaoi/des.hpp"
#include "mecaoi/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace mecaoi {

std::string_view to_string(SweepVariable v) noexcept {
    switch (v) {
    case SweepVariable::L: return "l";
    case SweepVariable::C: return "c";
    case SweepVariable::R: return "R";
    case SweepVariable::FS: return "f_s";
    case SweepVariable::RhoS: return "rho_s";
    case SweepVariable::MuT: return "mu_t";
    }
    return "?";
}

SweepVariable parse_sweep_variable(std::string_view text) {
    if (text == "l") return SweepVariable::L;
    if (text == "c") return SweepVariable::C;
    if (text == "R") return SweepVariable::R;
    if (text == "f_s") return SweepVariable::FS;
    if (text == "rho_s") return SweepVariable::RhoS;
    if (text == "mu_t") return SweepVariable::MuT;
    throw InvalidArgument("unknown sweep variable '" + std::string(text) + "'");
}

std::vector<double> SweepRange::values() const {
    std::vector<double> out(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
        const double f = static_cast<double>(k) / (points - 1);
        if (log_spacing) {
            out[k] = std::exp(std::log(lo) + f * (std::log(hi) - std::log(lo)));
        } else {
            // 15 significant digits so decimal grids land on their nominal values.
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.15g", lo + f * (hi - lo));
            out[k] = std::strtod(buf, nullptr);
        }
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

void SweepSpec::validate() const {
    if (!(std::isfinite(range.lo) && std::isfinite(range.hi) && range.lo < range.hi))
        throw InvalidArgument("sweep range needs lo < hi");
    if (range.points < 2) throw InvalidArgument("sweep range needs at least two points");
    if (!(range.lo > 0.0)) throw InvalidArgument("swept variable must stay positive");
    if (schemes.empty()) throw InvalidArgument("sweep needs at least one scheme");
    for (std::size_t i = 0; i < schemes.size(); ++i)
        for (std::size_t j = i + 1; j < schemes.size(); ++j)
            if (schemes[i] == schemes[j]) throw InvalidArgument("scheme listed twice");
    if (evaluator != EvaluatorMode::Analytic && messages < 1000)
        throw InvalidArgument("simulation sweeps need at least 1000 messages");
    profile.validate();
    base.validate();
}

SchemeParams SweepSpec::base_at(double x) const {
    TaskProfile p = profile;
    switch (variable) {
    case SweepVariable::L: p.l = x; return base_rates(p);
    case SweepVariable::C: p.c = x; return base_rates(p);
    case SweepVariable::R: p.R = x; return base_rates(p);
    case SweepVariable::FS: p.f_s = x; return base_rates(p);
    case SweepVariable::RhoS: return {base.mu_l, x * base.mu_s, base.mu_s};
    case SweepVariable::MuT: return {base.mu_l, x, base.mu_s};
    }
    throw InvalidArgument("unknown sweep variable");
}

// ---------------------------------------------------------------------------
// Spec parsing
// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, std::string_view seps) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        const auto next = s.find_first_of(seps, pos);
        const auto piece = trim(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (!piece.empty()) out.push_back(piece);
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value))
        throw InvalidArgument("expected a number, got '" + std::string(text) + "'");
    return value;
}

std::uint64_t parse_count(std::string_view text) {
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) throw InvalidArgument("expected a non-negative integer, got '" + std::string(text) + "'");
    return value;
}

bool parse_bool(std::string_view text) {
    if (text == "true" || text == "yes" || text == "1") return true;
    if (text == "false" || text == "no" || text == "0") return false;
    throw InvalidArgument("expected true or false, got '" + std::string(text) + "'");
}

void apply_key(SweepSpec& spec, std::string_view key, std::string_view value) {
    if (key == "name") {
        spec.name = std::string(value);
    } else if (key == "variable") {
        spec.variable = parse_sweep_variable(value);
    } else if (key == "range") {
        const auto parts = split(value, " \t");
        if (parts.size() != 3 && parts.size() != 4) throw InvalidArgument("range expects: lo hi points [lin|log]");
        spec.range.lo = parse_double(parts[0]);
        spec.range.hi = parse_double(parts[1]);
        const auto n = parse_count(parts[2]);
        if (n > 100000) throw InvalidArgument("range has too many points");
        spec.range.points = static_cast<int>(n);
        spec.range.log_spacing = false;
        if (parts.size() == 4) {
            if (parts[3] == "log") spec.range.log_spacing = true;
            else if (parts[3] != "lin") throw InvalidArgument("range spacing must be lin or log");
        }
    } else if (key == "l") {
        spec.profile.l = parse_double(value);
    } else if (key == "c") {
        spec.profile.c = parse_double(value);
    } else if (key == "R") {
        spec.profile.R = parse_double(value);
    } else if (key == "f_l") {
        spec.profile.f_l = parse_double(value);
    } else if (key == "f_s") {
        spec.profile.f_s = parse_double(value);
    } else if (key == "mu_l") {
        spec.base.mu_l = parse_double(value);
    } else if (key == "mu_t") {
        spec.base.mu_t = parse_double(value);
    } else if (key == "mu_s") {
        spec.base.mu_s = parse_double(value);
    } else if (key == "schemes") {
        spec.schemes.clear();
        for (auto s : split(value, ",")) spec.schemes.push_back(parse_scheme(s));
    } else if (key == "time_model") {
        const auto parts = split(value, ",");
        if (parts.size() == 1) spec.time_model = {parse_time_kind(parts[0]), parse_time_kind(parts[0])};
        else if (parts.size() == 2) spec.time_model = {parse_time_kind(parts[0]), parse_time_kind(parts[1])};
        else throw InvalidArgument("time_model expects one kind or <local>,<remote>");
    } else if (key == "evaluator") {
        if (value == "analytic") spec.evaluator = EvaluatorMode::Analytic;
        else if (value == "simulation") spec.evaluator = EvaluatorMode::Simulation;
        else if (value == "both") spec.evaluator = EvaluatorMode::Both;
        else throw InvalidArgument("evaluator must be analytic, simulation or both");
    } else if (key == "messages") {
        spec.messages = parse_count(value);
    } else if (key == "seed") {
        spec.seed = parse_count(value);
    } else if (key == "allow_unstable") {
        spec.allow_unstable = parse_bool(value);
    } else {
        throw InvalidArgument("unknown key '" + std::string(key) + "'");
    }
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view text) {
    SweepSpec spec;
    bool has_variable = false;
    bool has_range = false;
    int line_no = 0;
    for (std::size_t pos = 0; pos <= text.size();) {
        const auto end = std::min(text.find('\n', pos), text.size());
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        try {
            if (eq == std::string_view::npos) throw InvalidArgument("expected key = value");
            const auto key = trim(line.substr(0, eq));
            const auto value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) throw InvalidArgument("empty key or value");
            apply_key(spec, key, value);
            has_variable |= key == "variable";
            has_range |= key == "range";
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("spec line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    if (!has_variable) throw InvalidArgument("spec is missing 'variable'");
    if (!has_range) throw InvalidArgument("spec is missing 'range'");
    spec.validate();
    return spec;
}

SweepSpec load_sweep_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open spec file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_sweep_spec(buffer.str());
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace {

std::string rho_preset(const char* name, const char* kind, const char* mu_l) {
    return std::string("name = ") + name +
           "\n# base rates; partial rescales them by alpha\nvariable = rho_s\nrange = 0.05 0.95 19 lin\n"
           "mu_l = " + mu_l + "\nmu_s = 1\ntime_model = " + kind + "\nschemes = local,remote,partial\n";
}

std::string profile_preset(const char* name, const char* variable, const char* range, const char* fixed) {
    return std::string("name = ") + name + "\nvariable = " + variable + "\nrange = " + range + "\n" + fixed +
           "f_l = 1\nschemes = local,remote,partial\ntime_model = exponential\nallow_unstable = true\n";
}

std::map<std::string, std::string> build_presets() {
    std::map<std::string, std::string> p;
    p["exp-comparison-mul0.1"] = rho_preset("exp-comparison-mul0.1", "exponential", "0.1");
    p["exp-comparison-mul0.5"] = rho_preset("exp-comparison-mul0.5", "exponential", "0.5");
    p["det-comparison-mul0.1"] = rho_preset("det-comparison-mul0.1", "deterministic", "0.1");
    p["det-comparison-mul0.5"] = rho_preset("det-comparison-mul0.5", "deterministic", "0.5");
    p["message-size-c1000"] = profile_preset("message-size-c1000", "l", "0.1 3 30 lin", "c = 1000\nR = 0.5\nf_s = 9\n");
    p["message-size-c3500"] = profile_preset("message-size-c3500", "l", "0.1 3 30 lin", "c = 3500\nR = 0.5\nf_s = 9\n");
    for (const char* l : {"0.5", "1", "2"}) {
        const std::string n1 = std::string("cpu-cycles-l") + l;
        p[n1] = profile_preset(n1.c_str(), "c", "500 10000 39 lin", (std::string("l = ") + l + "\nR = 0.5\nf_s = 9\n").c_str());
        const std::string n2 = std::string("data-rate-l") + l;
        p[n2] = profile_preset(n2.c_str(), "R", "0.1 4 40 lin", (std::string("l = ") + l + "\nc = 2000\nf_s = 9\n").c_str());
    }
    p["mec-capacity-c1000"] = profile_preset("mec-capacity-c1000", "f_s", "1 20 39 lin", "l = 1\nc = 1000\nR = 0.5\n");
    p["mec-capacity-c3500"] = profile_preset("mec-capacity-c3500", "f_s", "1 20 39 lin", "l = 1\nc = 3500\nR = 0.5\n");
    return p;
}

}  // namespace

const std::map<std::string, std::string>& preset_specs() {
    static const auto presets = build_presets();
    return presets;
}

SweepSpec preset(const std::string& name) {
    const auto& all = preset_specs();
    const auto it = all.find(name);
    if (it == all.end()) throw InvalidArgument("unknown preset '" + name + "'");
    return parse_sweep_spec(it->second);
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

namespace {

EvaluationOptions simulation_options(const SweepSpec& spec) {
    return {Evaluator::Simulation, spec.messages, spec.seed};
}

void sweep_point(const SweepSpec& spec, double x, const OptimizeOptions& optimizer, std::vector<SweepRow>& rows) {
    const SchemeParams base = spec.base_at(x);
    const bool analytic = spec.evaluator != EvaluatorMode::Simulation;
    const bool simulated = spec.evaluator != EvaluatorMode::Analytic;
    for (const Scheme scheme : spec.schemes) {
        if (scheme == Scheme::Partial) {
            if (analytic) {
                const auto best = optimize_alpha(base, spec.time_model, optimizer);
                rows.push_back({x, scheme, best.alpha, best.aoi, best.stable});
                if (simulated) {
                    const auto sim = evaluate_partition(base, best.alpha, spec.time_model, simulation_options(spec));
                    rows.push_back({x, scheme, sim.alpha, sim.aoi, sim.stable});
                }
            } else {
                OptimizeOptions opts = optimizer;
                opts.evaluation = simulation_options(spec);
                const auto best = optimize_alpha(base, spec.time_model, opts);
                rows.push_back({x, scheme, best.alpha, best.aoi, best.stable});
            }
            continue;
        }
        const double alpha = scheme == Scheme::Local ? 0.0 : 1.0;
        if (analytic) {
            const auto point = evaluate_partition(base, alpha, spec.time_model);
            rows.push_back({x, scheme, std::nullopt, point.aoi, point.stable});
        }
        if (simulated) {
            const auto point = evaluate_partition(base, alpha, spec.time_model, simulation_options(spec));
            rows.push_back({x, scheme, std::nullopt, point.aoi, point.stable});
        }
    }
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepOptions& options) {
    spec.validate();
    const auto xs = spec.range.values();
    std::vector<std::vector<SweepRow>> per_point(xs.size());
    const unsigned threads = resolve_threads(options.threads);
    OptimizeOptions optimizer = options.optimizer;
    if (threads > 1) optimizer.threads = 1;
    parallel_for(xs.size(), threads, [&](std::size_t k) { sweep_point(spec, xs[k], optimizer, per_point[k]); });

    std::vector<SweepRow> rows;
    for (auto& block : per_point) {
        for (auto& row : block) {
            if (!row.stable && !spec.allow_unstable) {
                std::ostringstream os;
                os << to_string(row.scheme) << " is unstable at " << to_string(spec.variable) << " = " << row.var
                   << " (pass --allow-unstable-rows or set allow_unstable = true)";
                throw UnstableConfiguration(os.str());
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) {
        out << format_number(r.var) << ',' << to_string(r.scheme) << ',';
        if (r.alpha) out << format_number(*r.alpha);
        out << ',';
        if (r.aoi) out << format_number(r.aoi->mean);
        out << ',';
        if (r.aoi && r.aoi->ci_halfwidth) out << format_number(*r.aoi->ci_halfwidth);
        out << ',';
        if (r.aoi) out << to_string(r.aoi->method);
        out << ',' << (r.stable ? "true" : "false") << '\n';
    }
}

// ---------------------------------------------------------------------------
// Crossovers
// ---------------------------------------------------------------------------

double analytic_aoi_at(Scheme scheme, const SweepSpec& spec, double x, const OptimizeOptions& options) {
    const SchemeParams base = spec.base_at(x);
    OptimizeOptions opts = options;
    opts.evaluation.evaluator = Evaluator::Analytic;
    const auto point = scheme == Scheme::Partial
                           ? optimize_alpha(base, spec.time_model, opts)
                           : evaluate_partition(base, scheme == Scheme::Local ? 0.0 : 1.0, spec.time_model);
    return point.aoi ? point.aoi->mean : std::numeric_limits<double>::infinity();
}

std::vector<CrossoverResult> find_crossovers(Scheme a, Scheme b, const SweepSpec& spec, double rel_tol) {
    spec.validate();
    if (a == b) throw InvalidArgument("crossover needs two different schemes");
    if (!(rel_tol > 0.0)) throw InvalidArgument("crossover tolerance must be positive");
    auto diff = [&](double x) { return analytic_aoi_at(a, spec, x) - analytic_aoi_at(b, spec, x); };

    const auto xs = spec.range.values();
    std::vector<double> ds(xs.size());
    for (std::size_t k = 0; k < xs.size(); ++k) ds[k] = diff(xs[k]);

    std::vector<CrossoverResult> out;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (ds[k] == 0.0) {
            out.push_back({xs[k], xs[k], xs[k], 0.0, 0.0, 0.0});
            continue;
        }
        if (k + 1 == xs.size() || !std::isfinite(ds[k]) || !std::isfinite(ds[k + 1])) continue;
        if (ds[k + 1] == 0.0 || (ds[k] < 0.0) == (ds[k + 1] < 0.0)) continue;
        double lo = xs[k], hi = xs[k + 1], dlo = ds[k], dhi = ds[k + 1];
        while (hi - lo > rel_tol * std::abs(0.5 * (lo + hi))) {
            const double mid = 0.5 * (lo + hi);
            const double dm = diff(mid);
            if (!std::isfinite(dm)) throw NumericalError("crossover bracket contains an unstable point");
            if (dm == 0.0) {
                lo = hi = mid;
                dlo = dhi = 0.0;
                break;
            }
            if ((dm < 0.0) == (dlo < 0.0)) {
                lo = mid;
                dlo = dm;
            } else {
                hi = mid;
                dhi = dm;
            }
        }
        const double mid = 0.5 * (lo + hi);
        out.push_back({mid, lo, hi, (hi - lo) / std::abs(mid), dlo, dhi});
    }
    if (out.empty()) {
        std::ostringstream os;
        os << "no sign change of " << to_string(a) << " - " << to_string(b) << " AoI over " << to_string(spec.variable)
           << " in [" << spec.range.lo << ", " << spec.range.hi << "]";
        throw InvalidArgument(os.str());
    }
    return out;
}

CrossoverResult find_crossover(Scheme a, Scheme b, const SweepSpec& spec, double rel_tol) {
    auto all = find_crossovers(a, b, spec, rel_tol);
    if (all.size() > 1) {
        std::ostringstream os;
        os << all.size() << " crossovers on the range (";
        for (std::size_t i = 0; i < all.size(); ++i) os << (i ? ", " : "") << all[i].value;
        os << "); narrow the range";
        throw InvalidArgument(os.str());
    }
    return all.front();
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

bool ValidationReport::all_pass() const noexcept {
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.pass; });
}

std::vector<ValidationPoint> default_validation_grid(const TimeModel& time_model) {
    std::vector<ValidationPoint> grid;
    const double levels[] = {0.3, 1.0, 3.0};
    for (double mu_l : levels)
        for (double mu_t : levels)
            for (double mu_s : levels) {
                const SchemeParams p{mu_l, mu_t, mu_s};
                if (check_stability(Scheme::Partial, p).margin > kStabilityGuardBand)
                    grid.push_back({Scheme::Partial, p, time_model});
            }
    return grid;
}

ValidationReport validate(const std::vector<ValidationPoint>& grid, const ValidationOptions& options) {
    for (const auto& pt : grid) require_stable(pt.scheme, pt.params);
    ValidationReport report;
    report.records.resize(grid.size());
    parallel_for(grid.size(), options.threads, [&](std::size_t k) {
        const auto& pt = grid[k];
        SimConfig config;
        config.scheme = pt.scheme;
        config.params = pt.params;
        config.time_model = pt.time_model;
        config.n_messages = options.messages;
        config.seed = options.seed;
        const auto sim = simulate(config);
        auto& rec = report.records[k];
        rec.point = pt;
        rec.analytic = options.analytic(pt.scheme, pt.params, pt.time_model).mean;
        rec.simulated = sim.aoi.mean;
        rec.ci_halfwidth = *sim.aoi.ci_halfwidth;
        rec.pass = std::abs(rec.simulated - rec.analytic) <= rec.ci_halfwidth;
    });
    return report;
}

}  // namespace mecaoi
