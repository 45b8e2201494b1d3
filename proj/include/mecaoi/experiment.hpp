// Sweeps, crossovers and analytic-vs-simulation validation.
//
// Spec file format: UTF-8 text, one `key = value` per line, `#` starts a
// comment. Keys:
//   name          free text
//   variable      l | c | R | f_s | rho_s | mu_t
//   range         lo hi points [lin|log]
//   l c R f_l f_s task profile (used by l, c, R, f_s sweeps)
//   mu_l mu_t mu_s base rates (used by rho_s, mu_t sweeps; rho_s = mu_t/mu_s)
//   schemes       comma list of local, remote, partial
//   time_model    exponential | deterministic | <local>,<remote>
//   evaluator     analytic | simulation | both
//   messages      simulation length per point
//   seed          simulation seed
//   allow_unstable  true | false
#pragma once

#include "mecaoi/core_model.hpp"
#include "mecaoi/partition.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mecaoi {

enum class SweepVariable { L, C, R, FS, RhoS, MuT };

std::string_view to_string(SweepVariable v) noexcept;
SweepVariable parse_sweep_variable(std::string_view text);

struct SweepRange {
    double lo = 0.0;
    double hi = 1.0;
    int points = 2;
    bool log_spacing = false;

    /// Ascending points; the last one equals hi exactly. Linear points are
    /// rounded to 15 significant digits so decimal grids hit their nominal values.
    std::vector<double> values() const;
};

enum class EvaluatorMode { Analytic, Simulation, Both };

struct SweepSpec {
    std::string name;
    SweepVariable variable = SweepVariable::L;
    SweepRange range;
    TaskProfile profile;
    SchemeParams base{1.0, 1.0, 1.0};
    std::vector<Scheme> schemes{Scheme::Local, Scheme::Remote, Scheme::Partial};
    TimeModel time_model = TimeModel::exponential();
    EvaluatorMode evaluator = EvaluatorMode::Analytic;
    std::uint64_t messages = 1'000'000;
    std::uint64_t seed = 1;
    bool allow_unstable = false;

    void validate() const;
    /// Base rates (alpha-free) at one value of the swept variable.
    SchemeParams base_at(double x) const;
};

/// Parses the key = value format. Throws InvalidArgument with the line number
/// on malformed input or unknown keys.
SweepSpec parse_sweep_spec(std::string_view text);
SweepSpec load_sweep_spec(const std::string& path);

/// Built-in sweep specs by name.
const std::map<std::string, std::string>& preset_specs();
SweepSpec preset(const std::string& name);

struct SweepRow {
    double var = 0.0;
    Scheme scheme = Scheme::Local;
    std::optional<double> alpha;  ///< Partial rows only
    std::optional<AoiEstimate> aoi;
    bool stable = false;
};

struct SweepOptions {
    unsigned threads = 0;
    OptimizeOptions optimizer;
};

/// One row per (point, scheme, evaluator), ascending in the swept variable.
/// Partial rows report the optimized alpha. In `Both` mode the simulation row
/// reuses the analytically optimized alpha.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

inline constexpr const char* kCsvHeader = "var,scheme,alpha,aoi_mean,aoi_ci,method,stable";

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::string format_number(double value);

struct CrossoverResult {
    double value = 0.0;        ///< swept-variable value where the curves meet
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double tolerance = 0.0;    ///< relative bracket width at termination
    double diff_lo = 0.0;      ///< aoi_a - aoi_b at bracket_lo
    double diff_hi = 0.0;      ///< aoi_a - aoi_b at bracket_hi
};

/// Every sign change of aoi_a - aoi_b between consecutive stable points of the
/// spec grid, each refined by bisection to relative tolerance `rel_tol`.
/// Throws InvalidArgument when there is none.
std::vector<CrossoverResult> find_crossovers(Scheme a, Scheme b, const SweepSpec& spec,
                                             double rel_tol = 1e-4);

/// The single crossover on the range; throws InvalidArgument when there is
/// none or more than one.
CrossoverResult find_crossover(Scheme a, Scheme b, const SweepSpec& spec, double rel_tol = 1e-4);

/// AoI of a scheme at one value of the swept variable (Partial is optimized).
double analytic_aoi_at(Scheme scheme, const SweepSpec& spec, double x, const OptimizeOptions& options = {});

struct ValidationPoint {
    Scheme scheme = Scheme::Partial;
    SchemeParams params;
    TimeModel time_model = TimeModel::exponential();
};

using AnalyticFn = std::function<AoiEstimate(Scheme, const SchemeParams&, const TimeModel&)>;

struct ValidationOptions {
    std::uint64_t messages = 10'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    AnalyticFn analytic = aoi_analytic;  ///< replaceable for negative controls
};

struct ValidationRecord {
    ValidationPoint point;
    double analytic = 0.0;
    double simulated = 0.0;
    double ci_halfwidth = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationRecord> records;
    bool all_pass() const noexcept;
};

/// Stable points of {0.3, 1, 3}^3 for the partial scheme under `time_model`.
std::vector<ValidationPoint> default_validation_grid(const TimeModel& time_model = TimeModel::exponential());

/// Runs analytic and simulation evaluators at every point. A point passes when
/// |sim - analytic| is within the 99% batch-means half-width. Throws
/// UnstableConfiguration if any point is unstable.
ValidationReport validate(const std::vector<ValidationPoint>& grid, const ValidationOptions& options = {});

}  // namespace mecaoi
