// Linear partition model and the offloading-fraction optimizer.
//
// A fraction alpha of the computation runs on the MEC server. With base rates
// mu_l0 = 1000 f_l / c, mu_t0 = R / l and mu_s0 = 1000 f_s / c (c in
// Megacycles, f in GHz, l in Mbits, R in Mbits/s) the scheme rates are
// mu_l0 / (1 - alpha), mu_t0 / alpha and mu_s0 / alpha.
#pragma once

#include "mecaoi/core_model.hpp"

#include <cstdint>
#include <optional>

namespace mecaoi {

enum class Evaluator { Analytic, Simulation };

std::string_view to_string(Evaluator e) noexcept;
Evaluator parse_evaluator(std::string_view text);

struct EvaluationOptions {
    Evaluator evaluator = Evaluator::Analytic;
    std::uint64_t sim_messages = 1'000'000;
    std::uint64_t seed = 1;
};

/// Mean AoI from the closed form or quadrature matching the time model.
/// Partial needs the same kind at both stages; mixed models throw InvalidArgument.
AoiEstimate aoi_analytic(Scheme scheme, const SchemeParams& params, const TimeModel& time_model);

/// Dispatches to aoi_analytic or to the simulator.
AoiEstimate evaluate_aoi(Scheme scheme, const SchemeParams& params, const TimeModel& time_model,
                         const EvaluationOptions& options = {});

/// Rates at alpha = 0 and alpha = 1 (mu_l0, mu_t0, mu_s0).
SchemeParams base_rates(const TaskProfile& profile);

/// alpha = 0 is Local, alpha = 1 is Remote, anything in between is Partial.
Scheme scheme_for_alpha(double alpha);

/// Scales base rates for a given alpha. Rates the resulting scheme does not
/// use keep their base values. Throws InvalidArgument for alpha outside [0,1].
SchemeParams scale_rates(const SchemeParams& base, double alpha);

SchemeParams rates_from_profile(const TaskProfile& profile, double alpha);

struct PartitionPoint {
    double alpha = 0.0;
    Scheme scheme = Scheme::Local;
    SchemeParams params;
    std::optional<AoiEstimate> aoi;  ///< present only when stable
    bool stable = false;
};

/// Evaluates one alpha. Points inside the stability guard band come back with
/// stable = false and no AoI.
PartitionPoint evaluate_partition(const SchemeParams& base, double alpha, const TimeModel& time_model,
                                  const EvaluationOptions& options = {});

struct OptimizeOptions {
    int grid_points = 512;
    double alpha_tolerance = 1e-4;
    EvaluationOptions evaluation;
    unsigned threads = 0;  ///< 0 picks the hardware concurrency
};

/// Grid search over [0, 1] followed by golden-section refinement inside the
/// bracket around the best grid point. The result never exceeds the best grid value.
PartitionPoint optimize_alpha(const SchemeParams& base, const TimeModel& time_model,
                              const OptimizeOptions& options = {});
PartitionPoint optimize_alpha(const TaskProfile& profile, const TimeModel& time_model,
                              const OptimizeOptions& options = {});

/// Age floor 2 / mu_t reached by remote computing as the server becomes infinitely fast.
double min_age_floor(double mu_t);

}  // namespace mecaoi
