#include "mecaoi/partition.hpp"

#include "mecaoi/analytic_deterministic.hpp"
#include "mecaoi/analytic_exponential.hpp"
#include "mecaoi/des.hpp"
#include "mecaoi/parallel.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace mecaoi {

std::string_view to_string(Evaluator e) noexcept {
    return e == Evaluator::Analytic ? "analytic" : "simulation";
}

Evaluator parse_evaluator(std::string_view text) {
    if (text == "analytic") return Evaluator::Analytic;
    if (text == "simulation" || text == "sim") return Evaluator::Simulation;
    throw InvalidArgument("unknown evaluator '" + std::string(text) + "'");
}

AoiEstimate aoi_analytic(Scheme scheme, const SchemeParams& params, const TimeModel& tm) {
    switch (scheme) {
    case Scheme::Local:
        return tm.local == TimeKind::Exponential ? aoi_local_exp(params.mu_l) : aoi_local_det(params.mu_l);
    case Scheme::Remote:
        return tm.remote == TimeKind::Exponential ? aoi_remote_exp(params.mu_t, params.mu_s)
                                                  : aoi_remote_det(params.mu_t, params.mu_s);
    case Scheme::Partial:
        if (tm.local != tm.remote)
            throw InvalidArgument("no analytic form for partial computing with mixed time models");
        return tm.local == TimeKind::Exponential ? aoi_partial_exp(params) : aoi_partial_det(params);
    }
    throw InvalidArgument("unknown scheme");
}

AoiEstimate evaluate_aoi(Scheme scheme, const SchemeParams& params, const TimeModel& tm,
                         const EvaluationOptions& options) {
    if (options.evaluator == Evaluator::Analytic) return aoi_analytic(scheme, params, tm);
    SimConfig config;
    config.scheme = scheme;
    config.params = params;
    config.time_model = tm;
    config.n_messages = options.sim_messages;
    config.seed = options.seed;
    return simulate(config).aoi;
}

SchemeParams base_rates(const TaskProfile& profile) {
    profile.validate();
    return {1000.0 * profile.f_l / profile.c, profile.R / profile.l, 1000.0 * profile.f_s / profile.c};
}

Scheme scheme_for_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in [0, 1]");
    if (alpha == 0.0) return Scheme::Local;
    if (alpha == 1.0) return Scheme::Remote;
    return Scheme::Partial;
}

SchemeParams scale_rates(const SchemeParams& base, double alpha) {
    const Scheme scheme = scheme_for_alpha(alpha);
    base.validate();
    SchemeParams out = base;
    if (scheme != Scheme::Remote) out.mu_l = base.mu_l / (1.0 - alpha);
    if (scheme != Scheme::Local) {
        out.mu_t = base.mu_t / alpha;
        out.mu_s = base.mu_s / alpha;
    }
    return out;
}

SchemeParams rates_from_profile(const TaskProfile& profile, double alpha) {
    return scale_rates(base_rates(profile), alpha);
}

PartitionPoint evaluate_partition(const SchemeParams& base, double alpha, const TimeModel& tm,
                                  const EvaluationOptions& options) {
    PartitionPoint point;
    point.alpha = alpha;
    point.scheme = scheme_for_alpha(alpha);
    point.params = scale_rates(base, alpha);
    point.stable = check_stability(point.scheme, point.params).margin > kStabilityGuardBand;
    if (point.stable) point.aoi = evaluate_aoi(point.scheme, point.params, tm, options);
    return point;
}

namespace {

double value_of(const PartitionPoint& p) {
    return p.aoi ? p.aoi->mean : std::numeric_limits<double>::infinity();
}

}  // namespace

PartitionPoint optimize_alpha(const SchemeParams& base, const TimeModel& tm, const OptimizeOptions& options) {
    if (options.grid_points < 3) throw InvalidArgument("optimize_alpha needs at least three grid points");
    if (!(options.alpha_tolerance > 0.0)) throw InvalidArgument("alpha tolerance must be positive");
    base.validate();

    const auto n = static_cast<std::size_t>(options.grid_points);
    const double step = 1.0 / static_cast<double>(n - 1);
    std::vector<PartitionPoint> grid(n);
    parallel_for(n, options.threads, [&](std::size_t k) {
        const double alpha = k + 1 == n ? 1.0 : static_cast<double>(k) * step;
        grid[k] = evaluate_partition(base, alpha, tm, options.evaluation);
    });

    std::size_t best = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (value_of(grid[k]) < value_of(grid[best])) best = k;

    // Golden-section search on the open bracket around the best grid point.
    const double lo = grid[best == 0 ? 0 : best - 1].alpha;
    const double hi = grid[best + 1 == n ? n - 1 : best + 1].alpha;
    auto eval = [&](double a) { return evaluate_partition(base, a, tm, options.evaluation); };
    constexpr double kInvPhi = 0.6180339887498949;
    double a = lo;
    double b = hi;
    PartitionPoint c = eval(b - kInvPhi * (b - a));
    PartitionPoint d = eval(a + kInvPhi * (b - a));
    while (b - a > options.alpha_tolerance) {
        if (value_of(c) <= value_of(d)) {
            b = d.alpha;
            d = c;
            c = eval(b - kInvPhi * (b - a));
        } else {
            a = c.alpha;
            c = d;
            d = eval(a + kInvPhi * (b - a));
        }
    }
    const PartitionPoint& refined = value_of(c) <= value_of(d) ? c : d;
    return value_of(refined) < value_of(grid[best]) ? refined : grid[best];
}

PartitionPoint optimize_alpha(const TaskProfile& profile, const TimeModel& tm, const OptimizeOptions& options) {
    return optimize_alpha(base_rates(profile), tm, options);
}

double min_age_floor(double mu_t) {
    require_positive_rate(mu_t, "mu_t");
    return 2.0 / mu_t;
}

}  // namespace mecaoi
