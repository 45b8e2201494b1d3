// Discrete-event simulation of the zero-wait tandem.
//
// Zero-wait generation turns the first stage into a renewal process, so the
// engine is a direct recursion rather than a general event queue: message i
// is generated at g_i, finishes local computing at d_i, reaches the remote
// queue at t_i (= g_{i+1} for Remote/Partial) and completes at t_i'. The
// remote queue is FCFS with unlimited buffer, W_i = (W_{i-1} + S_{i-1} - B_i)^+.
#pragma once

#include "mecaoi/core_model.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace mecaoi {

struct SimConfig {
    Scheme scheme = Scheme::Partial;
    SchemeParams params;
    TimeModel time_model = TimeModel::exponential();
    std::uint64_t n_messages = 1'000'000;
    /// Defaults to 5% of n_messages.
    std::optional<std::uint64_t> warmup_messages;
    std::uint64_t seed = 1;
    int batch_count = 30;
    double confidence = 0.99;
    bool keep_wait_samples = false;

    std::uint64_t warmup() const noexcept { return warmup_messages.value_or(n_messages / 20); }
    /// Throws InvalidArgument / UnstableConfiguration.
    void validate() const;
};

struct MessageRecord {
    double g = 0.0;        ///< generation instant g_i
    double d = 0.0;        ///< local-compute completion d_i
    double t = 0.0;        ///< arrival at the remote queue t_i
    double t_prime = 0.0;  ///< final completion t_i'
    double B = 0.0;        ///< inter-generation interval B_i = D_i + Y_i
    double T = 0.0;        ///< remote system time T_i = W_i + S_i
    double W = 0.0;        ///< remote waiting time
    double S = 0.0;        ///< remote service time
};

struct SimResult {
    AoiEstimate aoi;
    double mean_wait = 0.0;
    std::vector<double> wait_samples;     ///< post-warmup W_i when requested
    std::vector<double> per_batch_means;  ///< time-average AoI per batch
    std::uint64_t messages_used = 0;
};

/// Streams n_messages messages and returns the time-average AoI over the
/// post-warmup window with a batch-means confidence interval. Identical
/// configurations give bit-identical results.
SimResult simulate(const SimConfig& config);

/// Full per-message trace (warmup included). Intended for small runs.
std::vector<MessageRecord> simulate_trace(const SimConfig& config);

enum class SampleKind { Wait, SystemTime };

/// Post-warmup samples of W_i (or T_i).
std::vector<double> collect_wait_samples(const SimConfig& config, SampleKind kind = SampleKind::Wait);

/// Q_i = T_i B_{i-1} + B_i B_{i-1} + B_{i-1}^2 / 2.
double trapezoid_area(const MessageRecord& previous, const MessageRecord& current) noexcept;

/// Time-average AoI over [t_1', t_n'] from the trapezoid decomposition:
/// (sum_{i>=2} Q_i - (t_1'-g_1)^2/2 + (t_n'-g_n)^2/2) / (t_n' - t_1').
/// Throws InvalidArgument for fewer than two records.
double accumulate_aoi(std::span<const MessageRecord> records);

/// Same window, integrating Delta(t) = t - u(t) piece by piece between
/// consecutive completions.
double accumulate_aoi_sawtooth(std::span<const MessageRecord> records);

}  // namespace mecaoi
