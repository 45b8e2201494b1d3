// Shared domain types for the MEC age-of-information models.
//
// Three computing schemes are modelled as a two-stage tandem: a renewal
// first stage (local computing and/or transmission, driven by zero-wait
// generation) feeding an FCFS infinite-buffer remote computing queue.
// Rates are plain positive reals in consistent units (per second).
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mecaoi {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Parameter outside its domain (non-positive rate, alpha outside [0,1], ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested configuration is unstable or inside the stability guard band.
class UnstableConfiguration : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Numerical routine failed to reach its tolerance, or an internal
/// cross-check (fixed-point residual, dual evaluation) failed.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class Scheme { Local, Remote, Partial };

enum class TimeKind { Exponential, Deterministic };

enum class Method { ClosedForm, Quadrature, Simulation };

std::string_view to_string(Scheme s) noexcept;
std::string_view to_string(TimeKind k) noexcept;
std::string_view to_string(Method m) noexcept;

Scheme parse_scheme(std::string_view text);
TimeKind parse_time_kind(std::string_view text);

/// Rate triple (mu_l, mu_t, mu_s). Local ignores mu_t/mu_s, Remote ignores mu_l.
struct SchemeParams {
    double mu_l = 1.0;  ///< local computing rate
    double mu_t = 1.0;  ///< transmission rate
    double mu_s = 1.0;  ///< remote (MEC) computing rate

    /// Throws InvalidArgument unless every rate the scheme uses is positive and finite.
    void validate(Scheme scheme) const;
    void validate() const;

    friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

/// Per-stage service-time distributions. Transmission is always exponential.
struct TimeModel {
    TimeKind local = TimeKind::Exponential;
    TimeKind remote = TimeKind::Exponential;

    static constexpr TimeKind transmit = TimeKind::Exponential;

    static constexpr TimeModel exponential() { return {TimeKind::Exponential, TimeKind::Exponential}; }
    static constexpr TimeModel deterministic() { return {TimeKind::Deterministic, TimeKind::Deterministic}; }

    friend bool operator==(const TimeModel&, const TimeModel&) = default;
};

/// Physical task description feeding the linear partition model.
/// Units: l in Mbits, c in Megacycles, R in Mbits/s, f_l and f_s in GHz.
struct TaskProfile {
    double l = 1.0;
    double c = 1000.0;
    double R = 0.5;
    double f_l = 1.0;
    double f_s = 9.0;

    void validate() const;
};

/// A mean-age value together with how it was obtained.
struct AoiEstimate {
    double mean = 0.0;
    Method method = Method::ClosedForm;
    std::optional<double> ci_halfwidth;  ///< present for Method::Simulation only
};

struct StabilityReport {
    bool stable = false;
    double margin = 0.0;             ///< service-rate surplus ratio; +inf for Local
    std::string binding_condition;   ///< human-readable inequality that decides stability
};

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

/// Relative guard band: evaluators refuse parameters whose margin is at or
/// below this value, because the closed forms diverge at the boundary.
inline constexpr double kStabilityGuardBand = 1e-9;

/// Local is always stable. Remote needs mu_s > mu_t. Partial needs
/// mu_s > mu_l mu_t / (mu_l + mu_t).
StabilityReport check_stability(Scheme scheme, const SchemeParams& params);

/// Throws UnstableConfiguration when the margin is not above `guard_band`.
void require_stable(Scheme scheme, const SchemeParams& params,
                    double guard_band = kStabilityGuardBand);

/// Throws InvalidArgument unless `rate` is positive and finite.
void require_positive_rate(double rate, std::string_view name);

}  // namespace mecaoi
