#include "mecaoi/core_model.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace mecaoi {

namespace {

std::string lower(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        if (ch == '-' || ch == '_' || ch == ' ') continue;
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    return out;
}

}  // namespace

std::string_view to_string(Scheme s) noexcept {
    switch (s) {
    case Scheme::Local: return "local";
    case Scheme::Remote: return "remote";
    case Scheme::Partial: return "partial";
    }
    return "?";
}

std::string_view to_string(TimeKind k) noexcept {
    return k == TimeKind::Exponential ? "exponential" : "deterministic";
}

std::string_view to_string(Method m) noexcept {
    switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::Quadrature: return "quadrature";
    case Method::Simulation: return "simulation";
    }
    return "?";
}

Scheme parse_scheme(std::string_view text) {
    const auto t = lower(text);
    if (t == "local") return Scheme::Local;
    if (t == "remote") return Scheme::Remote;
    if (t == "partial") return Scheme::Partial;
    throw InvalidArgument("unknown scheme '" + std::string(text) + "'");
}

TimeKind parse_time_kind(std::string_view text) {
    const auto t = lower(text);
    if (t == "exponential" || t == "exp" || t == "m") return TimeKind::Exponential;
    if (t == "deterministic" || t == "det" || t == "d") return TimeKind::Deterministic;
    throw InvalidArgument("unknown time model '" + std::string(text) + "'");
}

void require_positive_rate(double rate, std::string_view name) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        std::ostringstream os;
        os << name << " must be positive and finite (got " << rate << ")";
        throw InvalidArgument(os.str());
    }
}

void SchemeParams::validate(Scheme scheme) const {
    if (scheme != Scheme::Remote) require_positive_rate(mu_l, "mu_l");
    if (scheme != Scheme::Local) {
        require_positive_rate(mu_t, "mu_t");
        require_positive_rate(mu_s, "mu_s");
    }
}

void SchemeParams::validate() const { validate(Scheme::Partial); }

void TaskProfile::validate() const {
    require_positive_rate(l, "l");
    require_positive_rate(c, "c");
    require_positive_rate(R, "R");
    require_positive_rate(f_l, "f_l");
    require_positive_rate(f_s, "f_s");
}

StabilityReport check_stability(Scheme scheme, const SchemeParams& params) {
    params.validate(scheme);
    StabilityReport report;
    switch (scheme) {
    case Scheme::Local:
        report.stable = true;
        report.margin = std::numeric_limits<double>::infinity();
        report.binding_condition = "local: no queue";
        break;
    case Scheme::Remote:
        report.margin = params.mu_s / params.mu_t - 1.0;
        report.stable = report.margin > 0.0;
        report.binding_condition = "remote: mu_s > mu_t";
        break;
    case Scheme::Partial: {
        const double mu_l = params.mu_l;
        const double mu_t = params.mu_t;
        report.margin = params.mu_s * (mu_l + mu_t) / (mu_l * mu_t) - 1.0;
        report.stable = report.margin > 0.0;
        report.binding_condition = "partial: mu_s > mu_l*mu_t/(mu_l+mu_t)";
        break;
    }
    }
    return report;
}

void require_stable(Scheme scheme, const SchemeParams& params, double guard_band) {
    const auto report = check_stability(scheme, params);
    if (!(report.margin > guard_band)) {
        std::ostringstream os;
        os << "unstable " << to_string(scheme) << " configuration (mu_l=" << params.mu_l
           << ", mu_t=" << params.mu_t << ", mu_s=" << params.mu_s << "): requires "
           << report.binding_condition << ", margin " << report.margin;
        throw UnstableConfiguration(os.str());
    }
}

}  // namespace mecaoi
