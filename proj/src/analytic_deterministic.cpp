#include "mecaoi/analytic_deterministic.hpp"

#include <algorithm>
#include <boost/math/special_functions/lambert_w.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mecaoi {

namespace {

constexpr int kComplexRootPairs = 24;

// D(s) = s - rho + rho e^{-s}, written with expm1 so the real root near the
// origin (rho -> 1) keeps its relative accuracy.
std::complex<double> polish_root(std::complex<double> s, double rho) {
    for (int iter = 0; iter < 60; ++iter) {
        const auto e = std::exp(-s);
        const auto d = s - rho + rho * e;
        const auto dd = 1.0 - rho * e;
        const auto step = d / dd;
        s -= step;
        if (std::abs(step) <= 1e-15 * std::abs(s)) break;
    }
    return s;
}

double polish_real_root(double s, double rho) {
    for (int iter = 0; iter < 60; ++iter) {
        const double d = s + rho * std::expm1(-s);
        const double dd = 1.0 - rho * std::exp(-s);
        const double step = d / dd;
        s -= step;
        if (std::abs(step) <= 1e-16 * std::abs(s)) break;
    }
    return s;
}

// Grid helper: first u = mu*y with u e^{-u} below tail * e^{-1}.
double exp_weight_cutoff(double tail) {
    double u = 1.0;
    for (int i = 0; i < 100; ++i) u = 1.0 - std::log(tail) + std::log(u);
    return u;
}

constexpr quad::Options kInnerOptions{1e-8, 1e-10, 4000};
constexpr quad::Options kOuterOptions{1e-6, 1e-9, 4000};

}  // namespace

WaitDistribution::WaitDistribution(double arrival_rate, double service_rate) {
    require_positive_rate(arrival_rate, "arrival rate");
    require_positive_rate(service_rate, "service rate");
    rho_ = arrival_rate / service_rate;
    mu_ = service_rate;
    if (!(rho_ < 1.0)) {
        std::ostringstream os;
        os << "M/D/1 waiting time requires rho < 1 (got " << rho_ << ")";
        throw UnstableConfiguration(os.str());
    }

    // Roots of s - rho + rho e^{-s}: s = rho + W_k(-rho e^{-rho}). Branch -1
    // is the real root; branches k >= 1 and their conjugates are complex.
    const double z = -rho_ * std::exp(-rho_);
    const double real_root = polish_real_root(rho_ + boost::math::lambert_wm1(z), rho_);
    roots_.emplace_back(real_root, 0.0);
    const double log_abs_z = std::log(rho_) - rho_;
    for (int j = 1; j <= kComplexRootPairs; ++j) {
        const std::complex<double> l1(log_abs_z, (2.0 * j + 1.0) * std::numbers::pi);
        const auto l2 = std::log(l1);
        roots_.push_back(polish_root(rho_ + l1 - l2 + l2 / l1, rho_));
    }
    for (const auto& s : roots_) coeffs_.push_back((1.0 - rho_) / (rho_ - 1.0 - s));

    // Truncation: dominant exponential term first, then a quarter-step scan.
    const double gamma = -real_root;
    double x = 0.0;
    const double c0 = coeffs_.front().real();
    const double guess = std::log(c0 / kTailMass) / gamma;
    if (guess > kFranxLimit + 1.0) x = std::floor(4.0 * (guess - 1.0)) / 4.0;
    while (survival_scaled(x) >= kTailMass) x += 0.25;
    w_max_ = x / mu_;
}

double WaitDistribution::franx_cdf(double x) const {
    // (1-rho) e^{rho x} sum_k (rho e^{-rho})^k (k - x)^k / k!
    const long double r = rho_;
    const long double xl = x;
    const long double a = r * std::exp(-r);
    const int kmax = static_cast<int>(std::floor(x));
    long double sum = 1.0L;
    long double a_pow = 1.0L;
    long double fact = 1.0L;
    for (int k = 1; k <= kmax; ++k) {
        a_pow *= a;
        fact *= k;
        const long double base = static_cast<long double>(k) - xl;
        long double p = 1.0L;
        for (int j = 0; j < k; ++j) p *= base;
        sum += a_pow * p / fact;
    }
    return static_cast<double>((1.0L - r) * std::exp(r * xl) * sum);
}

double WaitDistribution::residue_survival(double x) const {
    double total = (coeffs_[0] * std::exp(roots_[0] * x)).real();
    for (std::size_t k = 1; k < roots_.size(); ++k) {
        const double envelope = std::abs(coeffs_[k]) * std::exp(roots_[k].real() * x);
        if (envelope < 1e-19) break;
        total += 2.0 * (coeffs_[k] * std::exp(roots_[k] * x)).real();
    }
    return total;
}

double WaitDistribution::cdf_scaled(double x) const {
    if (x < 0.0) return 0.0;
    if (x <= kFranxLimit) return std::clamp(franx_cdf(x), 0.0, 1.0);
    return std::clamp(1.0 - residue_survival(x), 0.0, 1.0);
}

double WaitDistribution::survival_scaled(double x) const {
    if (x < 0.0) return 1.0;
    if (x <= kFranxLimit) return std::clamp(1.0 - franx_cdf(x), 0.0, 1.0);
    return std::clamp(residue_survival(x), 0.0, 1.0);
}

double WaitDistribution::density_scaled(double x) const {
    if (x <= 0.0) return 0.0;
    if (x - 1.0 > kFranxLimit) return std::max(0.0, rho_ * (residue_survival(x - 1.0) - residue_survival(x)));
    return std::max(0.0, rho_ * (cdf_scaled(x) - cdf_scaled(x - 1.0)));
}

double WaitDistribution::cdf(double w) const { return cdf_scaled(w * mu_); }
double WaitDistribution::survival(double w) const { return survival_scaled(w * mu_); }
double WaitDistribution::density(double w) const { return mu_ * density_scaled(w * mu_); }

double WaitDistribution::mean() const noexcept { return rho_ / (2.0 * mu_ * (1.0 - rho_)); }

std::vector<double> WaitDistribution::breakpoints(double from, std::span<const double> extra) const {
    std::vector<double> cuts{from, w_max_};
    for (int j = 1; j <= kKinkBreakpoints; ++j) {
        const double w = j / mu_;
        if (w >= w_max_) break;
        if (w > from) cuts.push_back(w);
    }
    for (double w : extra)
        if (w > from && w < w_max_) cuts.push_back(w);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

double md1_wait_cdf(double w, double mu_arr, double mu_srv) {
    if (std::isnan(w)) throw InvalidArgument("md1_wait_cdf: w is NaN");
    if (w < 0.0) return 0.0;
    return WaitDistribution(mu_arr, mu_srv).cdf(w);
}

AoiEstimate aoi_local_det(double mu_l) {
    require_positive_rate(mu_l, "mu_l");
    return {3.0 / (2.0 * mu_l), Method::ClosedForm, std::nullopt};
}

double expected_positive_part_exp(double x, double rate) {
    if (!(x > 0.0)) return 0.0;
    const double u = rate * x;
    if (u < 1e-3) return x * u * (0.5 - u * (1.0 / 6.0 - u * (1.0 / 24.0 - u / 120.0)));
    return (u + std::expm1(-u)) / rate;
}

double cond_wait_remote_det(double y, double mu_t, double mu_s, const WaitDistribution& wait) {
    if (!(y >= 0.0)) throw InvalidArgument("cond_wait_remote_det: y must be non-negative");
    const double a = 1.0 / mu_s;
    const double split = y - a;
    // Region w < y - 1/mu_s: the previous message left before arrival, the
    // inner expectation is E[(1/mu_s - Y)^+].
    double value = 0.0;
    if (split > 0.0) value += expected_positive_part_exp(a, mu_t) * wait.cdf(split);
    else value += wait.atom_at_zero() * expected_positive_part_exp(2.0 * a - y, mu_t);
    value += wait.integrate_continuous(
        [&](double w) { return expected_positive_part_exp(w - y + 2.0 * a, mu_t); }, split, {},
        kInnerOptions);
    return value;
}

double partial_det_equivalent_rate(double mu_l, double mu_s) {
    if (!(mu_s < mu_l)) throw InvalidArgument("equivalent M/D/1 rate requires mu_s < mu_l");
    return mu_l * mu_s / (mu_l - mu_s);
}

double cond_wait_partial_det(double b, const SchemeParams& params, const WaitDistribution& wait) {
    const double a = 1.0 / params.mu_s;
    const double d = 1.0 / params.mu_l;
    if (!(b >= d)) throw InvalidArgument("cond_wait_partial_det: b must be at least 1/mu_l");
    // E[(x - B)^+] with B = 1/mu_l + Y; zero when x <= 1/mu_l, which also
    // covers the empty inner range of the second region.
    auto inner = [&](double x) { return expected_positive_part_exp(x - d, params.mu_t); };
    const double split = b - a;
    double value = 0.0;
    if (split > 0.0) value += inner(a) * wait.cdf(split);
    else value += wait.atom_at_zero() * inner(2.0 * a - b);
    value += wait.integrate_continuous([&](double w) { return inner(w - b + 2.0 * a); }, split, {},
                                       kInnerOptions);
    return value;
}

AoiEstimate aoi_remote_det(double mu_t, double mu_s) {
    require_stable(Scheme::Remote, {1.0, mu_t, mu_s});
    const WaitDistribution wait(mu_t, mu_s);
    const double a = 1.0 / mu_s;
    const double y_max = exp_weight_cutoff(1e-12) / mu_t;

    std::vector<double> cuts{0.0, y_max};
    for (int j = 0; j <= WaitDistribution::kKinkBreakpoints; ++j) {
        const double y = a + j / mu_s;
        if (y < y_max) cuts.push_back(y);
    }
    const auto outer = quad::integrate(
        [&](double y) {
            return y * cond_wait_remote_det(y, mu_t, mu_s, wait) * mu_t * std::exp(-mu_t * y);
        },
        std::span<const double>(cuts), kOuterOptions);
    const double mean = mu_t * (outer.value + 1.0 / (mu_t * mu_s) + 2.0 / (mu_t * mu_t));
    return {mean, Method::Quadrature, std::nullopt};
}

namespace detail {

double partial_det_closed(const SchemeParams& p) {
    const double mu_l = p.mu_l;
    const double mu_t = p.mu_t;
    const double mu_s = p.mu_s;
    return (3.0 + 1.5 * mu_t / mu_l + 2.0 * mu_l / mu_t + mu_t / mu_s + mu_l / mu_s) / (mu_l + mu_t);
}

double partial_det_quadrature(const SchemeParams& p) {
    const double mu_l = p.mu_l;
    const double mu_t = p.mu_t;
    const double mu_s = p.mu_s;
    const double mu = partial_det_equivalent_rate(mu_l, mu_s);
    const WaitDistribution wait(mu_t, mu);
    const double a = 1.0 / mu_s;
    const double d = 1.0 / mu_l;
    const double b_max = d + (exp_weight_cutoff(1e-12) + std::log1p(mu_t * d)) / mu_t;

    std::vector<double> cuts{d, b_max};
    for (int j = 0; j <= WaitDistribution::kKinkBreakpoints; ++j) {
        const double b = a + j / mu;
        if (b > d && b < b_max) cuts.push_back(b);
    }
    const auto outer = quad::integrate(
        [&](double b) {
            return b * cond_wait_partial_det(b, p, wait) * mu_t * std::exp(-mu_t * (b - d));
        },
        std::span<const double>(cuts), kOuterOptions);

    // E[S]E[B] + E[B_i B_{i-1}] + E[B^2]/2 for B = 1/mu_l + Exp(mu_t).
    const double moments = 1.0 / (mu_s * mu_l) + 1.0 / (mu_s * mu_t) + 3.0 / (mu_l * mu_t) +
                           1.5 / (mu_l * mu_l) + 2.0 / (mu_t * mu_t);
    return mu_l * mu_t / (mu_l + mu_t) * (outer.value + moments);
}

}  // namespace detail

AoiEstimate aoi_partial_det(const SchemeParams& params) {
    require_stable(Scheme::Partial, params);
    if (params.mu_s >= params.mu_l) return {detail::partial_det_closed(params), Method::ClosedForm, std::nullopt};
    return {detail::partial_det_quadrature(params), Method::Quadrature, std::nullopt};
}

}  // namespace mecaoi
