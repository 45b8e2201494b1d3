// Average AoI for deterministic computing times. The remote queue is an
// M/D/1 (remote scheme) or a GI/D/1 whose waiting time coincides with an
// M/D/1 with a reduced service time (partial scheme), so everything here is
// built on the M/D/1 waiting-time law.
#pragma once

#include "mecaoi/core_model.hpp"
#include "mecaoi/quadrature.hpp"

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace mecaoi {

/// Stationary FCFS waiting time of an M/D/1 queue with Poisson(arrival_rate)
/// arrivals and constant service 1/service_rate: an atom of mass 1 - rho at
/// zero plus a density on (0, inf).
///
/// In units of the service time (x = w * service_rate) the CDF is the sum
///   F(x) = (1-rho) sum_{k=0}^{floor x} rho^k/k! (k-x)^k e^{rho (x-k)}.
/// That alternating sum loses all significance once x grows past ~10, so
/// beyond kFranxLimit the survival function is evaluated from its residue
/// expansion  1 - F(x) = sum_k (1-rho)/(rho - 1 - s_k) e^{s_k x}, where s_k
/// runs over the roots of s - rho + rho e^{-s} = 0 (real root -gamma plus
/// conjugate pairs). The continuous density follows from the level-crossing
/// identity F'(x) = rho (F(x) - F(x-1)).
class WaitDistribution {
public:
    /// Sum evaluated directly for x <= kFranxLimit (service-time units).
    static constexpr double kFranxLimit = 10.0;
    /// Mass neglected beyond truncation_point().
    static constexpr double kTailMass = 1e-12;
    /// Forced quadrature breakpoints at the first few multiples of the service time.
    static constexpr int kKinkBreakpoints = 16;

    WaitDistribution(double arrival_rate, double service_rate);

    double rho() const noexcept { return rho_; }
    double service_rate() const noexcept { return mu_; }
    double atom_at_zero() const noexcept { return 1.0 - rho_; }

    double cdf(double w) const;
    double survival(double w) const;
    /// Density of the continuous part (w > 0); zero for w <= 0.
    double density(double w) const;
    /// Pollaczek-Khinchine mean rho / (2 mu (1 - rho)).
    double mean() const noexcept;
    /// Smallest w (on a quarter-service-time grid) with survival(w) < kTailMass.
    double truncation_point() const noexcept { return w_max_; }

    /// Roots used by the tail expansion; index 0 is the real root.
    std::span<const std::complex<double>> tail_roots() const noexcept { return roots_; }

    /// E[g(W)] = (1-rho) g(0) + int_0^{W_max} density(w) g(w) dw.
    template <class G>
    double expect(G&& g, std::span<const double> extra_breakpoints = {},
                  const quad::Options& options = {}) const {
        return atom_at_zero() * g(0.0) +
               integrate_continuous([&](double w) { return g(w); }, 0.0, extra_breakpoints, options);
    }

    /// int_{from}^{W_max} density(w) g(w) dw (continuous part only).
    template <class G>
    double integrate_continuous(G&& g, double from, std::span<const double> extra_breakpoints = {},
                                const quad::Options& options = {}) const {
        from = std::max(from, 0.0);
        if (from >= w_max_) return 0.0;
        const auto cuts = breakpoints(from, extra_breakpoints);
        return quad::integrate([&](double w) { return density(w) * g(w); },
                               std::span<const double>(cuts), options)
            .value;
    }

    /// Sorted panel boundaries on [from, W_max]: multiples of the service
    /// time plus any caller-supplied kinks inside the range.
    std::vector<double> breakpoints(double from, std::span<const double> extra) const;

    // Service-time-scaled evaluators (x = w * service_rate).
    double cdf_scaled(double x) const;
    double survival_scaled(double x) const;
    double density_scaled(double x) const;

private:
    double franx_cdf(double x) const;
    double residue_survival(double x) const;

    double rho_;
    double mu_;
    std::vector<std::complex<double>> roots_;
    std::vector<std::complex<double>> coeffs_;
    double w_max_ = 0.0;
};

/// CDF of the M/D/1 waiting time; 0 for w < 0, clamped to [0, 1].
double md1_wait_cdf(double w, double mu_arr, double mu_srv);

AoiEstimate aoi_local_det(double mu_l);

/// E[(x - Y)^+] for Y ~ Exp(rate); zero for x <= 0.
double expected_positive_part_exp(double x, double rate);

/// E[W_i | Y_{i-1} = y] for the remote scheme with deterministic computing
/// (Poisson arrivals at rate mu_t, service 1/mu_s). The inner expectation
/// over the exponential inter-arrival time is exact; the outer expectation
/// over the mixed waiting-time law is the atom plus adaptive quadrature.
double cond_wait_remote_det(double y, double mu_t, double mu_s, const WaitDistribution& wait);

/// E[W_i | B_{i-1} = b] for the partial scheme with deterministic computing
/// when mu_s < mu_l (B = 1/mu_l + Exp(mu_t)).
double cond_wait_partial_det(double b, const SchemeParams& params, const WaitDistribution& wait);

/// Equivalent M/D/1 service rate mu_l mu_s / (mu_l - mu_s) of the partial
/// GI/D/1 queue (requires mu_s < mu_l).
double partial_det_equivalent_rate(double mu_l, double mu_s);

AoiEstimate aoi_remote_det(double mu_t, double mu_s);

/// Closed form when mu_s >= mu_l (no queueing), quadrature otherwise.
AoiEstimate aoi_partial_det(const SchemeParams& params);

namespace detail {
/// Quadrature branch of aoi_partial_det regardless of mu_s vs mu_l
/// (requires mu_s < mu_l).
double partial_det_quadrature(const SchemeParams& params);
/// Closed branch of aoi_partial_det regardless of mu_s vs mu_l.
double partial_det_closed(const SchemeParams& params);
}  // namespace detail

}  // namespace mecaoi
