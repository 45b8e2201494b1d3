// Closed-form average AoI for exponentially distributed computing times,
// plus the GI/M/1 machinery used by the partial-computing scheme.
#pragma once

#include "mecaoi/core_model.hpp"

namespace mecaoi {

/// Decay rate of the stationary GI/M/1 system-time density xi*exp(-xi*t).
struct XiRoot {
    double xi = 0.0;
    double residual = 0.0;  ///< |xi - mu_s (1 - b*(xi))|
};

/// Coefficients phi and varphi appearing in the partial-computing closed form.
struct PartialAux {
    double phi = 0.0;
    double varphi = 0.0;
};

/// Relative gap |mu_t - mu_l| / mu_l below which the partial closed form is
/// evaluated by symmetric perturbation instead of directly.
inline constexpr double kDegeneracyThreshold = 1e-6;
/// Relative offset used for the symmetric perturbation.
inline constexpr double kDegeneracyOffset = 1e-5;

AoiEstimate aoi_local_exp(double mu_l);

AoiEstimate aoi_remote_exp(double mu_t, double mu_s);

/// Laplace-Stieltjes transform of the inter-arrival time B = D + Y with
/// D ~ Exp(mu_l), Y ~ Exp(mu_t). Covers the Erlang-2 case mu_l == mu_t.
double laplace_stieltjes_B(double s, double mu_l, double mu_t);

/// 1 - b*(s), computed without cancellation for small s.
double one_minus_laplace_stieltjes_B(double s, double mu_l, double mu_t);

/// Root of xi = mu_s (1 - b*(xi)), from the explicit quadratic solution.
/// Throws NumericalError if the fixed-point residual exceeds 1e-9 * xi.
XiRoot solve_xi(const SchemeParams& params);

/// Throws InvalidArgument when |mu_t - mu_l| is below the degeneracy threshold.
PartialAux partial_aux(const SchemeParams& params);

/// Average AoI of partial computing. Near mu_l == mu_t the value is the mean
/// of evaluations at mu_t = mu_l (1 +- kDegeneracyOffset).
AoiEstimate aoi_partial_exp(const SchemeParams& params);

namespace detail {

/// Collected closed form, evaluated as written (requires non-degenerate rates).
double partial_exp_collected(const SchemeParams& params);

/// Same quantity assembled from its pieces: the AoI is
/// E[Q]/E[B] with E[Q] = E[W B] + E[S] E[B] + E[B]^2 + E[B^2]/2.
double partial_exp_assembled(const SchemeParams& params);

/// E[W_i | B_{i-1} = b] for the exponential partial scheme.
double partial_exp_conditional_wait(const SchemeParams& params, double b);

}  // namespace detail

}  // namespace mecaoi
