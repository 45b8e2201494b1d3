#include "mecaoi/analytic_exponential.hpp"

#include <cmath>
#include <sstream>

namespace mecaoi {

AoiEstimate aoi_local_exp(double mu_l) {
    require_positive_rate(mu_l, "mu_l");
    return {2.0 / mu_l, Method::ClosedForm, std::nullopt};
}

AoiEstimate aoi_remote_exp(double mu_t, double mu_s) {
    const SchemeParams p{1.0, mu_t, mu_s};
    require_stable(Scheme::Remote, p);
    const double queue_term = (2.0 * mu_t * mu_t * mu_t - mu_t * mu_t * mu_s + mu_t * mu_s * mu_s) /
                              (mu_s * (mu_s + mu_t) * (mu_s - mu_t));
    const double mean = (queue_term + 2.0 * mu_s / mu_t + 1.0) / mu_s;
    return {mean, Method::ClosedForm, std::nullopt};
}

// b*(s) = mu_l mu_t / ((s + mu_l)(s + mu_t)); the partial-fraction form
// mu_l mu_t/(mu_t - mu_l) [1/(s+mu_l) - 1/(s+mu_t)] is the same rational
// function and reduces to the Erlang-2 transform when mu_l == mu_t.
double laplace_stieltjes_B(double s, double mu_l, double mu_t) {
    if (!(s >= 0.0)) throw InvalidArgument("laplace_stieltjes_B: s must be non-negative");
    require_positive_rate(mu_l, "mu_l");
    require_positive_rate(mu_t, "mu_t");
    return (mu_l / (s + mu_l)) * (mu_t / (s + mu_t));
}

double one_minus_laplace_stieltjes_B(double s, double mu_l, double mu_t) {
    if (!(s >= 0.0)) throw InvalidArgument("one_minus_laplace_stieltjes_B: s must be non-negative");
    return s * (s + mu_l + mu_t) / ((s + mu_l) * (s + mu_t));
}

XiRoot solve_xi(const SchemeParams& params) {
    require_stable(Scheme::Partial, params);
    const double mu_l = params.mu_l;
    const double mu_t = params.mu_t;
    const double mu_s = params.mu_s;

    // Positive root of xi^2 + b xi + c = 0 with b = mu_l + mu_t - mu_s and
    // c = mu_l mu_t - mu_s (mu_l + mu_t) < 0; the discriminant is written in
    // the equivalent form (mu_s - mu_t + mu_l)^2 + 4 mu_t mu_s.
    const double d = mu_s - mu_t + mu_l;
    const double disc = std::sqrt(d * d + 4.0 * mu_t * mu_s);
    const double b = mu_l + mu_t - mu_s;
    const double c = mu_l * mu_t - mu_s * (mu_l + mu_t);
    const double xi = b > 0.0 ? -2.0 * c / (b + disc) : 0.5 * (disc - b);

    XiRoot root{xi, std::abs(xi - mu_s * one_minus_laplace_stieltjes_B(xi, mu_l, mu_t))};
    if (!(xi > 0.0) || !(root.residual < 1e-9 * xi)) {
        std::ostringstream os;
        os << "solve_xi: fixed-point residual " << root.residual << " for xi=" << xi;
        throw NumericalError(os.str());
    }
    return root;
}

PartialAux partial_aux(const SchemeParams& params) {
    params.validate();
    const double mu_l = params.mu_l;
    const double mu_t = params.mu_t;
    const double mu_s = params.mu_s;
    const double gap = mu_t - mu_l;
    if (std::abs(gap) < kDegeneracyThreshold * mu_l)
        throw InvalidArgument("partial_aux: mu_t too close to mu_l");
    return {mu_t * mu_s / (gap * (mu_l + mu_s)), mu_l * mu_s / (gap * (mu_t + mu_s))};
}

namespace detail {

double partial_exp_collected(const SchemeParams& params) {
    const double mu_l = params.mu_l;
    const double mu_t = params.mu_t;
    const double mu_s = params.mu_s;
    const auto [phi, varphi] = partial_aux(params);
    const double xi = solve_xi(params).xi;

    const double lt = mu_l * mu_t;
    const double bracket = 1.0 / (mu_l * mu_s) + 1.0 / (mu_t * mu_s) + 2.0 / (mu_l * mu_l) +
                           2.0 / (mu_t * mu_t) + 3.0 / lt +
                           lt / (mu_t - mu_l) *
                               (1.0 / ((xi + mu_l) * (xi + mu_l)) - 1.0 / ((xi + mu_t) * (xi + mu_t))) *
                               (1.0 / xi - phi / (mu_l + xi) + varphi / (mu_t + xi));
    return 1.0 / mu_s + (phi - 1.0) / mu_l - (1.0 + varphi) / mu_t + lt / (mu_l + mu_t) * bracket;
}

double partial_exp_assembled(const SchemeParams& params) {
    const double mu_l = params.mu_l;
    const double mu_t = params.mu_t;
    const double mu_s = params.mu_s;
    const auto [phi, varphi] = partial_aux(params);
    const double xi = solve_xi(params).xi;

    const double mean_b = 1.0 / mu_l + 1.0 / mu_t;
    const double mean_bb = mean_b * mean_b;
    const double mean_b2 = 2.0 / (mu_l * mu_l) + 2.0 / (mu_t * mu_t) + 2.0 / (mu_l * mu_t);

    // E[W_i B_{i-1}] = int b E[W|b] f_B(b) db, split into the constant and
    // the exp(-xi b) parts of the conditional wait.
    const double constant_part = 1.0 / mu_s + (phi - 1.0) / mu_l - (varphi + 1.0) / mu_t;
    const double decay_coeff = 1.0 / xi - phi / (mu_l + xi) + varphi / (mu_t + xi);
    const double weighted_b = mu_l * mu_t / (mu_t - mu_l) *
                              (1.0 / ((xi + mu_l) * (xi + mu_l)) - 1.0 / ((xi + mu_t) * (xi + mu_t)));
    const double mean_wb = mean_b * constant_part + weighted_b * decay_coeff;

    const double mean_tb = mean_wb + mean_b / mu_s;
    const double mean_q = mean_tb + mean_bb + 0.5 * mean_b2;
    return mean_q / mean_b;
}

double partial_exp_conditional_wait(const SchemeParams& params, double b) {
    const auto [phi, varphi] = partial_aux(params);
    const double xi = solve_xi(params).xi;
    const double mu_l = params.mu_l;
    const double mu_t = params.mu_t;
    return (phi - 1.0) / mu_l - (varphi + 1.0) / mu_t + 1.0 / params.mu_s +
           (1.0 / xi - phi / (mu_l + xi) + varphi / (mu_t + xi)) * std::exp(-xi * b);
}

}  // namespace detail

namespace {

double partial_exp_checked(const SchemeParams& params) {
    const double value = detail::partial_exp_collected(params);
#ifndef NDEBUG
    const double assembled = detail::partial_exp_assembled(params);
    if (!(std::abs(value - assembled) <= 1e-12 * std::abs(value))) {
        std::ostringstream os;
        os.precision(17);
        os << "aoi_partial_exp: collected form " << value << " disagrees with assembled form "
           << assembled;
        throw NumericalError(os.str());
    }
#endif
    return value;
}

}  // namespace

AoiEstimate aoi_partial_exp(const SchemeParams& params) {
    require_stable(Scheme::Partial, params);
    double mean = 0.0;
    if (std::abs(params.mu_t - params.mu_l) < kDegeneracyThreshold * params.mu_l) {
        SchemeParams above = params;
        SchemeParams below = params;
        above.mu_t = params.mu_l * (1.0 + kDegeneracyOffset);
        below.mu_t = params.mu_l * (1.0 - kDegeneracyOffset);
        mean = 0.5 * (partial_exp_checked(above) + partial_exp_checked(below));
    } else {
        mean = partial_exp_checked(params);
    }
    return {mean, Method::ClosedForm, std::nullopt};
}

}  // namespace mecaoi
