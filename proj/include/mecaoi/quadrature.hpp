// Globally adaptive Gauss-Kronrod (G7/K15) quadrature over a piecewise
// smooth integrand. Callers pass the kinks as breakpoints so that no panel
// straddles a discontinuity in the integrand or its low derivatives.
#pragma once

#include "mecaoi/core_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

namespace mecaoi::quad {

struct Options {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    int max_panels = 2000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the nodes at odd Kronrod positions (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel kronrod15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = fc * kKronrodWeights[7];
    double gauss = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double sum = f(center - dx) + f(center + dx);
        kronrod += kKronrodWeights[j] * sum;
        if (j % 2 == 1) gauss += kGaussWeights[j / 2] * sum;
    }
    return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integrates f over [points.front(), points.back()], with the interior
/// entries of `points` used as forced panel boundaries. Throws
/// NumericalError if the tolerance is not met within `max_panels` panels.
template <class F>
Result integrate(F&& f, std::span<const double> points, const Options& options = {}) {
    std::vector<double> cuts(points.begin(), points.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Result result;
    if (cuts.size() < 2) return result;

    std::priority_queue<detail::Panel> heap;
    double total = 0.0;
    double total_error = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        auto panel = detail::kronrod15(f, cuts[i], cuts[i + 1]);
        total += panel.value;
        total_error += panel.error;
        heap.push(panel);
        result.evaluations += 15;
    }

    auto done = [&] {
        return total_error <= std::max(options.abs_tol, options.rel_tol * std::abs(total));
    };
    while (!done()) {
        if (static_cast<int>(heap.size()) >= options.max_panels) {
            std::ostringstream os;
            os << "adaptive quadrature did not converge: estimate " << total << ", error "
               << total_error << " after " << heap.size() << " panels";
            throw NumericalError(os.str());
        }
        const auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            throw NumericalError("adaptive quadrature: panel width underflow");
        }
        const auto left = detail::kronrod15(f, worst.a, mid);
        const auto right = detail::kronrod15(f, mid, worst.b);
        result.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum in interval order so the result does not depend on the
    // refinement history's floating-point drift.
    std::vector<detail::Panel> panels;
    panels.reserve(heap.size());
    while (!heap.empty()) {
        panels.push_back(heap.top());
        heap.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const detail::Panel& x, const detail::Panel& y) { return x.a < y.a; });
    result.value = 0.0;
    result.error = 0.0;
    for (const auto& p : panels) {
        result.value += p.value;
        result.error += p.error;
    }
    return result;
}

template <class F>
Result integrate(F&& f, double a, double b, const Options& options = {}) {
    const std::array<double, 2> pts{a, b};
    return integrate(std::forward<F>(f), std::span<const double>(pts), options);
}

}  // namespace mecaoi::quad
