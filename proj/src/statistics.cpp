#include "mecaoi/statistics.hpp"

#include "mecaoi/core_model.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

namespace mecaoi::stats {

double student_t_quantile(double level, int dof) {
    if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("confidence level must be in (0,1)");
    if (dof < 1) throw InvalidArgument("t quantile needs at least one degree of freedom");
    const boost::math::students_t dist(dof);
    return boost::math::quantile(dist, 0.5 * (1.0 + level));
}

Interval batch_means_interval(std::span<const double> batch_means, double level) {
    const auto n = batch_means.size();
    if (n < 2) throw InvalidArgument("batch means interval needs at least two batches");
    const double mean = std::accumulate(batch_means.begin(), batch_means.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : batch_means) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1));
    return {mean, student_t_quantile(level, static_cast<int>(n) - 1) * sd / std::sqrt(double(n))};
}

double kolmogorov_survival(double t) {
    if (t <= 0.0) return 1.0;
    if (t < 0.2) return 1.0;  // 1 - P(K <= t) differs from 1 by < 1e-20 here
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        sum += (k % 2 == 1 ? term : -term);
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf,
                 const std::function<double(double)>& cdf_left) {
    if (samples.empty()) throw InvalidArgument("ks_test: empty sample");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < samples.size()) {
        const double v = samples[i];
        std::size_t j = i;
        while (j < samples.size() && samples[j] == v) ++j;
        const double at = cdf(v);
        const double below = cdf_left ? cdf_left(v) : at;
        d = std::max({d, std::abs(j / n - at), std::abs(i / n - below)});
        i = j;
    }
    const double root_n = std::sqrt(n);
    return {d, kolmogorov_survival((root_n + 0.12 + 0.11 / root_n) * d), samples.size()};
}

std::vector<double> thin(std::span<const double> samples, std::size_t stride, std::size_t offset) {
    if (stride == 0) throw InvalidArgument("thin: stride must be positive");
    std::vector<double> out;
    for (std::size_t k = offset; k < samples.size(); k += stride) out.push_back(samples[k]);
    return out;
}

}  // namespace mecaoi::stats
