// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include "mecaoi/analytic_deterministic.hpp"
#include "mecaoi/analytic_exponential.hpp"
#include "mecaoi/des.hpp"
#include "mecaoi/experiment.hpp"
#include "mecaoi/partition.hpp"
#include "mecaoi/statistics.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace mecaoi;

namespace tol {
constexpr double kExactRuntimeSeconds = 1.0;
constexpr std::uint64_t kAgreementMessages = 10'000'000;
constexpr double kAgreementRelative = 0.02;
constexpr int kAgreementMinPoints = 20;
constexpr int kXiTriples = 1000;
constexpr double kXiResidual = 1e-9;
constexpr double kLimitRatio = 1e6;
constexpr double kLimitRelative = 1e-3;
constexpr int kCdfGridPoints = 10'000;
constexpr double kKsSignificance = 0.01;
constexpr std::uint64_t kKsMessages = 4'000'000;
constexpr std::size_t kKsStride = 2000;
constexpr double kClosedBranchValue = 3.75;
constexpr double kContinuityRelative = 1e-2;
constexpr double kContinuityOffset = 1e-3;
constexpr double kCrossC1000 = 0.47;
constexpr double kCrossC3500 = 1.64;
constexpr double kCrossLTolerance = 0.05;
constexpr double kCrossFs = 2.7;
constexpr double kCrossFsTolerance = 0.10;
constexpr double kCrossRuntimeSeconds = 10.0;
constexpr double kDominanceSlack = 1e-6;
constexpr double kLowRhoThreshold = 0.1;
constexpr double kLowRhoRelative = 1e-3;
constexpr int kTraces = 100;
constexpr std::size_t kTraceLength = 1000;
constexpr double kTraceRelative = 1e-9;
}  // namespace tol

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome closed_form_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    const bool exp_ok = aoi_local_exp(1.0).mean == 2.0;
    const bool det_ok = aoi_local_det(1.0).mean == 1.5;
    SimConfig c;
    c.scheme = Scheme::Local;
    c.params = {1.0, 1.0, 1.0};
    c.time_model = TimeModel::deterministic();
    c.n_messages = 1'000'000;
    const auto sim = simulate(c);
    const bool sim_ok = sim.aoi.mean == 1.5 && *sim.aoi.ci_halfwidth == 0.0;
    const double elapsed = seconds_since(t0);
    return {exp_ok && det_ok && sim_ok && elapsed < tol::kExactRuntimeSeconds,
            fmt("local_exp(1)=%.17g local_det(1)=%.17g DES=%.17g +- %.3g, %.2fs", aoi_local_exp(1.0).mean,
                aoi_local_det(1.0).mean, sim.aoi.mean, *sim.aoi.ci_halfwidth, elapsed)};
}

Outcome simulation_agreement() {
    const auto t0 = std::chrono::steady_clock::now();
    auto grid = default_validation_grid(TimeModel::exponential());
    for (auto [mu_t, mu_s] : {std::pair{0.5, 1.0}, {0.9, 1.0}, {0.3, 3.0}, {1.0, 3.0}})
        grid.push_back({Scheme::Remote, {1.0, mu_t, mu_s}, TimeModel::exponential()});
    ValidationOptions opts;
    opts.messages = tol::kAgreementMessages;
    const auto report = validate(grid, opts);
    int in_ci = 0;
    int in_rel = 0;
    double worst_rel = 0.0;
    std::string misses;
    for (const auto& r : report.records) {
        const double rel = std::abs(r.simulated - r.analytic) / r.analytic;
        worst_rel = std::max(worst_rel, rel);
        in_ci += r.pass;
        in_rel += rel < tol::kAgreementRelative;
        if (!r.pass)
            misses += fmt(" [%s %.3g,%.3g,%.3g: |d|=%.3g > ci %.3g]", std::string(to_string(r.point.scheme)).c_str(),
                          r.point.params.mu_l, r.point.params.mu_t, r.point.params.mu_s,
                          std::abs(r.simulated - r.analytic), r.ci_halfwidth);
    }
    const int n = static_cast<int>(report.records.size());
    return {n >= tol::kAgreementMinPoints && in_ci == n && in_rel == n,
            fmt("%d points, %d inside 99%% CI, %d under 2%%, worst rel %.2e, %.1fs", n, in_ci, in_rel, worst_rel,
                seconds_since(t0)) + misses};
}

double independent_one_minus_lst(long double s, long double mu_l, long double mu_t) {
    // 1 - mu_l mu_t / ((s + mu_l)(s + mu_t)), in extended precision.
    return static_cast<double>(1.0L - mu_l * mu_t / ((s + mu_l) * (s + mu_t)));
}

Outcome xi_fixed_point() {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> logu(-2.0, 2.0);
    int n = 0;
    double worst = 0.0;
    while (n < tol::kXiTriples) {
        const SchemeParams p{std::pow(10.0, logu(rng)), std::pow(10.0, logu(rng)), std::pow(10.0, logu(rng))};
        if (!(check_stability(Scheme::Partial, p).margin > kStabilityGuardBand)) continue;
        const double xi = solve_xi(p).xi;
        const double resid = std::abs(xi - p.mu_s * independent_one_minus_lst(xi, p.mu_l, p.mu_t)) / xi;
        worst = std::max(worst, resid);
        ++n;
    }
    return {worst < tol::kXiResidual, fmt("%d stable triples, max |xi - mu_s(1-b*(xi))|/xi = %.2e", n, worst)};
}

Outcome limit_consistency() {
    double worst_local = 0.0;
    double worst_remote = 0.0;
    for (double mu_l : {0.1, 0.5, 1.0, 3.0}) {
        const double r = tol::kLimitRatio * mu_l;
        worst_local = std::max(worst_local, std::abs(aoi_partial_exp({mu_l, r, r}).mean / aoi_local_exp(mu_l).mean - 1));
    }
    for (auto [mu_t, mu_s] : {std::pair{0.5, 1.0}, {0.9, 1.0}, {1.0, 3.0}, {0.2, 5.0}}) {
        const double big = tol::kLimitRatio * std::max(mu_t, mu_s);
        worst_remote = std::max(worst_remote,
                                std::abs(aoi_partial_exp({big, mu_t, mu_s}).mean / aoi_remote_exp(mu_t, mu_s).mean - 1));
    }
    return {worst_local < tol::kLimitRelative && worst_remote < tol::kLimitRelative,
            fmt("max rel gap to local %.2e, to remote %.2e", worst_local, worst_remote)};
}

stats::KsResult ks_wait_samples(const SimConfig& config, const WaitDistribution& law) {
    const auto samples = stats::thin(collect_wait_samples(config), tol::kKsStride);
    return stats::ks_test(samples, [&](double w) { return law.cdf(w); },
                          [&](double w) { return w <= 0.0 ? 0.0 : law.cdf(w); });
}

Outcome md1_cdf_properties() {
    bool atom_ok = true;
    bool monotone = true;
    for (int r = 1; r <= 9; ++r) {
        const double rho = 0.1 * r;
        const WaitDistribution law(rho, 1.0);
        atom_ok &= md1_wait_cdf(0.0, rho, 1.0) == 1.0 - rho;
        const double hi = 1.5 * law.truncation_point();
        double prev = law.cdf(0.0);
        for (int k = 1; k <= tol::kCdfGridPoints; ++k) {
            const double v = md1_wait_cdf(hi * k / tol::kCdfGridPoints, rho, 1.0);
            monotone &= v >= prev;
            prev = v;
        }
    }
    std::string ks_text;
    bool ks_ok = true;
    for (double rho : {0.3, 0.5, 0.8}) {
        SimConfig c;
        c.scheme = Scheme::Remote;
        c.params = {1.0, rho, 1.0};
        c.time_model = TimeModel::deterministic();
        c.n_messages = tol::kKsMessages;
        const auto ks = ks_wait_samples(c, WaitDistribution(rho, 1.0));
        ks_ok &= ks.p_value > tol::kKsSignificance;
        ks_text += fmt(" rho=%.1f p=%.3f (n=%zu)", rho, ks.p_value, ks.n);
    }
    return {atom_ok && monotone && ks_ok,
            fmt("F(0)=1-rho %s, monotone %s, KS:", atom_ok ? "yes" : "no", monotone ? "yes" : "no") + ks_text};
}

Outcome gid1_reduction() {
    std::string text;
    bool ok = true;
    for (auto [mu_l, mu_s] : {std::pair{2.0, 1.0}, {3.0, 1.0}}) {
        const double mu_t = 1.0;
        SimConfig c;
        c.scheme = Scheme::Partial;
        c.params = {mu_l, mu_t, mu_s};
        c.time_model = TimeModel::deterministic();
        c.n_messages = tol::kKsMessages;
        const WaitDistribution law(mu_t, partial_det_equivalent_rate(mu_l, mu_s));
        const auto ks = ks_wait_samples(c, law);
        ok &= ks.p_value > tol::kKsSignificance;
        text += fmt(" (mu_l=%g,mu_s=%g,mu_t=%g) rho=%.3f p=%.3f", mu_l, mu_s, mu_t, law.rho(), ks.p_value);
    }
    return {ok, "KS vs M/D/1 law:" + text};
}

Outcome closed_branch() {
    const double value = aoi_partial_det({1.0, 1.0, 2.0}).mean;
    SimConfig c;
    c.scheme = Scheme::Partial;
    c.params = {1.0, 1.0, 2.0};
    c.time_model = TimeModel::deterministic();
    c.n_messages = tol::kAgreementMessages;
    const auto sim = simulate(c);
    const bool sim_ok = std::abs(sim.aoi.mean - value) <= *sim.aoi.ci_halfwidth;
    double worst = 0.0;
    for (auto [mu_l, mu_t] : {std::pair{1.0, 1.0}, {2.0, 0.5}, {0.5, 3.0}, {4.0, 2.0}}) {
        const double above = aoi_partial_det({mu_l, mu_t, mu_l * (1 + tol::kContinuityOffset)}).mean;
        const double below = aoi_partial_det({mu_l, mu_t, mu_l * (1 - tol::kContinuityOffset)}).mean;
        worst = std::max(worst, std::abs(above - below) / above);
    }
    return {std::abs(value - tol::kClosedBranchValue) < 1e-12 && sim_ok && worst < tol::kContinuityRelative,
            fmt("analytic %.15g, DES %.5f +- %.5f, branch gap %.2e", value, sim.aoi.mean, *sim.aoi.ci_halfwidth, worst)};
}

Outcome crossover_values() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c1000 = find_crossovers(Scheme::Local, Scheme::Remote, preset("message-size-c1000"));
    const auto c3500 = find_crossovers(Scheme::Local, Scheme::Remote, preset("message-size-c3500"));
    const auto fs = find_crossovers(Scheme::Local, Scheme::Remote, preset("mec-capacity-c3500"));
    const double elapsed = seconds_since(t0);
    auto near = [](const std::vector<CrossoverResult>& xs, double target, double rel) {
        for (const auto& x : xs)
            if (std::abs(x.value / target - 1) <= rel) return true;
        return false;
    };
    auto list = [](const std::vector<CrossoverResult>& xs) {
        std::string s;
        for (const auto& x : xs) s += (s.empty() ? "" : "/") + fmt("%.4f", x.value);
        return s;
    };
    // c = 1000 and the f_s sweep have a single crossing. At c = 3500 Remote also
    // crosses Local right after it becomes stable (l ~ 0.21); the quoted 1.64 is
    // the second crossing.
    const bool ok = c1000.size() == 1 && near(c1000, tol::kCrossC1000, tol::kCrossLTolerance) &&
                    near(c3500, tol::kCrossC3500, tol::kCrossLTolerance) && fs.size() == 1 &&
                    near(fs, tol::kCrossFs, tol::kCrossFsTolerance) && elapsed < tol::kCrossRuntimeSeconds;
    return {ok, fmt("l*(c=1000)=%s, l*(c=3500)=%s, f_s*(c=3500)=%s GHz, %.2fs", list(c1000).c_str(),
                    list(c3500).c_str(), list(fs).c_str(), elapsed)};
}

Outcome dominance() {
    double worst_excess = -INFINITY;
    double worst_low = 0.0;
    int points = 0;
    for (const char* name : {"exp-comparison-mul0.1", "exp-comparison-mul0.5"}) {
        const auto spec = preset(name);
        for (double rho_s : spec.range.values()) {
            const SchemeParams base = spec.base_at(rho_s);
            const double partial = optimize_alpha(base, spec.time_model).aoi->mean;
            const double local = aoi_local_exp(base.mu_l).mean;
            const double remote = aoi_remote_exp(base.mu_t, base.mu_s).mean;
            worst_excess = std::max(worst_excess, partial - std::min(local, remote));
            if (rho_s < tol::kLowRhoThreshold) worst_low = std::max(worst_low, std::abs(partial / local - 1));
            ++points;
        }
    }
    // Reported only: with mu_l = 0.1 partial computing leaves local computing
    // just above rho_s = 0.05, so coincidence holds on the 0.05 grid point only.
    auto gap = [](double rho_s) {
        const double partial = optimize_alpha(SchemeParams{0.1, rho_s, 1.0}, TimeModel::exponential()).aoi->mean;
        return 1.0 - partial / aoi_local_exp(0.1).mean;
    };
    return {worst_excess <= tol::kDominanceSlack && worst_low < tol::kLowRhoRelative,
            fmt("%d grid points (rho_s = 0.05:0.05:0.95), max partial - min(local,remote) = %.2e, "
                "max rel gap to local at rho_s<0.1 = %.2e; mu_l=0.1 probes: partial below local by %.2f%% at "
                "rho_s=0.06, %.2f%% at rho_s=0.1",
                points, worst_excess, worst_low, 100 * gap(0.06), 100 * gap(0.1))};
}

Outcome dual_accumulator() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> logu(-1.0, 1.0);
    double worst = 0.0;
    int done = 0;
    while (done < tol::kTraces) {
        SimConfig c;
        c.scheme = static_cast<Scheme>(done % 3);
        c.params = {std::pow(10.0, logu(rng)), std::pow(10.0, logu(rng)), std::pow(10.0, logu(rng))};
        c.time_model = {static_cast<TimeKind>(rng() % 2), static_cast<TimeKind>(rng() % 2)};
        c.n_messages = tol::kTraceLength;
        c.seed = rng();
        if (!(check_stability(c.scheme, c.params).margin > kStabilityGuardBand)) continue;
        const auto trace = simulate_trace(c);
        const double a = accumulate_aoi(trace);
        const double b = accumulate_aoi_sawtooth(trace);
        worst = std::max(worst, std::abs(a - b) / b);
        ++done;
    }
    return {worst < tol::kTraceRelative, fmt("%d traces, max relative difference %.2e", done, worst)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"closed-form exactness", closed_form_exactness},
        {"analytic vs simulation agreement", simulation_agreement},
        {"xi fixed point", xi_fixed_point},
        {"limit consistency", limit_consistency},
        {"M/D/1 CDF properties and KS", md1_cdf_properties},
        {"GI/D/1 reduction KS", gid1_reduction},
        {"deterministic closed branch and continuity", closed_branch},
        {"crossover values", crossover_values},
        {"partial dominance", dominance},
        {"dual accumulator", dual_accumulator},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome out;
        try {
            out = criteria[i].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        failures += !out.pass;
        std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
