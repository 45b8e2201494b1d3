#include "mecaoi/des.hpp"

#include "mecaoi/counter_rng.hpp"
#include "mecaoi/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mecaoi {

void SimConfig::validate() const {
    params.validate(scheme);
    if (n_messages < 2) throw InvalidArgument("simulation needs at least two messages");
    if (!(n_messages > warmup())) throw InvalidArgument("n_messages must exceed warmup_messages");
    if (batch_count < 10) throw InvalidArgument("batch_count must be at least 10");
    if (n_messages - std::max<std::uint64_t>(warmup(), 1) < 2u * static_cast<std::uint64_t>(batch_count))
        throw InvalidArgument("too few post-warmup messages for the requested batch count");
    if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must be in (0,1)");
    require_stable(scheme, params);
}

namespace {

class TandemEngine {
public:
    explicit TandemEngine(const SimConfig& config) : config_(config), streams_(config.seed) {}

    MessageRecord next() {
        const auto i = index_++;
        const auto& p = config_.params;
        const bool has_local = config_.scheme != Scheme::Remote;
        const bool has_remote = config_.scheme != Scheme::Local;

        double local = 0.0;
        if (has_local) {
            local = config_.time_model.local == TimeKind::Deterministic
                        ? 1.0 / p.mu_l
                        : streams_.exponential(i, Stage::Local, p.mu_l);
        }
        double transmit = 0.0;
        double service = 0.0;
        if (has_remote) {
            transmit = streams_.exponential(i, Stage::Transmit, p.mu_t);
            service = config_.time_model.remote == TimeKind::Deterministic
                          ? 1.0 / p.mu_s
                          : streams_.exponential(i, Stage::Remote, p.mu_s);
        }

        MessageRecord rec;
        rec.B = local + transmit;
        rec.S = service;
        rec.W = i == 0 ? 0.0 : std::max(0.0, previous_T_ - rec.B);
        rec.T = rec.W + rec.S;
        rec.g = clock_;
        rec.d = rec.g + local;
        rec.t = rec.d + transmit;
        rec.t_prime = rec.t + rec.T;
        if (!std::isfinite(rec.t_prime)) {
            std::ostringstream os;
            os << "simulated clock overflow at message " << i;
            throw NumericalError(os.str());
        }
        // Zero-wait: the next message is generated when this one reaches the
        // remote queue (Local: when local computing completes, t = t').
        clock_ = rec.t;
        previous_T_ = rec.T;
        return rec;
    }

private:
    const SimConfig& config_;
    StageStreams streams_;
    std::uint64_t index_ = 0;
    double clock_ = 0.0;
    double previous_T_ = 0.0;
};

}  // namespace

SimResult simulate(const SimConfig& config) {
    config.validate();
    TandemEngine engine(config);

    const std::uint64_t start = std::max<std::uint64_t>(config.warmup(), 1);
    const std::uint64_t used = config.n_messages - start;
    const auto batches = static_cast<std::uint64_t>(config.batch_count);
    std::vector<double> batch_area(batches, 0.0);
    std::vector<double> batch_time(batches, 0.0);

    SimResult result;
    if (config.keep_wait_samples) result.wait_samples.reserve(used);
    double wait_sum = 0.0;

    MessageRecord prev = engine.next();
    for (std::uint64_t i = 1; i < config.n_messages; ++i) {
        const MessageRecord cur = engine.next();
        if (i >= start) {
            // Over [t'_{i-1}, t'_i] the age rises linearly from B_{i-1} + T_{i-1}.
            const double age0 = prev.B + prev.T;
            const double span = cur.B + cur.T - prev.T;
            const auto b = (i - start) * batches / used;
            batch_area[b] += age0 * span + 0.5 * span * span;
            batch_time[b] += span;
            wait_sum += cur.W;
            if (config.keep_wait_samples) result.wait_samples.push_back(cur.W);
        }
        prev = cur;
    }

    double area = 0.0;
    double time = 0.0;
    result.per_batch_means.resize(batches);
    for (std::uint64_t b = 0; b < batches; ++b) {
        area += batch_area[b];
        time += batch_time[b];
        result.per_batch_means[b] = batch_area[b] / batch_time[b];
    }
    const auto ci = stats::batch_means_interval(result.per_batch_means, config.confidence);
    result.aoi = {area / time, Method::Simulation, ci.halfwidth};
    result.mean_wait = wait_sum / static_cast<double>(used);
    result.messages_used = used;
    return result;
}

std::vector<MessageRecord> simulate_trace(const SimConfig& config) {
    config.validate();
    TandemEngine engine(config);
    std::vector<MessageRecord> records;
    records.reserve(config.n_messages);
    for (std::uint64_t i = 0; i < config.n_messages; ++i) records.push_back(engine.next());
    return records;
}

std::vector<double> collect_wait_samples(const SimConfig& config, SampleKind kind) {
    config.validate();
    TandemEngine engine(config);
    std::vector<double> samples;
    samples.reserve(config.n_messages - config.warmup());
    for (std::uint64_t i = 0; i < config.n_messages; ++i) {
        const auto rec = engine.next();
        if (i >= config.warmup()) samples.push_back(kind == SampleKind::Wait ? rec.W : rec.T);
    }
    return samples;
}

double trapezoid_area(const MessageRecord& previous, const MessageRecord& current) noexcept {
    return current.T * previous.B + current.B * previous.B + 0.5 * previous.B * previous.B;
}

double accumulate_aoi(std::span<const MessageRecord> records) {
    if (records.size() < 2) throw InvalidArgument("accumulate_aoi needs at least two records");
    double sum = 0.0;
    for (std::size_t i = 1; i < records.size(); ++i) sum += trapezoid_area(records[i - 1], records[i]);
    const auto& first = records.front();
    const auto& last = records.back();
    const double head = first.B + first.T;
    const double tail = last.B + last.T;
    double tau = 0.0;
    for (std::size_t i = 1; i < records.size(); ++i) tau += records[i].B + records[i].T - records[i - 1].T;
    return (sum - 0.5 * head * head + 0.5 * tail * tail) / tau;
}

double accumulate_aoi_sawtooth(std::span<const MessageRecord> records) {
    if (records.size() < 2) throw InvalidArgument("accumulate_aoi_sawtooth needs at least two records");
    double area = 0.0;
    for (std::size_t i = 1; i < records.size(); ++i) {
        // On [t'_{i-1}, t'_i) the freshest delivered update was generated at g_{i-1}.
        const double from = records[i - 1].t_prime - records[i - 1].g;
        const double to = records[i].t_prime - records[i - 1].g;
        area += 0.5 * (to * to - from * from);
    }
    return area / (records.back().t_prime - records.front().t_prime);
}

}  // namespace mecaoi
