#include "wavefront/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "wavefront/stats.hpp"

namespace wavefront {

long default_slot_cap(const PriorParams& prior, int max_radius) {
    const double cap = 10.0 * max_radius / prior.rho1 + 50.0 / prior.rho;
    return static_cast<long>(std::ceil(cap));
}

void ScenarioContext::finalize() {
    prior.validate();
    model.validate();
    if (sensor_count < 0)
        throw std::invalid_argument("scenario: sensor count must be >= 0");
    if (origin_mode == TrueOriginMode::grid && origin_grid.points.empty())
        throw std::invalid_argument("scenario: grid origin mode needs a grid");
    if (max_radius == 0) {
        if (origin_mode == TrueOriginMode::grid) {
            max_radius = wavefront::max_radius(domain, origin_grid);
        } else {
            // A uniform origin can sit anywhere, so cover the full diameter.
            double diameter;
            if (domain.kind == Domain::Kind::rectangle) {
                const double w = domain.x_max - domain.x_min;
                const double h = domain.y_max - domain.y_min;
                diameter = std::sqrt(w * w + h * h);
            } else {
                diameter = 2.0 * domain.radius;
            }
            max_radius = static_cast<int>(std::ceil(diameter)) + 1;
        }
    }
    if (slot_cap == 0) slot_cap = default_slot_cap(prior, max_radius);
    if (deadline && *deadline < 1)
        throw std::invalid_argument("scenario: deadline must be >= 1");
}

Point sample_true_origin(const ScenarioContext& ctx, Rng& rng) {
    if (ctx.origin_mode == TrueOriginMode::grid) {
        const auto& pts = ctx.origin_grid.points;
        const std::size_t idx = static_cast<std::size_t>(rng.uniform() * pts.size());
        return pts[std::min(idx, pts.size() - 1)];
    }
    if (ctx.domain.kind == Domain::Kind::rectangle) {
        const double x = rng.uniform(ctx.domain.x_min, ctx.domain.x_max);
        const double y = rng.uniform(ctx.domain.y_min, ctx.domain.y_max);
        return {x, y};
    }
    const double r = ctx.domain.radius * std::sqrt(rng.uniform());
    const double a = 2.0 * 3.14159265358979323846 * rng.uniform();
    return {ctx.domain.center.x + r * std::cos(a), ctx.domain.center.y + r * std::sin(a)};
}

namespace {

Point domain_center(const Domain& domain) {
    if (domain.kind == Domain::Kind::rectangle)
        return {(domain.x_min + domain.x_max) / 2.0, (domain.y_min + domain.y_max) / 2.0};
    return domain.center;
}

} // namespace

Detector make_detector(const DetectorSpec& spec, const ScenarioContext& ctx,
                       Point true_origin) {
    const RuleConfig& rule = spec.rule;
    rule.validate();
    const ObservationModel& model =
        spec.detector_model ? *spec.detector_model : ctx.model;

    OriginSet origins;
    RadiusChain chain{ctx.max_radius, ctx.prior.rho1, 1};
    switch (rule.kind) {
    case RuleKind::rp:
    case RuleKind::t_star:
        origins = build_origin_grid(ctx.domain, rule.M_detector);
        break;
    case RuleKind::rp_mismatched:
        origins = build_origin_grid(ctx.domain, rule.M_detector);
        chain.increment = rule.mismatch_increment;
        break;
    case RuleKind::oracle:
        origins.points = {true_origin};
        break;
    case RuleKind::instant:
        // With a location-independent f_1 the likelihood does not depend on
        // the origin, so a single-point set is exactly the origin-free rule.
        if (model.family == ObservationModel::Family::flat_gaussian)
            origins.points = {domain_center(ctx.domain)};
        else
            origins = build_origin_grid(ctx.domain, rule.M_detector);
        chain.increment = ctx.max_radius;
        break;
    case RuleKind::instant_oracle:
        origins.points = {true_origin};
        chain.increment = ctx.max_radius;
        break;
    }

    std::vector<double> alphas = spec.thresholds;
    if (alphas.empty()) alphas.push_back(rule.alpha);
    std::vector<double> thresholds;
    thresholds.reserve(alphas.size());
    for (double a : alphas)
        thresholds.push_back(rule_threshold(rule.kind, a, origins.size()));

    Filter filter(std::move(origins), chain, ctx.prior, model, ctx.unit_length);
    return Detector(std::move(filter), rule_direction(rule.kind),
                    std::move(thresholds), spec.record_trace);
}

std::vector<std::vector<TrialRecord>>
run_trial(const ScenarioContext& ctx, const std::vector<DetectorSpec>& specs,
          std::uint64_t seed, long trial, int cluster) {
    const auto cl = static_cast<std::uint64_t>(cluster);
    const auto tr = static_cast<std::uint64_t>(trial);
    Rng truth_rng = substream(seed, cl, tr, Stream::truth);
    Rng growth_rng = substream(seed, cl, tr, Stream::growth);
    Rng sensor_rng = substream(seed, cl, tr, Stream::sensors);
    Rng reading_rng = substream(seed, cl, tr, Stream::readings);

    const std::optional<long> change_slot = sample_change_slot(ctx.prior, truth_rng);
    const Point origin = sample_true_origin(ctx, truth_rng);

    SensorStream sensors(ctx.domain, ctx.sensor_count, ctx.policy, sensor_rng,
                         ctx.fixed_sensors);

    std::vector<Detector> detectors;
    std::vector<long> horizons; // first slot at which a detector stops being fed
    detectors.reserve(specs.size());
    for (const DetectorSpec& spec : specs) {
        detectors.push_back(make_detector(spec, ctx, origin));
        long horizon = ctx.slot_cap + 1;
        if (spec.rule.deadline) horizon = std::min(horizon, *spec.rule.deadline);
        if (ctx.deadline) horizon = std::min(horizon, *ctx.deadline);
        horizons.push_back(horizon);
    }

    for (Detector& d : detectors) d.start();

    int radius = (change_slot && *change_slot == 0) ? 1 : 0;
    long slot = 0;
    auto active = [&](std::size_t i, long n) {
        return !detectors[i].done() && n < horizons[i];
    };
    while (true) {
        const long next = slot + 1;
        bool any = false;
        for (std::size_t i = 0; i < detectors.size() && !any; ++i)
            any = active(i, next);
        if (!any) break;
        slot = next;
        radius = advance_radius(radius, slot, change_slot, ctx.prior.rho1,
                                ctx.max_radius, growth_rng);
        const SensorSnapshot snap = sensors.at_slot(slot);
        const ObservationFrame frame =
            sample_frame(origin, radius, snap, ctx.model, ctx.unit_length, reading_rng);
        for (std::size_t i = 0; i < detectors.size(); ++i)
            if (active(i, slot)) detectors[i].step(frame);
    }

    std::vector<std::vector<TrialRecord>> records(specs.size());
    for (std::size_t i = 0; i < specs.size(); ++i) {
        const auto& stops = detectors[i].stop_slots();
        records[i].resize(stops.size());
        const long boundary = horizons[i] <= ctx.slot_cap ? horizons[i] : ctx.slot_cap;
        for (std::size_t j = 0; j < stops.size(); ++j) {
            TrialRecord& rec = records[i][j];
            rec.cluster = cluster;
            rec.change_slot = change_slot;
            rec.true_origin = origin;
            rec.stop_slot = stops[j];
            rec.slots_run = stops[j] ? *stops[j] : boundary;
            if (stops[j]) {
                rec.false_alarm = !change_slot || *stops[j] < *change_slot;
                if (change_slot)
                    rec.delay = std::max(0.0, static_cast<double>(*stops[j] - *change_slot));
            } else {
                rec.capped = horizons[i] > ctx.slot_cap; // ran out of cap, not deadline
                if (change_slot)
                    rec.delay = std::max(0.0, static_cast<double>(boundary - *change_slot));
            }
            if (specs[i].record_trace) rec.stat_trace = detectors[i].trace();
        }
    }
    return records;
}

ParallelRunRecord run_parallel_once(const ScenarioContext& ctx,
                                    const DetectorSpec& spec, int K, long n_max,
                                    std::uint64_t seed, long run_index) {
    if (K < 1) throw std::invalid_argument("run_parallel: K must be >= 1");
    if (n_max < 1) throw std::invalid_argument("run_parallel: deadline must be >= 1");

    ScenarioContext cluster_ctx = ctx;
    cluster_ctx.deadline = n_max;

    DetectorSpec detector = spec;
    if (detector.thresholds.empty()) detector.thresholds = {spec.rule.alpha};
    const std::size_t n_thresh = detector.thresholds.size();

    ParallelRunRecord rec;
    rec.discoveries.assign(n_thresh, 0);
    rec.false_discoveries.assign(n_thresh, 0);
    rec.fdp.assign(n_thresh, 0.0);
    rec.add.assign(n_thresh, 0.0);
    rec.false_alarms.assign(n_thresh, 0);
    rec.clusters.reserve(K);
    for (int k = 0; k < K; ++k) {
        // cluster streams are disjoint: cluster id folds (run, k) together
        const int cluster_id = static_cast<int>(run_index) * K + k;
        auto trial_records = run_trial(cluster_ctx, {detector}, seed, 0, cluster_id);
        std::vector<TrialRecord> per_threshold = std::move(trial_records[0]);
        bool finite = false;
        for (std::size_t j = 0; j < n_thresh; ++j) {
            TrialRecord& r = per_threshold[j];
            r.cluster = k;
            if (r.stop_slot) {
                ++rec.discoveries[j];
                if (r.false_alarm) {
                    ++rec.false_discoveries[j];
                    ++rec.false_alarms[j];
                }
            }
            if (r.change_slot) {
                finite = true;
                rec.add[j] += r.delay;
            }
        }
        if (finite) ++rec.finite_changes;
        rec.clusters.push_back(std::move(per_threshold));
    }
    for (std::size_t j = 0; j < n_thresh; ++j) {
        rec.fdp[j] = rec.false_discoveries[j] /
                     static_cast<double>(std::max(rec.discoveries[j], 1));
        rec.add[j] = rec.finite_changes > 0 ? rec.add[j] / rec.finite_changes : 0.0;
    }
    return rec;
}

void parallel_for(long count, int workers, const std::function<void(long)>& fn) {
    workers = std::max(1, workers);
    if (workers == 1 || count <= 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&]() {
        while (true) {
            const long i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<ParallelAggregate> run_parallel(const ScenarioContext& ctx,
                                            const DetectorSpec& spec, int K,
                                            long n_max, long runs,
                                            std::uint64_t seed, int workers) {
    std::vector<ParallelRunRecord> records(runs);
    parallel_for(runs, workers, [&](long i) {
        records[i] = run_parallel_once(ctx, spec, K, n_max, seed, i);
    });

    const std::size_t n_thresh =
        spec.thresholds.empty() ? 1 : spec.thresholds.size();
    std::vector<ParallelAggregate> result(n_thresh);
    for (std::size_t j = 0; j < n_thresh; ++j) {
        ParallelAggregate& agg = result[j];
        agg.runs = runs;
        agg.clusters = runs * K;
        agg.run_fdp.resize(runs);
        agg.run_add.resize(runs);
        double disc = 0.0, stop_sum = 0.0;
        long alarms = 0;
        for (long i = 0; i < runs; ++i) {
            agg.run_fdp[i] = records[i].fdp[j];
            agg.run_add[i] = records[i].add[j];
            disc += records[i].discoveries[j];
            alarms += records[i].false_alarms[j];
            for (const auto& cluster : records[i].clusters)
                stop_sum += cluster[j].slots_run;
        }
        agg.fdr = mean_of(agg.run_fdp);
        agg.add = mean_of(agg.run_add);
        agg.mean_discoveries = disc / static_cast<double>(runs);
        agg.false_alarm_clusters = alarms;
        agg.mean_stop = stop_sum / static_cast<double>(agg.clusters);
        const Interval fdr_ci = t_interval(agg.run_fdp);
        const Interval add_ci = t_interval(agg.run_add);
        agg.fdr_ci_lo = fdr_ci.lo;
        agg.fdr_ci_hi = fdr_ci.hi;
        agg.add_ci_lo = add_ci.lo;
        agg.add_ci_hi = add_ci.hi;
    }
    return result;
}

} // namespace wavefront
