/**
 * Trial-level Monte Carlo machinery: one generative truth per (trial,
 * cluster) driving any number of detectors over shared observation frames,
 * so delay comparisons between procedures are paired.
 *
 * Randomness is drawn from counter-derived substreams keyed on
 * (seed, cluster, trial, purpose); results do not depend on which worker
 * thread executes a trial.
 */

#ifndef WAVEFRONT_SIMULATE_HPP
#define WAVEFRONT_SIMULATE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "wavefront/stopping.hpp"

namespace wavefront {

enum class TrueOriginMode { uniform, grid };

/// Fully resolved single-cluster scenario (one sweep point).
struct ScenarioContext {
    Domain domain;              // coordinates already in radius units
    double unit_length = 1.0;   // physical distance per radius unit
    int sensor_count = 100;
    SensorPolicy policy = SensorPolicy::per_slot_resample;
    std::vector<Point> fixed_sensors;
    PriorParams prior;
    ObservationModel model;     // generative observation model
    int max_radius = 0;         // 0 = derive from the domain
    TrueOriginMode origin_mode = TrueOriginMode::uniform;
    OriginSet origin_grid;      // sampled from when origin_mode == grid
    long slot_cap = 0;          // 0 = default 10*Rmax/rho1 + 50/rho
    std::optional<long> deadline;

    /// Resolve max_radius / slot_cap defaults; call once after filling in.
    void finalize();
};

long default_slot_cap(const PriorParams& prior, int max_radius);

/// One procedure to run: rule plus the thresholds to track in a single
/// filter pass (an alpha sweep), and the observation model the detector
/// believes in (defaults to the truth; differs in robustness studies).
struct DetectorSpec {
    RuleConfig rule;
    std::vector<double> thresholds;
    std::optional<ObservationModel> detector_model;
    bool record_trace = false;
};

Detector make_detector(const DetectorSpec& spec, const ScenarioContext& ctx,
                       Point true_origin);

Point sample_true_origin(const ScenarioContext& ctx, Rng& rng);

/// Simulate one trial and drive every detector over the same frames.
/// Returns one TrialRecord per (detector, threshold index).
std::vector<std::vector<TrialRecord>>
run_trial(const ScenarioContext& ctx, const std::vector<DetectorSpec>& specs,
          std::uint64_t seed, long trial, int cluster = 0);

/// One Monte Carlo run of K independent clusters under a deadline. Arrays
/// are indexed by the detector's threshold list (alpha sweep in one pass).
struct ParallelRunRecord {
    std::vector<int> discoveries;       // R: stops before the deadline
    std::vector<int> false_discoveries; // V: stops before both deadline and change
    std::vector<double> fdp;            // V / max(R, 1)
    std::vector<double> add;            // mean censored delay over finite changes
    std::vector<long> false_alarms;     // per-cluster false-alarm count
    int finite_changes = 0;             // K_f
    std::vector<std::vector<TrialRecord>> clusters; // [cluster][threshold]
};

ParallelRunRecord run_parallel_once(const ScenarioContext& ctx,
                                    const DetectorSpec& spec, int K, long n_max,
                                    std::uint64_t seed, long run_index);

struct ParallelAggregate {
    long runs = 0;
    long clusters = 0; // runs * K
    double fdr = 0.0, fdr_ci_lo = 0.0, fdr_ci_hi = 0.0;
    double add = 0.0, add_ci_lo = 0.0, add_ci_hi = 0.0;
    double mean_discoveries = 0.0;
    long false_alarm_clusters = 0; // across all runs
    double mean_stop = 0.0;        // mean final slot over all clusters
    std::vector<double> run_fdp, run_add;
};

/// K parallel clusters x `runs` Monte Carlo repetitions; FDR and overall
/// ADD with confidence intervals, one aggregate per threshold.
std::vector<ParallelAggregate> run_parallel(const ScenarioContext& ctx,
                                            const DetectorSpec& spec, int K,
                                            long n_max, long runs,
                                            std::uint64_t seed, int workers = 1);

/// Index-sharded parallel loop; fn(i) must only touch slot i of any shared
/// output. Results are independent of the worker count.
void parallel_for(long count, int workers, const std::function<void(long)>& fn);

} // namespace wavefront

#endif // WAVEFRONT_SIMULATE_HPP
