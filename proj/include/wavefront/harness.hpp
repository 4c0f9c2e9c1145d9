/**
 * Experiment orchestration: scenario configuration (JSON), seeded Monte
 * Carlo execution over parameter sweeps, metric aggregation with
 * confidence intervals, and CSV / text emission.
 *
 * A scenario describes one generative world plus a list of procedures to
 * compare. Within a trial index the truth and the observation frames are
 * shared across all procedures (common random numbers), so delay
 * comparisons are paired. Identical (config, seed) pairs produce
 * byte-identical CSV, independent of the worker count.
 */

#ifndef WAVEFRONT_HARNESS_HPP
#define WAVEFRONT_HARNESS_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "wavefront/simulate.hpp"

namespace wavefront {

struct SweepSpec {
    std::string param; // alpha | rho1 | snr | fs | M
    std::vector<double> values;
};

struct ScenarioConfig {
    std::string scenario = "custom";
    Domain domain = Domain::square(10.0); // physical units
    double unit_length = 1.0;             // physical distance per radius unit
    int sensor_count = 100;
    SensorPolicy policy = SensorPolicy::per_slot_resample;
    std::vector<Point> fixed_sensors; // physical units
    PriorParams prior;
    TrueOriginMode origin_mode = TrueOriginMode::uniform;
    int true_origin_M = 0; // grid mode: grid size (0 = largest detector grid)
    ObservationModel model;
    std::vector<RuleConfig> rules;
    long trials = 2000;
    std::uint64_t seed = 20260811;
    std::optional<SweepSpec> sweep;
    int clusters = 1;                 // K > 1 switches to parallel/FDR mode
    std::optional<long> deadline;     // N_max; required in parallel mode
    std::optional<double> fs;         // sampling rate (Hz)
    double beta = 10.0;               // exponential prior mean (seconds)
    double wave_speed = 3.0e8;        // propagation speed (distance/second)
    long slot_cap = 0;                // 0 = default safety cap
    std::optional<double> detector_gamma2; // detector-side f1 mismatch
    bool record_traces = false;

    void validate() const;
    static ScenarioConfig from_json_file(const std::string& path);
    static ScenarioConfig from_json_text(const std::string& text);
};

/// Geometric change parameter implied by sampling rate f_s and an
/// exponential event-time prior with mean beta seconds.
double fs_to_rho(double fs, double beta);

struct ResultRow {
    std::string scenario;
    std::string procedure;
    std::string sweep_param;            // empty when no sweep
    std::optional<double> sweep_value;
    long trials = 0;
    std::optional<double> pfa, pfa_ci_lo, pfa_ci_hi;
    std::optional<double> add, add_ci_lo, add_ci_hi;
    std::optional<double> fdr, fdr_ci_lo, fdr_ci_hi;
    double mean_stop = 0.0;
};

/// All per-trial records behind one (procedure, sweep value) cell, enough
/// to recompute the ResultRow by a pure fold.
struct ProcedureCell {
    std::string procedure;
    std::string sweep_param;
    std::optional<double> sweep_value;
    std::vector<TrialRecord> trials;              // single-cluster mode
    std::optional<ParallelAggregate> parallel;    // parallel mode
};

struct ScenarioResult {
    std::string scenario;
    std::vector<ResultRow> rows;
    std::vector<ProcedureCell> cells;
};

ScenarioResult run_scenario_detail(const ScenarioConfig& config, int workers = 1);
std::vector<ResultRow> run_scenario(const ScenarioConfig& config, int workers = 1);

/// Fold a cell's trial records into its ResultRow (also used to check that
/// aggregates are recomputable from a trial dump).
ResultRow aggregate_cell(const std::string& scenario, const ProcedureCell& cell);

/// Resolve a config and one sweep value into a runnable context (sweep
/// value ignored for the alpha axis, which is handled by threshold lists).
ScenarioContext make_context(const ScenarioConfig& config,
                             std::optional<double> sweep_value);

enum class EmitFormat { csv, table_text, plot_data };

void emit(const std::vector<ResultRow>& rows, EmitFormat format, std::ostream& out);
void emit_file(const std::vector<ResultRow>& rows, EmitFormat format,
               const std::string& path);
void emit_trials_csv(const ScenarioResult& result, std::ostream& out);

/// Canned desk-scale reproductions of the published experiments:
/// table1, table2, fig3, fig4. fig3 expands to three sweep panels.
std::vector<ScenarioConfig> builtin_scenarios(const std::string& name);

} // namespace wavefront

#endif // WAVEFRONT_HARNESS_HPP
