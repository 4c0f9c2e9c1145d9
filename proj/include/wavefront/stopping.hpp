/**
 * Detection procedures built on the posterior filter.
 *
 * All rules are first-crossing tests evaluated at n = 0 on the prior and
 * after every update:
 *   - rp / oracle / instant / rp-mismatched stop when pi_{n,0} <= alpha;
 *     they differ only in the origin set and the radius chain handed to
 *     the filter.
 *   - t-star stops when max_m W_n^{(m)} >= 1 - alpha/M.
 *
 * A Detector tracks first crossings for a whole list of thresholds in one
 * filter pass, so an alpha sweep costs one trial simulation.
 */

#ifndef WAVEFRONT_STOPPING_HPP
#define WAVEFRONT_STOPPING_HPP

#include <optional>
#include <string>
#include <vector>

#include "wavefront/posterior.hpp"

namespace wavefront {

enum class RuleKind { rp, oracle, instant, instant_oracle, rp_mismatched, t_star };

RuleKind rule_kind_from_string(const std::string& s);
std::string to_string(RuleKind kind);

struct RuleConfig {
    RuleKind kind = RuleKind::rp;
    std::string name;              // row label; defaults to the kind
    double alpha = 0.01;           // threshold in (0,1)
    int M_detector = 50;           // origin-grid size for grid-based rules
    int mismatch_increment = 5;    // radius units per assumed growth step
    std::optional<long> deadline;  // N_max; stop monitoring at this slot

    void validate() const;
};

/// RP decision on a belief: stop iff pi_{n,0} <= alpha.
bool rp_decide(const BeliefState& belief, double alpha);

/// Per-origin decomposition rule: stop iff max_m W_n^{(m)} >= 1 - alpha/M.
/// Origins with zero marginal are skipped (their W is undefined).
bool t_star_decide(const BeliefState& belief, double alpha);

/// Per-trial, per-threshold outcome.
struct TrialRecord {
    int cluster = 0;
    std::optional<long> change_slot;  // nullopt = no event
    Point true_origin;
    std::optional<long> stop_slot;    // nullopt = ran past deadline/cap
    double delay = 0.0;               // (min(T, boundary) - t)^+, 0 when t = inf
    bool false_alarm = false;         // stopped before the change
    bool capped = false;              // hit the safety slot cap unstopped
    long slots_run = 0;
    std::vector<double> stat_trace;   // optional pi_{n,0} (or max W) trace
};

/// One stopping rule driving one filter, tracking first crossings for a
/// sorted-or-not list of thresholds.
class Detector {
public:
    enum class Direction { stop_at_or_below, stop_at_or_above };

    Detector(Filter filter, Direction direction, std::vector<double> thresholds,
             bool record_trace = false);

    /// Evaluate the rule on the prior-only belief (slot 0).
    void start();

    /// Feed the frame for the next slot and re-evaluate.
    void step(const ObservationFrame& frame);

    bool done() const { return remaining_ == 0; }
    double statistic() const { return last_stat_; }
    const std::vector<std::optional<long>>& stop_slots() const { return stops_; }
    const std::vector<double>& trace() const { return trace_; }
    const Filter& filter() const { return filter_; }

private:
    void evaluate(long slot);

    Filter filter_;
    Direction direction_;
    std::vector<double> thresholds_;
    std::vector<std::optional<long>> stops_;
    std::vector<double> trace_;
    int remaining_ = 0;
    double last_stat_ = 1.0;
    bool record_trace_ = false;
};

/// Statistic used by a rule kind (pi for rp-like rules, max W for t-star).
double rule_statistic(RuleKind kind, const BeliefState& belief);

/// Threshold on that statistic implied by alpha (1 - alpha/M for t-star).
double rule_threshold(RuleKind kind, double alpha, int M);

Detector::Direction rule_direction(RuleKind kind);

} // namespace wavefront

#endif // WAVEFRONT_STOPPING_HPP
