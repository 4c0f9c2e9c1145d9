/**
 * Finite-horizon backward induction for the optimal-stopping Bayes risk on
 * tiny belief-state instances, plus the derived policy, a Monte Carlo risk
 * estimator, and a diagnostic that measures how close the optimal policy is
 * to a plain posterior-threshold rule as the change becomes rare.
 *
 * The belief simplex is discretized as a regular lattice; off-lattice
 * beliefs are evaluated by barycentric (Freudenthal) interpolation.
 * Expectations over the next observation use either an exact finite
 * alphabet or per-state Gauss-Hermite quadrature.
 *
 * Deliberately desk-scale: intended for M*(Rmax+1) <= 6 and at most a
 * couple of sensors. The threshold rule is the production path.
 */

#ifndef WAVEFRONT_DP_HPP
#define WAVEFRONT_DP_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <unordered_map>
#include <vector>

#include "wavefront/posterior.hpp"

namespace wavefront {

/// Regular lattice on the probability simplex with Freudenthal
/// interpolation between lattice points.
class SimplexGrid {
public:
    SimplexGrid(int dim, int resolution);

    int dim() const { return dim_; }
    int resolution() const { return resolution_; }
    std::size_t size() const { return points_.size(); }

    /// Lattice point as a belief vector (coordinates sum to 1).
    std::vector<double> point(std::size_t index) const;
    const std::vector<int>& raw_point(std::size_t index) const { return points_[index]; }

    struct Corner {
        std::size_t index;
        double weight;
    };

    /// Barycentric decomposition of an arbitrary belief into at most dim()
    /// lattice corners with non-negative weights summing to 1.
    std::vector<Corner> decompose(std::span<const double> belief) const;

    /// Interpolate per-lattice-point values at an arbitrary belief.
    double interpolate(std::span<const double> values,
                       std::span<const double> belief) const;

private:
    std::size_t lookup(const std::vector<int>& raw) const;

    int dim_;
    int resolution_;
    std::vector<std::vector<int>> points_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Physicists' Gauss-Hermite rule: integral of exp(-x^2) f(x) dx
/// approximated by sum w_i f(x_i).
struct QuadratureNode {
    double x;
    double w;
};
std::vector<QuadratureNode> gauss_hermite(int n);

/// Per-state observation model for the dynamic program: an exact finite
/// alphabet or independent zero-mean Gaussians (one variance per sensor
/// per state) integrated by Gauss-Hermite quadrature.
struct DpObservation {
    enum class Kind { discrete, gaussian };

    Kind kind = Kind::discrete;
    std::vector<std::vector<double>> symbol_prob;    // [state][symbol]
    std::vector<std::vector<double>> state_variance; // [state][sensor]
    int gh_nodes = 16;

    static DpObservation discrete(std::vector<std::vector<double>> prob);
    static DpObservation gaussian(std::vector<std::vector<double>> variances,
                                  int nodes = 16);

    /// Build the Gaussian observation from sensor geometry: state (m, r)
    /// exposes sensor a iff exposed(a, o_m, r).
    static DpObservation gaussian_from_geometry(const ObservationModel& model,
                                                const OriginSet& origins,
                                                std::span<const Point> sensors,
                                                int max_radius, int nodes = 16,
                                                double unit_length = 1.0);

    int num_states() const;
    void validate(int expected_states) const;
};

struct DpModel {
    int M = 1;
    RadiusChain chain;  // increment 1; chain.max_radius small
    PriorParams prior;  // p_inf must be 0 (time-homogeneous program)
    DpObservation obs;
    double cost = 0.1;  // delay cost c

    int num_states() const { return M * (chain.max_radius + 1); }
    void validate() const;

    std::vector<double> initial() const;
    double pi0(std::span<const double> belief) const; // mass on r = 0
};

/// Posterior after observing `symbol` (discrete) from predicted belief q.
std::vector<double> dp_update_discrete(const DpModel& model,
                                       std::span<const double> predicted,
                                       int symbol);
/// Posterior after observing raw readings (gaussian) from predicted q.
std::vector<double> dp_update_gaussian(const DpModel& model,
                                       std::span<const double> predicted,
                                       std::span<const double> readings);

/// Expected next-step value E[J(p_{n+1}) | p_n] where `values` lives on the
/// grid and p_{n+1} is the predict+update of `belief`.
double continuation_value(const DpModel& model, const SimplexGrid& grid,
                          std::span<const double> values,
                          std::span<const double> belief);

/// Cost-to-go tables J_n^N for n = N..0 on the grid, with the continuation
/// values D_n^N for n < N.
struct ValueTable {
    int horizon = 0;
    double cost = 0.0;
    SimplexGrid grid;
    std::vector<std::vector<double>> J; // J[n][point], n = 0..N
    std::vector<std::vector<double>> D; // D[n][point], n = 0..N-1
};

ValueTable backward_induction(const DpModel& model, int horizon, int resolution);

/// Optimal-policy decision from the table at slot n: stop iff
/// pi_0 <= c (1 - pi_0) + D_n(belief). At n >= N the program must stop.
bool dp_policy_stop(const DpModel& model, const ValueTable& table, int n,
                    std::span<const double> belief);

/// Infinite-horizon limit by value iteration to a fixed point.
struct StationaryPolicy {
    SimplexGrid grid;
    std::vector<double> J;
    std::vector<double> D;
    double cost = 0.0;
    int iterations = 0;
};

StationaryPolicy value_iterate(const DpModel& model, int resolution,
                               double tol = 1e-12, int max_iterations = 10000);

bool stationary_policy_stop(const DpModel& model, const StationaryPolicy& policy,
                            std::span<const double> belief);

/// Monte Carlo Bayes risk B(T, c) = P(T < t) + c E[(T - t)^+] of an
/// arbitrary belief-feedback policy. The policy is forced to stop at
/// `slot_cap`. Returns the estimate with a 95% t-interval.
struct RiskEstimate {
    double mean = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
};

using StopPolicy = std::function<bool(long n, std::span<const double> belief)>;

RiskEstimate bayes_risk(const DpModel& model, const StopPolicy& policy,
                        long trials, std::uint64_t seed, long slot_cap = 2000);

/// For each rho, compare the stationary optimal policy's stop region with
/// the best single pi_0 threshold over the lattice.
struct ThresholdDiagnosticRow {
    double rho = 0.0;
    double misclassification_rate = 0.0;
    double max_abs_psi_over_rho = 0.0; // Psi = D(p) - (1 - rho) pi_0
    std::size_t grid_points = 0;
};

std::vector<ThresholdDiagnosticRow>
threshold_diagnostic(DpModel model, std::span<const double> rhos, int resolution);

/// Misclassification rate of the best pi_0 threshold against arbitrary
/// stop/continue labels (exposed for the diagnostic and its tests).
double best_threshold_misclassification(std::span<const double> pi0,
                                        const std::vector<bool>& stop_label);

} // namespace wavefront

#endif // WAVEFRONT_DP_HPP
