/**
 * Priors and Markov structure of the hidden state (origin, radius).
 *
 * The change slot t is geometric with parameter rho, with optional mass
 * p_inf on "no event ever". After the change the radius grows by one
 * increment per slot with probability rho1 and is absorbed at the maximum
 * radius. Detector-side chains may use a larger growth increment than the
 * generative truth (model mismatch) or jump straight to the maximum
 * radius (instantaneous-change baseline).
 */

#ifndef WAVEFRONT_STATE_MODEL_HPP
#define WAVEFRONT_STATE_MODEL_HPP

#include <optional>
#include <utility>
#include <vector>

#include "wavefront/rng.hpp"

namespace wavefront {

struct PriorParams {
    double rho = 0.02;  // geometric change-point parameter, in (0,1)
    double rho1 = 1.0;  // per-slot radius growth probability, in (0,1]
    double p_inf = 0.0; // prior mass on "no event", in [0,1)

    void validate() const;
};

/// Geometric prior pmf: P(t = k) = rho * (1 - rho)^k, k >= 0.
double prior_pmf(double rho, long k);

/// P(R_n = 1 | R_{n-1} = 0) for slot n >= 1. Equals rho when p_inf = 0;
/// otherwise the time-dependent form that accounts for the no-event mass.
double change_hazard(const PriorParams& params, long n);

/// Radius transition chain assumed by a filter. increment = 1 is the
/// generative truth; increment = max_radius collapses to the two-state
/// instantaneous-change chain {0, max_radius}.
struct RadiusChain {
    int max_radius = 1;
    double rho1 = 1.0;
    int increment = 1;

    /// State reached by one growth step from r (0 -> increment).
    int grow_target(int r) const;
};

/// One-step transition from r_prev at slot n: moves to grow_target with the
/// returned probability, else stays. Absorbing at max_radius.
struct RadiusStep {
    int grow_to = 0;
    double p_grow = 0.0;
};

RadiusStep radius_step(const RadiusChain& chain, const PriorParams& params,
                       int r_prev, long n);

/// Transition distribution over the next radius, unit-increment chain.
/// Returned as (radius, probability) pairs summing to 1.
std::vector<std::pair<int, double>> radius_transition(int r_prev, long n,
                                                      const PriorParams& params,
                                                      int max_radius);

/// Pre-observation belief at n = 0, flattened to length M*(max_radius+1),
/// row-major over (origin, radius). The initial change mass sits at the
/// chain's first growth target.
std::vector<double> initial_belief(int M, const PriorParams& params,
                                   const RadiusChain& chain);

/// Sampled generative truth for one trial.
struct Trajectory {
    std::optional<long> change_slot; // nullopt = no event (t = infinity)
    std::vector<int> radius;         // R_0..R_horizon
};

/// Change slot draw: infinity with probability p_inf, else geometric(rho).
std::optional<long> sample_change_slot(const PriorParams& params, Rng& rng);

/// Advance the true radius from slot n-1 to slot n. Consumes one uniform
/// only when the radius may grow randomly (n > t, below the cap).
int advance_radius(int r_prev, long n, const std::optional<long>& change_slot,
                   double rho1, int max_radius, Rng& rng);

/// Full radius path up to `horizon`, mostly for tests and diagnostics.
Trajectory sample_trajectory(const PriorParams& params, int max_radius,
                             long horizon, Rng& rng);

} // namespace wavefront

#endif // WAVEFRONT_STATE_MODEL_HPP
