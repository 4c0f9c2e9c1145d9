/**
 * Recursive Bayesian filter over (origin, radius) states.
 *
 * The belief p_{n,m,r} = P(origin = o_m, radius = r | data through slot n)
 * is updated in two stages per slot: a Markov prediction through the radius
 * chain, then a Bayes update against the frame's readings. Likelihoods are
 * accumulated in the log domain with a max shift before exponentiation, so
 * hundreds of sensors per slot cannot underflow the update.
 *
 * Per-slot cost is O(M * (Rmax + L)): for each origin, sensors are bucketed
 * by the radius at which they become exposed, and a prefix sum turns the
 * buckets into per-radius log-likelihood totals.
 */

#ifndef WAVEFRONT_POSTERIOR_HPP
#define WAVEFRONT_POSTERIOR_HPP

#include <optional>
#include <span>
#include <vector>

#include "wavefront/geometry.hpp"
#include "wavefront/observation_model.hpp"
#include "wavefront/state_model.hpp"

namespace wavefront {

struct BeliefState {
    long n = 0;
    int num_origins = 0;
    int max_radius = 0;
    std::vector<double> probs; // row-major over (origin, radius)

    double at(int m, int r) const {
        return probs[static_cast<std::size_t>(m) * (max_radius + 1) + r];
    }
    double& at(int m, int r) {
        return probs[static_cast<std::size_t>(m) * (max_radius + 1) + r];
    }

    /// pi_{n,0}: posterior probability that no change has occurred.
    double change_posterior() const;

    /// P(origin = o_m | data).
    double origin_marginal(int m) const;

    /// W_n^{(m)} = P(t <= n | data, origin = o_m); nullopt when the origin
    /// marginal is zero (conditioning undefined).
    std::optional<double> per_origin_posterior(int m) const;

    double sum() const;
};

BeliefState make_initial_belief(int M, const PriorParams& params,
                                const RadiusChain& chain);

/// One Markov prediction step on a flattened belief vector (also used by
/// the dynamic-programming solver). `n` is the slot being predicted into.
std::vector<double> predict_vector(std::span<const double> belief, int M,
                                   const RadiusChain& chain,
                                   const PriorParams& params, long n);

std::vector<double> predict(const BeliefState& belief, const RadiusChain& chain,
                            const PriorParams& params, long n);

/// Bayes update of a predicted vector against one frame. Throws if the
/// frame's locations and readings disagree in length, or if the posterior
/// mass vanishes (cannot happen with positive densities).
BeliefState update(const std::vector<double>& predicted,
                   const ObservationFrame& frame, const OriginSet& origins,
                   const ObservationModel& model, double unit_length, long n);

/// Stateful filter: predict + update per slot, with a distance/log-constant
/// cache that is reused as long as the sensor locations do not move.
class Filter {
public:
    Filter(OriginSet origins, RadiusChain chain, PriorParams params,
           ObservationModel model, double unit_length = 1.0);

    void reset();

    /// Incorporate the frame for slot belief().n + 1. Frames must arrive in
    /// slot order; pass an empty frame for slots without observations.
    void step(const ObservationFrame& frame);

    const BeliefState& belief() const { return belief_; }
    const OriginSet& origins() const { return origins_; }
    const RadiusChain& chain() const { return chain_; }

private:
    void rebuild_cache(const std::vector<Point>& locations);

    OriginSet origins_;
    RadiusChain chain_;
    PriorParams params_;
    ObservationModel model_;
    double unit_length_;
    BeliefState belief_;

    // per-(origin, sensor) tables, valid while sensors stay put
    std::vector<Point> cached_locations_;
    std::vector<int> exposure_bucket_; // radius at which the sensor turns on
    std::vector<double> llr_const_;    // llr = llr_const + x^2 * llr_coeff
    std::vector<double> llr_coeff_;
    std::vector<double> cum_llr_;      // scratch, per (origin, radius)
};

} // namespace wavefront

#endif // WAVEFRONT_POSTERIOR_HPP
