#include "wavefront/state_model.hpp"

#include <cmath>
#include <stdexcept>

namespace wavefront {

void PriorParams::validate() const {
    if (!(rho > 0.0 && rho < 1.0))
        throw std::invalid_argument("prior.rho must be in (0,1)");
    if (!(rho1 > 0.0 && rho1 <= 1.0))
        throw std::invalid_argument("prior.rho1 must be in (0,1]");
    if (!(p_inf >= 0.0 && p_inf < 1.0))
        throw std::invalid_argument("prior.p_inf must be in [0,1)");
}

double prior_pmf(double rho, long k) {
    if (k < 0) return 0.0;
    return rho * std::exp(static_cast<double>(k) * std::log1p(-rho));
}

double change_hazard(const PriorParams& params, long n) {
    if (n < 1) throw std::invalid_argument("change_hazard: slot must be >= 1");
    if (params.p_inf == 0.0) return params.rho;
    // survival = (1-rho)^(n-1), computed in the log domain
    const double survival = std::exp(static_cast<double>(n - 1) * std::log1p(-params.rho));
    const double finite_mass = (1.0 - params.p_inf) * survival;
    if (finite_mass == 0.0) return 0.0; // geometric tail underflowed; hazard -> 0
    return params.rho * finite_mass / (params.p_inf + finite_mass);
}

int RadiusChain::grow_target(int r) const {
    if (r >= max_radius) return max_radius;
    const int step = r == 0 ? increment : r + increment;
    return step > max_radius ? max_radius : step;
}

RadiusStep radius_step(const RadiusChain& chain, const PriorParams& params,
                       int r_prev, long n) {
    if (r_prev < 0 || r_prev > chain.max_radius)
        throw std::invalid_argument("radius_step: radius out of range");
    if (r_prev == chain.max_radius) return {chain.max_radius, 0.0};
    if (r_prev == 0) return {chain.grow_target(0), change_hazard(params, n)};
    return {chain.grow_target(r_prev), chain.rho1};
}

std::vector<std::pair<int, double>> radius_transition(int r_prev, long n,
                                                      const PriorParams& params,
                                                      int max_radius) {
    const RadiusChain chain{max_radius, params.rho1, 1};
    const RadiusStep step = radius_step(chain, params, r_prev, n);
    if (step.p_grow == 0.0) return {{r_prev, 1.0}};
    return {{step.grow_to, step.p_grow}, {r_prev, 1.0 - step.p_grow}};
}

std::vector<double> initial_belief(int M, const PriorParams& params,
                                   const RadiusChain& chain) {
    if (M < 1) throw std::invalid_argument("initial_belief: M must be >= 1");
    const int width = chain.max_radius + 1;
    std::vector<double> belief(static_cast<std::size_t>(M) * width, 0.0);
    const double p_quiet = (params.p_inf + (1.0 - params.p_inf) * (1.0 - params.rho)) / M;
    const double p_change = (1.0 - params.p_inf) * params.rho / M;
    const int first = chain.grow_target(0);
    for (int m = 0; m < M; ++m) {
        belief[static_cast<std::size_t>(m) * width + 0] = p_quiet;
        belief[static_cast<std::size_t>(m) * width + first] = p_change;
    }
    return belief;
}

std::optional<long> sample_change_slot(const PriorParams& params, Rng& rng) {
    const double u = rng.uniform();
    if (u < params.p_inf) return std::nullopt;
    const double v = (u - params.p_inf) / (1.0 - params.p_inf);
    // inverse cdf of geometric(rho) on {0,1,...}
    const double raw = std::log1p(-v) / std::log1p(-params.rho);
    return static_cast<long>(std::floor(raw));
}

int advance_radius(int r_prev, long n, const std::optional<long>& change_slot,
                   double rho1, int max_radius, Rng& rng) {
    if (!change_slot || n < *change_slot) return 0;
    if (n == *change_slot) return 1;
    if (r_prev >= max_radius) return max_radius;
    return rng.bernoulli(rho1) ? r_prev + 1 : r_prev;
}

Trajectory sample_trajectory(const PriorParams& params, int max_radius,
                             long horizon, Rng& rng) {
    Trajectory traj;
    traj.change_slot = sample_change_slot(params, rng);
    traj.radius.reserve(horizon + 1);
    int r = (traj.change_slot && *traj.change_slot == 0) ? 1 : 0;
    traj.radius.push_back(r);
    for (long n = 1; n <= horizon; ++n) {
        r = advance_radius(r, n, traj.change_slot, params.rho1, max_radius, rng);
        traj.radius.push_back(r);
    }
    return traj;
}

} // namespace wavefront
