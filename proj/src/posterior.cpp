#include "wavefront/posterior.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace wavefront {

double BeliefState::change_posterior() const {
    double total = 0.0;
    for (int m = 0; m < num_origins; ++m) total += at(m, 0);
    return total;
}

double BeliefState::origin_marginal(int m) const {
    double total = 0.0;
    for (int r = 0; r <= max_radius; ++r) total += at(m, r);
    return total;
}

std::optional<double> BeliefState::per_origin_posterior(int m) const {
    const double marginal = origin_marginal(m);
    if (marginal <= 0.0) return std::nullopt;
    double changed = 0.0;
    for (int r = 1; r <= max_radius; ++r) changed += at(m, r);
    return changed / marginal;
}

double BeliefState::sum() const {
    double total = 0.0;
    for (double p : probs) total += p;
    return total;
}

BeliefState make_initial_belief(int M, const PriorParams& params,
                                const RadiusChain& chain) {
    BeliefState belief;
    belief.n = 0;
    belief.num_origins = M;
    belief.max_radius = chain.max_radius;
    belief.probs = initial_belief(M, params, chain);
    return belief;
}

std::vector<double> predict_vector(std::span<const double> belief, int M,
                                   const RadiusChain& chain,
                                   const PriorParams& params, long n) {
    const int width = chain.max_radius + 1;
    std::vector<double> out(belief.size(), 0.0);
    for (int m = 0; m < M; ++m) {
        const std::size_t base = static_cast<std::size_t>(m) * width;
        for (int r = 0; r <= chain.max_radius; ++r) {
            const double mass = belief[base + r];
            if (mass == 0.0) continue;
            const RadiusStep step = radius_step(chain, params, r, n);
            out[base + r] += mass * (1.0 - step.p_grow);
            if (step.p_grow > 0.0) out[base + step.grow_to] += mass * step.p_grow;
        }
    }
    return out;
}

std::vector<double> predict(const BeliefState& belief, const RadiusChain& chain,
                            const PriorParams& params, long n) {
    return predict_vector(belief.probs, belief.num_origins, chain, params, n);
}

namespace {

/// Smallest integer radius at which d^2 < r^2, kept bit-consistent with
/// geometry::exposed so generator and detector agree on boundary sensors.
int exposure_bucket_from_d2(double d2, int cap) {
    int r = static_cast<int>(std::floor(std::sqrt(d2))) + 1;
    while (r <= cap && d2 >= static_cast<double>(r) * r) ++r;
    while (r > 1 && d2 < static_cast<double>(r - 1) * (r - 1)) --r;
    return r;
}

/// llr(x) = llr_const + x^2 * llr_coeff for one sensor/origin pair.
void llr_terms(const ObservationModel& model, double d_physical,
               double& llr_const, double& llr_coeff) {
    const double s2 = model.gaussian.sigma2;
    const double v = alt_variance(model, d_physical);
    llr_const = -0.5 * std::log(v / s2);
    llr_coeff = 0.5 * (1.0 / s2 - 1.0 / v);
}

std::vector<double> normalized_posterior(const std::vector<double>& predicted,
                                         const std::vector<double>& cum_llr,
                                         int M, int width, long n) {
    std::vector<double> out(predicted.size(), 0.0);
    double max_logw = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] > 0.0) {
            const double logw = std::log(predicted[i]) + cum_llr[i];
            out[i] = logw;
            if (logw > max_logw) max_logw = logw;
        } else {
            out[i] = -std::numeric_limits<double>::infinity();
        }
    }
    if (!std::isfinite(max_logw)) {
        std::ostringstream msg;
        msg << "posterior update at slot " << n << ": no state has positive mass";
        throw std::runtime_error(msg.str());
    }
    double total = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        out[i] = std::exp(out[i] - max_logw);
        total += out[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        std::ostringstream msg;
        msg << "posterior update at slot " << n << ": normalizer " << total
            << " (M=" << M << ", width=" << width << ")";
        throw std::runtime_error(msg.str());
    }
    for (double& p : out) p /= total;
    return out;
}

} // namespace

BeliefState update(const std::vector<double>& predicted,
                   const ObservationFrame& frame, const OriginSet& origins,
                   const ObservationModel& model, double unit_length, long n) {
    const int M = origins.size();
    const int width = static_cast<int>(predicted.size()) / M;
    const int max_radius = width - 1;
    if (frame.locations.size() != frame.readings.size())
        throw std::invalid_argument("observation frame: locations and readings differ in length");

    BeliefState belief;
    belief.n = n;
    belief.num_origins = M;
    belief.max_radius = max_radius;

    if (frame.locations.empty()) {
        belief.probs = predicted;
        return belief;
    }

    std::vector<double> cum_llr(predicted.size(), 0.0);
    std::vector<double> bucket(width + 1, 0.0);
    for (int m = 0; m < M; ++m) {
        std::fill(bucket.begin(), bucket.end(), 0.0);
        for (std::size_t a = 0; a < frame.locations.size(); ++a) {
            const double d2 = squared_distance(frame.locations[a], origins.points[m]);
            const int r_on = exposure_bucket_from_d2(d2, max_radius);
            if (r_on > max_radius) continue; // never exposed within the chain
            double c0, c1;
            llr_terms(model, std::sqrt(d2) * unit_length, c0, c1);
            bucket[r_on] += c0 + frame.readings[a] * frame.readings[a] * c1;
        }
        double running = 0.0;
        const std::size_t base = static_cast<std::size_t>(m) * width;
        for (int r = 0; r <= max_radius; ++r) {
            running += bucket[r];
            cum_llr[base + r] = running;
        }
    }
    belief.probs = normalized_posterior(predicted, cum_llr, M, width, n);
    return belief;
}

Filter::Filter(OriginSet origins, RadiusChain chain, PriorParams params,
               ObservationModel model, double unit_length)
    : origins_(std::move(origins)), chain_(chain), params_(params),
      model_(std::move(model)), unit_length_(unit_length) {
    params_.validate();
    model_.validate();
    if (origins_.size() < 1)
        throw std::invalid_argument("Filter: origin set is empty");
    reset();
}

void Filter::reset() {
    belief_ = make_initial_belief(origins_.size(), params_, chain_);
    cached_locations_.clear();
    cum_llr_.assign(belief_.probs.size(), 0.0);
}

void Filter::rebuild_cache(const std::vector<Point>& locations) {
    const int M = origins_.size();
    const std::size_t L = locations.size();
    exposure_bucket_.resize(static_cast<std::size_t>(M) * L);
    llr_const_.resize(static_cast<std::size_t>(M) * L);
    llr_coeff_.resize(static_cast<std::size_t>(M) * L);
    for (int m = 0; m < M; ++m) {
        const std::size_t base = static_cast<std::size_t>(m) * L;
        for (std::size_t a = 0; a < L; ++a) {
            const double d2 = squared_distance(locations[a], origins_.points[m]);
            exposure_bucket_[base + a] = exposure_bucket_from_d2(d2, chain_.max_radius);
            llr_terms(model_, std::sqrt(d2) * unit_length_, llr_const_[base + a],
                      llr_coeff_[base + a]);
        }
    }
    cached_locations_ = locations;
}

void Filter::step(const ObservationFrame& frame) {
    if (frame.slot != belief_.n + 1) {
        std::ostringstream msg;
        msg << "Filter::step: expected slot " << belief_.n + 1 << ", got " << frame.slot;
        throw std::invalid_argument(msg.str());
    }
    if (frame.locations.size() != frame.readings.size())
        throw std::invalid_argument("observation frame: locations and readings differ in length");

    std::vector<double> predicted =
        predict_vector(belief_.probs, belief_.num_origins, chain_, params_, frame.slot);

    if (frame.locations.empty()) {
        belief_.probs = std::move(predicted);
        belief_.n = frame.slot;
        return;
    }

    if (frame.locations != cached_locations_) rebuild_cache(frame.locations);

    const int M = origins_.size();
    const int width = chain_.max_radius + 1;
    const std::size_t L = frame.locations.size();
    std::vector<double> bucket(width + 1, 0.0);
    for (int m = 0; m < M; ++m) {
        std::fill(bucket.begin(), bucket.end(), 0.0);
        const std::size_t tbase = static_cast<std::size_t>(m) * L;
        for (std::size_t a = 0; a < L; ++a) {
            const int r_on = exposure_bucket_[tbase + a];
            if (r_on > chain_.max_radius) continue;
            const double x = frame.readings[a];
            bucket[r_on] += llr_const_[tbase + a] + x * x * llr_coeff_[tbase + a];
        }
        double running = 0.0;
        const std::size_t base = static_cast<std::size_t>(m) * width;
        for (int r = 0; r < width; ++r) {
            running += bucket[r];
            cum_llr_[base + r] = running;
        }
    }
    belief_.probs = normalized_posterior(predicted, cum_llr_, M, width, frame.slot);
    belief_.n = frame.slot;

#ifndef NDEBUG
    // Per-origin decomposition identity: pi_0 = M / (M + sum W/(1-W)).
    const double pi0 = belief_.change_posterior();
    if (pi0 > 1e-9) {
        double odds = 0.0;
        bool usable = true;
        for (int m = 0; m < M && usable; ++m) {
            const auto w = belief_.per_origin_posterior(m);
            if (!w || *w > 1.0 - 1e-9) usable = false;
            else odds += *w / (1.0 - *w);
        }
        if (usable && std::abs(pi0 - M / (M + odds)) > 1e-9)
            throw std::logic_error("per-origin posterior identity violated");
    }
#endif
}

} // namespace wavefront
