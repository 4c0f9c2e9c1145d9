/**
 * Null and alternative sampling densities. Readings are scalar, zero-mean
 * Gaussian: N(0, sigma2) before exposure and N(0, sigma2 + gamma2/d~^theta)
 * after, where d~ is the clamped sensor-to-source distance. The flat family
 * ignores distance entirely (d~ = 1, theta = 0 effectively).
 *
 * All densities are evaluated in the log domain; the posterior engine
 * consumes log-likelihood differences to avoid underflow with many sensors.
 */

#ifndef WAVEFRONT_OBSERVATION_MODEL_HPP
#define WAVEFRONT_OBSERVATION_MODEL_HPP

#include <vector>

#include "wavefront/geometry.hpp"
#include "wavefront/rng.hpp"

namespace wavefront {

struct GaussianPair {
    double sigma2 = 1.0; // noise variance, > 0
    double gamma2 = 1.0; // signal power at the reference point, >= 0
};

enum class DistanceClamp {
    unit_floor,       // d~ = max(d, 1)
    reference_scaled, // d~ = max(d, d0) / d0 (power = gamma2 out to d0)
    reference_literal // d~ = max(d0, d/d0), kept for reproduction attempts
};

struct PathLoss {
    double theta = 2.0; // path-loss exponent, >= 0
    double d0 = 1.0;    // reference distance, > 0
    DistanceClamp clamp = DistanceClamp::unit_floor;
};

double clamped_distance(const PathLoss& loss, double d);

struct ObservationModel {
    enum class Family { flat_gaussian, attenuating_gaussian };

    Family family = Family::flat_gaussian;
    GaussianPair gaussian;
    PathLoss path_loss; // used by the attenuating family only

    void validate() const;
};

/// Post-change variance for a sensor at physical distance d from the source.
double alt_variance(const ObservationModel& model, double d);

/// log N(x; 0, sigma2)
double loglik_null(double x, double sigma2);

/// log N(x; 0, variance)
double loglik_alt(double x, double variance);

/// One slot's sensor locations and readings, as seen by the fusion center.
struct ObservationFrame {
    long slot = 0;
    std::vector<Point> locations;
    std::vector<double> readings;
};

/// Draw one frame given the true state. Exposure uses geometry::exposed with
/// the radius in coordinate units; path-loss distances are coordinate
/// distances scaled by unit_length. One standard normal is consumed per
/// sensor regardless of exposure, so matched seeds stay matched across
/// parameter sweeps.
ObservationFrame sample_frame(Point true_origin, int radius,
                              const SensorSnapshot& sensors,
                              const ObservationModel& model, double unit_length,
                              Rng& rng);

} // namespace wavefront

#endif // WAVEFRONT_OBSERVATION_MODEL_HPP
