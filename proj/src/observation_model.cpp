#include "wavefront/observation_model.hpp"

#include <cmath>
#include <stdexcept>

namespace wavefront {

namespace {
constexpr double kLogTwoPi = 1.8378770664093454836;
}

double clamped_distance(const PathLoss& loss, double d) {
    switch (loss.clamp) {
    case DistanceClamp::unit_floor:
        return d > 1.0 ? d : 1.0;
    case DistanceClamp::reference_scaled:
        return (d > loss.d0 ? d : loss.d0) / loss.d0;
    case DistanceClamp::reference_literal:
        return d / loss.d0 > loss.d0 ? d / loss.d0 : loss.d0;
    }
    return 1.0;
}

void ObservationModel::validate() const {
    if (!(gaussian.sigma2 > 0.0))
        throw std::invalid_argument("observation.sigma2 must be > 0");
    if (!(gaussian.gamma2 >= 0.0))
        throw std::invalid_argument("observation.gamma2 must be >= 0");
    if (family == Family::attenuating_gaussian) {
        if (!(path_loss.theta >= 0.0))
            throw std::invalid_argument("observation.theta must be >= 0");
        if (!(path_loss.d0 > 0.0))
            throw std::invalid_argument("observation.d0 must be > 0");
    }
}

double alt_variance(const ObservationModel& model, double d) {
    if (model.family == ObservationModel::Family::flat_gaussian)
        return model.gaussian.sigma2 + model.gaussian.gamma2;
    const double dd = clamped_distance(model.path_loss, d);
    return model.gaussian.sigma2 +
           model.gaussian.gamma2 / std::pow(dd, model.path_loss.theta);
}

double loglik_null(double x, double sigma2) { return loglik_alt(x, sigma2); }

double loglik_alt(double x, double variance) {
    if (!(variance > 0.0)) throw std::invalid_argument("loglik: variance must be > 0");
    return -0.5 * (kLogTwoPi + std::log(variance) + x * x / variance);
}

ObservationFrame sample_frame(Point true_origin, int radius,
                              const SensorSnapshot& sensors,
                              const ObservationModel& model, double unit_length,
                              Rng& rng) {
    ObservationFrame frame;
    frame.slot = sensors.slot;
    frame.locations = sensors.locations;
    frame.readings.reserve(sensors.locations.size());
    for (const Point& a : sensors.locations) {
        const double z = rng.normal();
        double variance = model.gaussian.sigma2;
        if (exposed(a, true_origin, radius))
            variance = alt_variance(model, distance(a, true_origin) * unit_length);
        frame.readings.push_back(z * std::sqrt(variance));
    }
    return frame;
}

} // namespace wavefront
