#include "wavefront/asymptotics.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace wavefront {

double kl_gaussian_variance(double sigma2_null, double sigma2_alt) {
    if (!(sigma2_null > 0.0) || !(sigma2_alt > 0.0))
        throw std::invalid_argument("kl_gaussian_variance: variances must be > 0");
    const double ratio = sigma2_alt / sigma2_null;
    return 0.5 * (ratio - std::log(ratio) - 1.0);
}

double flat_drift(int sensor_count, double phi) {
    if (sensor_count < 0)
        throw std::invalid_argument("flat_drift: sensor count must be >= 0");
    if (phi == 0.0 || sensor_count == 0) return 0.0;
    return sensor_count * kl_gaussian_variance(1.0, 1.0 + phi);
}

double add_lower_bound(double alpha, double rho, std::span<const double> drifts) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("add_lower_bound: alpha must be in (0,1)");
    if (drifts.empty())
        throw std::invalid_argument("add_lower_bound: at least one drift required");
    const double log_alpha = -std::log(alpha);
    const double log_tail = -std::log1p(-rho);
    double total = 0.0;
    for (double q : drifts) total += log_alpha / (q + log_tail);
    return total / static_cast<double>(drifts.size());
}

namespace {

double kink_location(const PathLoss& loss) {
    switch (loss.clamp) {
    case DistanceClamp::unit_floor: return 1.0;
    case DistanceClamp::reference_scaled: return loss.d0;
    case DistanceClamp::reference_literal: return loss.d0 * loss.d0;
    }
    return 1.0;
}

template <typename F>
double integrate_split(const F& f, double a, double b, double kink) {
    using boost::math::quadrature::gauss_kronrod;
    double total = 0.0;
    if (kink > a && kink < b) {
        total += gauss_kronrod<double, 61>::integrate(f, a, kink, 15, 1e-13);
        a = kink;
    }
    total += gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-13);
    return total;
}

} // namespace

double q_phi_quadrature(double phi, double disk_radius, double theta,
                        const PathLoss& loss) {
    if (!(disk_radius > 0.0))
        throw std::invalid_argument("q_phi_quadrature: disk radius must be > 0");
    if (phi == 0.0) return 0.0;
    auto integrand = [&](double s) {
        const double st = clamped_distance(loss, s);
        const double snr = phi / std::pow(st, theta);
        return s * (snr - std::log1p(snr));
    };
    return integrate_split(integrand, 0.0, disk_radius, kink_location(loss)) /
           (disk_radius * disk_radius);
}

double q_phi_quadrature(double phi, double disk_radius, double theta) {
    PathLoss loss;
    loss.theta = theta;
    loss.clamp = DistanceClamp::unit_floor;
    return q_phi_quadrature(phi, disk_radius, theta, loss);
}

double q_phi_quadrature_printed(double phi, double disk_radius, double theta,
                                const PathLoss& loss) {
    if (!(disk_radius > 0.0))
        throw std::invalid_argument("q_phi_quadrature_printed: disk radius must be > 0");
    if (phi == 0.0) return 0.0;
    auto integrand = [&](double s) {
        const double st = clamped_distance(loss, s);
        const double snr = phi / std::pow(st, theta);
        return phi / std::pow(st, theta - 1.0) - s * std::log1p(snr);
    };
    return integrate_split(integrand, 0.0, disk_radius, kink_location(loss)) /
           (2.0 * disk_radius * disk_radius);
}

double q_phi_closed(double phi, double disk_radius) {
    if (!(disk_radius >= 1.0))
        throw std::invalid_argument("q_phi_closed: requires disk radius >= 1");
    if (phi == 0.0) return 0.0;
    const double r2 = disk_radius * disk_radius;
    return (phi + phi * std::log1p(phi) - (phi + r2) * std::log1p(phi / r2)) /
           (2.0 * r2);
}

double drift_density_limit(double phi, double lambda) {
    return 0.5 * lambda * phi * std::log1p(phi);
}

double add_approx_attenuating(double alpha, double rho, int sensor_count,
                              double q_phi) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("add_approx_attenuating: alpha must be in (0,1)");
    return -std::log(alpha) / (sensor_count * q_phi - std::log1p(-rho));
}

std::vector<double> simulate_drift_trace(const ObservationModel& model,
                                         const Domain& domain, int sensor_count,
                                         SensorPolicy policy, Point origin,
                                         int max_radius, long slots,
                                         double unit_length, Rng& rng) {
    // Post-change path with t = 0 and deterministic growth: R_n = min(n+1, Rmax).
    SensorStream stream(domain, sensor_count, policy, rng);
    std::vector<double> z;
    z.reserve(slots);
    double running = 0.0;
    const double sigma2 = model.gaussian.sigma2;
    for (long n = 1; n <= slots; ++n) {
        const int radius = static_cast<int>(std::min<long>(n + 1, max_radius));
        const SensorSnapshot snap = stream.at_slot(n);
        const ObservationFrame frame =
            sample_frame(origin, radius, snap, model, unit_length, rng);
        for (std::size_t a = 0; a < frame.locations.size(); ++a) {
            if (!exposed(frame.locations[a], origin, radius)) continue;
            const double d = distance(frame.locations[a], origin) * unit_length;
            const double v = alt_variance(model, d);
            running += loglik_alt(frame.readings[a], v) -
                       loglik_null(frame.readings[a], sigma2);
        }
        z.push_back(running);
    }
    return z;
}

DriftEstimate empirical_drift(std::span<const double> z_trace, long start_index) {
    const long n = static_cast<long>(z_trace.size());
    if (start_index < 0 || n - start_index < 3)
        throw std::invalid_argument("empirical_drift: need at least 3 trailing points");

    // Least-squares slope of Z against slot index on the trailing segment.
    const long count = n - start_index;
    double x_mean = 0.0, y_mean = 0.0;
    for (long i = start_index; i < n; ++i) {
        x_mean += static_cast<double>(i);
        y_mean += z_trace[i];
    }
    x_mean /= count;
    y_mean /= count;
    double sxy = 0.0, sxx = 0.0;
    for (long i = start_index; i < n; ++i) {
        const double dx = static_cast<double>(i) - x_mean;
        sxy += dx * (z_trace[i] - y_mean);
        sxx += dx * dx;
    }

    DriftEstimate est;
    est.points = count;
    est.slope = sxy / sxx;
    // Z is a drifted random walk on this segment, so the slope's standard
    // error comes from the i.i.d. increments: Var(LS slope) = 1.2 sigma^2/n.
    double inc_mean = 0.0;
    for (long i = start_index + 1; i < n; ++i)
        inc_mean += z_trace[i] - z_trace[i - 1];
    inc_mean /= (count - 1);
    double inc_var = 0.0;
    for (long i = start_index + 1; i < n; ++i) {
        const double d = z_trace[i] - z_trace[i - 1] - inc_mean;
        inc_var += d * d;
    }
    inc_var /= (count - 2);
    est.std_error = std::sqrt(1.2 * inc_var / count);
    return est;
}

} // namespace wavefront
