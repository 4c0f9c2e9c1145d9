/**
 * Closed-form calculators for the asymptotic delay theory: per-slot
 * log-likelihood-ratio drift, the detection-delay lower bound and
 * approximation, and the attenuating-Gaussian per-sensor drift q_phi in
 * closed form, by quadrature, and in the dense-network limit.
 *
 * All quantities are in nats; decibel conversions belong to the CLI.
 */

#ifndef WAVEFRONT_ASYMPTOTICS_HPP
#define WAVEFRONT_ASYMPTOTICS_HPP

#include <span>
#include <vector>

#include "wavefront/observation_model.hpp"

namespace wavefront {

/// KL divergence D(N(0,s1) || N(0,s0)) between zero-mean Gaussians.
double kl_gaussian_variance(double sigma2_null, double sigma2_alt);

/// Drift of the flat (location-independent) model: L * D(f1 || f0) with
/// f1 = N(0, sigma2 * (1 + phi)).
double flat_drift(int sensor_count, double phi);

/// Asymptotic lower bound on the average detection delay at PFA level
/// alpha: mean over origins of |log alpha| / (q_m + |log(1-rho)|).
double add_lower_bound(double alpha, double rho, std::span<const double> drifts);

/// Per-sensor drift on a disk of radius R around the source, path-loss
/// exponent theta, sensors uniform on the disk:
///   q_phi = (1/R^2) * integral_0^R s * [phi/s~^theta - log(1 + phi/s~^theta)] ds
/// evaluated by adaptive quadrature split at the clamp kink.
double q_phi_quadrature(double phi, double disk_radius, double theta,
                        const PathLoss& loss);

/// The same integral with a unit-floor clamp and default theta = 2.
double q_phi_quadrature(double phi, double disk_radius, double theta = 2.0);

/// Literal transcription of the published integrand
///   (1/(2R^2)) * integral_0^R [phi/s~^(theta-1) - s*log(1 + phi/s~^theta)] ds.
/// Kept as a diagnostic: it disagrees with the closed form (by 20% or more
/// on moderate disks, a factor ~2 inside the clamped region); the closed
/// form and the expectation reading above are the consistent pair.
double q_phi_quadrature_printed(double phi, double disk_radius, double theta,
                                const PathLoss& loss);

/// Closed form for theta = 2, unit-floor clamp, R >= 1:
///   (1/(2R^2)) [phi + phi*log(phi+1) - (phi + R^2) log(1 + phi/R^2)]
double q_phi_closed(double phi, double disk_radius);

/// Dense-network limit of L*q_phi when L/R^2 -> lambda: (lambda/2) phi log(1+phi).
double drift_density_limit(double phi, double lambda);

/// First-order delay approximation |log alpha| / (L q_phi + |log(1-rho)|).
double add_approx_attenuating(double alpha, double rho, int sensor_count,
                              double q_phi);

/// Cumulative log-likelihood-ratio trace Z_n of {t = 0, origin known} vs
/// {no change}, simulated under the post-change model with deterministic
/// unit-per-slot growth. Z[i] is the statistic after slot i+1.
std::vector<double> simulate_drift_trace(const ObservationModel& model,
                                         const Domain& domain, int sensor_count,
                                         SensorPolicy policy, Point origin,
                                         int max_radius, long slots,
                                         double unit_length, Rng& rng);

struct DriftEstimate {
    double slope = 0.0;
    double std_error = 0.0;
    long points = 0;
};

/// Least-squares slope of Z over slot index, using only the segment after
/// `start_index` (the event must already cover the whole domain there).
DriftEstimate empirical_drift(std::span<const double> z_trace, long start_index);

} // namespace wavefront

#endif // WAVEFRONT_ASYMPTOTICS_HPP
