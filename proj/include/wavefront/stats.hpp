/**
 * Small statistics helpers for reporting Monte Carlo results: Wilson score
 * intervals for Bernoulli rates and Student-t intervals for means.
 */

#ifndef WAVEFRONT_STATS_HPP
#define WAVEFRONT_STATS_HPP

#include <span>

namespace wavefront {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Two-sided Wilson score interval at confidence `level` (default 95%).
Interval wilson_interval(long successes, long n, double level = 0.95);

/// One-sided lower confidence bound for a Bernoulli rate at `level`.
double wilson_lower_bound(long successes, long n, double level = 0.95);

/// Two-sided Student-t interval for the mean of the samples.
Interval t_interval(std::span<const double> samples, double level = 0.95);

Interval t_interval(double mean, double sample_sd, long n, double level = 0.95);

/// One-sided lower confidence bound for a mean (t-based).
double t_lower_bound(std::span<const double> samples, double level = 0.95);

double mean_of(std::span<const double> samples);
double sample_sd(std::span<const double> samples);

} // namespace wavefront

#endif // WAVEFRONT_STATS_HPP
