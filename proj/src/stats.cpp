#include "wavefront/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

namespace wavefront {

namespace {

double normal_quantile(double p) {
    boost::math::normal_distribution<double> dist;
    return boost::math::quantile(dist, p);
}

Interval wilson(long successes, long n, double z) {
    if (n <= 0) throw std::invalid_argument("wilson_interval: n must be > 0");
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

} // namespace

Interval wilson_interval(long successes, long n, double level) {
    const double z = normal_quantile(0.5 + level / 2.0);
    return wilson(successes, n, z);
}

double wilson_lower_bound(long successes, long n, double level) {
    const double z = normal_quantile(level);
    return wilson(successes, n, z).lo;
}

double mean_of(std::span<const double> samples) {
    if (samples.empty()) return 0.0;
    double total = 0.0;
    for (double x : samples) total += x;
    return total / static_cast<double>(samples.size());
}

double sample_sd(std::span<const double> samples) {
    const std::size_t n = samples.size();
    if (n < 2) return 0.0;
    const double m = mean_of(samples);
    double ss = 0.0;
    for (double x : samples) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

Interval t_interval(double mean, double sd, long n, double level) {
    if (n < 2) return {mean, mean};
    boost::math::students_t_distribution<double> dist(static_cast<double>(n - 1));
    const double t = boost::math::quantile(dist, 0.5 + level / 2.0);
    const double half = t * sd / std::sqrt(static_cast<double>(n));
    return {mean - half, mean + half};
}

Interval t_interval(std::span<const double> samples, double level) {
    return t_interval(mean_of(samples), sample_sd(samples),
                      static_cast<long>(samples.size()), level);
}

double t_lower_bound(std::span<const double> samples, double level) {
    const long n = static_cast<long>(samples.size());
    const double mean = mean_of(samples);
    if (n < 2) return mean;
    boost::math::students_t_distribution<double> dist(static_cast<double>(n - 1));
    const double t = boost::math::quantile(dist, level);
    return mean - t * sample_sd(samples) / std::sqrt(static_cast<double>(n));
}

} // namespace wavefront
