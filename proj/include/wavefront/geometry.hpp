/**
 * Spatial primitives: monitoring domains, origin grids, sensor placement,
 * and the exposure predicate shared by the data generator and the detector.
 *
 * Conventions:
 *   - Coordinates are in radius units (one unit = one radius increment per
 *     growth step). Physical scaling is applied by the caller.
 *   - A sensor is exposed to an event of radius r iff its Euclidean
 *     distance to the origin is strictly less than r.
 */

#ifndef WAVEFRONT_GEOMETRY_HPP
#define WAVEFRONT_GEOMETRY_HPP

#include <optional>
#include <vector>

#include "wavefront/rng.hpp"

namespace wavefront {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

inline double squared_distance(Point a, Point b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

double distance(Point a, Point b);

/// Monitored region: axis-aligned rectangle or disk.
struct Domain {
    enum class Kind { rectangle, disk };

    Kind kind = Kind::rectangle;
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    Point center;
    double radius = 1.0;

    static Domain rectangle(double x_min, double x_max, double y_min, double y_max);
    static Domain square(double side) { return rectangle(0.0, side, 0.0, side); }
    static Domain disk(Point center, double radius);

    bool contains(Point p) const;

    /// Rescale all coordinates by 1/s (physical units -> radius units).
    Domain scaled(double s) const;
};

/// Candidate source locations o_0..o_{M-1}, all inside the domain.
struct OriginSet {
    std::vector<Point> points;

    int size() const { return static_cast<int>(points.size()); }
};

/// Sensor locations for one time slot. May be empty.
struct SensorSnapshot {
    long slot = 0;
    std::vector<Point> locations;
};

/// Cell-centered, row-major origin grid covering the domain. Uses the most
/// square rows x cols factorization with rows*cols >= M; surplus cells are
/// dropped from the last row. For disks the grid covers the inscribed square.
OriginSet build_origin_grid(const Domain& domain, int M);

/// Smallest integer radius at which every point of the domain lies strictly
/// inside the wavefront from any origin: ceil(max distance) + 1.
int max_radius(const Domain& domain, const OriginSet& origins);

/// Strict-inequality exposure test: true iff ||sensor - origin|| < radius.
bool exposed(Point sensor, Point origin, int radius);

enum class SensorPolicy {
    per_slot_resample, // fresh uniform draw every slot (mobile network)
    uniform_random,    // one uniform draw at slot 0, then stationary
    fixed_list,        // caller-provided stationary locations
};

/// Deterministic per-slot sensor location stream. Slots must be requested
/// in increasing order; the draw sequence depends only on the seed handed
/// to the constructor.
class SensorStream {
public:
    SensorStream(const Domain& domain, int count, SensorPolicy policy, Rng rng,
                 std::vector<Point> fixed = {});

    SensorSnapshot at_slot(long slot);

private:
    Point draw_point();

    Domain domain_;
    int count_;
    SensorPolicy policy_;
    Rng rng_;
    std::vector<Point> current_;
    bool initialized_ = false;
};

} // namespace wavefront

#endif // WAVEFRONT_GEOMETRY_HPP
