#include "wavefront/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavefront {

double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

Domain Domain::rectangle(double x_min, double x_max, double y_min, double y_max) {
    if (!(x_max > x_min) || !(y_max > y_min))
        throw std::invalid_argument("Domain::rectangle: extents must be positive");
    Domain d;
    d.kind = Kind::rectangle;
    d.x_min = x_min;
    d.x_max = x_max;
    d.y_min = y_min;
    d.y_max = y_max;
    return d;
}

Domain Domain::disk(Point center, double radius) {
    if (!(radius > 0.0))
        throw std::invalid_argument("Domain::disk: radius must be positive");
    Domain d;
    d.kind = Kind::disk;
    d.center = center;
    d.radius = radius;
    return d;
}

bool Domain::contains(Point p) const {
    if (kind == Kind::rectangle)
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    return distance(p, center) <= radius;
}

Domain Domain::scaled(double s) const {
    if (!(s > 0.0)) throw std::invalid_argument("Domain::scaled: scale must be positive");
    Domain d = *this;
    if (kind == Kind::rectangle) {
        d.x_min /= s;
        d.x_max /= s;
        d.y_min /= s;
        d.y_max /= s;
    } else {
        d.center = {center.x / s, center.y / s};
        d.radius /= s;
    }
    return d;
}

OriginSet build_origin_grid(const Domain& domain, int M) {
    if (M < 1) throw std::invalid_argument("build_origin_grid: M must be >= 1");

    // Grid extent: the rectangle itself, or the square inscribed in the disk.
    double x0, x1, y0, y1;
    if (domain.kind == Domain::Kind::rectangle) {
        x0 = domain.x_min;
        x1 = domain.x_max;
        y0 = domain.y_min;
        y1 = domain.y_max;
    } else {
        const double half = domain.radius / std::sqrt(2.0);
        x0 = domain.center.x - half;
        x1 = domain.center.x + half;
        y0 = domain.center.y - half;
        y1 = domain.center.y + half;
    }

    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(M))));
    const int rows = (M + cols - 1) / cols;

    OriginSet set;
    set.points.reserve(M);
    const double cell_w = (x1 - x0) / cols;
    const double cell_h = (y1 - y0) / rows;
    for (int i = 0; i < rows && static_cast<int>(set.points.size()) < M; ++i) {
        for (int j = 0; j < cols && static_cast<int>(set.points.size()) < M; ++j) {
            set.points.push_back({x0 + (j + 0.5) * cell_w, y0 + (i + 0.5) * cell_h});
        }
    }
    return set;
}

namespace {

double farthest_distance(const Domain& domain, Point o) {
    if (domain.kind == Domain::Kind::rectangle) {
        const Point corners[4] = {{domain.x_min, domain.y_min},
                                  {domain.x_max, domain.y_min},
                                  {domain.x_min, domain.y_max},
                                  {domain.x_max, domain.y_max}};
        double best = 0.0;
        for (const Point& c : corners) best = std::max(best, distance(o, c));
        return best;
    }
    return distance(o, domain.center) + domain.radius;
}

} // namespace

int max_radius(const Domain& domain, const OriginSet& origins) {
    if (origins.points.empty())
        throw std::invalid_argument("max_radius: origin set is empty");
    double far = 0.0;
    for (const Point& o : origins.points) far = std::max(far, farthest_distance(domain, o));
    // +1 so the strict `< r` exposure test covers every point at r = Rmax.
    return static_cast<int>(std::ceil(far)) + 1;
}

bool exposed(Point sensor, Point origin, int radius) {
    if (radius < 0) throw std::invalid_argument("exposed: radius must be >= 0");
    if (radius == 0) return false;
    return squared_distance(sensor, origin) <
           static_cast<double>(radius) * static_cast<double>(radius);
}

SensorStream::SensorStream(const Domain& domain, int count, SensorPolicy policy,
                           Rng rng, std::vector<Point> fixed)
    : domain_(domain), count_(count), policy_(policy), rng_(rng) {
    if (count_ < 0) throw std::invalid_argument("SensorStream: count must be >= 0");
    if (policy_ == SensorPolicy::fixed_list) {
        for (const Point& p : fixed)
            if (!domain_.contains(p))
                throw std::invalid_argument("SensorStream: fixed sensor outside domain");
        current_ = std::move(fixed);
        count_ = static_cast<int>(current_.size());
        initialized_ = true;
    }
}

Point SensorStream::draw_point() {
    if (domain_.kind == Domain::Kind::rectangle) {
        const double x = rng_.uniform(domain_.x_min, domain_.x_max);
        const double y = rng_.uniform(domain_.y_min, domain_.y_max);
        return {x, y};
    }
    // Uniform on the disk: r = R*sqrt(u), angle = 2*pi*v.
    const double r = domain_.radius * std::sqrt(rng_.uniform());
    const double a = 2.0 * 3.14159265358979323846 * rng_.uniform();
    return {domain_.center.x + r * std::cos(a), domain_.center.y + r * std::sin(a)};
}

SensorSnapshot SensorStream::at_slot(long slot) {
    if (policy_ == SensorPolicy::per_slot_resample || !initialized_) {
        current_.clear();
        current_.reserve(count_);
        for (int i = 0; i < count_; ++i) current_.push_back(draw_point());
        initialized_ = true;
    }
    return SensorSnapshot{slot, current_};
}

} // namespace wavefront
