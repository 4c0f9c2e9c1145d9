#include "wavefront/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wavefront/stats.hpp"

namespace wavefront {

namespace {

std::uint64_t pack_point(const std::vector<int>& raw, std::uint64_t base) {
    std::uint64_t key = 0;
    for (int v : raw) key = key * base + static_cast<std::uint64_t>(v);
    return key;
}

void enumerate_compositions(int dim, int total,
                            std::vector<int>& current,
                            std::vector<std::vector<int>>& out) {
    const int pos = static_cast<int>(current.size());
    if (pos == dim - 1) {
        current.push_back(total);
        out.push_back(current);
        current.pop_back();
        return;
    }
    for (int k = 0; k <= total; ++k) {
        current.push_back(k);
        enumerate_compositions(dim, total - k, current, out);
        current.pop_back();
    }
}

} // namespace

SimplexGrid::SimplexGrid(int dim, int resolution)
    : dim_(dim), resolution_(resolution) {
    if (dim < 2) throw std::invalid_argument("SimplexGrid: dim must be >= 2");
    if (resolution < 1) throw std::invalid_argument("SimplexGrid: resolution must be >= 1");
    std::vector<int> current;
    enumerate_compositions(dim, resolution, current, points_);
    if (points_.size() > 5'000'000)
        throw std::invalid_argument("SimplexGrid: instance too large");
    const std::uint64_t base = static_cast<std::uint64_t>(resolution) + 1;
    index_.reserve(points_.size() * 2);
    for (std::size_t i = 0; i < points_.size(); ++i)
        index_.emplace(pack_point(points_[i], base), i);
}

std::vector<double> SimplexGrid::point(std::size_t index) const {
    std::vector<double> p(dim_);
    for (int i = 0; i < dim_; ++i)
        p[i] = static_cast<double>(points_[index][i]) / resolution_;
    return p;
}

std::size_t SimplexGrid::lookup(const std::vector<int>& raw) const {
    const std::uint64_t base = static_cast<std::uint64_t>(resolution_) + 1;
    const auto it = index_.find(pack_point(raw, base));
    if (it == index_.end())
        throw std::logic_error("SimplexGrid: interpolation vertex off the lattice");
    return it->second;
}

std::vector<SimplexGrid::Corner>
SimplexGrid::decompose(std::span<const double> belief) const {
    if (static_cast<int>(belief.size()) != dim_)
        throw std::invalid_argument("SimplexGrid: belief dimension mismatch");

    // Reverse-cumulative coordinates: x_i = resolution * sum_{j >= i} p_j is
    // non-increasing with x_0 = resolution; the Freudenthal cell of x gives
    // the containing lattice simplex.
    std::vector<double> x(dim_);
    double acc = 0.0;
    for (int i = dim_ - 1; i >= 0; --i) {
        acc += std::max(0.0, belief[i]);
        x[i] = acc * resolution_;
    }
    x[0] = static_cast<double>(resolution_);
    std::vector<int> base_vertex(dim_);
    std::vector<double> frac(dim_);
    for (int i = 0; i < dim_; ++i) {
        double xi = std::min(std::max(x[i], 0.0), static_cast<double>(resolution_));
        if (i > 0) xi = std::min(xi, x[i - 1]); // keep non-increasing under fp noise
        x[i] = xi;
        base_vertex[i] = static_cast<int>(std::floor(xi));
        frac[i] = xi - base_vertex[i];
    }
    frac[0] = 0.0;
    base_vertex[0] = resolution_;

    std::vector<int> order(dim_ - 1);
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (frac[a] != frac[b]) return frac[a] > frac[b];
        return a < b;
    });

    std::vector<Corner> corners;
    corners.reserve(dim_);
    std::vector<int> vertex = base_vertex;
    std::vector<int> raw(dim_);
    auto add_corner = [&](double weight) {
        if (weight <= 1e-14) return;
        for (int i = 0; i < dim_; ++i)
            raw[i] = vertex[i] - (i + 1 < dim_ ? vertex[i + 1] : 0);
        corners.push_back({lookup(raw), weight});
    };

    add_corner(1.0 - frac[order.front()]);
    for (int k = 0; k < dim_ - 1; ++k) {
        vertex[order[k]] += 1;
        const double w = (k + 1 < dim_ - 1) ? frac[order[k]] - frac[order[k + 1]]
                                            : frac[order[k]];
        add_corner(w);
    }

    double total = 0.0;
    for (const Corner& c : corners) total += c.weight;
    for (Corner& c : corners) c.weight /= total;
    return corners;
}

double SimplexGrid::interpolate(std::span<const double> values,
                                std::span<const double> belief) const {
    double out = 0.0;
    for (const Corner& c : decompose(belief)) out += c.weight * values[c.index];
    return out;
}

std::vector<QuadratureNode> gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: need n >= 1");
    constexpr double kEps = 1e-14;
    std::vector<QuadratureNode> nodes(n);
    const int half = (n + 1) / 2;
    double z = 0.0, pp = 0.0;
    for (int i = 0; i < half; ++i) {
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * nodes[0].x;
        else if (i == 3)
            z = 1.91 * z - 0.91 * nodes[1].x;
        else
            z = 2.0 * z - nodes[i - 2].x;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 0.7511255444649425; // pi^(-1/4)
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 -
                     std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            const double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= kEps) break;
        }
        nodes[i] = {z, 2.0 / (pp * pp)};
        nodes[n - 1 - i] = {-z, 2.0 / (pp * pp)};
    }
    return nodes;
}

DpObservation DpObservation::discrete(std::vector<std::vector<double>> prob) {
    DpObservation obs;
    obs.kind = Kind::discrete;
    obs.symbol_prob = std::move(prob);
    return obs;
}

DpObservation DpObservation::gaussian(std::vector<std::vector<double>> variances,
                                      int nodes) {
    DpObservation obs;
    obs.kind = Kind::gaussian;
    obs.state_variance = std::move(variances);
    obs.gh_nodes = nodes;
    return obs;
}

DpObservation DpObservation::gaussian_from_geometry(const ObservationModel& model,
                                                    const OriginSet& origins,
                                                    std::span<const Point> sensors,
                                                    int max_radius, int nodes,
                                                    double unit_length) {
    std::vector<std::vector<double>> variances;
    variances.reserve(origins.points.size() * (max_radius + 1));
    for (const Point& o : origins.points) {
        for (int r = 0; r <= max_radius; ++r) {
            std::vector<double> v(sensors.size());
            for (std::size_t a = 0; a < sensors.size(); ++a) {
                v[a] = exposed(sensors[a], o, r)
                           ? alt_variance(model, distance(sensors[a], o) * unit_length)
                           : model.gaussian.sigma2;
            }
            variances.push_back(std::move(v));
        }
    }
    return gaussian(std::move(variances), nodes);
}

int DpObservation::num_states() const {
    return kind == Kind::discrete ? static_cast<int>(symbol_prob.size())
                                  : static_cast<int>(state_variance.size());
}

void DpObservation::validate(int expected_states) const {
    if (num_states() != expected_states)
        throw std::invalid_argument("DpObservation: state count mismatch");
    if (kind == Kind::discrete) {
        if (symbol_prob.empty() || symbol_prob.front().empty())
            throw std::invalid_argument("DpObservation: empty alphabet");
        const std::size_t alphabet = symbol_prob.front().size();
        for (const auto& row : symbol_prob) {
            if (row.size() != alphabet)
                throw std::invalid_argument("DpObservation: ragged alphabet");
            double total = 0.0;
            for (double p : row) {
                if (p < 0.0) throw std::invalid_argument("DpObservation: negative probability");
                total += p;
            }
            if (std::abs(total - 1.0) > 1e-9)
                throw std::invalid_argument("DpObservation: symbol probabilities must sum to 1");
        }
    } else {
        if (gh_nodes < 2) throw std::invalid_argument("DpObservation: need >= 2 nodes");
        for (const auto& row : state_variance)
            for (double v : row)
                if (!(v > 0.0))
                    throw std::invalid_argument("DpObservation: variances must be > 0");
    }
}

void DpModel::validate() const {
    if (M < 1) throw std::invalid_argument("DpModel: M must be >= 1");
    if (chain.max_radius < 1) throw std::invalid_argument("DpModel: max_radius must be >= 1");
    prior.validate();
    if (prior.p_inf != 0.0)
        throw std::invalid_argument("DpModel: p_inf must be 0 (homogeneous program)");
    if (num_states() > 12)
        throw std::invalid_argument("DpModel: instance too large (M*(Rmax+1) > 12)");
    if (!(cost >= 0.0)) throw std::invalid_argument("DpModel: cost must be >= 0");
    obs.validate(num_states());
}

std::vector<double> DpModel::initial() const { return initial_belief(M, prior, chain); }

double DpModel::pi0(std::span<const double> belief) const {
    const int width = chain.max_radius + 1;
    double total = 0.0;
    for (int m = 0; m < M; ++m) total += belief[static_cast<std::size_t>(m) * width];
    return total;
}

std::vector<double> dp_update_discrete(const DpModel& model,
                                       std::span<const double> predicted,
                                       int symbol) {
    std::vector<double> post(predicted.size());
    double total = 0.0;
    for (std::size_t s = 0; s < predicted.size(); ++s) {
        post[s] = predicted[s] * model.obs.symbol_prob[s][symbol];
        total += post[s];
    }
    if (!(total > 0.0))
        throw std::runtime_error("dp_update_discrete: zero posterior mass");
    for (double& p : post) p /= total;
    return post;
}

std::vector<double> dp_update_gaussian(const DpModel& model,
                                       std::span<const double> predicted,
                                       std::span<const double> readings) {
    std::vector<double> logw(predicted.size(),
                             -std::numeric_limits<double>::infinity());
    double max_logw = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < predicted.size(); ++s) {
        if (predicted[s] <= 0.0) continue;
        double ll = std::log(predicted[s]);
        for (std::size_t a = 0; a < readings.size(); ++a)
            ll += loglik_alt(readings[a], model.obs.state_variance[s][a]);
        logw[s] = ll;
        max_logw = std::max(max_logw, ll);
    }
    std::vector<double> post(predicted.size(), 0.0);
    double total = 0.0;
    for (std::size_t s = 0; s < predicted.size(); ++s) {
        if (std::isfinite(logw[s])) {
            post[s] = std::exp(logw[s] - max_logw);
            total += post[s];
        }
    }
    if (!(total > 0.0))
        throw std::runtime_error("dp_update_gaussian: zero posterior mass");
    for (double& p : post) p /= total;
    return post;
}

double continuation_value(const DpModel& model, const SimplexGrid& grid,
                          std::span<const double> values,
                          std::span<const double> belief) {
    const std::vector<double> q =
        predict_vector(belief, model.M, model.chain, model.prior, 1);
    double expectation = 0.0;

    if (model.obs.kind == DpObservation::Kind::discrete) {
        const std::size_t alphabet = model.obs.symbol_prob.front().size();
        for (std::size_t sym = 0; sym < alphabet; ++sym) {
            double weight = 0.0;
            for (std::size_t s = 0; s < q.size(); ++s)
                weight += q[s] * model.obs.symbol_prob[s][sym];
            if (weight <= 0.0) continue;
            const std::vector<double> post =
                dp_update_discrete(model, q, static_cast<int>(sym));
            expectation += weight * grid.interpolate(values, post);
        }
        return expectation;
    }

    static thread_local std::vector<QuadratureNode> cached_nodes;
    static thread_local int cached_n = -1;
    if (cached_n != model.obs.gh_nodes) {
        cached_nodes = gauss_hermite(model.obs.gh_nodes);
        cached_n = model.obs.gh_nodes;
    }
    const auto& nodes = cached_nodes;
    constexpr double kInvSqrtPi = 0.5641895835477563;

    const std::size_t sensors = model.obs.state_variance.front().size();
    std::vector<std::size_t> odo(sensors, 0);
    std::vector<double> reading(sensors);
    for (std::size_t s = 0; s < q.size(); ++s) {
        if (q[s] <= 0.0) continue;
        std::fill(odo.begin(), odo.end(), 0);
        while (true) {
            double weight = q[s];
            for (std::size_t a = 0; a < sensors; ++a) {
                const QuadratureNode& node = nodes[odo[a]];
                weight *= node.w * kInvSqrtPi;
                reading[a] = std::sqrt(2.0 * model.obs.state_variance[s][a]) * node.x;
            }
            const std::vector<double> post = dp_update_gaussian(model, q, reading);
            expectation += weight * grid.interpolate(values, post);
            // odometer over the tensor-product nodes
            std::size_t a = 0;
            while (a < sensors && ++odo[a] == nodes.size()) odo[a++] = 0;
            if (a == sensors) break;
        }
    }
    return expectation;
}

ValueTable backward_induction(const DpModel& model, int horizon, int resolution) {
    model.validate();
    if (horizon < 0) throw std::invalid_argument("backward_induction: horizon must be >= 0");
    ValueTable table{horizon, model.cost, SimplexGrid(model.num_states(), resolution), {}, {}};
    const std::size_t P = table.grid.size();

    std::vector<std::vector<double>> beliefs(P);
    std::vector<double> pi0(P);
    for (std::size_t g = 0; g < P; ++g) {
        beliefs[g] = table.grid.point(g);
        pi0[g] = model.pi0(beliefs[g]);
    }

    table.J.assign(horizon + 1, std::vector<double>(P, 0.0));
    table.D.assign(horizon, std::vector<double>(P, 0.0));
    table.J[horizon] = pi0;
    for (int n = horizon - 1; n >= 0; --n) {
        for (std::size_t g = 0; g < P; ++g) {
            const double d = continuation_value(model, table.grid, table.J[n + 1], beliefs[g]);
            table.D[n][g] = d;
            table.J[n][g] = std::min(pi0[g], model.cost * (1.0 - pi0[g]) + d);
        }
    }
    return table;
}

bool dp_policy_stop(const DpModel& model, const ValueTable& table, int n,
                    std::span<const double> belief) {
    if (n >= table.horizon) return true;
    const double pi0 = model.pi0(belief);
    const double d = table.grid.interpolate(table.D[n], belief);
    return pi0 <= model.cost * (1.0 - pi0) + d;
}

StationaryPolicy value_iterate(const DpModel& model, int resolution, double tol,
                               int max_iterations) {
    model.validate();
    StationaryPolicy policy{SimplexGrid(model.num_states(), resolution), {}, {},
                            model.cost, 0};
    const std::size_t P = policy.grid.size();
    std::vector<std::vector<double>> beliefs(P);
    std::vector<double> pi0(P);
    for (std::size_t g = 0; g < P; ++g) {
        beliefs[g] = policy.grid.point(g);
        pi0[g] = model.pi0(beliefs[g]);
    }
    policy.J = pi0;
    policy.D.assign(P, 0.0);
    std::vector<double> next(P, 0.0);
    for (int it = 0; it < max_iterations; ++it) {
        double delta = 0.0;
        for (std::size_t g = 0; g < P; ++g) {
            const double d = continuation_value(model, policy.grid, policy.J, beliefs[g]);
            policy.D[g] = d;
            next[g] = std::min(pi0[g], model.cost * (1.0 - pi0[g]) + d);
            delta = std::max(delta, std::abs(next[g] - policy.J[g]));
        }
        policy.J.swap(next);
        policy.iterations = it + 1;
        if (delta < tol) break;
    }
    return policy;
}

bool stationary_policy_stop(const DpModel& model, const StationaryPolicy& policy,
                            std::span<const double> belief) {
    const double pi0 = model.pi0(belief);
    const double d = policy.grid.interpolate(policy.D, belief);
    return pi0 <= model.cost * (1.0 - pi0) + d;
}

namespace {

int sample_symbol(const std::vector<double>& prob, Rng& rng) {
    const double u = rng.uniform();
    double acc = 0.0;
    for (std::size_t i = 0; i < prob.size(); ++i) {
        acc += prob[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(prob.size()) - 1;
}

} // namespace

RiskEstimate bayes_risk(const DpModel& model, const StopPolicy& policy,
                        long trials, std::uint64_t seed, long slot_cap) {
    model.validate();
    const int width = model.chain.max_radius + 1;
    std::vector<double> risks(trials);
    for (long trial = 0; trial < trials; ++trial) {
        Rng truth_rng = substream(seed, 0, trial, Stream::truth);
        Rng growth_rng = substream(seed, 0, trial, Stream::growth);
        Rng obs_rng = substream(seed, 0, trial, Stream::readings);

        const auto change = sample_change_slot(model.prior, truth_rng);
        const long t = *change; // p_inf = 0, always finite
        const int origin =
            std::min(model.M - 1, static_cast<int>(truth_rng.uniform() * model.M));

        std::vector<double> belief = model.initial();
        long stop = slot_cap;
        if (policy(0, belief)) {
            stop = 0;
        } else {
            int radius = t == 0 ? 1 : 0;
            std::vector<double> reading;
            for (long n = 1; n <= slot_cap; ++n) {
                radius = advance_radius(radius, n, change, model.prior.rho1,
                                        model.chain.max_radius, growth_rng);
                const int state = origin * width + radius;
                std::vector<double> predicted =
                    predict_vector(belief, model.M, model.chain, model.prior, n);
                if (model.obs.kind == DpObservation::Kind::discrete) {
                    const int sym = sample_symbol(model.obs.symbol_prob[state], obs_rng);
                    belief = dp_update_discrete(model, predicted, sym);
                } else {
                    const auto& variances = model.obs.state_variance[state];
                    reading.resize(variances.size());
                    for (std::size_t a = 0; a < variances.size(); ++a)
                        reading[a] = obs_rng.normal() * std::sqrt(variances[a]);
                    belief = dp_update_gaussian(model, predicted, reading);
                }
                if (policy(n, belief)) {
                    stop = n;
                    break;
                }
            }
        }
        risks[trial] = (stop < t ? 1.0 : 0.0) +
                       model.cost * std::max(0.0, static_cast<double>(stop - t));
    }
    const Interval ci = t_interval(risks);
    return {mean_of(risks), ci.lo, ci.hi};
}

double best_threshold_misclassification(std::span<const double> pi0,
                                        const std::vector<bool>& stop_label) {
    const std::size_t n = pi0.size();
    if (n == 0 || stop_label.size() != n)
        throw std::invalid_argument("best_threshold_misclassification: size mismatch");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return pi0[a] < pi0[b]; });

    long total_stop = 0;
    for (bool s : stop_label) total_stop += s ? 1 : 0;

    // Threshold rule: stop iff pi0 <= q. Cut positions are the boundaries
    // between groups of equal pi0 values (plus "stop nothing").
    long best = total_stop; // q below every pi0: misses every stop label
    long stops_below = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && pi0[order[j]] == pi0[order[i]]) {
            stops_below += stop_label[order[j]] ? 1 : 0;
            ++j;
        }
        const long k = static_cast<long>(j);
        const long mis = (k - stops_below) + (total_stop - stops_below);
        best = std::min(best, mis);
        i = j;
    }
    return static_cast<double>(best) / static_cast<double>(n);
}

std::vector<ThresholdDiagnosticRow>
threshold_diagnostic(DpModel model, std::span<const double> rhos, int resolution) {
    std::vector<ThresholdDiagnosticRow> rows;
    rows.reserve(rhos.size());
    for (double rho : rhos) {
        model.prior.rho = rho;
        // Sharper of tol and the rho scale so tiny-rho regions stay resolved.
        const StationaryPolicy policy =
            value_iterate(model, resolution, std::min(1e-10, rho * 1e-6), 200000);
        const std::size_t P = policy.grid.size();
        std::vector<double> pi0(P);
        std::vector<bool> stop(P);
        double max_psi = 0.0;
        for (std::size_t g = 0; g < P; ++g) {
            const std::vector<double> belief = policy.grid.point(g);
            pi0[g] = model.pi0(belief);
            stop[g] = pi0[g] <= model.cost * (1.0 - pi0[g]) + policy.D[g];
            max_psi = std::max(max_psi,
                               std::abs(policy.D[g] - (1.0 - rho) * pi0[g]));
        }
        rows.push_back({rho, best_threshold_misclassification(pi0, stop),
                        max_psi / rho, P});
    }
    return rows;
}

} // namespace wavefront
