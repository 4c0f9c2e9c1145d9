#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "support/oracles.hpp"
#include "wavefront/posterior.hpp"

using namespace wavefront;

namespace {

ObservationModel flat_model(double sigma2 = 1.0, double gamma2 = 1.0) {
    ObservationModel m;
    m.family = ObservationModel::Family::flat_gaussian;
    m.gaussian = {sigma2, gamma2};
    return m;
}

using oracles::SmallInstance;

SmallInstance random_instance(Rng& rng, bool with_p_inf = false) {
    return oracles::random_small_instance(rng, with_p_inf);
}

double run_filter_against_oracle(const SmallInstance& inst) {
    Filter filter(inst.origins, {inst.max_radius, inst.params.rho1, 1}, inst.params,
                  inst.model);
    for (const auto& frame : inst.frames) filter.step(frame);

    const oracles::BruteForcePosterior oracle(inst.origins, inst.params,
                                              inst.max_radius, inst.model);
    const std::vector<double> expected = oracle.posterior(inst.frames);
    double err = 0.0;
    for (std::size_t i = 0; i < expected.size(); ++i)
        err = std::max(err, std::abs(expected[i] - filter.belief().probs[i]));
    return err;
}

} // namespace

TEST_CASE("prediction: deterministic growth moves all mass one step") {
    const PriorParams params{0.1, 1.0, 0.0};
    const RadiusChain chain{6, 1.0, 1};
    BeliefState belief;
    belief.num_origins = 2;
    belief.max_radius = 6;
    belief.probs.assign(14, 0.0);
    belief.at(1, 3) = 1.0;
    const auto predicted = predict(belief, chain, params, 5);
    CHECK(predicted[1 * 7 + 4] == doctest::Approx(1.0));

    belief.probs.assign(14, 0.0);
    belief.at(0, 6) = 1.0; // absorbed at the cap
    const auto capped = predict(belief, chain, params, 5);
    CHECK(capped[0 * 7 + 6] == doctest::Approx(1.0));
}

TEST_CASE("prediction with no observations equals the Markov chain power") {
    const PriorParams params{0.07, 0.3, 0.2};
    const int M = 2, rmax = 3;
    const RadiusChain chain{rmax, params.rho1, 1};
    std::vector<double> belief = initial_belief(M, params, chain);
    std::vector<double> reference = belief;
    for (long n = 1; n <= 8; ++n) {
        belief = predict_vector(belief, M, chain, params, n);
        reference = oracles::chain_step(
            reference, oracles::transition_matrix(M, params, rmax, n));
        for (std::size_t i = 0; i < belief.size(); ++i)
            CHECK(belief[i] == doctest::Approx(reference[i]).epsilon(1e-12));
    }
}

TEST_CASE("unit likelihood ratio leaves the prediction untouched") {
    Rng rng(888);
    SmallInstance inst = random_instance(rng);
    inst.model = flat_model(1.0, 0.0); // f1 == f0
    Filter filter(inst.origins, {inst.max_radius, inst.params.rho1, 1}, inst.params,
                  inst.model);
    std::vector<double> reference = filter.belief().probs;
    for (const auto& frame : inst.frames) {
        reference = predict_vector(reference, inst.origins.size(),
                                   {inst.max_radius, inst.params.rho1, 1}, inst.params,
                                   frame.slot);
        filter.step(frame);
        for (std::size_t i = 0; i < reference.size(); ++i)
            CHECK(filter.belief().probs[i] == doctest::Approx(reference[i]).epsilon(1e-12));
    }
}

TEST_CASE("empty frames reduce the update to pure prediction") {
    const PriorParams params{0.05, 0.5, 0.0};
    OriginSet origins;
    origins.points = {{1.0, 1.0}};
    Filter filter(origins, {3, params.rho1, 1}, params, flat_model());
    ObservationFrame empty;
    empty.slot = 1;
    filter.step(empty);
    const auto expected =
        predict_vector(initial_belief(1, params, {3, params.rho1, 1}), 1,
                       {3, params.rho1, 1}, params, 1);
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(filter.belief().probs[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("recursive filter matches brute-force enumeration") {
    Rng rng(314159);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
        const SmallInstance inst = random_instance(rng, i % 3 == 0);
        worst = std::max(worst, run_filter_against_oracle(inst));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("deterministic growth reduces to a change-point sum") {
    // With rho1 = 1 the radius path is determined by t, so the posterior is
    // a direct sum over change points.
    Rng rng(2718);
    SmallInstance inst = random_instance(rng);
    inst.params.rho1 = 1.0;
    inst.params.p_inf = 0.0;

    Filter filter(inst.origins, {inst.max_radius, 1.0, 1}, inst.params, inst.model);
    for (const auto& frame : inst.frames) filter.step(frame);

    const int n = static_cast<int>(inst.frames.size());
    const int M = inst.origins.size();
    const int width = inst.max_radius + 1;
    std::vector<double> direct(static_cast<std::size_t>(M) * width, 0.0);
    for (int m = 0; m < M; ++m) {
        // change at slot t <= n gives radius min(n - t + 1, rmax); t > n means 0
        for (long t = 0;; ++t) {
            const double prior = t <= n
                                     ? prior_pmf(inst.params.rho, t)
                                     : std::pow(1.0 - inst.params.rho, n + 1); // P(t > n)
            double like = 1.0;
            for (int slot = 1; slot <= n; ++slot) {
                const int radius =
                    t <= slot ? std::min<long>(slot - t + 1, inst.max_radius) : 0;
                like *= oracles::frame_likelihood(inst.frames[slot - 1],
                                                  inst.origins.points[m], radius,
                                                  inst.model, 1.0);
            }
            const int final_radius =
                t <= n ? static_cast<int>(std::min<long>(n - t + 1, inst.max_radius)) : 0;
            direct[static_cast<std::size_t>(m) * width + final_radius] +=
                prior * like / M;
            if (t > n) break;
        }
    }
    double total = 0.0;
    for (double w : direct) total += w;
    for (std::size_t i = 0; i < direct.size(); ++i)
        CHECK(filter.belief().probs[i] == doctest::Approx(direct[i] / total).epsilon(1e-9));
}

TEST_CASE("change posterior and per-origin posteriors") {
    const PriorParams params{0.02, 0.25, 0.0};
    const RadiusChain chain{4, 0.25, 1};
    const BeliefState initial = make_initial_belief(3, params, chain);
    CHECK(initial.change_posterior() == doctest::Approx(0.98));

    // M = 1: W = 1 - pi0
    const BeliefState single = make_initial_belief(1, params, chain);
    CHECK(*single.per_origin_posterior(0) ==
          doctest::Approx(1.0 - single.change_posterior()));

    // zero origin marginal is signalled, not fabricated
    BeliefState degenerate = single;
    degenerate.num_origins = 1;
    degenerate.probs.assign(5, 0.0);
    CHECK_FALSE(degenerate.per_origin_posterior(0).has_value());
}

TEST_CASE("per-origin decomposition identity holds along filtering runs") {
    Rng rng(99991);
    for (int rep = 0; rep < 10; ++rep) {
        const SmallInstance inst = random_instance(rng);
        Filter filter(inst.origins, {inst.max_radius, inst.params.rho1, 1},
                      inst.params, inst.model);
        for (const auto& frame : inst.frames) {
            filter.step(frame);
            const BeliefState& belief = filter.belief();
            const double pi0 = belief.change_posterior();
            double odds = 0.0;
            bool ok = true;
            for (int m = 0; m < belief.num_origins; ++m) {
                const auto w = belief.per_origin_posterior(m);
                REQUIRE(w.has_value());
                CHECK(*w >= 0.0);
                CHECK(*w <= 1.0);
                if (*w >= 1.0 - 1e-12) ok = false;
                else odds += *w / (1.0 - *w);
            }
            if (ok)
                CHECK(pi0 ==
                      doctest::Approx(belief.num_origins / (belief.num_origins + odds))
                          .epsilon(1e-10));
        }
    }
}

TEST_CASE("update rejects ragged frames and keeps normalization") {
    const PriorParams params{0.05, 0.5, 0.0};
    OriginSet origins;
    origins.points = {{0.5, 0.5}};
    Filter filter(origins, {3, 0.5, 1}, params, flat_model());
    ObservationFrame ragged;
    ragged.slot = 1;
    ragged.locations = {{0.0, 0.0}};
    ragged.readings = {0.1, 0.2};
    CHECK_THROWS_AS(filter.step(ragged), std::invalid_argument);

    Rng rng(6);
    for (int rep = 0; rep < 5; ++rep) {
        const SmallInstance inst = random_instance(rng);
        Filter f(inst.origins, {inst.max_radius, inst.params.rho1, 1}, inst.params,
                 inst.model);
        for (const auto& frame : inst.frames) {
            f.step(frame);
            CHECK(std::abs(f.belief().sum() - 1.0) < 1e-9);
            // reachability: mass cannot outrun one unit per slot
            for (int m = 0; m < f.belief().num_origins; ++m)
                for (int r = static_cast<int>(frame.slot) + 2; r <= inst.max_radius; ++r)
                    CHECK(f.belief().at(m, r) == 0.0);
        }
    }
}

TEST_CASE("stationary-sensor cache path matches the uncached update") {
    Rng rng(777222);
    SmallInstance inst = random_instance(rng);
    // freeze the sensor layout: every slot reuses the first frame's locations
    for (auto& frame : inst.frames)
        frame.locations = inst.frames.front().locations;

    const RadiusChain chain{inst.max_radius, inst.params.rho1, 1};
    Filter filter(inst.origins, chain, inst.params, inst.model);
    std::vector<double> reference =
        initial_belief(inst.origins.size(), inst.params, chain);
    for (const auto& frame : inst.frames) {
        filter.step(frame); // second step onwards hits the distance cache
        reference = update(predict_vector(reference, inst.origins.size(), chain,
                                          inst.params, frame.slot),
                           frame, inst.origins, inst.model, 1.0, frame.slot)
                        .probs;
        for (std::size_t i = 0; i < reference.size(); ++i)
            CHECK(filter.belief().probs[i] ==
                  doctest::Approx(reference[i]).epsilon(1e-13));
    }
}

TEST_CASE("brute-force enumeration with no frames returns the prior belief") {
    Rng rng(121);
    const SmallInstance inst = random_instance(rng);
    const oracles::BruteForcePosterior oracle(inst.origins, inst.params,
                                              inst.max_radius, inst.model);
    const auto prior = oracle.posterior({});
    const auto expected = initial_belief(inst.origins.size(), inst.params,
                                         {inst.max_radius, inst.params.rho1, 1});
    for (std::size_t i = 0; i < expected.size(); ++i)
        CHECK(prior[i] == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("an all-zero predicted vector aborts with a diagnostic") {
    OriginSet origins;
    origins.points = {{0.0, 0.0}};
    ObservationFrame frame;
    frame.slot = 1;
    frame.locations = {{0.5, 0.5}};
    frame.readings = {0.3};
    CHECK_THROWS_AS(update(std::vector<double>(3, 0.0), frame, origins, flat_model(),
                           1.0, 1),
                    std::runtime_error);
}

TEST_CASE("frames must arrive in slot order") {
    OriginSet origins;
    origins.points = {{0.0, 0.0}};
    Filter filter(origins, {2, 0.5, 1}, {0.1, 0.5, 0.0}, flat_model());
    ObservationFrame frame;
    frame.slot = 2;
    CHECK_THROWS_AS(filter.step(frame), std::invalid_argument);
}
