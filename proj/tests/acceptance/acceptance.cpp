// Acceptance suite: end-to-end checks of the statistical guarantees, run
// as one numbered criterion per invocation (or all of them). Each check
// prints a single [PASS]/[FAIL] line; the exit code is the number of
// failures.
//
//   acceptance [--criterion N] [--workers K] [--wfsim PATH]

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../support/oracles.hpp"
#include "wavefront/asymptotics.hpp"
#include "wavefront/dp.hpp"
#include "wavefront/harness.hpp"
#include "wavefront/stats.hpp"

using namespace wavefront;
namespace fs = std::filesystem;

namespace {

int g_workers = 2;
std::string g_wfsim_path;

struct Outcome {
    bool pass;
    std::string detail;
};

void report(int criterion, const std::string& title, const Outcome& outcome,
            int& failures) {
    std::printf("[%s] criterion %d: %s (%s)\n", outcome.pass ? "PASS" : "FAIL",
                criterion, title.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// criterion 1: recursive filter vs brute-force enumeration
// ---------------------------------------------------------------------------
Outcome criterion_1() {
    Rng rng(20260811);
    double worst = 0.0;
    const int instances = 120;
    for (int i = 0; i < instances; ++i) {
        const auto inst = oracles::random_small_instance(rng, i % 3 == 0);
        Filter filter(inst.origins, {inst.max_radius, inst.params.rho1, 1},
                      inst.params, inst.model);
        for (const auto& frame : inst.frames) filter.step(frame);
        const oracles::BruteForcePosterior oracle(inst.origins, inst.params,
                                                  inst.max_radius, inst.model);
        const auto expected = oracle.posterior(inst.frames);
        for (std::size_t j = 0; j < expected.size(); ++j)
            worst = std::max(worst, std::abs(expected[j] - filter.belief().probs[j]));
    }
    return {worst <= 1e-10, std::to_string(instances) +
                                " instances, max belief error " + fmt(worst) +
                                " <= 1e-10"};
}

// ---------------------------------------------------------------------------
// shared flat-field scenario for criteria 2, 4, 9
// ---------------------------------------------------------------------------
ScenarioConfig flat_field_config() {
    ScenarioConfig c;
    c.scenario = "acceptance";
    c.domain = Domain::square(10.0);
    c.sensor_count = 25; // desk-scale sensor count
    c.policy = SensorPolicy::per_slot_resample;
    c.prior = {0.02, 0.25, 0.0};
    c.model.family = ObservationModel::Family::flat_gaussian;
    c.model.gaussian = {1.0, 1.0};
    c.origin_mode = TrueOriginMode::uniform;
    c.trials = 2000;
    c.seed = 715517;
    return c;
}

RuleConfig rule(RuleKind kind, const std::string& name, double alpha, int M,
                int increment = 1) {
    RuleConfig r;
    r.kind = kind;
    r.name = name;
    r.alpha = alpha;
    r.M_detector = M;
    r.mismatch_increment = increment;
    return r;
}

Outcome pfa_control(const ScenarioConfig& config) {
    const auto result = run_scenario_detail(config, g_workers);
    bool pass = true;
    double worst_margin = -1.0;
    std::string worst_cell = "none";
    for (const auto& cell : result.cells) {
        long alarms = 0;
        for (const auto& trial : cell.trials) alarms += trial.false_alarm ? 1 : 0;
        const double alpha = *cell.sweep_value;
        const double lower =
            wilson_lower_bound(alarms, static_cast<long>(cell.trials.size()), 0.95);
        if (lower > alpha) pass = false;
        const double margin = lower - alpha;
        if (margin > worst_margin) {
            worst_margin = margin;
            worst_cell = cell.procedure + "@alpha=" + fmt(alpha) + ": pfa=" +
                         fmt(static_cast<double>(alarms) / cell.trials.size()) +
                         ", ci_lo=" + fmt(lower);
        }
    }
    return {pass, std::to_string(result.cells.size()) +
                      " cells, one-sided 95% lower bound <= alpha; tightest " +
                      worst_cell};
}

Outcome criterion_2() {
    ScenarioConfig config = flat_field_config();
    config.rules = {rule(RuleKind::rp, "rp-m10", 0.01, 10),
                    rule(RuleKind::rp, "rp-m50", 0.01, 50),
                    rule(RuleKind::rp_mismatched, "rp-mismatched", 0.01, 50, 5),
                    rule(RuleKind::oracle, "oracle", 0.01, 1),
                    rule(RuleKind::instant, "instant", 0.01, 1)};
    config.sweep = SweepSpec{"alpha", {0.1, 0.05, 0.01}};
    return pfa_control(config);
}

// ---------------------------------------------------------------------------
// criterion 3: FDR control across parallel clusters
// ---------------------------------------------------------------------------
Outcome criterion_3() {
    ScenarioConfig config = builtin_scenarios("table2").at(0);
    config.scenario = "acceptance-fdr";
    config.rules = {rule(RuleKind::rp, "rp-m10", 0.01, 10),
                    rule(RuleKind::oracle, "oracle", 0.01, 1)};
    config.sweep = SweepSpec{"alpha", {0.1, 0.05, 0.01}};
    config.trials = 400; // Monte Carlo runs of K = 20 clusters
    const auto result = run_scenario_detail(config, g_workers);
    bool pass = true;
    std::ostringstream detail;
    detail << result.cells.size() << " cells (K=20, p_inf=0.3, deadline=250):";
    for (const auto& cell : result.cells) {
        const double alpha = *cell.sweep_value;
        const double lower = t_lower_bound(cell.parallel->run_fdp, 0.95);
        if (lower > alpha) pass = false;
        if (cell.procedure == "rp-m10")
            detail << " fdr@" << fmt(alpha) << "=" << fmt(cell.parallel->fdr);
    }
    return {pass, detail.str() + "; one-sided 95% lower bound <= alpha in all cells"};
}

// ---------------------------------------------------------------------------
// criterion 4: delay ordering and monotonicity in the growth rate
// ---------------------------------------------------------------------------
Outcome criterion_4() {
    ScenarioConfig config = flat_field_config();
    config.rules = {rule(RuleKind::oracle, "oracle", 0.01, 1),
                    rule(RuleKind::rp, "rp-m50", 0.01, 50),
                    rule(RuleKind::instant, "instant", 0.01, 1)};
    config.sweep = SweepSpec{"rho1", {0.1, 0.25, 0.5, 1.0}};
    const auto result = run_scenario_detail(config, g_workers);

    auto row = [&](const std::string& proc, double rho1) -> const ResultRow& {
        for (const auto& r : result.rows)
            if (r.procedure == proc && std::abs(*r.sweep_value - rho1) < 1e-12)
                return r;
        throw std::logic_error("missing row");
    };

    bool pass = true;
    std::ostringstream detail;
    const ResultRow& oracle = row("oracle", 0.25);
    const ResultRow& rp = row("rp-m50", 0.25);
    const ResultRow& instant = row("instant", 0.25);
    detail << "add@rho1=0.25: oracle=" << fmt(*oracle.add) << " rp=" << fmt(*rp.add)
           << " instant=" << fmt(*instant.add);
    if (!(*oracle.add <= *rp.add && *rp.add <= *instant.add)) pass = false;
    // RP vs Instant separated by non-overlapping 95% intervals
    if (!(*rp.add_ci_hi < *instant.add_ci_lo)) pass = false;
    detail << "; rp ci_hi=" << fmt(*rp.add_ci_hi)
           << " < instant ci_lo=" << fmt(*instant.add_ci_lo);

    for (const std::string proc : {"oracle", "rp-m50", "instant"}) {
        double prev = row(proc, 0.1).add.value();
        for (double rho1 : {0.25, 0.5, 1.0}) {
            const double add = row(proc, rho1).add.value();
            if (add > prev) pass = false;
            prev = add;
        }
    }
    detail << "; add non-increasing in rho1 for all procedures";
    return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 5: q_phi closed form vs quadrature vs density limit
// ---------------------------------------------------------------------------
Outcome criterion_5() {
    double worst = 0.0;
    for (double phi : {0.1, 1.0, 10.0, 100.0})
        for (double R : {1.0, 10.0, 100.0})
            worst = std::max(worst,
                             std::abs(q_phi_quadrature(phi, R, 2.0) - q_phi_closed(phi, R)));
    bool pass = worst <= 1e-8;

    double degenerate = 0.0;
    for (double phi : {0.1, 1.0, 10.0, 100.0})
        degenerate = std::max(degenerate, std::abs(q_phi_closed(phi, 1.0) -
                                                   0.5 * (phi - std::log1p(phi))));
    if (degenerate > 1e-12) pass = false;

    double worst_rel = 0.0;
    for (double lambda : {0.5, 2.0})
        for (double phi : {0.1, 1.0, 10.0}) {
            const double R = 100.0; // R^2 = 1e4
            const double exact = lambda * R * R * q_phi_closed(phi, R);
            const double limit = drift_density_limit(phi, lambda);
            worst_rel = std::max(worst_rel, std::abs(exact - limit) / limit);
        }
    if (worst_rel > 0.01) pass = false;

    return {pass, "max |closed-quadrature| " + fmt(worst) + " <= 1e-8; R=1 gap " +
                      fmt(degenerate) + " <= 1e-12; density-limit rel err " +
                      fmt(worst_rel) + " <= 1%"};
}

// ---------------------------------------------------------------------------
// criterion 6: observed ADD approaches the asymptotic approximation
// ---------------------------------------------------------------------------
Outcome criterion_6() {
    const double disk_radius = 5.0;
    const int L = 50;
    ScenarioConfig config;
    config.scenario = "acceptance-asymptotic";
    config.domain = Domain::disk({0.0, 0.0}, disk_radius);
    config.sensor_count = L;
    config.policy = SensorPolicy::per_slot_resample;
    config.prior = {0.01, 1.0, 0.0};
    config.model.family = ObservationModel::Family::attenuating_gaussian;
    config.model.gaussian = {1.0, 1.0};
    config.model.path_loss = {2.0, 1.0, DistanceClamp::unit_floor};
    config.origin_mode = TrueOriginMode::grid; // single origin: the disk center
    config.true_origin_M = 1;
    config.rules = {rule(RuleKind::oracle, "oracle", 0.001, 1)};
    config.sweep = SweepSpec{"alpha", {0.1, 0.01, 0.001}};
    config.trials = 2000;
    config.seed = 424243;

    const auto rows = run_scenario(config, g_workers);
    const double q = q_phi_closed(1.0, disk_radius);
    bool pass = true;
    std::ostringstream detail;
    detail << "observed/approx ratios:";
    double prev_ratio = std::numeric_limits<double>::infinity();
    double last_ratio = 0.0;
    for (const auto& row : rows) {
        const double approx =
            add_approx_attenuating(*row.sweep_value, config.prior.rho, L, q);
        const double ratio = *row.add / approx;
        detail << " alpha=" << fmt(*row.sweep_value) << ": " << fmt(ratio);
        if (!std::isfinite(ratio)) pass = false;
        if (ratio > prev_ratio + 1e-9) pass = false; // monotone toward 1
        prev_ratio = ratio;
        last_ratio = ratio;
    }
    if (!(last_ratio >= 0.7 && last_ratio <= 2.0)) pass = false;
    detail << "; decreasing, final in [0.7, 2.0]";
    return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 7: dynamic-programming suite on the tiny instance
// ---------------------------------------------------------------------------
DpModel acceptance_dp_model(double rho = 0.05, double cost = 0.05) {
    DpModel model;
    model.M = 1;
    model.chain = {1, 1.0, 1};
    model.prior = {rho, 1.0, 0.0};
    model.cost = cost;
    model.obs = DpObservation::discrete({{0.75, 0.25}, {0.35, 0.65}});
    return model;
}

Outcome criterion_7() {
    const DpModel model = acceptance_dp_model();
    bool pass = true;
    std::ostringstream detail;

    // (a) monotone in the horizon, exactly, at every grid point
    const int res = 800;
    const ValueTable t8 = backward_induction(model, 8, res);
    const ValueTable t9 = backward_induction(model, 9, res);
    long violations = 0;
    for (int n = 0; n <= 8; ++n)
        for (std::size_t g = 0; g < t8.grid.size(); ++g)
            if (t8.J[n][g] < t9.J[n][g]) ++violations;
    if (violations != 0) pass = false;
    detail << "J_n^N >= J_n^{N+1}: " << violations << " violations";

    // (b) DP policy risk <= best pi-threshold risk + eps (paired seeds)
    const StationaryPolicy policy = value_iterate(model, res, 1e-12, 40000);
    const long trials = 20000;
    const std::uint64_t seed = 8899;
    const auto dp_risk = bayes_risk(
        model,
        [&](long, std::span<const double> b) {
            return stationary_policy_stop(model, policy, b);
        },
        trials, seed);
    double best_threshold_risk = std::numeric_limits<double>::infinity();
    double best_half = 0.0;
    for (double q : {0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7}) {
        const auto r = bayes_risk(
            model,
            [&](long, std::span<const double> b) { return model.pi0(b) <= q; },
            trials, seed);
        if (r.mean < best_threshold_risk) {
            best_threshold_risk = r.mean;
            best_half = (r.ci_hi - r.ci_lo) / 2.0;
        }
    }
    const double eps = (dp_risk.ci_hi - dp_risk.ci_lo) / 2.0 + best_half + 2e-3;
    if (!(dp_risk.mean <= best_threshold_risk + eps)) pass = false;
    detail << "; dp risk " << fmt(dp_risk.mean) << " <= best threshold "
           << fmt(best_threshold_risk) << " + " << fmt(eps);

    // (c) threshold structure emerges as the change becomes rare
    const std::vector<double> rhos{0.1, 0.01, 0.001};
    const auto diag = threshold_diagnostic(model, rhos, 200);
    for (std::size_t i = 1; i < diag.size(); ++i)
        if (diag[i].misclassification_rate > diag[i - 1].misclassification_rate + 1e-12)
            pass = false;
    detail << "; misclassification";
    for (const auto& row : diag) detail << " " << fmt(row.misclassification_rate);
    return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 8: per-origin decomposition identity and T_RP <= T*
// ---------------------------------------------------------------------------
Outcome criterion_8() {
    ScenarioContext ctx;
    ctx.domain = Domain::square(8.0);
    ctx.sensor_count = 12;
    ctx.policy = SensorPolicy::per_slot_resample;
    ctx.prior = {0.05, 0.5, 0.0};
    ctx.model.family = ObservationModel::Family::flat_gaussian;
    ctx.model.gaussian = {1.0, 1.5};
    ctx.finalize();

    // identity on at least 1000 filtering steps
    long steps = 0;
    double worst = 0.0;
    Rng seeder(31);
    OriginSet origins = build_origin_grid(ctx.domain, 6);
    for (long trial = 0; steps < 1000; ++trial) {
        Filter filter(origins, {ctx.max_radius, ctx.prior.rho1, 1}, ctx.prior, ctx.model);
        Rng growth = substream(4001, 0, trial, Stream::growth);
        Rng sensors_rng = substream(4001, 0, trial, Stream::sensors);
        Rng readings = substream(4001, 0, trial, Stream::readings);
        Rng truth = substream(4001, 0, trial, Stream::truth);
        const auto t = sample_change_slot(ctx.prior, truth);
        const Point origin = sample_true_origin(ctx, truth);
        SensorStream stream(ctx.domain, ctx.sensor_count, ctx.policy, sensors_rng);
        int radius = (t && *t == 0) ? 1 : 0;
        for (long n = 1; n <= 30; ++n, ++steps) {
            radius = advance_radius(radius, n, t, ctx.prior.rho1, ctx.max_radius, growth);
            filter.step(sample_frame(origin, radius, stream.at_slot(n), ctx.model, 1.0,
                                     readings));
            const BeliefState& belief = filter.belief();
            const double pi0 = belief.change_posterior();
            double odds = 0.0;
            bool usable = true;
            for (int m = 0; m < belief.num_origins && usable; ++m) {
                const auto w = belief.per_origin_posterior(m);
                if (!w || *w >= 1.0 - 1e-12) usable = false;
                else odds += *w / (1.0 - *w);
            }
            if (usable)
                worst = std::max(
                    worst, std::abs(pi0 - belief.num_origins / (belief.num_origins + odds)));
        }
    }
    bool pass = worst <= 1e-10;
    std::ostringstream detail;
    detail << steps << " steps, max identity error " << fmt(worst) << " <= 1e-10";

    // T_RP <= T* path-wise on 500 trials
    DetectorSpec rp_spec, star_spec;
    rp_spec.rule = rule(RuleKind::rp, "rp", 0.02, 9);
    rp_spec.thresholds = {0.02};
    star_spec.rule = rule(RuleKind::t_star, "t-star", 0.02, 9);
    star_spec.thresholds = {0.02};
    long violations = 0;
    for (long trial = 0; trial < 500; ++trial) {
        const auto records = run_trial(ctx, {rp_spec, star_spec}, 1606, trial);
        const auto& rp_stop = records[0][0].stop_slot;
        const auto& star_stop = records[1][0].stop_slot;
        if (star_stop && (!rp_stop || *rp_stop > *star_stop)) ++violations;
    }
    if (violations != 0) pass = false;
    detail << "; T_RP <= T* on 500 trials, " << violations << " violations";
    return {pass, detail.str()};
}

// ---------------------------------------------------------------------------
// criterion 9: PFA control under detector-side model mismatch
// ---------------------------------------------------------------------------
Outcome criterion_9() {
    ScenarioConfig config = flat_field_config();
    // detector believes f1 has 4x the true post-change variance (true 2, assumed 8)
    config.detector_gamma2 = 7.0;
    config.origin_mode = TrueOriginMode::uniform; // off-grid truth
    config.rules = {rule(RuleKind::rp, "rp-m50", 0.01, 50)};
    config.sweep = SweepSpec{"alpha", {0.1, 0.05, 0.01}};
    return pfa_control(config);
}

// ---------------------------------------------------------------------------
// criterion 10: CLI determinism and worker independence
// ---------------------------------------------------------------------------
Outcome criterion_10() {
    if (g_wfsim_path.empty()) return {false, "wfsim path not supplied (--wfsim)"};
    const fs::path dir = fs::temp_directory_path() / "wfsim_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "scenario.json";
    {
        std::ofstream out(cfg);
        out << R"json({
  "scenario": "determinism",
  "domain": {"kind": "rectangle", "x_min": 0, "x_max": 8, "y_min": 0, "y_max": 8},
  "sensors": {"count": 15, "policy": "per-slot-resample"},
  "prior": {"rho": 0.04, "rho1": 0.5, "p_inf": 0.0},
  "observation": {"model": "flat", "sigma2": 1.0, "gamma2": 1.2},
  "rules": [{"rule": "rp", "name": "rp-m25", "alpha": 0.05, "M_detector": 25},
            {"rule": "instant", "name": "instant", "alpha": 0.05, "M_detector": 1}],
  "trials": 150,
  "seed": 97531,
  "sweep": {"param": "alpha", "values": [0.1, 0.05, 0.01]}
})json";
    }
    auto run = [&](const std::string& sub, int workers) {
        const fs::path out_dir = dir / sub;
        std::ostringstream cmd;
        cmd << g_wfsim_path << " simulate --config " << cfg << " --out " << out_dir
            << " --workers " << workers << " > /dev/null";
        if (std::system(cmd.str().c_str()) != 0)
            throw std::runtime_error("wfsim run failed");
        std::ifstream in(out_dir / "determinism.csv");
        std::ostringstream text;
        text << in.rdbuf();
        return text.str();
    };
    const std::string first = run("a", 1);
    const std::string second = run("b", 1);
    const std::string threaded = run("c", 3);
    const bool pass = !first.empty() && first == second && first == threaded;
    return {pass, "byte-identical CSV across reruns and worker counts (" +
                      std::to_string(first.size()) + " bytes)"};
}

} // namespace

int main(int argc, char** argv) {
    int criterion = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) criterion = std::atoi(argv[++i]);
        else if (arg == "--workers" && i + 1 < argc) g_workers = std::atoi(argv[++i]);
        else if (arg == "--wfsim" && i + 1 < argc) g_wfsim_path = argv[++i];
    }

    struct Entry {
        int id;
        const char* title;
        Outcome (*fn)();
    };
    const Entry entries[] = {
        {1, "posterior filter matches brute-force enumeration", criterion_1},
        {2, "PFA control across procedures and thresholds", criterion_2},
        {3, "FDR control across parallel clusters", criterion_3},
        {4, "delay ordering oracle <= rp <= instant and rho1 monotonicity", criterion_4},
        {5, "attenuating drift: closed form, quadrature, density limit", criterion_5},
        {6, "observed delay approaches the asymptotic approximation", criterion_6},
        {7, "dynamic program: monotonicity, risk optimality, threshold limit", criterion_7},
        {8, "per-origin decomposition identity and T_RP <= T*", criterion_8},
        {9, "PFA control under detector-side model mismatch", criterion_9},
        {10, "CLI determinism and worker independence", criterion_10},
    };

    int failures = 0;
    for (const Entry& entry : entries) {
        if (criterion != 0 && entry.id != criterion) continue;
        Outcome outcome{false, "exception"};
        try {
            outcome = entry.fn();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        report(entry.id, entry.title, outcome, failures);
    }
    return failures;
}
