// wfsim: simulator CLI for quickest detection of radially propagating
// events over sensor networks. Subcommands: simulate, reproduce, dp,
// asymptotics. All outputs are CSV (plus an optional text table); errors
// exit nonzero with a single "error: ..." line on stderr.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wavefront/asymptotics.hpp"
#include "wavefront/dp.hpp"
#include "wavefront/harness.hpp"

namespace fs = std::filesystem;
using namespace wavefront;

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

void write_results(const ScenarioResult& result, const fs::path& out_dir,
                   EmitFormat format, bool dump_trials) {
    fs::create_directories(out_dir);
    const char* ext = format == EmitFormat::table_text ? ".txt" : ".csv";
    const fs::path path = out_dir / (result.scenario + ext);
    emit_file(result.rows, format, path.string());
    std::cout << "wrote " << path.string() << "\n";
    if (dump_trials) {
        const fs::path trials_path = out_dir / (result.scenario + "_trials.csv");
        std::ofstream out(trials_path);
        if (!out) throw std::runtime_error("cannot write " + trials_path.string());
        emit_trials_csv(result, out);
        std::cout << "wrote " << trials_path.string() << "\n";
    }
}

struct SimulateArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "csv";
    int workers = 2;
    bool dump_trials = false;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
};

EmitFormat parse_format(const std::string& s) {
    if (s == "csv") return EmitFormat::csv;
    if (s == "table-text") return EmitFormat::table_text;
    if (s == "plot-data") return EmitFormat::plot_data;
    throw std::invalid_argument("unknown format: " + s);
}

int run_simulate(const SimulateArgs& args) {
    ScenarioConfig config = ScenarioConfig::from_json_file(args.config_path);
    if (args.seed) config.seed = *args.seed;
    if (args.trials) config.trials = *args.trials;
    config.validate();
    const ScenarioResult result = run_scenario_detail(config, args.workers);
    write_results(result, args.out_dir, parse_format(args.format), args.dump_trials);
    return 0;
}

struct ReproduceArgs {
    std::string target;
    std::string out_dir = ".";
    int workers = 2;
    std::optional<std::uint64_t> seed;
    std::optional<long> trials;
};

int run_reproduce(const ReproduceArgs& args) {
    for (ScenarioConfig config : builtin_scenarios(args.target)) {
        if (args.seed) config.seed = *args.seed;
        if (args.trials) config.trials = *args.trials;
        const ScenarioResult result = run_scenario_detail(config, args.workers);
        write_results(result, args.out_dir, EmitFormat::csv, false);
        emit(result.rows, EmitFormat::table_text, std::cout);
    }
    return 0;
}

struct DpArgs {
    int M = 1;
    int rmax = 1;
    double rho = 0.05;
    double rho1 = 1.0;
    double cost = 0.05;
    int horizon = 12;
    int resolution = 400;
    int gh_nodes = 16;
    std::string obs = "binary";
    std::vector<double> p_null{0.8, 0.2};
    std::vector<double> p_alt{0.4, 0.6};
    double sigma2 = 1.0;
    double gamma2 = 1.0;
    std::vector<double> sensor_distances{0.5};
    std::vector<double> rho_sweep;
    std::string out_dir = ".";
};

DpModel build_dp_model(const DpArgs& args) {
    DpModel model;
    model.M = args.M;
    model.chain = {args.rmax, args.rho1, 1};
    model.prior = {args.rho, args.rho1, 0.0};
    model.cost = args.cost;
    const int states = model.num_states();
    if (args.obs == "binary") {
        // r = 0 rows follow the null alphabet, r >= 1 rows the alternative.
        std::vector<std::vector<double>> prob;
        for (int s = 0; s < states; ++s) {
            const int r = s % (args.rmax + 1);
            prob.push_back(r == 0 ? args.p_null : args.p_alt);
        }
        model.obs = DpObservation::discrete(std::move(prob));
    } else if (args.obs == "gaussian") {
        if (args.M != 1)
            throw std::invalid_argument("dp: gaussian observations support M = 1");
        ObservationModel om;
        om.family = ObservationModel::Family::attenuating_gaussian;
        om.gaussian = {args.sigma2, args.gamma2};
        om.path_loss = {2.0, 1.0, DistanceClamp::unit_floor};
        OriginSet origins;
        origins.points = {{0.0, 0.0}};
        std::vector<Point> sensors;
        for (double d : args.sensor_distances) sensors.push_back({d, 0.0});
        model.obs = DpObservation::gaussian_from_geometry(om, origins, sensors,
                                                          args.rmax, args.gh_nodes);
    } else {
        throw std::invalid_argument("dp: --obs must be binary|gaussian");
    }
    return model;
}

int run_dp(const DpArgs& args) {
    const DpModel model = build_dp_model(args);
    const ValueTable table = backward_induction(model, args.horizon, args.resolution);

    fs::create_directories(args.out_dir);
    const fs::path table_path = fs::path(args.out_dir) / "dp_value_table.csv";
    {
        std::ofstream out(table_path);
        if (!out) throw std::runtime_error("cannot write " + table_path.string());
        out << "n,point";
        for (int s = 0; s < model.num_states(); ++s) out << ",p" << s;
        out << ",pi0,J,D\n";
        for (int n = 0; n <= args.horizon; ++n) {
            for (std::size_t g = 0; g < table.grid.size(); ++g) {
                const std::vector<double> p = table.grid.point(g);
                out << n << ',' << g;
                for (double v : p) out << ',' << fmt(v);
                out << ',' << fmt(model.pi0(p)) << ',' << fmt(table.J[n][g]) << ',';
                if (n < args.horizon) out << fmt(table.D[n][g]);
                out << "\n";
            }
        }
    }
    std::cout << "wrote " << table_path.string() << "\n";

    if (!args.rho_sweep.empty()) {
        const auto rows = threshold_diagnostic(model, args.rho_sweep, args.resolution);
        const fs::path diag_path = fs::path(args.out_dir) / "dp_diagnostic.csv";
        std::ofstream out(diag_path);
        if (!out) throw std::runtime_error("cannot write " + diag_path.string());
        out << "rho,misclassification_rate,max_abs_psi_over_rho,grid_points\n";
        for (const auto& row : rows)
            out << fmt(row.rho) << ',' << fmt(row.misclassification_rate) << ','
                << fmt(row.max_abs_psi_over_rho) << ',' << row.grid_points << "\n";
        std::cout << "wrote " << diag_path.string() << "\n";
    }
    return 0;
}

struct AsymptoticsArgs {
    std::vector<double> alphas{0.01};
    std::vector<double> rhos{0.02};
    std::vector<int> sensor_counts{100};
    std::vector<double> phis{1.0};
    std::vector<double> radii{10.0};
    double theta = 2.0;
    std::string clamp = "unit-floor";
    std::string out_dir = ".";
};

int run_asymptotics(const AsymptoticsArgs& args) {
    PathLoss loss;
    loss.theta = args.theta;
    if (args.clamp == "unit-floor") loss.clamp = DistanceClamp::unit_floor;
    else if (args.clamp == "reference-scaled") loss.clamp = DistanceClamp::reference_scaled;
    else if (args.clamp == "reference-literal") loss.clamp = DistanceClamp::reference_literal;
    else throw std::invalid_argument("asymptotics: unknown clamp " + args.clamp);

    fs::create_directories(args.out_dir);
    const fs::path path = fs::path(args.out_dir) / "asymptotics.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "alpha,rho,L,phi,R,q_phi_quadrature,q_phi_closed,flat_drift,"
           "add_lower_bound,add_approx\n";
    for (double alpha : args.alphas)
        for (double rho : args.rhos)
            for (int L : args.sensor_counts)
                for (double phi : args.phis)
                    for (double R : args.radii) {
                        const double q_quad = q_phi_quadrature(phi, R, args.theta, loss);
                        const double q_closed =
                            (args.theta == 2.0 && R >= 1.0 &&
                             loss.clamp == DistanceClamp::unit_floor)
                                ? q_phi_closed(phi, R)
                                : std::numeric_limits<double>::quiet_NaN();
                        const double drift = flat_drift(L, phi);
                        const double q_for_bound = L * q_quad;
                        const std::vector<double> qs{q_for_bound};
                        out << fmt(alpha) << ',' << fmt(rho) << ',' << L << ','
                            << fmt(phi) << ',' << fmt(R) << ',' << fmt(q_quad) << ','
                            << fmt(q_closed) << ',' << fmt(drift) << ','
                            << fmt(add_lower_bound(alpha, rho, qs)) << ','
                            << fmt(add_approx_attenuating(alpha, rho, L, q_quad))
                            << "\n";
                    }
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian quickest detection of radially propagating events"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "run a scenario config");
    simulate->add_option("--config", sim.config_path, "scenario JSON")->required();
    simulate->add_option("--out", sim.out_dir, "output directory");
    simulate->add_option("--seed", sim.seed, "seed override");
    simulate->add_option("--trials", sim.trials, "trial-count override");
    simulate->add_option("--workers", sim.workers, "worker threads");
    simulate->add_option("--format", sim.format, "csv|table-text|plot-data");
    simulate->add_flag("--dump-trials", sim.dump_trials, "also write per-trial records");

    ReproduceArgs rep;
    CLI::App* reproduce =
        app.add_subcommand("reproduce", "run a canned experiment (table1|table2|fig3|fig4)");
    reproduce->add_option("target", rep.target, "table1|table2|fig3|fig4")->required();
    reproduce->add_option("--out", rep.out_dir, "output directory");
    reproduce->add_option("--seed", rep.seed, "seed override");
    reproduce->add_option("--trials", rep.trials, "trial-count override");
    reproduce->add_option("--workers", rep.workers, "worker threads");

    DpArgs dp;
    CLI::App* dp_cmd = app.add_subcommand("dp", "backward-induction solver (tiny instances)");
    dp_cmd->add_option("--M", dp.M, "origin count");
    dp_cmd->add_option("--rmax", dp.rmax, "maximum radius");
    dp_cmd->add_option("--rho", dp.rho, "change-point parameter");
    dp_cmd->add_option("--rho1", dp.rho1, "growth probability");
    dp_cmd->add_option("--cost", dp.cost, "delay cost c");
    dp_cmd->add_option("--horizon", dp.horizon, "finite horizon N");
    dp_cmd->add_option("--grid-res", dp.resolution, "simplex lattice resolution");
    dp_cmd->add_option("--gh-nodes", dp.gh_nodes, "Gauss-Hermite nodes");
    dp_cmd->add_option("--obs", dp.obs, "binary|gaussian");
    dp_cmd->add_option("--p-null", dp.p_null, "null symbol probabilities")->expected(-1);
    dp_cmd->add_option("--p-alt", dp.p_alt, "post-change symbol probabilities")->expected(-1);
    dp_cmd->add_option("--sigma2", dp.sigma2, "noise variance");
    dp_cmd->add_option("--gamma2", dp.gamma2, "signal power");
    dp_cmd->add_option("--sensor-distances", dp.sensor_distances,
                       "sensor distances from the origin")->expected(-1);
    dp_cmd->add_option("--rho-sweep", dp.rho_sweep,
                       "emit the threshold diagnostic over these rho values")->expected(-1);
    dp_cmd->add_option("--out", dp.out_dir, "output directory");

    AsymptoticsArgs asym;
    CLI::App* asym_cmd = app.add_subcommand("asymptotics", "drift/delay calculators");
    asym_cmd->add_option("--alpha", asym.alphas, "PFA levels")->expected(-1);
    asym_cmd->add_option("--rho", asym.rhos, "change parameters")->expected(-1);
    asym_cmd->add_option("--L", asym.sensor_counts, "sensor counts")->expected(-1);
    asym_cmd->add_option("--phi", asym.phis, "linear SNR values")->expected(-1);
    asym_cmd->add_option("--R", asym.radii, "disk radii")->expected(-1);
    asym_cmd->add_option("--theta", asym.theta, "path-loss exponent");
    asym_cmd->add_option("--clamp", asym.clamp, "distance clamp");
    asym_cmd->add_option("--out", asym.out_dir, "output directory");

    try {
        app.parse(argc, argv);
        if (simulate->parsed()) return run_simulate(sim);
        if (reproduce->parsed()) return run_reproduce(rep);
        if (dp_cmd->parsed()) return run_dp(dp);
        if (asym_cmd->parsed()) return run_asymptotics(asym);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
