#include "wavefront/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "wavefront/stats.hpp"

namespace wavefront {

using nlohmann::json;

double fs_to_rho(double fs, double beta) {
    if (!(fs > 0.0)) throw std::invalid_argument("fs must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("beta must be > 0");
    return -std::expm1(-1.0 / (beta * fs));
}

void ScenarioConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("config field 'trials': must be >= 1");
    if (rules.empty()) throw std::invalid_argument("config field 'rules': at least one rule");
    prior.validate();
    model.validate();
    for (const RuleConfig& r : rules) r.validate();
    if (!(unit_length > 0.0))
        throw std::invalid_argument("config field 'unit_length': must be > 0");
    if (sensor_count < 0)
        throw std::invalid_argument("config field 'sensors.count': must be >= 0");
    if (policy == SensorPolicy::fixed_list && fixed_sensors.empty())
        throw std::invalid_argument("config field 'sensors.fixed': required for fixed-list policy");
    if (sweep) {
        static const char* axes[] = {"alpha", "rho1", "snr", "fs", "M"};
        if (std::find(std::begin(axes), std::end(axes), sweep->param) == std::end(axes))
            throw std::invalid_argument("config field 'sweep.param': must be one of alpha|rho1|snr|fs|M");
        if (sweep->values.empty())
            throw std::invalid_argument("config field 'sweep.values': must be non-empty");
        for (double v : sweep->values) {
            if (!std::isfinite(v))
                throw std::invalid_argument("config field 'sweep.values': values must be finite");
            if (sweep->param == "alpha" && !(v > 0.0 && v < 1.0))
                throw std::invalid_argument("config field 'sweep.values': alpha values must be in (0,1)");
            if (sweep->param == "rho1" && !(v > 0.0 && v <= 1.0))
                throw std::invalid_argument("config field 'sweep.values': rho1 values must be in (0,1]");
            if (sweep->param == "fs" && !(v > 0.0))
                throw std::invalid_argument("config field 'sweep.values': fs values must be > 0");
            if (sweep->param == "M" && !(v >= 1.0))
                throw std::invalid_argument("config field 'sweep.values': M values must be >= 1");
        }
    }
    if (clusters < 1) throw std::invalid_argument("config field 'clusters': must be >= 1");
    if (clusters > 1 && !deadline)
        throw std::invalid_argument("config field 'deadline': required when clusters > 1");
    if (deadline && *deadline < 1)
        throw std::invalid_argument("config field 'deadline': must be >= 1");
    if (fs && !(*fs > 0.0)) throw std::invalid_argument("config field 'fs': must be > 0");
    if (!(beta > 0.0)) throw std::invalid_argument("config field 'beta': must be > 0");
    if (!(wave_speed > 0.0))
        throw std::invalid_argument("config field 'wave_speed': must be > 0");
    if (slot_cap < 0) throw std::invalid_argument("config field 'max_slots': must be >= 0");
    if (detector_gamma2 && !(*detector_gamma2 >= 0.0))
        throw std::invalid_argument("config field 'detector_gamma2': must be >= 0");
    if (origin_mode == TrueOriginMode::grid && true_origin_M < 0)
        throw std::invalid_argument("config field 'true_origin_M': must be >= 0");
}

namespace {

[[noreturn]] void config_error(const std::string& path, const std::string& what) {
    throw std::invalid_argument("config field '" + path + "': " + what);
}

double num_at(const json& j, const std::string& path) {
    if (!j.is_number()) config_error(path, "expected a number");
    return j.get<double>();
}

Domain parse_domain(const json& j) {
    const std::string kind = j.value("kind", "rectangle");
    if (kind == "rectangle") {
        return Domain::rectangle(num_at(j.at("x_min"), "domain.x_min"),
                                 num_at(j.at("x_max"), "domain.x_max"),
                                 num_at(j.at("y_min"), "domain.y_min"),
                                 num_at(j.at("y_max"), "domain.y_max"));
    }
    if (kind == "disk") {
        Point c{0.0, 0.0};
        if (j.contains("center")) {
            c.x = num_at(j.at("center").at(0), "domain.center[0]");
            c.y = num_at(j.at("center").at(1), "domain.center[1]");
        }
        return Domain::disk(c, num_at(j.at("radius"), "domain.radius"));
    }
    config_error("domain.kind", "expected rectangle|disk");
}

SensorPolicy parse_policy(const std::string& s) {
    if (s == "per-slot-resample") return SensorPolicy::per_slot_resample;
    if (s == "uniform-random") return SensorPolicy::uniform_random;
    if (s == "fixed-list") return SensorPolicy::fixed_list;
    config_error("sensors.policy", "expected per-slot-resample|uniform-random|fixed-list");
}

DistanceClamp parse_clamp(const std::string& s) {
    if (s == "unit-floor") return DistanceClamp::unit_floor;
    if (s == "reference-scaled") return DistanceClamp::reference_scaled;
    if (s == "reference-literal") return DistanceClamp::reference_literal;
    config_error("observation.clamp", "expected unit-floor|reference-scaled|reference-literal");
}

} // namespace

ScenarioConfig ScenarioConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }

    ScenarioConfig c;
    try {
        c.scenario = j.value("scenario", std::string("custom"));
        if (j.contains("domain")) c.domain = parse_domain(j.at("domain"));
        c.unit_length = j.value("unit_length", 1.0);
        if (j.contains("sensors")) {
            const json& s = j.at("sensors");
            c.sensor_count = s.value("count", 100);
            if (s.contains("policy")) c.policy = parse_policy(s.at("policy").get<std::string>());
            if (s.contains("fixed")) {
                for (const auto& p : s.at("fixed"))
                    c.fixed_sensors.push_back({num_at(p.at(0), "sensors.fixed[][0]"),
                                               num_at(p.at(1), "sensors.fixed[][1]")});
            }
        }
        if (j.contains("prior")) {
            const json& p = j.at("prior");
            c.prior.rho = p.value("rho", c.prior.rho);
            c.prior.rho1 = p.value("rho1", c.prior.rho1);
            c.prior.p_inf = p.value("p_inf", c.prior.p_inf);
        }
        if (j.contains("true_origin")) {
            const std::string mode = j.at("true_origin").get<std::string>();
            if (mode == "uniform") c.origin_mode = TrueOriginMode::uniform;
            else if (mode == "grid") c.origin_mode = TrueOriginMode::grid;
            else config_error("true_origin", "expected uniform|grid");
        }
        c.true_origin_M = j.value("true_origin_M", 0);
        if (j.contains("observation")) {
            const json& o = j.at("observation");
            const std::string family = o.value("model", "flat");
            if (family == "flat")
                c.model.family = ObservationModel::Family::flat_gaussian;
            else if (family == "attenuating")
                c.model.family = ObservationModel::Family::attenuating_gaussian;
            else config_error("observation.model", "expected flat|attenuating");
            c.model.gaussian.sigma2 = o.value("sigma2", 1.0);
            c.model.gaussian.gamma2 = o.value("gamma2", 1.0);
            c.model.path_loss.theta = o.value("theta", 2.0);
            c.model.path_loss.d0 = o.value("d0", 1.0);
            if (o.contains("clamp"))
                c.model.path_loss.clamp = parse_clamp(o.at("clamp").get<std::string>());
        }
        if (!j.contains("rules")) config_error("rules", "missing");
        for (const json& r : j.at("rules")) {
            RuleConfig rule;
            rule.kind = rule_kind_from_string(r.value("rule", "rp"));
            rule.name = r.value("name", std::string());
            rule.alpha = r.value("alpha", 0.01);
            rule.M_detector = r.value("M_detector", 50);
            rule.mismatch_increment = r.value("mismatch_increment", 5);
            if (r.contains("deadline") && !r.at("deadline").is_null())
                rule.deadline = r.at("deadline").get<long>();
            c.rules.push_back(std::move(rule));
        }
        c.trials = j.value("trials", 2000L);
        c.seed = j.value("seed", static_cast<std::uint64_t>(20260811));
        if (j.contains("sweep") && !j.at("sweep").is_null()) {
            SweepSpec sweep;
            sweep.param = j.at("sweep").value("param", std::string());
            for (const auto& v : j.at("sweep").at("values"))
                sweep.values.push_back(num_at(v, "sweep.values[]"));
            c.sweep = std::move(sweep);
        }
        c.clusters = j.value("clusters", 1);
        if (j.contains("deadline") && !j.at("deadline").is_null())
            c.deadline = j.at("deadline").get<long>();
        if (j.contains("fs") && !j.at("fs").is_null()) c.fs = j.at("fs").get<double>();
        c.beta = j.value("beta", 10.0);
        c.wave_speed = j.value("wave_speed", 3.0e8);
        c.slot_cap = j.value("max_slots", 0L);
        if (j.contains("detector_gamma2") && !j.at("detector_gamma2").is_null())
            c.detector_gamma2 = j.at("detector_gamma2").get<double>();
        c.record_traces = j.value("record_traces", false);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config error: ") + e.what());
    }
    c.validate();
    return c;
}

ScenarioConfig ScenarioConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_json_text(buffer.str());
}

namespace {

bool grid_based(RuleKind kind) {
    return kind == RuleKind::rp || kind == RuleKind::rp_mismatched ||
           kind == RuleKind::instant || kind == RuleKind::t_star;
}

std::string default_rule_name(const RuleConfig& rule, bool m_sweep) {
    std::string name = to_string(rule.kind);
    if (!m_sweep && grid_based(rule.kind)) name += "-m" + std::to_string(rule.M_detector);
    return name;
}

/// Copy of the config with one sweep value folded in (alpha and M excluded;
/// those are applied at the detector level).
ScenarioConfig apply_sweep(const ScenarioConfig& config, std::optional<double> value) {
    ScenarioConfig c = config;
    if (config.sweep && value) {
        const std::string& param = config.sweep->param;
        if (param == "rho1") c.prior.rho1 = *value;
        else if (param == "snr")
            c.model.gaussian.gamma2 =
                c.model.gaussian.sigma2 * std::pow(10.0, *value / 10.0);
        else if (param == "fs") c.fs = *value;
    }
    if (c.fs) {
        c.prior.rho = fs_to_rho(*c.fs, c.beta);
        c.unit_length = c.wave_speed / *c.fs;
    }
    return c;
}

int largest_detector_grid(const ScenarioConfig& config) {
    int m = 1;
    for (const RuleConfig& r : config.rules)
        if (grid_based(r.kind)) m = std::max(m, r.M_detector);
    return m;
}

} // namespace

ScenarioContext make_context(const ScenarioConfig& config,
                             std::optional<double> sweep_value) {
    const ScenarioConfig c = apply_sweep(config, sweep_value);
    ScenarioContext ctx;
    ctx.domain = c.domain.scaled(c.unit_length);
    ctx.unit_length = c.unit_length;
    ctx.sensor_count = c.sensor_count;
    ctx.policy = c.policy;
    for (const Point& p : c.fixed_sensors)
        ctx.fixed_sensors.push_back({p.x / c.unit_length, p.y / c.unit_length});
    ctx.prior = c.prior;
    ctx.model = c.model;
    ctx.origin_mode = c.origin_mode;
    if (c.origin_mode == TrueOriginMode::grid) {
        const int m = c.true_origin_M > 0 ? c.true_origin_M : largest_detector_grid(c);
        ctx.origin_grid = build_origin_grid(ctx.domain, m);
    }
    ctx.slot_cap = c.slot_cap;
    ctx.deadline = c.deadline;
    ctx.finalize();
    return ctx;
}

namespace {

std::vector<DetectorSpec> build_detector_specs(const ScenarioConfig& config,
                                               const ScenarioContext& ctx,
                                               std::optional<double> sweep_value) {
    const bool alpha_sweep = config.sweep && config.sweep->param == "alpha";
    const bool m_sweep = config.sweep && config.sweep->param == "M";
    std::vector<DetectorSpec> specs;
    specs.reserve(config.rules.size());
    for (const RuleConfig& base : config.rules) {
        DetectorSpec spec;
        spec.rule = base;
        if (m_sweep && sweep_value && grid_based(base.kind))
            spec.rule.M_detector = static_cast<int>(*sweep_value);
        if (spec.rule.name.empty())
            spec.rule.name = default_rule_name(spec.rule, m_sweep);
        spec.thresholds = alpha_sweep ? config.sweep->values
                                      : std::vector<double>{spec.rule.alpha};
        if (config.detector_gamma2) {
            ObservationModel m = ctx.model;
            m.gaussian.gamma2 = *config.detector_gamma2;
            spec.detector_model = m;
        }
        spec.record_trace = config.record_traces;
        specs.push_back(std::move(spec));
    }
    return specs;
}

} // namespace

ResultRow aggregate_cell(const std::string& scenario, const ProcedureCell& cell) {
    ResultRow row;
    row.scenario = scenario;
    row.procedure = cell.procedure;
    row.sweep_param = cell.sweep_param;
    row.sweep_value = cell.sweep_value;

    if (cell.parallel) {
        const ParallelAggregate& agg = *cell.parallel;
        row.trials = agg.runs;
        row.fdr = agg.fdr;
        row.fdr_ci_lo = agg.fdr_ci_lo;
        row.fdr_ci_hi = agg.fdr_ci_hi;
        row.add = agg.add;
        row.add_ci_lo = agg.add_ci_lo;
        row.add_ci_hi = agg.add_ci_hi;
        const Interval pfa = wilson_interval(agg.false_alarm_clusters, agg.clusters);
        row.pfa = static_cast<double>(agg.false_alarm_clusters) / agg.clusters;
        row.pfa_ci_lo = pfa.lo;
        row.pfa_ci_hi = pfa.hi;
        row.mean_stop = agg.mean_stop;
        return row;
    }

    const long n = static_cast<long>(cell.trials.size());
    row.trials = n;
    long alarms = 0, capped = 0;
    std::vector<double> delays(n);
    double stop_sum = 0.0;
    for (long i = 0; i < n; ++i) {
        const TrialRecord& r = cell.trials[i];
        alarms += r.false_alarm ? 1 : 0;
        capped += r.capped ? 1 : 0;
        delays[i] = r.delay;
        stop_sum += static_cast<double>(r.slots_run);
    }
    const Interval pfa = wilson_interval(alarms, n);
    row.pfa = static_cast<double>(alarms) / n;
    row.pfa_ci_lo = pfa.lo;
    row.pfa_ci_hi = pfa.hi;
    const Interval add = t_interval(delays);
    row.add = mean_of(delays);
    row.add_ci_lo = add.lo;
    row.add_ci_hi = add.hi;
    row.mean_stop = stop_sum / static_cast<double>(n);
    if (capped > 0)
        std::cerr << "warning: " << scenario << "/" << cell.procedure << ": " << capped
                  << " trial(s) hit the slot cap\n";
    return row;
}

ScenarioResult run_scenario_detail(const ScenarioConfig& config, int workers) {
    config.validate();
    ScenarioResult result;
    result.scenario = config.scenario;

    const bool alpha_sweep = config.sweep && config.sweep->param == "alpha";
    std::vector<std::optional<double>> passes;
    if (config.sweep && !alpha_sweep)
        for (double v : config.sweep->values) passes.push_back(v);
    else
        passes.push_back(std::nullopt);

    for (const auto& pass_value : passes) {
        const ScenarioContext ctx = make_context(config, pass_value);
        const auto specs = build_detector_specs(config, ctx, pass_value);

        if (config.clusters > 1) {
            for (const DetectorSpec& spec : specs) {
                const auto aggs = run_parallel(ctx, spec, config.clusters,
                                               *config.deadline, config.trials,
                                               config.seed, workers);
                for (std::size_t j = 0; j < aggs.size(); ++j) {
                    ProcedureCell cell;
                    cell.procedure = spec.rule.name;
                    if (config.sweep) {
                        cell.sweep_param = config.sweep->param;
                        cell.sweep_value =
                            alpha_sweep ? config.sweep->values[j] : *pass_value;
                    }
                    cell.parallel = aggs[j];
                    result.cells.push_back(std::move(cell));
                }
            }
            continue;
        }

        std::vector<std::vector<std::vector<TrialRecord>>> per_trial(config.trials);
        parallel_for(config.trials, workers, [&](long i) {
            per_trial[i] = run_trial(ctx, specs, config.seed, i);
        });

        for (std::size_t s = 0; s < specs.size(); ++s) {
            const std::size_t n_thresh = specs[s].thresholds.size();
            for (std::size_t j = 0; j < n_thresh; ++j) {
                ProcedureCell cell;
                cell.procedure = specs[s].rule.name;
                if (config.sweep) {
                    cell.sweep_param = config.sweep->param;
                    cell.sweep_value =
                        alpha_sweep ? config.sweep->values[j] : *pass_value;
                }
                cell.trials.reserve(config.trials);
                for (long i = 0; i < config.trials; ++i)
                    cell.trials.push_back(per_trial[i][s][j]);
                result.cells.push_back(std::move(cell));
            }
        }
    }

    result.rows.reserve(result.cells.size());
    for (const ProcedureCell& cell : result.cells)
        result.rows.push_back(aggregate_cell(result.scenario, cell));
    return result;
}

std::vector<ResultRow> run_scenario(const ScenarioConfig& config, int workers) {
    return run_scenario_detail(config, workers).rows;
}

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

constexpr const char* kCsvHeader =
    "scenario,procedure,sweep_param,sweep_value,trials,pfa,pfa_ci_lo,pfa_ci_hi,"
    "add,add_ci_lo,add_ci_hi,fdr,fdr_ci_lo,fdr_ci_hi,mean_stop";

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << kCsvHeader << "\n";
    for (const ResultRow& r : rows) {
        out << r.scenario << ',' << r.procedure << ',' << r.sweep_param << ','
            << fmt(r.sweep_value) << ',' << r.trials << ',' << fmt(r.pfa) << ','
            << fmt(r.pfa_ci_lo) << ',' << fmt(r.pfa_ci_hi) << ',' << fmt(r.add) << ','
            << fmt(r.add_ci_lo) << ',' << fmt(r.add_ci_hi) << ',' << fmt(r.fdr) << ','
            << fmt(r.fdr_ci_lo) << ',' << fmt(r.fdr_ci_hi) << ',' << fmt(r.mean_stop)
            << "\n";
    }
}

void emit_table(const std::vector<ResultRow>& rows, std::ostream& out) {
    char line[256];
    std::snprintf(line, sizeof(line), "%-14s %-16s %-6s %10s %8s %10s %10s %10s %10s\n",
                  "scenario", "procedure", "sweep", "value", "trials", "pfa", "add",
                  "fdr", "mean_stop");
    out << line;
    for (const ResultRow& r : rows) {
        std::snprintf(line, sizeof(line),
                      "%-14s %-16s %-6s %10s %8ld %10s %10s %10s %10.4g\n",
                      r.scenario.c_str(), r.procedure.c_str(), r.sweep_param.c_str(),
                      fmt(r.sweep_value).c_str(), r.trials, fmt(r.pfa).c_str(),
                      fmt(r.add).c_str(), fmt(r.fdr).c_str(), r.mean_stop);
        out << line;
    }
}

void emit_plot(const std::vector<ResultRow>& rows, std::ostream& out) {
    out << "scenario,procedure,sweep_param,sweep_value,metric,value,ci_lo,ci_hi\n";
    auto metric = [&](const ResultRow& r, const char* name,
                      const std::optional<double>& v, const std::optional<double>& lo,
                      const std::optional<double>& hi) {
        if (!v) return;
        out << r.scenario << ',' << r.procedure << ',' << r.sweep_param << ','
            << fmt(r.sweep_value) << ',' << name << ',' << fmt(*v) << ',' << fmt(lo)
            << ',' << fmt(hi) << "\n";
    };
    for (const ResultRow& r : rows) {
        metric(r, "pfa", r.pfa, r.pfa_ci_lo, r.pfa_ci_hi);
        metric(r, "add", r.add, r.add_ci_lo, r.add_ci_hi);
        metric(r, "fdr", r.fdr, r.fdr_ci_lo, r.fdr_ci_hi);
        metric(r, "mean_stop", r.mean_stop, std::nullopt, std::nullopt);
    }
}

} // namespace

void emit(const std::vector<ResultRow>& rows, EmitFormat format, std::ostream& out) {
    switch (format) {
    case EmitFormat::csv: emit_csv(rows, out); break;
    case EmitFormat::table_text: emit_table(rows, out); break;
    case EmitFormat::plot_data: emit_plot(rows, out); break;
    }
}

void emit_file(const std::vector<ResultRow>& rows, EmitFormat format,
               const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    emit(rows, format, out);
}

void emit_trials_csv(const ScenarioResult& result, std::ostream& out) {
    out << "scenario,procedure,sweep_param,sweep_value,trial,cluster,change_slot,"
           "origin_x,origin_y,stop_slot,delay,false_alarm,capped,slots_run\n";
    for (const ProcedureCell& cell : result.cells) {
        if (cell.parallel) continue; // parallel runs keep aggregates only
        for (std::size_t i = 0; i < cell.trials.size(); ++i) {
            const TrialRecord& r = cell.trials[i];
            out << result.scenario << ',' << cell.procedure << ',' << cell.sweep_param
                << ',' << fmt(cell.sweep_value) << ',' << i << ',' << r.cluster << ',';
            if (r.change_slot) out << *r.change_slot;
            out << ',' << fmt(r.true_origin.x) << ',' << fmt(r.true_origin.y) << ',';
            if (r.stop_slot) out << *r.stop_slot;
            out << ',' << fmt(r.delay) << ',' << (r.false_alarm ? 1 : 0) << ','
                << (r.capped ? 1 : 0) << ',' << r.slots_run << "\n";
        }
    }
}

namespace {

RuleConfig make_rule(RuleKind kind, const std::string& name, double alpha, int M,
                     int increment = 1) {
    RuleConfig r;
    r.kind = kind;
    r.name = name;
    r.alpha = alpha;
    r.M_detector = M;
    r.mismatch_increment = increment;
    return r;
}

ScenarioConfig flat_field_base() {
    ScenarioConfig c;
    c.domain = Domain::square(10.0);
    c.sensor_count = 100;
    c.policy = SensorPolicy::per_slot_resample;
    c.prior = {0.02, 0.25, 0.0};
    c.model.family = ObservationModel::Family::flat_gaussian;
    c.model.gaussian = {1.0, 1.0};
    c.origin_mode = TrueOriginMode::uniform;
    c.trials = 2000;
    c.seed = 20260811;
    return c;
}

std::vector<RuleConfig> flat_field_rules(double alpha) {
    return {make_rule(RuleKind::rp, "rp-m10", alpha, 10),
            make_rule(RuleKind::rp, "rp-m50", alpha, 50),
            make_rule(RuleKind::rp, "rp-m100", alpha, 100),
            make_rule(RuleKind::rp_mismatched, "rp-mismatched", alpha, 50, 5),
            make_rule(RuleKind::oracle, "oracle", alpha, 1),
            make_rule(RuleKind::instant, "instant", alpha, 1)};
}

ScenarioConfig attenuating_cluster_base() {
    ScenarioConfig c;
    c.domain = Domain::square(5.0);
    c.sensor_count = 25;
    c.policy = SensorPolicy::uniform_random;
    c.prior = {0.02, 1.0, 0.3};
    c.model.family = ObservationModel::Family::attenuating_gaussian;
    c.model.gaussian = {1.0, 2.0};
    c.model.path_loss = {2.0, 1.5, DistanceClamp::reference_scaled};
    c.origin_mode = TrueOriginMode::uniform;
    c.trials = 400;
    c.seed = 20260811;
    return c;
}

} // namespace

std::vector<ScenarioConfig> builtin_scenarios(const std::string& name) {
    if (name == "table1") {
        ScenarioConfig c = flat_field_base();
        c.scenario = "table1";
        c.rules = flat_field_rules(0.01);
        c.sweep = SweepSpec{"alpha", {0.1, 0.05, 0.01, 0.005}};
        return {c};
    }
    if (name == "fig3") {
        ScenarioConfig top = flat_field_base();
        top.scenario = "fig3-top";
        top.rules = flat_field_rules(0.01);
        top.sweep = SweepSpec{"alpha", {0.1, 0.05, 0.02, 0.01, 0.005}};

        ScenarioConfig middle = flat_field_base();
        middle.scenario = "fig3-middle";
        middle.rules = {make_rule(RuleKind::rp, "rp-m50", 0.01, 50),
                        make_rule(RuleKind::rp_mismatched, "rp-mismatched", 0.01, 50, 5),
                        make_rule(RuleKind::oracle, "oracle", 0.01, 1),
                        make_rule(RuleKind::instant, "instant", 0.01, 1)};
        middle.sweep = SweepSpec{"rho1", {0.1, 0.25, 0.5, 0.75, 1.0}};

        ScenarioConfig bottom = flat_field_base();
        bottom.scenario = "fig3-bottom";
        bottom.rules = {make_rule(RuleKind::rp, "rp-m50", 0.1, 50),
                        make_rule(RuleKind::oracle, "oracle", 0.1, 1),
                        make_rule(RuleKind::instant, "instant", 0.1, 1)};
        bottom.sweep = SweepSpec{"snr", {-5.0, 0.0, 5.0, 10.0}};
        return {top, middle, bottom};
    }
    if (name == "table2") {
        ScenarioConfig c = attenuating_cluster_base();
        c.scenario = "table2";
        c.clusters = 20;
        c.deadline = 250;
        c.rules = {make_rule(RuleKind::rp, "rp-m10", 0.01, 10),
                   make_rule(RuleKind::oracle, "oracle", 0.01, 1),
                   make_rule(RuleKind::instant_oracle, "instant-oracle", 0.01, 1),
                   make_rule(RuleKind::instant, "instant", 0.01, 10)};
        c.sweep = SweepSpec{"alpha", {0.1, 0.05, 0.01, 0.005}};
        return {c};
    }
    if (name == "fig4") {
        ScenarioConfig c;
        c.scenario = "fig4";
        c.domain = Domain::square(1500.0); // metres
        c.sensor_count = 100;
        c.policy = SensorPolicy::uniform_random;
        c.prior = {0.01, 1.0, 0.0}; // rho is overwritten by the fs mapping
        c.model.family = ObservationModel::Family::attenuating_gaussian;
        c.model.gaussian = {1.0, 2.0};
        c.model.path_loss = {2.0, 500.0, DistanceClamp::reference_scaled};
        c.origin_mode = TrueOriginMode::uniform;
        c.beta = 1.0e-4; // desk-scale event-time prior (seconds)
        c.rules = {make_rule(RuleKind::rp, "rp-m10", 0.01, 10),
                   make_rule(RuleKind::oracle, "oracle", 0.01, 1),
                   make_rule(RuleKind::instant_oracle, "instant-oracle", 0.01, 1),
                   make_rule(RuleKind::instant, "instant", 0.01, 10)};
        c.sweep = SweepSpec{"fs", {5.0e5, 1.0e6, 2.0e6, 4.0e6}};
        c.trials = 400;
        c.seed = 20260811;
        return {c};
    }
    throw std::invalid_argument("unknown builtin scenario: " + name +
                                " (expected table1|table2|fig3|fig4)");
}

} // namespace wavefront
