#include "wavefront/stopping.hpp"

#include <stdexcept>

namespace wavefront {

RuleKind rule_kind_from_string(const std::string& s) {
    if (s == "rp") return RuleKind::rp;
    if (s == "oracle") return RuleKind::oracle;
    if (s == "instant") return RuleKind::instant;
    if (s == "instant-oracle") return RuleKind::instant_oracle;
    if (s == "rp-mismatched") return RuleKind::rp_mismatched;
    if (s == "t-star") return RuleKind::t_star;
    throw std::invalid_argument("unknown rule kind: " + s);
}

std::string to_string(RuleKind kind) {
    switch (kind) {
    case RuleKind::rp: return "rp";
    case RuleKind::oracle: return "oracle";
    case RuleKind::instant: return "instant";
    case RuleKind::instant_oracle: return "instant-oracle";
    case RuleKind::rp_mismatched: return "rp-mismatched";
    case RuleKind::t_star: return "t-star";
    }
    return "?";
}

void RuleConfig::validate() const {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("rule.alpha must be in (0,1)");
    if (M_detector < 1)
        throw std::invalid_argument("rule.M_detector must be >= 1");
    if (mismatch_increment < 1)
        throw std::invalid_argument("rule.mismatch_increment must be >= 1");
    if (deadline && *deadline < 1)
        throw std::invalid_argument("rule.deadline must be >= 1");
}

bool rp_decide(const BeliefState& belief, double alpha) {
    return belief.change_posterior() <= alpha;
}

bool t_star_decide(const BeliefState& belief, double alpha) {
    const double nu = 1.0 - alpha / belief.num_origins;
    for (int m = 0; m < belief.num_origins; ++m) {
        const auto w = belief.per_origin_posterior(m);
        if (w && *w >= nu) return true;
    }
    return false;
}

double rule_statistic(RuleKind kind, const BeliefState& belief) {
    if (kind != RuleKind::t_star) return belief.change_posterior();
    double best = 0.0;
    for (int m = 0; m < belief.num_origins; ++m) {
        const auto w = belief.per_origin_posterior(m);
        if (w && *w > best) best = *w;
    }
    return best;
}

double rule_threshold(RuleKind kind, double alpha, int M) {
    return kind == RuleKind::t_star ? 1.0 - alpha / M : alpha;
}

Detector::Direction rule_direction(RuleKind kind) {
    return kind == RuleKind::t_star ? Detector::Direction::stop_at_or_above
                                    : Detector::Direction::stop_at_or_below;
}

Detector::Detector(Filter filter, Direction direction,
                   std::vector<double> thresholds, bool record_trace)
    : filter_(std::move(filter)), direction_(direction),
      thresholds_(std::move(thresholds)), record_trace_(record_trace) {
    if (thresholds_.empty())
        throw std::invalid_argument("Detector: at least one threshold required");
    stops_.assign(thresholds_.size(), std::nullopt);
    remaining_ = static_cast<int>(thresholds_.size());
}

void Detector::evaluate(long slot) {
    last_stat_ = direction_ == Direction::stop_at_or_below
                     ? filter_.belief().change_posterior()
                     : rule_statistic(RuleKind::t_star, filter_.belief());
    if (record_trace_) trace_.push_back(last_stat_);
    for (std::size_t j = 0; j < thresholds_.size(); ++j) {
        if (stops_[j]) continue;
        const bool crossed = direction_ == Direction::stop_at_or_below
                                 ? last_stat_ <= thresholds_[j]
                                 : last_stat_ >= thresholds_[j];
        if (crossed) {
            stops_[j] = slot;
            --remaining_;
        }
    }
}

void Detector::start() { evaluate(0); }

void Detector::step(const ObservationFrame& frame) {
    filter_.step(frame);
    evaluate(frame.slot);
}

} // namespace wavefront
