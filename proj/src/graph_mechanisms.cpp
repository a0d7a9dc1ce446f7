#include "dpcr/graph_mechanisms.hpp"

#include <cmath>
#include <stdexcept>

namespace dpcr {

double advanced_composition_epsilon(int k, double eps_total,
                                    double delta_prime) {
    if (k < 1)
        throw std::invalid_argument("advanced_composition: k must be >= 1");
    if (!(eps_total > 0.0 && eps_total <= 1.0))
        throw std::invalid_argument(
            "advanced_composition: eps_total must lie in (0, 1]");
    if (!(delta_prime > 0.0 && delta_prime < 1.0))
        throw std::invalid_argument(
            "advanced_composition: delta' must lie in (0, 1)");
    return eps_total / (2.0 * std::sqrt(2.0 * k * std::log(1.0 / delta_prime)));
}

LadderParams ladder_params(const LadderSpec& spec, const PrivacyBudget& budget) {
    budget.validate();
    if (spec.n < 1) throw std::invalid_argument("ladder: n must be >= 1");
    if (spec.horizon < 1) throw std::invalid_argument("ladder: horizon must be >= 1");
    LadderParams p;
    double T = static_cast<double>(spec.horizon);
    switch (spec.target) {
        case LadderSpec::Target::Matching:
            p.lo = 0;
            p.hi = std::min(std::floor(spec.n / 2.0), T);
            break;
        case LadderSpec::Target::KCoreOfVertex: {
            if (spec.vertex < 0 || spec.vertex >= spec.n)
                throw std::invalid_argument("ladder: designated vertex out of range");
            // a core number of kappa needs kappa*(kappa-1)/2 edges
            int64_t kappa = 0;
            while ((kappa + 1) * kappa / 2 <= spec.horizon) ++kappa;
            p.lo = 0;
            p.hi = std::min<double>(spec.n, static_cast<double>(kappa));
            break;
        }
        case LadderSpec::Target::Components:
            // decreasing from n, at most one merge per insertion
            p.lo = std::max<double>(spec.n - T, 1.0);
            p.hi = spec.n;
            p.decreasing = true;
            break;
    }
    double range = p.hi - p.lo;
    if (range < 1.0) {
        p.rung = 1;
        p.cap = 1;
        return p;
    }
    p.rung = budget.delta == 0.0
                 ? static_cast<int64_t>(std::ceil(std::sqrt(range)))
                 : static_cast<int64_t>(std::ceil(std::cbrt(range)));
    p.cap = static_cast<int>(std::ceil(range / p.rung));
    return p;
}

LadderMechanism::LadderMechanism(const LadderSpec& spec,
                                 const PrivacyBudget& budget, RandomSource rng)
    : spec_(spec),
      params_(ladder_params(spec, budget)),
      svt_(params_.cap, budget, rng, spec.sensitivity),
      g_(spec.n) {
    if (spec.target == LadderSpec::Target::Matching)
        matching_ = std::make_unique<IncrementalMatching>(spec.n);
}

double LadderMechanism::eval() const {
    switch (spec_.target) {
        case LadderSpec::Target::Matching:
            return matching_->size();
        case LadderSpec::Target::KCoreOfVertex:
            return core_number(g_, spec_.vertex);
        case LadderSpec::Target::Components:
            return -static_cast<double>(connected_components(g_));
    }
    return 0;
}

double LadderMechanism::released() const {
    double lo = params_.decreasing ? -params_.hi : params_.lo;
    double val = lo + static_cast<double>(jumps_ * params_.rung);
    return params_.decreasing ? -val : val;
}

double LadderMechanism::true_value() const {
    double v = eval();
    return params_.decreasing ? -v : v;
}

double LadderMechanism::step(const Update& u) {
    g_.apply(u);
    if (matching_) matching_->apply(u);
    double lo = params_.decreasing ? -params_.hi : params_.lo;
    // a single update can cross several rungs: keep asking until a negative
    double q = eval();
    while (!saturated_) {
        if (jumps_ + 1 > params_.cap) break;  // past the top of the range
        double next = lo + static_cast<double>((jumps_ + 1) * params_.rung);
        if (svt_.halted()) {
            saturated_ = true;
            break;
        }
        if (svt_.query(q, next) == SvtInstance::Answer::Positive) {
            ++jumps_;
            if (svt_.halted()) saturated_ = true;
        } else {
            break;
        }
    }
    return released();
}

PrivateDegreeHistogram::PrivateDegreeHistogram(int n, int64_t horizon,
                                               const PrivacyBudget& budget,
                                               RandomSource rng,
                                               double sensitivity)
    : g_(n) {
    budget.validate();
    if (budget.delta <= 0.0)
        throw std::invalid_argument(
            "degree histogram: needs delta > 0 (advanced composition)");
    if (n < 2) throw std::invalid_argument("degree histogram: need >= 2 vertices");
    eps_prime_ = advanced_composition_epsilon(n, budget.epsilon, budget.delta);
    PrivacyBudget per = budget;
    per.epsilon = eps_prime_;
    per.delta = 0.0;  // each counter adds pure Laplace noise
    hist_ = std::make_unique<HistogramMechanism>(n, horizon, per, rng,
                                                 /*shift=*/false, sensitivity);
}

const std::vector<double>& PrivateDegreeHistogram::step(const Update& u) {
    int n = g_.vertex_count();
    std::vector<std::pair<int, double>> deltas;
    if (u.kind == Update::Kind::InsertEdge || u.kind == Update::Kind::DeleteEdge) {
        int a = static_cast<int>(u.a), b = static_cast<int>(u.b);
        int da = g_.degree(a), db = g_.degree(b);
        g_.apply(u);
        for (auto [v, before] : {std::pair{a, da}, std::pair{b, db}}) {
            int after = g_.degree(v);
            if (after == before) continue;  // multiplicity change only
            if (before >= 1 && before <= n - 1) deltas.emplace_back(before, -1.0);
            if (after >= 1 && after <= n - 1) deltas.emplace_back(after, +1.0);
        }
    } else if (u.kind != Update::Kind::Noop) {
        throw std::invalid_argument("degree histogram: graph updates only");
    }
    return hist_->step_multi(deltas);
}

}  // namespace dpcr
