#include "dpcr/sne.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dpcr {

std::vector<double> static_topk(const std::vector<int64_t>& freq,
                                const PrivacyBudget& budget, RandomSource rng) {
    budget.validate();
    if (freq.empty()) throw std::invalid_argument("static_topk: empty input");
    std::vector<int64_t> sorted = freq;
    std::sort(sorted.begin(), sorted.end(), std::greater<int64_t>());
    int n = static_cast<int>(sorted.size());
    TreeCounter tc(n, budget.epsilon, rng, budget.noise_mode);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) out[i] = tc.step(static_cast<double>(sorted[i]));
    return out;
}

double static_topk_error_bound(int n, const PrivacyBudget& budget) {
    budget.validate();
    return compute_error_bound(1, n, budget.epsilon, budget.beta);
}

// ---------------------------------------------------------------------------

void SneConfig::validate() const {
    budget.validate();
    if (n < 1) throw std::invalid_argument("sne: n must be >= 1");
    if (horizon < 1) throw std::invalid_argument("sne: horizon must be >= 1");
    if (!(zeta > 0.0 && zeta <= 0.5))
        throw std::invalid_argument("sne: zeta must lie in (0, 1/2]");
    if (tau_f_override && !(*tau_f_override > 1.0))
        throw std::invalid_argument("sne: tau_f override must be > 1");
    if (tau_b_override && !(*tau_b_override > 0.0))
        throw std::invalid_argument("sne: tau_b override must be > 0");
}

SneState::SneState(const SneConfig& cfg) : cfg_(cfg) {
    cfg.validate();
    RandomSource rng(cfg.seed);
    const double z = cfg.zeta;

    PrivacyBudget b1 = cfg.budget;
    b1.epsilon = cfg.budget.epsilon / 2.0;

    if (cfg.tau_f_override) {
        tau_f_ = *cfg.tau_f_override;
    } else {
        double en = compute_error_bound(cfg.n, cfg.horizon, b1.epsilon, b1.beta);
        // threshold randomization: a fixed threshold could sit right on top
        // of many frequencies; a uniform draw over one noise width avoids that
        tau_f_ = rng.next_uniform(4.0 * en / (z * z), (4.0 + 2.0 * z) * en / (z * z));
    }

    levels_ = std::max(1, static_cast<int>(std::ceil(std::log(tau_f_) / std::log1p(z))));
    pow_.resize(levels_ + 1);
    for (int i = 0; i <= levels_; ++i) pow_[i] = std::pow(1.0 + z, i);

    PrivacyBudget b2 = cfg.budget;
    b2.epsilon = cfg.budget.epsilon / (2.0 * levels_);

    if (cfg.tau_b_override) {
        tau_b_ = *cfg.tau_b_override;
    } else {
        double el = compute_error_bound(levels_, 2 * cfg.horizon, b2.epsilon, b2.beta);
        tau_b_ = 2.0 * levels_ * el / z;
    }

    // one-sided (shifted) histograms keep the estimates below the truth with
    // high probability; with noise off the raw outputs are already exact
    bool shift = cfg.budget.noise_mode == NoiseMode::Standard;
    h1_ = std::make_unique<HistogramMechanism>(cfg.n, cfg.horizon, b1,
                                               rng.child(1), shift);
    h2_ = std::make_unique<HistogramMechanism>(levels_, 2 * cfg.horizon, b2,
                                               rng.child(2), shift);
    freq_.assign(cfg.n, 0);
    est_.assign(cfg.n, 0.0);
}

int SneState::level_of(int64_t f) const {
    // smallest i >= 1 with f < (1+zeta)^i
    int i = static_cast<int>(std::floor(std::log(static_cast<double>(f)) /
                                        std::log1p(cfg_.zeta))) + 1;
    if (i < 1) i = 1;
    while (i > 1 && pow_[i - 1] > static_cast<double>(f)) --i;
    while (i < levels_ && pow_[i] <= static_cast<double>(f)) ++i;
    return i;
}

const std::vector<double>& SneState::step(const Update& u) {
    if (t_ >= cfg_.horizon) throw std::logic_error("sne: horizon exhausted");
    ++t_;
    if (u.kind == Update::Kind::InsertElement) {
        if (u.a < 0 || u.a >= cfg_.n)
            throw std::invalid_argument("sne: element out of range");
        int64_t oldf = freq_[u.a];
        int64_t newf = oldf + 1;
        freq_[u.a] = newf;
        // every step emits exactly two level-size slots to H2 so neighboring
        // streams stay aligned; a slot with no change carries a zero
        if (oldf >= 1 && static_cast<double>(oldf) <= tau_f_)
            h2_->step(level_of(oldf) - 1, -1.0);
        else
            h2_->step_noop();
        if (static_cast<double>(newf) <= tau_f_)
            h2_->step(level_of(newf) - 1, +1.0);
        else
            h2_->step_noop();  // crossed tau_f: leaves the levels for good
        h1_->step(static_cast<int>(u.a), 1.0);
    } else if (u.kind == Update::Kind::Noop) {
        h2_->step_noop();
        h2_->step_noop();
        h1_->step_noop();
    } else {
        throw std::invalid_argument("sne: insertion-only element streams");
    }
    rebuild();
    return est_;
}

void SneState::rebuild() {
    const std::vector<double>& hf = h1_->outputs();
    const std::vector<double>& hb = h2_->outputs();
    est_.assign(cfg_.n, 0.0);

    // heavy elements keep their individual (one-sided) estimates
    int heavy = 0;
    for (int j = 0; j < cfg_.n; ++j)
        if (hf[j] > tau_f_) ++heavy;
    int pos = cfg_.n - heavy;
    for (int j = 0; j < cfg_.n; ++j)
        if (hf[j] > tau_f_) est_[pos++] = hf[j];

    // surviving levels contribute floor(b_i) copies of their upper boundary
    int64_t room = cfg_.n - heavy;
    int64_t at = 0;
    for (int i = 1; i <= levels_ && at < room; ++i) {
        if (hb[i - 1] < tau_b_) continue;
        int64_t copies = static_cast<int64_t>(std::floor(hb[i - 1]));
        copies = std::min(copies, room - at);
        for (int64_t c = 0; c < copies; ++c) est_[at++] = pow_[i];
    }
}

double SneState::slack() const {
    double z = cfg_.zeta;
    return tau_f_ * tau_b_ * (1.0 + z) * (1.0 + z) * (1.0 + z) / z;
}

// ---------------------------------------------------------------------------

BoostedSne::BoostedSne(const SneConfig& base, double beta_boost) {
    base.validate();
    if (!(beta_boost > 0.0 && beta_boost < 1.0))
        throw std::invalid_argument("boosted sne: beta must lie in (0,1)");
    int m = std::max(
        1, static_cast<int>(std::ceil(std::log(base.horizon / beta_boost))));
    states_.reserve(m);
    for (int i = 0; i < m; ++i) {
        SneConfig c = base;
        c.budget.epsilon = base.budget.epsilon / m;
        c.seed = RandomSource(base.seed).child(100 + i).seed();
        states_.emplace_back(c);
    }
}

void BoostedSne::step(const Update& u) {
    for (SneState& s : states_) s.step(u);
}

double BoostedSne::query(const NormSpec& norm) const {
    std::vector<double> vals;
    vals.reserve(states_.size());
    for (const SneState& s : states_) vals.push_back(s.query(norm));
    size_t mid = (vals.size() - 1) / 2;  // lower median
    std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
    return vals[mid];
}

double BoostedSne::slack() const {
    double a = 0.0;
    for (const SneState& s : states_) a = std::max(a, s.slack());
    return a;
}

}  // namespace dpcr
