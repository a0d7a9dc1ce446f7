#pragma once
#include <memory>
#include <optional>
#include <vector>

#include "dpcr/core.hpp"
#include "dpcr/counting.hpp"
#include "dpcr/norms.hpp"

namespace dpcr {

// One-shot Top-k release for a static frequency vector: sorts the
// frequencies descending and runs a tree counter over the sorted sequence
// (neighboring inputs perturb that sequence by 1 in l_1), so the vector of
// all n noisy prefix sums costs a single epsilon. Entry k-1 estimates the
// sum of the k largest frequencies.
std::vector<double> static_topk(const std::vector<int64_t>& freq,
                                const PrivacyBudget& budget, RandomSource rng);
// calibrated bound on max_k |estimate - true| holding w.p. >= 1-beta
double static_topk_error_bound(int n, const PrivacyBudget& budget);

// ---------------------------------------------------------------------------
// Simultaneous estimation of every monotone symmetric norm of the running
// frequency vector of an insertion-only stream, to multiplicative factor
// (1+zeta) plus an additive slack of A*L(e_1).
//
// Internals: a frequency threshold tau_f drawn uniformly from
// [4E(n)/zeta^2, (4+2 zeta)E(n)/zeta^2]; heavy elements (noisy frequency
// above tau_f) are reported individually by a one-sided histogram H1 over
// the n elements at budget epsilon/2; light elements are bucketed into
// Lambda = ceil(log_{1+zeta} tau_f) geometric levels whose sizes are tracked
// by a one-sided histogram H2 at budget epsilon/(2*Lambda); levels with
// noisy size below tau_b = 2*Lambda*E(Lambda)/zeta are dropped. The sketch
// E replaces each surviving level-i element by (1+zeta)^i and appends the
// heavy values, so L(E) approximates L(f) for every monotone symmetric L
// at once.
struct SneConfig {
    int n = 0;
    int64_t horizon = 0;
    double zeta = 0.25;  // in (0, 1/2]
    PrivacyBudget budget;
    uint64_t seed = 1;
    // test hooks: force the thresholds instead of deriving them from the
    // calibrated error bounds
    std::optional<double> tau_f_override;
    std::optional<double> tau_b_override;

    void validate() const;
};

class SneState {
public:
    explicit SneState(const SneConfig& cfg);
    const SneConfig& config() const { return cfg_; }

    // one stream step (insert or bot); returns the current sketch E
    const std::vector<double>& step(const Update& u);

    const std::vector<double>& estimate() const { return est_; }
    double query(const NormSpec& norm) const { return eval_norm(norm, est_); }

    double tau_f() const { return tau_f_; }
    double tau_b() const { return tau_b_; }
    int levels() const { return levels_; }
    // additive slack A = tau_f * tau_b * (1+zeta)^3 / zeta; the guarantee is
    //   (1-3 zeta)/(1+zeta) L(f) - A L(e_1) <= L(E) <= (1+zeta) L(f)
    double slack() const;
    int64_t time() const { return t_; }
    const std::vector<int64_t>& frequencies() const { return freq_; }

private:
    void rebuild();
    int level_of(int64_t f) const;  // 1-based level index

    SneConfig cfg_;
    double tau_f_, tau_b_;
    int levels_;
    std::vector<double> pow_;  // (1+zeta)^i for i = 0..levels
    std::unique_ptr<HistogramMechanism> h1_, h2_;
    std::vector<int64_t> freq_;
    std::vector<double> est_;
    int64_t t_ = 0;
};

// Median-of-m boosting: m = ceil(ln(T/beta_boost)) independent copies at
// budget epsilon/m each; queries return the median of the copies' values.
class BoostedSne {
public:
    BoostedSne(const SneConfig& base, double beta_boost);

    void step(const Update& u);
    double query(const NormSpec& norm) const;
    double slack() const;  // max over copies
    int copies() const { return static_cast<int>(states_.size()); }
    const SneState& copy(int i) const { return states_[i]; }

private:
    std::vector<SneState> states_;
};

}  // namespace dpcr
