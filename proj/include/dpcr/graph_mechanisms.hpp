#pragma once
#include <memory>

#include "dpcr/core.hpp"
#include "dpcr/counting.hpp"
#include "dpcr/graphs.hpp"
#include "dpcr/svt.hpp"

namespace dpcr {

// epsilon' such that k mechanisms at epsilon' each compose to
// (eps_total, ~k*delta') under advanced composition:
//   epsilon' = eps_total / (2*sqrt(2*k*ln(1/delta')))
double advanced_composition_epsilon(int k, double eps_total, double delta_prime);

// ---------------------------------------------------------------------------
// Ladder mechanism: releases a monotone graph statistic by walking a rung
// grid over its range [lo, hi] with one sparse-vector instance. Rung step
// k = ceil(sqrt(range)) for delta = 0, ceil(range^(1/3)) for delta > 0; the
// positive cap is ceil(range/k). Multiple rungs may be crossed inside one
// stream step. Decreasing statistics run on the negated value.

struct LadderSpec {
    enum class Target { Matching, KCoreOfVertex, Components };
    Target target = Target::Matching;
    int vertex = 0;  // designated vertex for KCoreOfVertex
    int n = 0;       // vertices
    int64_t horizon = 0;
    double sensitivity = 1.0;
};

struct LadderParams {
    double lo = 0, hi = 0;
    int64_t rung = 1;  // k
    int cap = 1;       // c
    bool decreasing = false;
};

LadderParams ladder_params(const LadderSpec& spec, const PrivacyBudget& budget);

class LadderMechanism {
public:
    LadderMechanism(const LadderSpec& spec, const PrivacyBudget& budget,
                    RandomSource rng);

    // apply one graph update, return the released estimate of the statistic
    double step(const Update& u);

    double released() const;
    bool saturated() const { return saturated_; }
    const LadderParams& params() const { return params_; }
    double true_value() const;  // exact g(G^t), for harness error reports

private:
    double eval() const;  // current statistic, in increasing orientation
    LadderSpec spec_;
    LadderParams params_;
    SvtInstance svt_;
    DynamicGraph g_;
    std::unique_ptr<IncrementalMatching> matching_;
    int64_t jumps_ = 0;
    bool saturated_ = false;
};

// ---------------------------------------------------------------------------
// Continual degree histogram: one tree counter per degree value 1..n-1 at
// epsilon' from advanced composition over n counters. An edge update moves
// each endpoint between degree classes, emitting -1 to the old class and +1
// to the new one; `sensitivity` bounds the l_1 change of any one counter's
// input stream under neighboring edge streams (default 8, conservative;
// switch to 4 for the tight accounting).
class PrivateDegreeHistogram {
public:
    PrivateDegreeHistogram(int n, int64_t horizon, const PrivacyBudget& budget,
                           RandomSource rng, double sensitivity = 8.0);

    // outputs[d] estimates the number of degree-d vertices, d = 1..n-1
    const std::vector<double>& step(const Update& u);
    const std::vector<double>& outputs() const { return hist_->outputs(); }

    double error_bound() const { return hist_->error_bound(); }
    double epsilon_prime() const { return eps_prime_; }

private:
    DynamicGraph g_;
    std::unique_ptr<HistogramMechanism> hist_;
    double eps_prime_;
};

}  // namespace dpcr
