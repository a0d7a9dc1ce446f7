#pragma once
#include <cstdint>

#include "dpcr/core.hpp"

namespace dpcr {

// Sparse vector: answers Positive/Negative threshold comparisons and halts
// after cap positives. The threshold noise rho ~ Lap(sigma) is resampled after
// every positive answer; each query gets fresh nu ~ Lap(2*sigma).
//   sigma = 2*cap*sensitivity/epsilon                     if delta = 0
//   sigma = sqrt(32*cap*ln(1/delta))*sensitivity/epsilon  if delta > 0
class SvtInstance {
public:
    SvtInstance(int cap, const PrivacyBudget& budget, RandomSource rng,
                double sensitivity = 1.0);

    enum class Answer { Positive, Negative };

    // one comparison of query value q against threshold thr;
    // throws std::logic_error once halted
    Answer query(double q, double thr);

    bool halted() const { return positives_ >= cap_; }
    int positives() const { return positives_; }
    int cap() const { return cap_; }
    double sigma() const { return sigma_; }

private:
    int cap_, positives_ = 0;
    double sigma_, rho_;
    RandomSource rng_;
    NoiseMode mode_;
};

// Per-query additive accuracy alpha holding for all T queries with
// probability >= 1-beta, provided at most cap queries come within alpha of
// their thresholds:
//   8*cap*(ln T + ln(2*cap/beta))*sensitivity/epsilon                    delta=0
//   (ln T + ln(2*cap/beta))*sqrt(512*cap*ln(1/delta))*sensitivity/epsilon delta>0
double svt_alpha(int cap, int64_t horizon, const PrivacyBudget& budget,
                 double sensitivity = 1.0);

}  // namespace dpcr
