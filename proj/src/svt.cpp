#include "dpcr/svt.hpp"

#include <cmath>
#include <stdexcept>

namespace dpcr {

namespace {

double svt_sigma(int cap, const PrivacyBudget& b, double sensitivity) {
    if (cap < 1) throw std::invalid_argument("svt: cap must be >= 1");
    if (!(sensitivity > 0.0))
        throw std::invalid_argument("svt: sensitivity must be > 0");
    b.validate();
    if (b.delta == 0.0) return 2.0 * cap * sensitivity / b.epsilon;
    return std::sqrt(32.0 * cap * std::log(1.0 / b.delta)) * sensitivity /
           b.epsilon;
}

}  // namespace

SvtInstance::SvtInstance(int cap, const PrivacyBudget& budget, RandomSource rng,
                         double sensitivity)
    : cap_(cap),
      sigma_(svt_sigma(cap, budget, sensitivity)),
      rng_(rng),
      mode_(budget.noise_mode) {
    rho_ = sample_laplace(sigma_, rng_, mode_);
}

SvtInstance::Answer SvtInstance::query(double q, double thr) {
    if (halted()) throw std::logic_error("svt: halted after cap positives");
    double nu = sample_laplace(2.0 * sigma_, rng_, mode_);
    if (q + nu >= thr + rho_) {
        ++positives_;
        rho_ = sample_laplace(sigma_, rng_, mode_);
        return Answer::Positive;
    }
    return Answer::Negative;
}

double svt_alpha(int cap, int64_t horizon, const PrivacyBudget& budget,
                 double sensitivity) {
    if (horizon < 1) throw std::invalid_argument("svt_alpha: horizon must be >= 1");
    budget.validate();
    double logs = std::log(static_cast<double>(horizon)) +
                  std::log(2.0 * cap / budget.beta);
    if (budget.delta == 0.0)
        return 8.0 * cap * logs * sensitivity / budget.epsilon;
    return logs * std::sqrt(512.0 * cap * std::log(1.0 / budget.delta)) *
           sensitivity / budget.epsilon;
}

}  // namespace dpcr
