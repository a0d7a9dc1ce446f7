#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpcr/core.hpp"

namespace dpcr {

// height of the dyadic tree over a horizon of T steps
int tree_height(int64_t horizon);

// Continual counter over the dyadic interval tree. Every tree node carries one
// Laplace draw at scale sensitivity*(h+1)/epsilon, sampled when the node forms
// and reused by every later prefix that covers it. The output at step t sums
// the true values and noises of the canonical decomposition of [1,t].
class TreeCounter {
public:
    TreeCounter(int64_t horizon, double epsilon, RandomSource rng,
                NoiseMode mode = NoiseMode::Standard, double sensitivity = 1.0,
                bool record_nodes = false);

    // advance one step with input v, return the noisy prefix sum
    double step(double v);

    double output() const { return out_; }
    int64_t time() const { return t_; }
    int64_t horizon() const { return horizon_; }
    int height() const { return height_; }
    double noise_scale() const { return scale_; }

    struct Node {
        int level;      // block size 2^level
        int64_t start;  // first step covered (1-based)
        double sum;     // true partial sum over the block
    };
    // partial sums of every node formed so far (only when record_nodes)
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    struct Block {
        int level;
        int64_t start;
        double sum;
        double noise;
    };
    std::vector<Block> blocks_;  // strictly decreasing levels, left to right
    std::vector<Node> nodes_;
    RandomSource rng_;
    int64_t horizon_, t_ = 0;
    int height_;
    double scale_, out_ = 0.0;
    NoiseMode mode_;
    bool record_nodes_;
};

// n independent tree counters composed in parallel: column j only ever sees
// the updates routed to it, so each column spends the full epsilon. With
// `shift` the outputs are lowered by the error bound E so that, with
// probability >= 1-beta, true-2E <= output <= true in every column at every
// step (one-sided from above).
class HistogramMechanism {
public:
    HistogramMechanism(int columns, int64_t horizon, const PrivacyBudget& budget,
                       RandomSource rng, bool shift = false,
                       double sensitivity = 1.0);

    // advance one step: value v lands in `column`, every other column sees 0
    const std::vector<double>& step(int column, double v);
    // a step carrying no update at all
    const std::vector<double>& step_noop() { return step(0, 0.0); }
    // one step where several columns change at once (net value per column)
    const std::vector<double>& step_multi(
        const std::vector<std::pair<int, double>>& deltas);

    const std::vector<double>& outputs() const { return out_; }
    double error_bound() const { return bound_; }
    int columns() const { return static_cast<int>(counters_.size()); }
    int64_t time() const { return counters_.empty() ? 0 : counters_[0].time(); }

private:
    std::vector<TreeCounter> counters_;
    std::vector<double> out_;
    double bound_ = 0.0;
    bool shift_;
};

// ---------------------------------------------------------------------------
// Monte Carlo calibrated error bounds.
//
// compute_error_bound(n, T, eps, beta) returns the smallest E such that the
// max over t <= T and all n columns of the absolute counter noise exceeds E
// with empirical frequency <= beta, over kCalibrationPaths simulated noise
// paths drawn from a fixed build-time seed. Columns are independent and
// identically distributed, so the bound is the (1-beta)^(1/n) empirical
// quantile of the single-column max-noise distribution; epsilon enters by
// exact 1/epsilon scaling of every Laplace draw.

inline constexpr int kCalibrationPaths = 100000;
inline constexpr uint64_t kCalibrationSeed = 0x5eedc0de2024ULL;

double compute_error_bound(int n, int64_t horizon, double epsilon, double beta);

// (eps,delta) closed-form alternative: E = c' * sqrt(log(nT/beta)) * log(T)
// * sqrt(log(1/delta)) / eps, with c' fitted once against the Monte Carlo
// bound at the reference point (n=1, T=1024, beta=0.05, delta=1e-6).
double compute_error_bound_delta(int n, int64_t horizon, double epsilon,
                                 double delta, double beta);

// sorted per-path max |noise| for a single column at epsilon = 1 (cached)
const std::vector<double>& max_noise_distribution(int64_t horizon);

// Persistent cache of calibrated bounds, keyed by (n, T, beta) at epsilon=1.
// load_error_bounds seeds the in-memory cache from a CSV golden file;
// save_error_bounds dumps every bound computed or loaded so far.
bool load_error_bounds(const std::string& path);
void save_error_bounds(const std::string& path);

}  // namespace dpcr
