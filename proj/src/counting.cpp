#include "dpcr/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dpcr {

int tree_height(int64_t horizon) {
    if (horizon < 1) throw std::invalid_argument("tree_height: horizon must be >= 1");
    int h = 0;
    while ((int64_t(1) << h) < horizon) ++h;
    return h;
}

TreeCounter::TreeCounter(int64_t horizon, double epsilon, RandomSource rng,
                         NoiseMode mode, double sensitivity, bool record_nodes)
    : rng_(rng),
      horizon_(horizon),
      height_(tree_height(horizon)),
      mode_(mode),
      record_nodes_(record_nodes) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("TreeCounter: epsilon must be > 0");
    if (!(sensitivity > 0.0))
        throw std::invalid_argument("TreeCounter: sensitivity must be > 0");
    scale_ = sensitivity * (height_ + 1) / epsilon;
}

double TreeCounter::step(double v) {
    if (t_ >= horizon_) throw std::logic_error("TreeCounter: horizon exhausted");
    ++t_;
    Block b{0, t_, v, sample_laplace(scale_, rng_, mode_)};
    if (record_nodes_) nodes_.push_back({b.level, b.start, b.sum});
    while (!blocks_.empty() && blocks_.back().level == b.level) {
        // two full blocks of the same size close a parent node: fresh noise
        Block left = blocks_.back();
        blocks_.pop_back();
        b.level += 1;
        b.start = left.start;
        b.sum += left.sum;
        b.noise = sample_laplace(scale_, rng_, mode_);
        if (record_nodes_) nodes_.push_back({b.level, b.start, b.sum});
    }
    blocks_.push_back(b);
    out_ = 0.0;
    for (const Block& blk : blocks_) out_ += blk.sum + blk.noise;
    return out_;
}

HistogramMechanism::HistogramMechanism(int columns, int64_t horizon,
                                       const PrivacyBudget& budget,
                                       RandomSource rng, bool shift,
                                       double sensitivity)
    : shift_(shift) {
    budget.validate();
    if (columns < 1) throw std::invalid_argument("HistogramMechanism: need >= 1 column");
    counters_.reserve(columns);
    for (int j = 0; j < columns; ++j)
        counters_.emplace_back(horizon, budget.epsilon, rng.child(j),
                               budget.noise_mode, sensitivity);
    out_.assign(columns, 0.0);
    bound_ = sensitivity *
             compute_error_bound(columns, horizon, budget.epsilon, budget.beta);
}

const std::vector<double>& HistogramMechanism::step(int column, double v) {
    if (column < 0 || column >= columns())
        throw std::invalid_argument("HistogramMechanism: column out of range");
    for (int j = 0; j < columns(); ++j) {
        double raw = counters_[j].step(j == column ? v : 0.0);
        out_[j] = shift_ ? raw - bound_ : raw;
    }
    return out_;
}

const std::vector<double>& HistogramMechanism::step_multi(
    const std::vector<std::pair<int, double>>& deltas) {
    std::vector<double> v(columns(), 0.0);
    for (auto [col, val] : deltas) {
        if (col < 0 || col >= columns())
            throw std::invalid_argument("HistogramMechanism: column out of range");
        v[col] += val;
    }
    for (int j = 0; j < columns(); ++j) {
        double raw = counters_[j].step(v[j]);
        out_[j] = shift_ ? raw - bound_ : raw;
    }
    return out_;
}

// ---------------------------------------------------------------------------
// calibration

namespace {

struct BoundKey {
    int n;
    int64_t horizon;
    double beta;
    bool operator<(const BoundKey& o) const {
        if (n != o.n) return n < o.n;
        if (horizon != o.horizon) return horizon < o.horizon;
        return beta < o.beta;
    }
};

std::map<BoundKey, double>& bound_cache() {
    static std::map<BoundKey, double> c;
    return c;
}

std::map<int64_t, std::vector<double>>& dist_cache() {
    static std::map<int64_t, std::vector<double>> c;
    return c;
}

// one noise path: max over t <= T of |sum of node noises covering [1,t]|
double simulate_max_noise(int64_t horizon, double scale, RandomSource& rng) {
    std::vector<std::pair<int, double>> blocks;  // (level, noise)
    blocks.reserve(64);
    double cur = 0.0, worst = 0.0;
    for (int64_t t = 1; t <= horizon; ++t) {
        int level = 0;
        double noise = laplace_inverse_cdf(rng.next_uniform(), scale);
        cur += noise;
        while (!blocks.empty() && blocks.back().first == level) {
            cur -= blocks.back().second;
            cur -= noise;
            blocks.pop_back();
            ++level;
            noise = laplace_inverse_cdf(rng.next_uniform(), scale);
            cur += noise;
        }
        blocks.emplace_back(level, noise);
        worst = std::max(worst, std::abs(cur));
    }
    return worst;
}

}  // namespace

const std::vector<double>& max_noise_distribution(int64_t horizon) {
    auto it = dist_cache().find(horizon);
    if (it != dist_cache().end()) return it->second;
    double scale = tree_height(horizon) + 1;  // epsilon = 1
    std::vector<double> maxima(kCalibrationPaths);
    for (int p = 0; p < kCalibrationPaths; ++p) {
        RandomSource rng = RandomSource(kCalibrationSeed).child(
            static_cast<uint64_t>(horizon) * 0x10001ULL + p);
        maxima[p] = simulate_max_noise(horizon, scale, rng);
    }
    std::sort(maxima.begin(), maxima.end());
    return dist_cache().emplace(horizon, std::move(maxima)).first->second;
}

double compute_error_bound(int n, int64_t horizon, double epsilon, double beta) {
    if (n < 1) throw std::invalid_argument("compute_error_bound: n must be >= 1");
    if (horizon < 1)
        throw std::invalid_argument("compute_error_bound: horizon must be >= 1");
    if (!(epsilon > 0.0))
        throw std::invalid_argument("compute_error_bound: epsilon must be > 0");
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("compute_error_bound: beta must lie in (0,1)");

    BoundKey key{n, horizon, beta};
    auto it = bound_cache().find(key);
    if (it != bound_cache().end()) return it->second / epsilon;

    const std::vector<double>& dist = max_noise_distribution(horizon);
    // max over n iid columns stays below E with empirical prob F(E)^n
    double q = std::pow(1.0 - beta, 1.0 / n);
    size_t idx = static_cast<size_t>(std::ceil(q * dist.size()));
    if (idx > 0) --idx;
    if (idx >= dist.size()) idx = dist.size() - 1;
    double e1 = dist[idx];
    bound_cache()[key] = e1;
    return e1 / epsilon;
}

double compute_error_bound_delta(int n, int64_t horizon, double epsilon,
                                 double delta, double beta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument(
            "compute_error_bound_delta: delta must lie in (0,1)");
    auto shape = [](int nn, int64_t tt, double dd, double bb) {
        return std::sqrt(std::log(nn * static_cast<double>(tt) / bb)) *
               std::log(static_cast<double>(tt)) * std::sqrt(std::log(1.0 / dd));
    };
    static const double cprime =
        compute_error_bound(1, 1024, 1.0, 0.05) / shape(1, 1024, 1e-6, 0.05);
    return cprime * shape(n, horizon, delta, beta) / epsilon;
}

bool load_error_bounds(const std::string& path) {
    std::ifstream in(path);
    if (!in) return false;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("n,", 0) == 0) continue;  // column header
        std::istringstream ls(line);
        std::string tok;
        std::vector<std::string> cols;
        while (std::getline(ls, tok, ',')) cols.push_back(tok);
        if (cols.size() != 5)
            throw std::invalid_argument(path + " line " + std::to_string(lineno) +
                                        ": expected 5 columns");
        BoundKey key{std::stoi(cols[0]), std::stoll(cols[1]), std::stod(cols[3])};
        double eps = std::stod(cols[2]);
        if (eps != 1.0)
            throw std::invalid_argument(path + " line " + std::to_string(lineno) +
                                        ": cached rows must use epsilon=1");
        bound_cache()[key] = std::stod(cols[4]);
    }
    return true;
}

void save_error_bounds(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << "# error bounds cache v1: Monte Carlo calibrated tree-counter bounds\n"
        << "# rows are canonical at epsilon=1; E(n,T,eps,beta) = E(n,T,1,beta)/eps\n"
        << "n,T,epsilon,beta,E\n";
    char buf[128];
    for (const auto& [key, e] : bound_cache()) {
        std::snprintf(buf, sizeof buf, "%d,%lld,1,%.17g,%.17g\n", key.n,
                      static_cast<long long>(key.horizon), key.beta, e);
        out << buf;
    }
}

}  // namespace dpcr
