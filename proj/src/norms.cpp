#include "dpcr/norms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

namespace dpcr {

NormSpec NormSpec::lp(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp: p must be >= 1");
    NormSpec s;
    s.kind = Kind::Lp;
    s.p = p;
    return s;
}

NormSpec NormSpec::topk(int k) {
    if (k < 1) throw std::invalid_argument("topk: k must be >= 1");
    NormSpec s;
    s.kind = Kind::TopK;
    s.k = k;
    return s;
}

NormSpec NormSpec::make_custom(
    std::string label, std::function<double(const std::vector<double>&)> f) {
    NormSpec s;
    s.kind = Kind::Custom;
    s.custom = std::move(f);
    s.label = std::move(label);
    return s;
}

std::string NormSpec::name() const {
    switch (kind) {
        case Kind::Lp: {
            if (p == std::floor(p))
                return "l" + std::to_string(static_cast<long long>(p));
            char buf[32];
            std::snprintf(buf, sizeof buf, "l%g", p);
            return buf;
        }
        case Kind::TopK:
            return "top" + std::to_string(k);
        case Kind::Custom:
            return label.empty() ? "custom" : label;
    }
    return "?";
}

double eval_norm(const NormSpec& norm, const std::vector<double>& x) {
    switch (norm.kind) {
        case NormSpec::Kind::Lp: {
            if (norm.p == 1.0) {
                double s = 0;
                for (double v : x) s += std::abs(v);
                return s;
            }
            if (norm.p == 2.0) {
                double s = 0;
                for (double v : x) s += v * v;
                return std::sqrt(s);
            }
            double s = 0;
            for (double v : x) s += std::pow(std::abs(v), norm.p);
            return std::pow(s, 1.0 / norm.p);
        }
        case NormSpec::Kind::TopK: {
            // sum of the k largest absolute entries; ties break by index order
            std::vector<double> a(x.size());
            for (size_t i = 0; i < x.size(); ++i) a[i] = std::abs(x[i]);
            size_t k = std::min<size_t>(norm.k, a.size());
            std::partial_sort(a.begin(), a.begin() + k, a.end(),
                              std::greater<double>());
            return std::accumulate(a.begin(), a.begin() + k, 0.0);
        }
        case NormSpec::Kind::Custom:
            if (!norm.custom) throw std::invalid_argument("custom norm missing evaluator");
            return norm.custom(x);
    }
    throw std::logic_error("eval_norm: bad kind");
}

double norm_unit(const NormSpec& norm, int n) {
    if (n < 1) throw std::invalid_argument("norm_unit: n must be >= 1");
    std::vector<double> e1(n, 0.0);
    e1[0] = 1.0;
    return eval_norm(norm, e1);
}

std::string audit_norm(const NormSpec& norm, int n, int rounds,
                       RandomSource rng) {
    const double tol = 1e-9;
    auto ev = [&](const std::vector<double>& v) { return eval_norm(norm, v); };
    {
        std::vector<double> zero(n, 0.0);
        if (std::abs(ev(zero)) > tol) return "norm of zero vector is nonzero";
        if (norm_unit(norm, n) <= tol) return "norm of e_1 is not positive";
    }
    for (int r = 0; r < rounds; ++r) {
        std::vector<double> x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = rng.next_uniform(-10.0, 10.0);
            y[i] = rng.next_uniform(-10.0, 10.0);
        }
        double lx = ev(x);
        double rel = tol * (1.0 + std::abs(lx));

        std::vector<double> perm = x;
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.next_below(i + 1)]);
        if (std::abs(ev(perm) - lx) > rel) return "not permutation invariant";

        std::vector<double> flip = x;
        for (int i = 0; i < n; ++i)
            if (rng.next_u64() & 1) flip[i] = -flip[i];
        if (std::abs(ev(flip) - lx) > rel) return "not sign invariant";

        std::vector<double> shrunk = x;
        for (int i = 0; i < n; ++i)
            shrunk[i] = x[i] * rng.next_uniform(0.0, 1.0);
        if (ev(shrunk) > lx + rel) return "not monotone in absolute values";

        std::vector<double> sum = x;
        for (int i = 0; i < n; ++i) sum[i] += y[i];
        if (ev(sum) > lx + ev(y) + rel) return "triangle inequality fails";

        double c = rng.next_uniform(0.0, 5.0);
        std::vector<double> scaled = x;
        for (int i = 0; i < n; ++i) scaled[i] *= c;
        if (std::abs(ev(scaled) - c * lx) > tol * (1.0 + c * std::abs(lx)))
            return "not homogeneous";
    }
    return "";
}

}  // namespace dpcr
