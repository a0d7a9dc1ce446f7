#pragma once
#include <functional>
#include <string>
#include <vector>

#include "dpcr/core.hpp"

namespace dpcr {

// A monotone symmetric norm. Built-ins cover l_p and Top-k (sum of the k
// largest absolute entries; Top-1 is l_inf, Top-n is l_1). Custom norms
// supply their own evaluator and should be screened with audit_norm.
struct NormSpec {
    enum class Kind { Lp, TopK, Custom };
    Kind kind = Kind::Lp;
    double p = 1.0;
    int k = 1;
    std::function<double(const std::vector<double>&)> custom;
    std::string name() const;

    static NormSpec lp(double p);
    static NormSpec l1() { return lp(1.0); }
    static NormSpec l2() { return lp(2.0); }
    static NormSpec topk(int k);
    static NormSpec make_custom(std::string label,
                                std::function<double(const std::vector<double>&)> f);

    std::string label;  // used by name() for custom norms
};

double eval_norm(const NormSpec& norm, const std::vector<double>& x);

// L(e_1): the norm of a single standard basis vector, dimension n
double norm_unit(const NormSpec& norm, int n);

// Randomized screen for custom norms: checks symmetry (permutation and sign
// invariance), monotonicity in absolute values, triangle inequality and
// homogeneity on `rounds` random vectors. Returns a description of the first
// violated property, or empty string if all checks pass.
std::string audit_norm(const NormSpec& norm, int n, int rounds, RandomSource rng);

}  // namespace dpcr
