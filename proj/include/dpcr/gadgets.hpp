#pragma once
#include <vector>

#include "dpcr/core.hpp"

namespace dpcr {

// A secret bit vector x of length d together with m public queries q^j; the
// reductions recover the inner products <x, q^j> from a continual-release
// mechanism's answers.
struct InnerProductInstance {
    int d = 0, m = 0;
    std::vector<uint8_t> x;                 // secret dataset bits
    std::vector<std::vector<uint8_t>> q;    // m query bit vectors

    static InnerProductInstance random(int d, int m, RandomSource rng);
    int64_t inner(int j) const;  // <x, q^j>, j in [0, m)
    void validate() const;
};

enum class GadgetKind { Matching, KCore, DegHist };

enum class QueryKind { MatchingSize, CoreOfVertex, DegreeCount };

struct QueryPoint {
    int64_t step;   // fires after this many stream updates
    int j;          // query round, 1-based
    bool post;      // false: before the round's probe edges, true: after
    QueryKind kind;
    int64_t param;  // designated vertex (core) or degree class (deghist)
};

// An incremental hard instance: a graph stream interleaving the secret
// dataset edges with per-round probe (S^j) and top-up (T^j) phases, plus the
// two query points per round. The probe and top-up phases are padded with
// bot steps to fixed lengths so the timetable is the same for every (x, q).
struct GadgetInstance {
    GadgetKind kind;
    InnerProductInstance ip;
    UpdateStream stream;
    std::vector<QueryPoint> timetable;  // 2 entries per round, pre then post
    int designated_vertex = 0;

    // exact statistic value the mechanism should see at a query point
    int64_t expected(const QueryPoint& qp) const;
};

// Secret bit i toggles edge (u0_i, v0_i); round j probes with the matching
// edges (u^j_i, v^j_i) and then tops the paths up to the next layer. The
// matching size is j*d before the probes and j*d + <x,q^j> after.
GadgetInstance build_matching_gadget(const InnerProductInstance& ip);

// Secret bit i toggles the edge from the designated vertex to u_i; probes
// attach u_i to the next 2d clique vertices. The designated vertex's core
// number is 2*j*d before the probes and 2*j*d + <x,q^j> after. Throws when
// the degree certificate fails (d = 1 only supports a single round).
GadgetInstance build_kcore_gadget(const InnerProductInstance& ip);

// Secret bit i toggles (v_i, w_i); round j probes with (w_i, x_j) and tops
// up the remaining (w_i, x_j) edges. The count of degree-(j+1) vertices is 0
// before the probes and <x,q^j> after.
GadgetInstance build_deghist_gadget(const InnerProductInstance& ip);

GadgetInstance build_gadget(GadgetKind kind, const InnerProductInstance& ip);

// ---------------------------------------------------------------------------
// Top-k reduction instance: an element stream over n = d elements keeping
// element i at frequency j-1+x_i before round j; the round inserts the query
// bits, reads all Top-k prefix sums, then re-levels for the next round.
struct TopKReductionInstance {
    InnerProductInstance ip;
    UpdateStream stream;
    std::vector<int64_t> query_steps;  // one per round, after the query bits
};

TopKReductionInstance build_topk_reduction(const InnerProductInstance& ip);

// Smallest k whose prefix estimate falls below the slope line (j+1)k - alpha;
// returns n+1 (flagged) when no k qualifies. With exact answers and alpha = 0
// this equals <x, q^j> + 1.
int decode_topk(const std::vector<double>& prefix_estimates, int round_j,
                double alpha);

}  // namespace dpcr
