#pragma once
#include <functional>
#include <memory>

#include "dpcr/gadgets.hpp"
#include "dpcr/graph_mechanisms.hpp"
#include "dpcr/graphs.hpp"

namespace dpcr {

// Anything that consumes a graph stream and can answer the gadget queries.
class GraphQueryMechanism {
public:
    virtual ~GraphQueryMechanism() = default;
    virtual void apply(const Update& u) = 0;
    virtual double respond(const QueryPoint& qp) = 0;
};

// Noise-free reference: answers with the exact statistic.
class ExactGraphOracle : public GraphQueryMechanism {
public:
    explicit ExactGraphOracle(int n);
    void apply(const Update& u) override;
    double respond(const QueryPoint& qp) override;

private:
    DynamicGraph g_;
    IncrementalMatching matching_;
};

// Ladder mechanism speaking the gadget query protocol (scalar targets only).
class LadderQueryMechanism : public GraphQueryMechanism {
public:
    LadderQueryMechanism(const LadderSpec& spec, const PrivacyBudget& budget,
                         RandomSource rng);
    void apply(const Update& u) override;
    double respond(const QueryPoint& qp) override;
    const LadderMechanism& ladder() const { return ladder_; }

private:
    LadderMechanism ladder_;
};

struct ReductionResult {
    std::vector<double> decoded;   // one inner-product estimate per round
    std::vector<int64_t> truth;    // <x, q^j>
    double max_error = 0.0;
};

// Algorithm: stream the gadget into the mechanism; at each round subtract the
// pre-probe answer from the post-probe answer. The difference cancels the
// round's constant baseline, leaving an estimate of <x, q^j>.
ReductionResult run_inc_reduction(const GadgetInstance& g,
                                  GraphQueryMechanism& mech);

// Top-k counterpart: `responder` maps the current true frequency vector to
// estimates of all n Top-k values (the exact responder returns the sorted
// prefix sums themselves). alpha is the decoder's slack.
ReductionResult run_topk_reduction(
    const TopKReductionInstance& r,
    const std::function<std::vector<double>(const std::vector<int64_t>&)>&
        responder,
    double alpha);

std::vector<double> exact_topk_responder(const std::vector<int64_t>& freq);

// ---------------------------------------------------------------------------
// Marginals-solving families: a base graph H_n and single edges e_1..e_n with
// g(H_n + {e_i : i in S}) = w * |S| for every subset S. The stream inserts
// H_n, then runs d rounds of n insert slots (row j of Y) followed by n undo
// slots; the reading after round j's inserts recovers w * (column sum of Y_j).

enum class MsfProblem {
    StMincut,
    Mincut,
    DegAtLeast,
    KCore,
    EdgeCount,
    ZeroBasedMatching,
    ZeroBasedTriangle
};

struct MsfInstance {
    MsfProblem problem;
    int n = 0, d = 0, tau = 0;
    int64_t w = 1;  // per-bit weight of the statistic
    std::vector<std::vector<uint8_t>> Y;  // d rounds x n edge bits
    UpdateStream stream;
    std::vector<int64_t> reading_steps;   // after round j's inserts
    std::vector<Update> probe_edges;      // e_1..e_n
    int designated_vertex = 0;

    int64_t evaluate(const DynamicGraph& g) const;  // exact statistic
    int64_t column_sum(int j) const;                // rounds are 0-based here
};

MsfInstance build_msf_stream(MsfProblem problem, int n, int d,
                             const std::vector<std::vector<uint8_t>>& Y,
                             int tau = 2);

// run the stream against the exact evaluator; returns the d readings
std::vector<int64_t> run_msf_exact(const MsfInstance& inst);

// number of base edges xi(n) for a family
int64_t msf_base_edges(MsfProblem problem, int n, int tau = 2);

// item-level budget planner: d = floor((T*eps)^(2/3)) when delta > 0, else
// floor(sqrt(T*eps)); n is the largest value fitting xi(n) + 2*d*n <= T
struct MsfPlan {
    int n = 0, d = 0;
    int64_t total_steps = 0;
};
MsfPlan plan_msf(MsfProblem problem, int64_t horizon, double epsilon,
                 double delta, int tau = 2);

// ---------------------------------------------------------------------------
// Neighboring-input diff checks

struct DiffReport {
    std::vector<int64_t> differing_steps;  // stream positions that differ
    bool single_edge = true;   // all differing updates touch one probe edge
    double internal_l1 = 0.0;  // per-counter / per-level input stream change
    double internal_bound = 0.0;
};

// flip one secret bit of an incremental gadget; streams must differ in
// exactly one position. For the deghist gadget internal_l1 reports the worst
// per-degree-counter l_1 input change against the bound `sensitivity`.
DiffReport diff_inc_gadget(GadgetKind kind, const InnerProductInstance& ip,
                           int flip_index);

// flip one Y row (item level: every occurrence of edge e_i)
DiffReport diff_msf(const MsfInstance& inst, int flip_edge);

// blank one insert of an element stream; reports the l_1 change of the level
// streams feeding the second SNE histogram against the bound 4*Lambda
DiffReport diff_sne_levels(const UpdateStream& s, int64_t blank_step,
                           double zeta, double tau_f);

}  // namespace dpcr
