#include "dpcr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dpcr {

ExactGraphOracle::ExactGraphOracle(int n) : g_(n), matching_(n) {}

void ExactGraphOracle::apply(const Update& u) {
    g_.apply(u);
    if (u.kind != Update::Kind::Noop) matching_.apply(u);
}

double ExactGraphOracle::respond(const QueryPoint& qp) {
    switch (qp.kind) {
        case QueryKind::MatchingSize:
            return matching_.size();
        case QueryKind::CoreOfVertex:
            return core_number(g_, static_cast<int>(qp.param));
        case QueryKind::DegreeCount: {
            std::vector<int64_t> h = degree_histogram(g_);
            int64_t deg = qp.param;
            if (deg < 1 || deg >= static_cast<int64_t>(h.size()))
                throw std::invalid_argument("respond: degree class out of range");
            return static_cast<double>(h[deg]);
        }
    }
    throw std::logic_error("respond: bad query kind");
}

LadderQueryMechanism::LadderQueryMechanism(const LadderSpec& spec,
                                           const PrivacyBudget& budget,
                                           RandomSource rng)
    : ladder_(spec, budget, rng) {}

void LadderQueryMechanism::apply(const Update& u) { ladder_.step(u); }

double LadderQueryMechanism::respond(const QueryPoint& qp) {
    if (qp.kind == QueryKind::DegreeCount)
        throw std::invalid_argument("ladder answers scalar statistics only");
    return ladder_.released();
}

ReductionResult run_inc_reduction(const GadgetInstance& g,
                                  GraphQueryMechanism& mech) {
    ReductionResult res;
    size_t next_q = 0;
    double pre = 0.0;
    for (int64_t t = 0; t <= static_cast<int64_t>(g.stream.updates.size()); ++t) {
        while (next_q < g.timetable.size() && g.timetable[next_q].step == t) {
            const QueryPoint& qp = g.timetable[next_q];
            double a = mech.respond(qp);
            if (!qp.post) {
                pre = a;
            } else {
                res.decoded.push_back(a - pre);
                res.truth.push_back(g.ip.inner(qp.j - 1));
            }
            ++next_q;
        }
        if (t < static_cast<int64_t>(g.stream.updates.size()))
            mech.apply(g.stream.updates[t]);
    }
    for (size_t j = 0; j < res.decoded.size(); ++j)
        res.max_error = std::max(
            res.max_error, std::abs(res.decoded[j] - static_cast<double>(res.truth[j])));
    return res;
}

std::vector<double> exact_topk_responder(const std::vector<int64_t>& freq) {
    std::vector<int64_t> sorted = freq;
    std::sort(sorted.begin(), sorted.end(), std::greater<int64_t>());
    std::vector<double> out(sorted.size());
    double acc = 0;
    for (size_t i = 0; i < sorted.size(); ++i) {
        acc += static_cast<double>(sorted[i]);
        out[i] = acc;
    }
    return out;
}

ReductionResult run_topk_reduction(
    const TopKReductionInstance& r,
    const std::function<std::vector<double>(const std::vector<int64_t>&)>&
        responder,
    double alpha) {
    ReductionResult res;
    std::vector<int64_t> freq(r.ip.d, 0);
    size_t next_q = 0;
    for (int64_t t = 0; t < static_cast<int64_t>(r.stream.updates.size()); ++t) {
        const Update& u = r.stream.updates[t];
        if (u.kind == Update::Kind::InsertElement) ++freq[u.a];
        if (next_q < r.query_steps.size() && r.query_steps[next_q] == t + 1) {
            int j = static_cast<int>(next_q) + 1;
            int k = decode_topk(responder(freq), j, alpha);
            res.decoded.push_back(static_cast<double>(k - 1));
            res.truth.push_back(r.ip.inner(j - 1));
            ++next_q;
        }
    }
    for (size_t j = 0; j < res.decoded.size(); ++j)
        res.max_error = std::max(
            res.max_error, std::abs(res.decoded[j] - static_cast<double>(res.truth[j])));
    return res;
}

// ---------------------------------------------------------------------------
// marginals-solving families

int64_t msf_base_edges(MsfProblem problem, int n, int tau) {
    switch (problem) {
        case MsfProblem::StMincut:
        case MsfProblem::KCore:
            return problem == MsfProblem::StMincut
                       ? n
                       : static_cast<int64_t>(n) * (n - 1) / 2;
        case MsfProblem::Mincut:
            return static_cast<int64_t>(n) * (n - 1) / 2;
        case MsfProblem::DegAtLeast:
            return static_cast<int64_t>(n) * ((tau - 1) / 2) +
                   (tau % 2 == 0 ? n : 0);
        case MsfProblem::EdgeCount:
        case MsfProblem::ZeroBasedMatching:
            return 0;
        case MsfProblem::ZeroBasedTriangle:
            return 2LL * n;
    }
    throw std::logic_error("msf_base_edges: bad problem");
}

MsfInstance build_msf_stream(MsfProblem problem, int n, int d,
                             const std::vector<std::vector<uint8_t>>& Y,
                             int tau) {
    if (n < 2) throw std::invalid_argument("msf: n must be >= 2");
    if (d < 1) throw std::invalid_argument("msf: d must be >= 1");
    if (static_cast<int>(Y.size()) != d)
        throw std::invalid_argument("msf: Y must have d rows");
    for (const auto& row : Y)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("msf: Y rows must have n entries");

    MsfInstance inst;
    inst.problem = problem;
    inst.n = n;
    inst.d = d;
    inst.tau = tau;
    inst.Y = Y;
    inst.stream.kind = StreamKind::Graph;

    std::vector<std::pair<int, int>> base;
    switch (problem) {
        case MsfProblem::StMincut: {
            // s=0, t=1, spokes v_i=2+i; e_i = (s, v_i)
            int s = 0, t = 1;
            inst.designated_vertex = s;
            inst.stream.universe = n + 2;
            for (int i = 0; i < n; ++i) base.emplace_back(2 + i, t);
            for (int i = 0; i < n; ++i)
                inst.probe_edges.push_back(Update::insert_edge(s, 2 + i));
            break;
        }
        case MsfProblem::Mincut:
        case MsfProblem::KCore: {
            // hub v=0 against a clique on 1..n; e_i = (v, 1+i)
            inst.designated_vertex = 0;
            inst.stream.universe = n + 1;
            for (int a = 1; a <= n; ++a)
                for (int b = a + 1; b <= n; ++b) base.emplace_back(a, b);
            for (int i = 0; i < n; ++i)
                inst.probe_edges.push_back(Update::insert_edge(0, 1 + i));
            break;
        }
        case MsfProblem::DegAtLeast: {
            if (tau < 1) throw std::invalid_argument("msf: tau must be >= 1");
            int r = (tau - 1) / 2;
            if (n <= 2 * r)
                throw std::invalid_argument("msf: need n > tau-1 for the ring");
            bool partner = (tau % 2 == 0);
            // ring vertices v_i = i, partners u_i = n+i (tau even), z_i last
            int z0 = partner ? 2 * n : n;
            inst.stream.universe = z0 + n;
            for (int i = 0; i < n; ++i)
                for (int off = 1; off <= r; ++off)
                    base.emplace_back(i, (i + off) % n);
            if (partner)
                for (int i = 0; i < n; ++i) base.emplace_back(i, n + i);
            for (int i = 0; i < n; ++i)
                inst.probe_edges.push_back(Update::insert_edge(i, z0 + i));
            inst.w = (tau == 1) ? 2 : 1;
            break;
        }
        case MsfProblem::EdgeCount: {
            int nu = static_cast<int>(std::ceil(2.0 * std::sqrt(n)));
            if (nu < 2) nu = 2;
            inst.stream.universe = nu;
            int count = 0;
            for (int a = 0; a < nu && count < n; ++a)
                for (int b = a + 1; b < nu && count < n; ++b) {
                    inst.probe_edges.push_back(Update::insert_edge(a, b));
                    ++count;
                }
            if (count < n)
                throw std::invalid_argument("msf: edge-count universe too small");
            break;
        }
        case MsfProblem::ZeroBasedMatching: {
            // n disjoint vertex pairs; e_i completes pair i
            inst.stream.universe = 2 * n;
            for (int i = 0; i < n; ++i)
                inst.probe_edges.push_back(Update::insert_edge(2 * i, 2 * i + 1));
            break;
        }
        case MsfProblem::ZeroBasedTriangle: {
            // n disjoint 2-edge paths a-b-c; e_i = (a_i, c_i) closes a triangle
            inst.stream.universe = 3 * n;
            for (int i = 0; i < n; ++i) {
                base.emplace_back(3 * i, 3 * i + 1);
                base.emplace_back(3 * i + 1, 3 * i + 2);
                inst.probe_edges.push_back(Update::insert_edge(3 * i, 3 * i + 2));
            }
            break;
        }
    }

    for (auto [a, b] : base)
        inst.stream.updates.push_back(Update::insert_edge(a, b));
    for (int j = 0; j < d; ++j) {
        for (int i = 0; i < n; ++i)
            inst.stream.updates.push_back(Y[j][i] ? inst.probe_edges[i]
                                                  : Update::noop());
        inst.reading_steps.push_back(
            static_cast<int64_t>(inst.stream.updates.size()));
        for (int i = 0; i < n; ++i) {
            if (Y[j][i]) {
                Update del = inst.probe_edges[i];
                del.kind = Update::Kind::DeleteEdge;
                inst.stream.updates.push_back(del);
            } else {
                inst.stream.updates.push_back(Update::noop());
            }
        }
    }
    inst.stream.horizon = static_cast<int64_t>(inst.stream.updates.size());
    inst.stream.validate();
    return inst;
}

int64_t MsfInstance::evaluate(const DynamicGraph& g) const {
    switch (problem) {
        case MsfProblem::StMincut:
            return st_mincut(g, 0, 1);
        case MsfProblem::Mincut:
            return global_mincut(g);
        case MsfProblem::DegAtLeast:
            return count_degree_at_least(g, tau);
        case MsfProblem::KCore:
            return core_number(g, designated_vertex);
        case MsfProblem::EdgeCount:
            return g.edge_count();
        case MsfProblem::ZeroBasedMatching:
            return max_matching_size(g);
        case MsfProblem::ZeroBasedTriangle:
            return triangle_count(g);
    }
    throw std::logic_error("msf evaluate: bad problem");
}

int64_t MsfInstance::column_sum(int j) const {
    int64_t s = 0;
    for (int i = 0; i < n; ++i) s += Y[j][i];
    return s;
}

std::vector<int64_t> run_msf_exact(const MsfInstance& inst) {
    DynamicGraph g(static_cast<int>(inst.stream.universe));
    std::vector<int64_t> readings;
    size_t next_r = 0;
    for (int64_t t = 0; t < static_cast<int64_t>(inst.stream.updates.size());
         ++t) {
        g.apply(inst.stream.updates[t]);
        if (next_r < inst.reading_steps.size() &&
            inst.reading_steps[next_r] == t + 1) {
            readings.push_back(inst.evaluate(g));
            ++next_r;
        }
    }
    return readings;
}

MsfPlan plan_msf(MsfProblem problem, int64_t horizon, double epsilon,
                 double delta, int tau) {
    if (horizon < 1) throw std::invalid_argument("plan_msf: horizon must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("plan_msf: epsilon must be > 0");
    MsfPlan plan;
    double te = static_cast<double>(horizon) * epsilon;
    plan.d = std::max(
        1, static_cast<int>(delta > 0.0 ? std::floor(std::pow(te, 2.0 / 3.0))
                                        : std::floor(std::sqrt(te))));
    // largest n whose base graph plus d rounds of insert/undo fits in T
    int best = 0;
    for (int64_t n = 2; n <= horizon; ++n) {
        if (problem == MsfProblem::DegAtLeast && n <= 2 * ((tau - 1) / 2))
            continue;  // ring needs n > tau-1
        int64_t need = msf_base_edges(problem, static_cast<int>(n), tau) +
                       2LL * plan.d * n;
        if (need <= horizon)
            best = static_cast<int>(n);
        else
            break;
    }
    plan.n = best;
    if (best >= 2)
        plan.total_steps = msf_base_edges(problem, best, tau) + 2LL * plan.d * best;
    return plan;
}

// ---------------------------------------------------------------------------
// diff checks

DiffReport diff_inc_gadget(GadgetKind kind, const InnerProductInstance& ip,
                           int flip_index) {
    if (flip_index < 0 || flip_index >= ip.d)
        throw std::invalid_argument("diff_inc_gadget: flip index out of range");
    InnerProductInstance flipped = ip;
    flipped.x[flip_index] ^= 1;
    GadgetInstance a = build_gadget(kind, ip);
    GadgetInstance b = build_gadget(kind, flipped);

    DiffReport rep;
    if (a.stream.updates.size() != b.stream.updates.size())
        throw std::logic_error("diff_inc_gadget: stream lengths differ");
    for (size_t t = 0; t < a.stream.updates.size(); ++t)
        if (!(a.stream.updates[t] == b.stream.updates[t]))
            rep.differing_steps.push_back(static_cast<int64_t>(t) + 1);

    if (kind == GadgetKind::DegHist) {
        // replay both streams through the degree-class delta transform and
        // compare each counter's input sequence
        auto deltas = [](const UpdateStream& s) {
            DynamicGraph g(static_cast<int>(s.universe));
            std::vector<std::map<int, double>> per_step;
            for (const Update& u : s.updates) {
                std::map<int, double> dd;
                if (u.kind == Update::Kind::InsertEdge ||
                    u.kind == Update::Kind::DeleteEdge) {
                    int va = static_cast<int>(u.a), vb = static_cast<int>(u.b);
                    int da = g.degree(va), db = g.degree(vb);
                    g.apply(u);
                    for (auto [v, before] : {std::pair{va, da}, std::pair{vb, db}}) {
                        int after = g.degree(v);
                        if (after == before) continue;
                        if (before >= 1) dd[before] -= 1.0;
                        if (after >= 1) dd[after] += 1.0;
                    }
                }
                per_step.push_back(std::move(dd));
            }
            return per_step;
        };
        auto da = deltas(a.stream), db = deltas(b.stream);
        std::map<int, double> per_counter;
        for (size_t t = 0; t < da.size(); ++t) {
            std::map<int, double> merged;
            for (auto [c, v] : da[t]) merged[c] += v;
            for (auto [c, v] : db[t]) merged[c] -= v;
            for (auto [c, v] : merged) per_counter[c] += std::abs(v);
        }
        for (auto [c, v] : per_counter)
            rep.internal_l1 = std::max(rep.internal_l1, v);
        rep.internal_bound = 8.0;
    }
    return rep;
}

DiffReport diff_msf(const MsfInstance& inst, int flip_edge) {
    if (flip_edge < 0 || flip_edge >= inst.n)
        throw std::invalid_argument("diff_msf: edge index out of range");
    std::vector<std::vector<uint8_t>> Y2 = inst.Y;
    for (int j = 0; j < inst.d; ++j) Y2[j][flip_edge] ^= 1;
    MsfInstance other =
        build_msf_stream(inst.problem, inst.n, inst.d, Y2, inst.tau);

    DiffReport rep;
    const Update& e = inst.probe_edges[flip_edge];
    for (size_t t = 0; t < inst.stream.updates.size(); ++t) {
        const Update& ua = inst.stream.updates[t];
        const Update& ub = other.stream.updates[t];
        if (ua == ub) continue;
        rep.differing_steps.push_back(static_cast<int64_t>(t) + 1);
        const Update& real = ua.kind == Update::Kind::Noop ? ub : ua;
        if (!(real.a == e.a && real.b == e.b)) rep.single_edge = false;
    }
    return rep;
}

DiffReport diff_sne_levels(const UpdateStream& s, int64_t blank_step,
                           double zeta, double tau_f) {
    if (s.kind != StreamKind::Elements)
        throw std::invalid_argument("diff_sne_levels: element streams only");
    if (blank_step < 1 || blank_step > static_cast<int64_t>(s.updates.size()))
        throw std::invalid_argument("diff_sne_levels: step out of range");
    int levels = std::max(
        1, static_cast<int>(std::ceil(std::log(tau_f) / std::log1p(zeta))));
    std::vector<double> pw(levels + 1);
    for (int i = 0; i <= levels; ++i) pw[i] = std::pow(1.0 + zeta, i);
    auto level_of = [&](int64_t f) {
        int i = 1;
        while (i < levels && pw[i] <= static_cast<double>(f)) ++i;
        return i;
    };
    // level-stream slots: two per step, (level, +-1) or (0, 0)
    auto slots = [&](bool blank) {
        std::vector<std::pair<int, double>> out;
        std::vector<int64_t> f(s.universe, 0);
        for (size_t t = 0; t < s.updates.size(); ++t) {
            const Update& u = s.updates[t];
            bool skip = blank && static_cast<int64_t>(t) + 1 == blank_step;
            if (!skip && u.kind == Update::Kind::InsertElement) {
                int64_t oldf = f[u.a], newf = oldf + 1;
                f[u.a] = newf;
                if (oldf >= 1 && static_cast<double>(oldf) <= tau_f)
                    out.emplace_back(level_of(oldf), -1.0);
                else
                    out.emplace_back(0, 0.0);
                if (static_cast<double>(newf) <= tau_f)
                    out.emplace_back(level_of(newf), +1.0);
                else
                    out.emplace_back(0, 0.0);
            } else {
                out.emplace_back(0, 0.0);
                out.emplace_back(0, 0.0);
            }
        }
        return out;
    };
    auto sa = slots(false), sb = slots(true);
    DiffReport rep;
    for (size_t t = 0; t < sa.size(); ++t) {
        if (sa[t] == sb[t]) continue;
        rep.differing_steps.push_back(static_cast<int64_t>(t) + 1);
        rep.internal_l1 += std::abs(sa[t].second) + std::abs(sb[t].second);
    }
    rep.internal_bound = 4.0 * levels;
    return rep;
}

}  // namespace dpcr
