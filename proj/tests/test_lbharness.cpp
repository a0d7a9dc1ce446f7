#include <doctest.h>

#include <stdexcept>

#include "dpcr/reduction.hpp"

using namespace dpcr;

namespace {

// replay a gadget stream through the exact oracle, checking every query
// point against the closed-form expected value
void check_gadget_algebra(const GadgetInstance& g) {
    ExactGraphOracle oracle(static_cast<int>(g.stream.universe));
    size_t next_q = 0;
    for (int64_t t = 0; t <= static_cast<int64_t>(g.stream.updates.size()); ++t) {
        while (next_q < g.timetable.size() && g.timetable[next_q].step == t) {
            const QueryPoint& qp = g.timetable[next_q];
            CAPTURE(qp.j);
            CAPTURE(qp.post);
            REQUIRE(oracle.respond(qp) == static_cast<double>(g.expected(qp)));
            ++next_q;
        }
        if (t < static_cast<int64_t>(g.stream.updates.size()))
            oracle.apply(g.stream.updates[t]);
    }
    REQUIRE(next_q == g.timetable.size());
}

}  // namespace

TEST_CASE("inner product instances") {
    InnerProductInstance ip = InnerProductInstance::random(5, 3, RandomSource(1));
    CHECK(ip.x.size() == 5);
    CHECK(ip.q.size() == 3);
    int64_t s = 0;
    for (int i = 0; i < 5; ++i) s += ip.x[i] & ip.q[1][i];
    CHECK(ip.inner(1) == s);
    CHECK_THROWS_AS(ip.inner(3), std::invalid_argument);
    ip.x.pop_back();
    CHECK_THROWS_AS(ip.validate(), std::invalid_argument);
}

TEST_CASE("matching gadget frozen example") {
    InnerProductInstance ip;
    ip.d = 2;
    ip.m = 2;
    ip.x = {1, 0};
    ip.q = {{1, 1}, {0, 1}};
    GadgetInstance g = build_matching_gadget(ip);
    REQUIRE(g.timetable.size() == 4);
    CHECK(g.expected(g.timetable[0]) == 2);  // j=1 pre: j*d
    CHECK(g.expected(g.timetable[1]) == 3);  // j=1 post: j*d + <x,q^1>
    CHECK(g.expected(g.timetable[2]) == 4);
    CHECK(g.expected(g.timetable[3]) == 4);  // 2*2 + <x,q^2> = 4 + 0
    check_gadget_algebra(g);
}

TEST_CASE("kcore gadget frozen example") {
    InnerProductInstance ip;
    ip.d = 1;
    ip.m = 1;
    ip.x = {1};
    ip.q = {{1}};
    GadgetInstance g = build_kcore_gadget(ip);
    REQUIRE(g.timetable.size() == 2);
    CHECK(g.expected(g.timetable[0]) == 2);  // 2*j*d
    CHECK(g.expected(g.timetable[1]) == 3);  // 2*j*d + <x,q^1>
    check_gadget_algebra(g);
    // the degree certificate rules out further rounds at d=1
    ip.m = 2;
    ip.q = {{1}, {0}};
    CHECK_THROWS_AS(build_kcore_gadget(ip), std::invalid_argument);
}

TEST_CASE("gadget algebra matches the exact oracle on random instances") {
    for (int d = 1; d <= 4; ++d)
        for (int m = 1; m <= 3; ++m)
            for (uint64_t seed = 0; seed < 3; ++seed) {
                InnerProductInstance ip =
                    InnerProductInstance::random(d, m, RandomSource(97 * d + m + seed));
                CAPTURE(d);
                CAPTURE(m);
                CAPTURE(seed);
                check_gadget_algebra(build_matching_gadget(ip));
                if (d > 1) check_gadget_algebra(build_kcore_gadget(ip));
                if (m >= d - 3) check_gadget_algebra(build_deghist_gadget(ip));
            }
}

TEST_CASE("matching gadget agrees with the exhaustive matcher") {
    InnerProductInstance ip = InnerProductInstance::random(2, 1, RandomSource(5));
    GadgetInstance g = build_matching_gadget(ip);
    REQUIRE(g.stream.universe <= 12);
    DynamicGraph graph(static_cast<int>(g.stream.universe));
    size_t next_q = 0;
    for (int64_t t = 0; t <= static_cast<int64_t>(g.stream.updates.size()); ++t) {
        while (next_q < g.timetable.size() && g.timetable[next_q].step == t) {
            CHECK(bruteforce::max_matching_size(graph) ==
                  g.expected(g.timetable[next_q]));
            ++next_q;
        }
        if (t < static_cast<int64_t>(g.stream.updates.size()))
            graph.apply(g.stream.updates[t]);
    }
}

TEST_CASE("gadget timetable depends only on the dimensions") {
    for (GadgetKind kind :
         {GadgetKind::Matching, GadgetKind::KCore, GadgetKind::DegHist}) {
        InnerProductInstance a = InnerProductInstance::random(3, 2, RandomSource(7));
        InnerProductInstance b = InnerProductInstance::random(3, 2, RandomSource(8));
        GadgetInstance ga = build_gadget(kind, a);
        GadgetInstance gb = build_gadget(kind, b);
        CHECK(ga.stream.updates.size() == gb.stream.updates.size());
        REQUIRE(ga.timetable.size() == gb.timetable.size());
        for (size_t i = 0; i < ga.timetable.size(); ++i) {
            CHECK(ga.timetable[i].step == gb.timetable[i].step);
            CHECK(ga.timetable[i].j == gb.timetable[i].j);
            CHECK(ga.timetable[i].post == gb.timetable[i].post);
        }
    }
}

TEST_CASE("reduction round trips exactly through the oracle") {
    for (GadgetKind kind :
         {GadgetKind::Matching, GadgetKind::KCore, GadgetKind::DegHist}) {
        InnerProductInstance ip = InnerProductInstance::random(4, 3, RandomSource(11));
        GadgetInstance g = build_gadget(kind, ip);
        ExactGraphOracle oracle(static_cast<int>(g.stream.universe));
        ReductionResult res = run_inc_reduction(g, oracle);
        REQUIRE(res.decoded.size() == 3);
        CHECK(res.max_error == 0.0);
        for (int j = 0; j < 3; ++j) CHECK(res.decoded[j] == ip.inner(j));
    }
}

TEST_CASE("topk reduction decodes inner products exactly") {
    for (uint64_t seed = 0; seed < 5; ++seed) {
        InnerProductInstance ip = InnerProductInstance::random(6, 4, RandomSource(20 + seed));
        TopKReductionInstance r = build_topk_reduction(ip);
        ReductionResult res = run_topk_reduction(r, exact_topk_responder, 0.0);
        REQUIRE(res.decoded.size() == 4);
        CHECK(res.max_error == 0.0);
    }
    // all-ones: no prefix drops below the slope line, so the decoder flags n+1
    InnerProductInstance ones;
    ones.d = 3;
    ones.m = 1;
    ones.x = {1, 1, 1};
    ones.q = {{1, 1, 1}};
    TopKReductionInstance r = build_topk_reduction(ones);
    ReductionResult res = run_topk_reduction(r, exact_topk_responder, 0.0);
    CHECK(res.decoded[0] == 3.0);  // decoded (n+1) - 1 = d = <x,q>
    CHECK(res.max_error == 0.0);
}

TEST_CASE("topk decoder tolerates slack below one half") {
    // exact prefix sums are integers, so alpha < 1 cannot move the cut
    InnerProductInstance ip = InnerProductInstance::random(6, 4, RandomSource(31));
    TopKReductionInstance r = build_topk_reduction(ip);
    CHECK(run_topk_reduction(r, exact_topk_responder, 0.9).max_error == 0.0);
}

TEST_CASE("msf readings recover weighted column sums") {
    std::vector<MsfProblem> problems = {
        MsfProblem::StMincut,     MsfProblem::Mincut,
        MsfProblem::DegAtLeast,   MsfProblem::KCore,
        MsfProblem::EdgeCount,    MsfProblem::ZeroBasedMatching,
        MsfProblem::ZeroBasedTriangle};
    RandomSource rng(40);
    for (MsfProblem p : problems)
        for (int n = 2; n <= 5; ++n)
            for (int d = 1; d <= 3; ++d) {
                std::vector<std::vector<uint8_t>> Y(n > 0 ? d : 0,
                                                    std::vector<uint8_t>(n));
                for (auto& row : Y)
                    for (auto& bit : row)
                        bit = static_cast<uint8_t>(rng.next_u64() & 1);
                MsfInstance inst = build_msf_stream(p, n, d, Y);
                auto readings = run_msf_exact(inst);
                REQUIRE(readings.size() == static_cast<size_t>(d));
                for (int j = 0; j < d; ++j) {
                    CAPTURE(static_cast<int>(p));
                    CAPTURE(n);
                    CAPTURE(d);
                    CAPTURE(j);
                    REQUIRE(readings[j] == inst.w * inst.column_sum(j));
                }
            }
}

TEST_CASE("msf degree threshold variants") {
    std::vector<std::vector<uint8_t>> Y = {{1, 0, 1, 1}, {0, 0, 1, 0}};
    for (int tau : {1, 2, 3, 4}) {
        MsfInstance inst = build_msf_stream(MsfProblem::DegAtLeast, 4, 2, Y, tau);
        CHECK(inst.w == (tau == 1 ? 2 : 1));
        auto readings = run_msf_exact(inst);
        CHECK(readings[0] == inst.w * 3);
        CHECK(readings[1] == inst.w * 1);
    }
    // ring needs n > tau - 1
    CHECK_THROWS_AS(build_msf_stream(MsfProblem::DegAtLeast, 2,
                                     1, {{1, 0}}, 5),
                    std::invalid_argument);
}

TEST_CASE("msf planner fills the horizon") {
    MsfPlan p = plan_msf(MsfProblem::EdgeCount, 100, 1.0, 0.0);
    CHECK(p.d == 10);  // floor(sqrt(100))
    CHECK(p.n == 5);   // 2*10*5 = 100
    CHECK(p.total_steps == 100);

    MsfPlan pd = plan_msf(MsfProblem::EdgeCount, 100, 1.0, 1e-6);
    CHECK(pd.d == 21);  // floor(100^(2/3))
    CHECK(pd.n == 2);

    MsfPlan clique = plan_msf(MsfProblem::Mincut, 200, 1.0, 0.0);
    CHECK(clique.n >= 2);
    CHECK(clique.total_steps <= 200);
    // one more edge would not fit
    int64_t bigger = msf_base_edges(MsfProblem::Mincut, clique.n + 1) +
                     2LL * clique.d * (clique.n + 1);
    CHECK(bigger > 200);

    CHECK_THROWS_AS(plan_msf(MsfProblem::EdgeCount, 0, 1.0, 0.0),
                    std::invalid_argument);
}

TEST_CASE("flipping one secret bit changes one gadget step") {
    for (GadgetKind kind :
         {GadgetKind::Matching, GadgetKind::KCore, GadgetKind::DegHist}) {
        InnerProductInstance ip = InnerProductInstance::random(4, 2, RandomSource(50));
        for (int i = 0; i < 4; ++i) {
            DiffReport rep = diff_inc_gadget(kind, ip, i);
            CAPTURE(static_cast<int>(kind));
            CAPTURE(i);
            REQUIRE(rep.differing_steps.size() == 1);
            if (kind == GadgetKind::DegHist) {
                CHECK(rep.internal_bound == 8.0);
                CHECK(rep.internal_l1 <= rep.internal_bound);
                CHECK(rep.internal_l1 > 0.0);
            }
        }
        CHECK_THROWS_AS(diff_inc_gadget(kind, ip, 4), std::invalid_argument);
    }
}

TEST_CASE("flipping one msf edge only ever touches that edge") {
    std::vector<std::vector<uint8_t>> Y = {{1, 0, 1}, {0, 1, 1}, {1, 1, 0}};
    for (MsfProblem p : {MsfProblem::StMincut, MsfProblem::KCore,
                         MsfProblem::ZeroBasedTriangle}) {
        MsfInstance inst = build_msf_stream(p, 3, 3, Y);
        for (int e = 0; e < 3; ++e) {
            DiffReport rep = diff_msf(inst, e);
            CHECK(rep.single_edge);
            // each round differs in the insert slot and the undo slot
            CHECK(rep.differing_steps.size() == 2 * 3);
        }
        CHECK_THROWS_AS(diff_msf(inst, 3), std::invalid_argument);
    }
}

TEST_CASE("blanking one insert perturbs the level streams within bound") {
    UpdateStream s;
    s.kind = StreamKind::Elements;
    s.universe = 3;
    for (int t = 0; t < 40; ++t)
        s.updates.push_back(Update::insert(t % 2));  // two climbing elements
    s.horizon = 40;
    s.validate();
    const double zeta = 0.5, tau_f = 50.0;
    for (int64_t blank = 1; blank <= 40; blank += 7) {
        DiffReport rep = diff_sne_levels(s, blank, zeta, tau_f);
        CAPTURE(blank);
        CHECK(rep.internal_l1 > 0.0);
        CHECK(rep.internal_l1 <= rep.internal_bound);
    }
    CHECK_THROWS_AS(diff_sne_levels(s, 0, zeta, tau_f), std::invalid_argument);
    CHECK_THROWS_AS(diff_sne_levels(s, 41, zeta, tau_f), std::invalid_argument);
}
