#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "dpcr/graph_mechanisms.hpp"

using namespace dpcr;

TEST_CASE("advanced composition per-mechanism budget") {
    double e = advanced_composition_epsilon(4, 0.8, 1e-5);
    CHECK(e == doctest::Approx(0.8 / (2.0 * std::sqrt(8.0 * std::log(1e5)))));
    CHECK_THROWS_AS(advanced_composition_epsilon(0, 0.5, 1e-5),
                    std::invalid_argument);
    CHECK_THROWS_AS(advanced_composition_epsilon(4, 1.5, 1e-5),
                    std::invalid_argument);
    CHECK_THROWS_AS(advanced_composition_epsilon(4, 0.5, 0.0),
                    std::invalid_argument);
}

TEST_CASE("ladder parameter grids") {
    PrivacyBudget pure;
    LadderSpec spec;
    spec.target = LadderSpec::Target::Matching;
    spec.n = 8;
    spec.horizon = 5;
    auto p = ladder_params(spec, pure);
    CHECK(p.lo == 0.0);
    CHECK(p.hi == 4.0);  // min(n/2, T)
    CHECK(p.rung == 2);  // ceil(sqrt(4))
    CHECK(p.cap == 2);
    CHECK_FALSE(p.decreasing);

    spec.n = 100;
    spec.horizon = 3;  // horizon caps the range
    CHECK(ladder_params(spec, pure).hi == 3.0);

    PrivacyBudget approx = pure;
    approx.delta = 1e-6;
    spec.n = 60;
    spec.horizon = 1000;
    auto pa = ladder_params(spec, approx);
    CHECK(pa.hi == 30.0);
    CHECK(pa.rung == static_cast<int64_t>(std::ceil(std::cbrt(30.0))));

    LadderSpec core;
    core.target = LadderSpec::Target::KCoreOfVertex;
    core.n = 100;
    core.horizon = 5;  // 5 edges support a core of at most 3
    auto pc = ladder_params(core, pure);
    CHECK(pc.hi == 3.0);
    core.vertex = 100;
    CHECK_THROWS_AS(ladder_params(core, pure), std::invalid_argument);

    LadderSpec comp;
    comp.target = LadderSpec::Target::Components;
    comp.n = 8;
    comp.horizon = 5;
    auto pk = ladder_params(comp, pure);
    CHECK(pk.lo == 3.0);  // n - T
    CHECK(pk.hi == 8.0);
    CHECK(pk.decreasing);
}

TEST_CASE("ladder walks the rung grid without noise") {
    PrivacyBudget b;
    b.noise_mode = NoiseMode::Off;
    LadderSpec spec;
    spec.target = LadderSpec::Target::Matching;
    spec.n = 8;
    spec.horizon = 5;
    LadderMechanism lad(spec, b, RandomSource(1));
    std::vector<double> out;
    out.push_back(lad.step(Update::insert_edge(0, 1)));
    out.push_back(lad.step(Update::insert_edge(2, 3)));
    out.push_back(lad.step(Update::insert_edge(4, 5)));
    out.push_back(lad.step(Update::insert_edge(6, 7)));
    out.push_back(lad.step(Update::noop()));
    CHECK(out == std::vector<double>{0, 2, 2, 4, 4});
    CHECK(lad.saturated());  // both positive slots spent
    CHECK(lad.true_value() == 4.0);
}

TEST_CASE("ladder tracks a core number to rung granularity") {
    PrivacyBudget b;
    b.noise_mode = NoiseMode::Off;
    LadderSpec spec;
    spec.target = LadderSpec::Target::KCoreOfVertex;
    spec.vertex = 0;
    spec.n = 6;
    spec.horizon = 20;  // supports cores up to 6: rungs at 3 and 6
    LadderMechanism lad(spec, b, RandomSource(1));
    CHECK(lad.params().rung == 3);
    double last = 0;
    for (int u = 0; u < 5; ++u)
        for (int v = u + 1; v < 5; ++v) last = lad.step(Update::insert_edge(u, v));
    CHECK(lad.true_value() == 4.0);  // vertex 0 sits in the K5
    CHECK(last == 3.0);              // highest rung crossed
    CHECK_FALSE(lad.saturated());
    // the release never lags the value by a full rung
    CHECK(lad.true_value() - last < lad.params().rung);
}

TEST_CASE("ladder tracks a decreasing statistic") {
    PrivacyBudget b;
    b.noise_mode = NoiseMode::Off;
    LadderSpec spec;
    spec.target = LadderSpec::Target::Components;
    spec.n = 8;
    spec.horizon = 5;
    LadderMechanism lad(spec, b, RandomSource(1));
    CHECK(lad.released() == 8.0);
    CHECK(lad.step(Update::insert_edge(0, 1)) == 8.0);  // 7 not yet a rung down
    CHECK(lad.step(Update::insert_edge(1, 2)) == 8.0);
    CHECK(lad.step(Update::insert_edge(2, 3)) == 5.0);  // crossed 8-3
    CHECK(lad.true_value() == 5.0);
}

TEST_CASE("noisy ladder is monotone and respects the jump cap") {
    PrivacyBudget b;
    b.epsilon = 0.5;
    LadderSpec spec;
    spec.target = LadderSpec::Target::Matching;
    spec.n = 20;
    spec.horizon = 40;
    for (uint64_t seed = 0; seed < 10; ++seed) {
        LadderMechanism lad(spec, b, RandomSource(seed));
        double prev = lad.released();
        RandomSource edges(1000 + seed);
        for (int t = 0; t < 40; ++t) {
            int u = static_cast<int>(edges.next_below(20));
            int v = static_cast<int>(edges.next_below(20));
            double r = lad.step(u == v ? Update::noop() : Update::insert_edge(u, v));
            CHECK(r >= prev);
            prev = r;
        }
        CHECK(lad.released() <=
              lad.params().lo + static_cast<double>(lad.params().cap) *
                                    static_cast<double>(lad.params().rung));
    }
}

TEST_CASE("degree histogram counts exactly without noise") {
    PrivacyBudget b;
    b.delta = 1e-6;
    b.noise_mode = NoiseMode::Off;
    PrivateDegreeHistogram dh(5, 32, b, RandomSource(1));
    dh.step(Update::insert_edge(0, 1));
    dh.step(Update::insert_edge(0, 2));
    auto out = dh.step(Update::insert_edge(0, 3));
    // star: hub degree 3, three leaves of degree 1
    CHECK(out[1] == 3.0);
    CHECK(out[2] == 0.0);
    CHECK(out[3] == 1.0);
    out = dh.step(Update::erase_edge(0, 3));
    CHECK(out[1] == 2.0);
    CHECK(out[2] == 1.0);
    CHECK(out[3] == 0.0);
    dh.step(Update::noop());
    CHECK(dh.outputs()[1] == 2.0);
    // duplicate insert changes multiplicity, not degrees
    dh.step(Update::insert_edge(0, 1));
    CHECK(dh.outputs() == out);
}

TEST_CASE("degree histogram budget accounting") {
    PrivacyBudget b;
    b.epsilon = 0.8;
    b.delta = 1e-5;
    PrivateDegreeHistogram dh(16, 64, b, RandomSource(2));
    CHECK(dh.epsilon_prime() ==
          doctest::Approx(advanced_composition_epsilon(16, 0.8, 1e-5)));
    CHECK(dh.error_bound() > 0.0);

    PrivacyBudget pure;
    CHECK_THROWS_AS(PrivateDegreeHistogram(16, 64, pure, RandomSource(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(PrivateDegreeHistogram(1, 64, b, RandomSource(2)),
                    std::invalid_argument);
}

TEST_CASE("degree histogram rejects element updates") {
    PrivacyBudget b;
    b.delta = 1e-6;
    b.noise_mode = NoiseMode::Off;
    PrivateDegreeHistogram dh(4, 8, b, RandomSource(3));
    CHECK_THROWS_AS(dh.step(Update::insert(1)), std::invalid_argument);
}
