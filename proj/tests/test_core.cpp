#include <doctest.h>

#include <cmath>
#include <sstream>

#include "dpcr/core.hpp"

using namespace dpcr;

TEST_CASE("laplace inverse cdf") {
    CHECK(laplace_inverse_cdf(0.5, 2.0) == 0.0);
    // symmetric around the median
    CHECK(laplace_inverse_cdf(0.25, 1.0) == doctest::Approx(-laplace_inverse_cdf(0.75, 1.0)));
    // monotone in u
    double prev = laplace_inverse_cdf(0.01, 1.0);
    for (double u = 0.02; u < 1.0; u += 0.01) {
        double v = laplace_inverse_cdf(u, 1.0);
        CHECK(v > prev);
        prev = v;
    }
    // quartiles of Laplace(0,b) sit at -+ b*ln(2)... check exact quantile
    CHECK(laplace_inverse_cdf(0.75, 3.0) == doctest::Approx(3.0 * std::log(2.0)));
    CHECK_THROWS_AS(laplace_inverse_cdf(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(laplace_inverse_cdf(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(laplace_inverse_cdf(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("laplace sampling moments") {
    RandomSource rng(7);
    const int N = 200000;
    const double scale = 3.0;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < N; ++i) {
        double v = sample_laplace(scale, rng);
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / N;
    double var = sumsq / N - mean * mean;
    CHECK(std::abs(mean) < 0.05);
    // variance of Laplace(0,b) is 2 b^2
    CHECK(var == doctest::Approx(2.0 * scale * scale).epsilon(0.05));
}

TEST_CASE("noise off consumes nothing and returns zero") {
    RandomSource a(42), b(42);
    CHECK(sample_laplace(5.0, a, NoiseMode::Off) == 0.0);
    CHECK(sample_laplace(5.0, a, NoiseMode::Off) == 0.0);
    CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("random source determinism") {
    RandomSource a(123), b(123), c(124);
    bool same = true, diff = false;
    for (int i = 0; i < 100; ++i) {
        uint64_t va = a.next_u64();
        same = same && (va == b.next_u64());
        diff = diff || (va != c.next_u64());
    }
    CHECK(same);
    CHECK(diff);
    // child streams are decoupled from parent draws
    RandomSource p1(9), p2(9);
    p2.next_u64();
    CHECK(p1.child(3).next_u64() == p2.child(3).next_u64());
}

TEST_CASE("uniform draws stay in range") {
    RandomSource rng(5);
    for (int i = 0; i < 1000; ++i) {
        double u = rng.next_uniform();
        CHECK(u > 0.0);
        CHECK(u < 1.0);
        double v = rng.next_uniform(2.0, 5.0);
        CHECK(v >= 2.0);
        CHECK(v < 5.0);
        CHECK(rng.next_below(7) < 7);
    }
}

TEST_CASE("privacy budget validation") {
    PrivacyBudget b;
    CHECK_NOTHROW(b.validate());
    b.epsilon = 0.0;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    b.epsilon = 1.0;
    b.delta = 1.0;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
    b.delta = 0.0;
    b.beta = 0.0;
    CHECK_THROWS_AS(b.validate(), std::invalid_argument);
}

TEST_CASE("prefix frequencies") {
    UpdateStream s;
    s.kind = StreamKind::Elements;
    s.universe = 3;
    s.updates = {Update::insert(0), Update::insert(0), Update::erase(0),
                 Update::insert(2), Update::erase(1), Update::noop()};
    s.horizon = 6;
    s.validate();
    auto f = prefix_frequencies(s, 6);
    CHECK(f == std::vector<int64_t>{1, 0, 1});  // deletes floor at zero
    CHECK(prefix_frequencies(s, 2) == std::vector<int64_t>{2, 0, 0});
    CHECK(prefix_frequencies(s, 0) == std::vector<int64_t>{0, 0, 0});
    CHECK_THROWS_AS(prefix_frequencies(s, 7), std::invalid_argument);
}

TEST_CASE("stream validation catches bad updates") {
    UpdateStream s;
    s.kind = StreamKind::Elements;
    s.universe = 2;
    s.horizon = 5;
    s.updates = {Update::insert(2)};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.updates = {Update::insert_edge(0, 1)};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.updates = {Update::insert(0), Update::insert(1)};
    s.horizon = 1;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s.kind = StreamKind::Graph;
    s.horizon = 5;
    s.updates = {Update::insert_edge(1, 1)};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("stream file round trip") {
    UpdateStream s;
    s.kind = StreamKind::Graph;
    s.universe = 4;
    s.updates = {Update::insert_edge(0, 1), Update::noop(),
                 Update::erase_edge(0, 1), Update::insert_edge(2, 3)};
    s.horizon = 4;
    std::ostringstream out;
    write_stream(out, s);
    std::istringstream in(out.str());
    UpdateStream r = read_stream(in);
    CHECK(r.kind == s.kind);
    CHECK(r.horizon == s.horizon);
    CHECK(r.universe == s.universe);
    REQUIRE(r.updates.size() == s.updates.size());
    for (size_t i = 0; i < s.updates.size(); ++i) CHECK(r.updates[i] == s.updates[i]);
}

TEST_CASE("stream parser reports line numbers") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return read_stream(in);
    };
    CHECK_THROWS_WITH_AS(parse("T=2 h=2 kind=elements\n+ 0\n+ zero\n"),
                         doctest::Contains("line 3"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse("T=2 h=2 kind=elements\n* 0\n"),
                         doctest::Contains("line 2"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse("T=2 h=2 kind=banana\n"),
                         doctest::Contains("line 1"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse("T=2 h=2 kind=graph\n+ 0\n"),
                         doctest::Contains("line 2"), std::invalid_argument);
    CHECK_THROWS_AS(parse(""), std::invalid_argument);
}
