#include <catch_amalgamated.hpp>

#include "icboot/npmle.hpp"
#include "icboot/one_step.hpp"
#include "icboot/sim.hpp"

using namespace icboot;
using Catch::Matchers::WithinAbs;

namespace {

auto uniform03 = [](double t) { return std::clamp(t / 3.0, 0.0, 1.0); };

}

TEST_CASE("one step from a single left-censored subject") {
    auto r = icm_one_step(MixedCaseSample{{{1.0, 2.0}, 1}}, uniform03);
    REQUIRE(r.times == std::vector<double>{1.0});
    REQUIRE(r.diagram.size() == 2);
    CHECK_THAT(r.diagram[1].x, WithinAbs(9.0, 1e-12));
    CHECK_THAT(r.diagram[1].y, WithinAbs(6.0, 1e-12));
    CHECK_THAT(r.values[0], WithinAbs(2.0 / 3.0, 1e-12));
}

TEST_CASE("one step on two subjects matches the hand table") {
    // (1,2] interior and (2.5, inf) under F0 = U[0,3]:
    //   u     F0    W2 incr  W1 incr   V
    //   1     1/3   9        -3        0
    //   2     2/3   9        +3        9
    //   2.5   5/6   36       -6        33
    // exam 0.5 carries no weight; GCM pools the last two segments from (9,0).
    MixedCaseSample s{{{1.0, 2.0}, 2}, {{0.5, 2.5}, 3}};
    auto r = icm_one_step(s, uniform03);
    REQUIRE(r.times == std::vector<double>{1.0, 2.0, 2.5});
    const double xs[] = {0, 9, 18, 54}, ys[] = {0, 0, 9, 33};
    for (int i = 0; i < 4; ++i) {
        CHECK_THAT(r.diagram[i].x, WithinAbs(xs[i], 1e-12));
        CHECK_THAT(r.diagram[i].y, WithinAbs(ys[i], 1e-12));
    }
    CHECK_THAT(r.values[0], WithinAbs(0.0, 1e-12));
    CHECK_THAT(r.values[1], WithinAbs(11.0 / 15.0, 1e-12));
    CHECK_THAT(r.values[2], WithinAbs(11.0 / 15.0, 1e-12));
    CHECK_THAT(r.distribution(2.0), WithinAbs(11.0 / 15.0, 1e-12));
}

TEST_CASE("one step errors") {
    CHECK_THROWS_AS(icm_one_step(MixedCaseSample{}, uniform03), InputError);
    auto flat = [](double t) { return t < 1.0 ? 0.0 : 0.5; };
    CHECK_THROWS_AS(icm_one_step(MixedCaseSample{{{1.0, 2.0}, 2}}, flat), NumericalError);
}

TEST_CASE("the NPMLE is a fixed point of one ICM step") {
    Scenario sc{Exponential{1.0}, Case2Exams{2.0}};
    for (std::uint64_t rep = 0; rep < 50; ++rep) {
        Stream rng = Stream::derive(77, {rep});
        auto sample = sample_scenario(sc, 20 + rng.below(200), rng);
        auto F = npmle_interval_censored(reduce_to_intervals(sample)).distribution();
        auto r = icm_one_step(sample, F);
        for (std::size_t j = 0; j < r.times.size(); ++j) CHECK_THAT(r.values[j], WithinAbs(F(r.times[j]), 1e-6));
    }
}
