#include <catch_amalgamated.hpp>

#include <cstdlib>

#include "icboot/bootstrap.hpp"
#include "icboot/sim.hpp"

using namespace icboot;
using Catch::Matchers::WithinAbs;

namespace {

MixedCaseSample exp_sample(std::size_t n, std::uint64_t seed, ExamDesign design = CurrentStatusExams{2.0}) {
    Stream rng(seed);
    return sample_scenario(Scenario{Exponential{1.0}, design}, n, rng);
}

BootstrapResult fake_result(std::vector<double> roots, double center, double rate) {
    BootstrapResult r;
    r.roots = std::move(roots);
    r.npmle_center = center;
    r.source_center = center;
    r.rate = rate;
    r.B = static_cast<int>(r.roots.size());
    return r;
}

}  // namespace

TEST_CASE("resample_subject boundary sources") {
    Stream rng(1);
    std::vector<double> t{1.0, 2.0};
    auto zero = [](double) { return 0.0; };
    auto one = [](double) { return 1.0; };
    for (int i = 0; i < 100; ++i) {
        CHECK(resample_subject(t, zero, rng) == 3);
        CHECK(resample_subject(t, one, rng) == 1);
    }
}

TEST_CASE("resample_subject is Bernoulli for one exam") {
    Stream rng(9);
    std::vector<double> t{1.0};
    auto src = [](double) { return 0.3; };
    int hits = 0;
    const int N = 100000;
    for (int i = 0; i < N; ++i) hits += resample_subject(t, src, rng) == 1;
    CHECK_THAT(hits / double(N), WithinAbs(0.3, 0.005));
}

TEST_CASE("resample_subject clamps negative cells") {
    std::vector<double> t{1.0, 2.0, 3.0};
    auto wiggly = [](double x) { return x < 1.5 ? 0.5 : (x < 2.5 ? 0.4 : 0.9); };
    auto cum = cell_cumulative(t, wiggly);
    REQUIRE(cum.size() == 4);
    CHECK(cum[0] == 0.5);
    CHECK(cum[1] == 0.5);
    CHECK_THAT(cum[2], WithinAbs(0.9, 1e-15));
    CHECK_THAT(cum[3], WithinAbs(1.0, 1e-15));
    Stream rng(3);
    for (int i = 0; i < 1000; ++i) CHECK(resample_subject(t, wiggly, rng) != 2);
}

TEST_CASE("bootstrap roots are deterministic and thread independent") {
    BootstrapDesign data(exp_sample(200, 4), Design::current_status);
    auto a = bootstrap_roots(data, 1.0, FromSmle{0.3}, 1, 11);
    auto b = bootstrap_roots(data, 1.0, FromSmle{0.3}, 1, 11);
    CHECK(a.roots == b.roots);
    setenv("ICBOOT_THREADS", "1", 1);
    auto serial = bootstrap_roots(data, 1.0, FromNpmle{}, 64, 5);
    setenv("ICBOOT_THREADS", "6", 1);
    auto parallel = bootstrap_roots(data, 1.0, FromNpmle{}, 64, 5);
    unsetenv("ICBOOT_THREADS");
    CHECK(serial.roots == parallel.roots);
    CHECK(serial.roots.size() == 64);
    CHECK(serial.rate == std::cbrt(200.0));
}

TEST_CASE("permuted inputs give identical roots") {
    auto s = exp_sample(60, 8, MixedCaseExams{3, 2.0});
    auto p = s;
    std::reverse(p.begin(), p.end());
    BootstrapDesign a(s, Design::mixed), b(p, Design::mixed);
    CHECK(bootstrap_roots(a, 1.0, FromSmle{0.4}, 30, 2).roots == bootstrap_roots(b, 1.0, FromSmle{0.4}, 30, 2).roots);
    std::vector<double> grid{0.2, 0.4};
    auto ca = bmse_curve(a, 1.0, FromSmle{0.4}, grid, 30, 2), cb = bmse_curve(b, 1.0, FromSmle{0.4}, grid, 30, 2);
    for (std::size_t g = 0; g < grid.size(); ++g) {
        CHECK(ca[g].bmse == cb[g].bmse);
        CHECK(ca[g].bmse >= 0.0);
    }
}

TEST_CASE("degenerate NPMLE source gives zero roots") {
    MixedCaseSample s;
    for (int i = 1; i <= 30; ++i) s.push_back({{i / 10.0}, 2});
    BootstrapDesign data(s, Design::current_status);
    auto r = bootstrap_roots(data, 1.0, FromNpmle{}, 25, 1);
    for (double x : r.roots) CHECK(x == 0.0);
    auto ci = basic_ci(r, 0.9);
    CHECK(ci.lo == 0.0);
    CHECK(ci.hi == 0.0);
}

TEST_CASE("case 2 roots use the one-step estimator and the log rate") {
    BootstrapDesign data(exp_sample(150, 12, Case2Exams{2.0}), Design::case2);
    auto r = bootstrap_roots(data, 1.0, FromSmle{std::pow(150.0, -0.2)}, 40, 3);
    CHECK(r.rate == std::cbrt(150.0 * std::log(150.0)));
    CHECK(r.roots.size() == 40);
    CHECK(r.failures == 0);
}

TEST_CASE("basic interval construction") {
    auto zeros = fake_result(std::vector<double>(50, 0.0), 0.4, 2.0);
    auto z = basic_ci(zeros, 0.9);
    CHECK(z.lo == 0.4);
    CHECK(z.hi == 0.4);

    std::vector<double> sym;
    for (int i = 1; i <= 50; ++i) {
        sym.push_back(i * 0.01);
        sym.push_back(-i * 0.01);
    }
    auto s = basic_ci(fake_result(sym, 0.5, 1.0), 0.9);
    CHECK_THAT(0.5 - s.lo, WithinAbs(s.hi - 0.5, 1e-12));

    std::vector<double> wide;
    for (int i = 0; i < 100; ++i) wide.push_back(-5.0 + i * 0.1);
    auto w = basic_ci(fake_result(wide, 0.02, 1.0), 0.9);
    CHECK(w.lo == 0.0);

    CHECK_THROWS_AS(basic_ci(fake_result(std::vector<double>(19, 0.0), 0.5, 1.0), 0.9), InputError);
    CHECK_THROWS_AS(basic_ci(zeros, 1.0), InputError);
}

TEST_CASE("bandwidth selection") {
    std::vector<BmsePoint> a{{0.1, 2.0}, {0.2, 1.0}, {0.3, 3.0}};
    CHECK(select_bandwidth(a) == 0.2);
    std::vector<BmsePoint> b{{0.1, 1.0}, {0.2, 1.0}};
    CHECK(select_bandwidth(b) == 0.1);
    std::vector<BmsePoint> c{{0.3, 5.0}, {0.2, 5.0}, {0.4, 5.0}};
    CHECK(select_bandwidth(c) == 0.2);
    CHECK_THROWS_AS(select_bandwidth(std::vector<BmsePoint>{}), InputError);
}

TEST_CASE("bmse curve basics") {
    BootstrapDesign data(exp_sample(300, 21), Design::current_status);
    std::vector<double> one{0.3};
    auto c = bmse_curve(data, 1.0, FromNpmle{}, one, 20, 4);
    REQUIRE(c.size() == 1);
    CHECK(c[0].bmse >= 0.0);
    std::vector<double> bad{0.0};
    CHECK_THROWS_AS(bmse_curve(data, 1.0, FromNpmle{}, bad, 20, 4), InputError);
}

TEST_CASE("failure budget") {
    CHECK_NOTHROW(detail::check_failures(1, 100));
    CHECK_THROWS_AS(detail::check_failures(2, 100), NumericalError);
    CHECK_THROWS_AS(validate(BootstrapScheme{FromSmle{0.0}}), InputError);
}
