#include <catch_amalgamated.hpp>

#include <random>

#include "icboot/gcm.hpp"
#include "oracles/oracles.hpp"

using namespace icboot;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> slopes_of(std::vector<DiagramPoint> pts) { return gcm_left_slopes(CusumDiagram(std::move(pts))); }

std::vector<double> pava_via_gcm(const std::vector<double>& v, const std::vector<double>& w) {
    std::vector<double> wv(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) wv[i] = w[i] * v[i];
    return gcm_left_slopes(CusumDiagram::from_increments(w, wv));
}

}  // namespace

TEST_CASE("gcm slopes of small diagrams") {
    CHECK(slopes_of({{0, 0}, {1, 1}, {2, 2}, {3, 3}}) == std::vector<double>{1, 1, 1});
    CHECK(slopes_of({{0, 0}, {1, 1}, {2, 1}, {3, 2}}) == std::vector<double>{0.5, 0.5, 1});
    CHECK(slopes_of({{0, 0}, {1, 0}, {2, 2}}) == std::vector<double>{0, 2});
}

TEST_CASE("gcm rejects malformed diagrams") {
    CHECK_THROWS_AS(CusumDiagram({{0, 0}}), InputError);
    CHECK_THROWS_AS(CusumDiagram({{0, 0}, {1, 1}, {1, 2}}), InputError);
    CHECK_THROWS_AS(CusumDiagram({{0, 0}, {2, 1}, {1, 2}}), InputError);
}

TEST_CASE("zero-width increments fold into their predecessor") {
    std::vector<double> dx{1, 0, 1}, dy{1, 1, 0};
    auto d = CusumDiagram::from_increments(dx, dy);
    REQUIRE(d.size() == 2);
    CHECK(d.points()[1].y == 2.0);
    std::vector<double> bad{0, 1};
    CHECK_THROWS_AS(CusumDiagram::from_increments(bad, bad), InputError);
}

TEST_CASE("gcm agrees with the exhaustive chord oracle") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::uniform_int_distribution<int> len(1, 12);
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<DiagramPoint> pts{{0, 0}};
        std::vector<oracle::Pt> opts{{0, 0}};
        int m = len(gen);
        for (int i = 0; i < m; ++i) {
            double x = pts.back().x + 0.1 + std::abs(U(gen));
            double y = pts.back().y + U(gen);
            pts.push_back({x, y});
            opts.push_back({x, y});
        }
        auto got = slopes_of(pts);
        auto want = oracle::hull_slopes(opts);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK_THAT(got[i], WithinAbs(want[i], 1e-9));
        for (std::size_t i = 1; i < got.size(); ++i) CHECK(got[i] >= got[i - 1] - 1e-12);
    }
}

TEST_CASE("isotonic regression examples") {
    CHECK(isotonic_weighted(std::vector<double>{0, 0, 1, 1}, std::vector<double>{1, 1, 1, 1}).values ==
          std::vector<double>{0, 0, 1, 1});
    CHECK(isotonic_weighted(std::vector<double>{1, 0, 1}, std::vector<double>{1, 1, 1}).values ==
          std::vector<double>{0.5, 0.5, 1});
    CHECK(isotonic_weighted(std::vector<double>{1, 0}, std::vector<double>{1, 3}).values ==
          std::vector<double>{0.25, 0.25});
}

TEST_CASE("isotonic regression input errors") {
    CHECK_THROWS_AS(isotonic_weighted(std::vector<double>{}, std::vector<double>{}), InputError);
    CHECK_THROWS_AS(isotonic_weighted(std::vector<double>{1, 2}, std::vector<double>{1}), InputError);
    CHECK_THROWS_AS(isotonic_weighted(std::vector<double>{1, 2}, std::vector<double>{1, 0}), InputError);
    CHECK_THROWS_AS(isotonic_weighted(std::vector<double>{1, 2}, std::vector<double>{1, -1}), InputError);
}

TEST_CASE("isotonic regression equals gcm slopes on random instances") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    std::uniform_int_distribution<int> len(1, 50);
    for (int rep = 0; rep < 1000; ++rep) {
        int n = len(gen);
        std::vector<double> v(n), w(n);
        for (int i = 0; i < n; ++i) {
            v[i] = 4.0 * U(gen) - 2.0;
            w[i] = 0.1 + U(gen);
        }
        auto fit = isotonic_weighted(v, w);
        auto ref = pava_via_gcm(v, w);
        double sv = 0.0, sf = 0.0;
        for (int i = 0; i < n; ++i) {
            CHECK_THAT(fit.values[i], WithinAbs(ref[i], 1e-10));
            if (i > 0) CHECK(fit.values[i] >= fit.values[i - 1]);
            sv += w[i] * v[i];
            sf += w[i] * fit.values[i];
        }
        CHECK(std::abs(sv - sf) <= 1e-10 * std::max(1.0, std::abs(sv)));
        auto again = isotonic_weighted(fit.values, w);
        CHECK(again.values == fit.values);
    }
}

TEST_CASE("isotonic regression matches the level-set oracle on the 5-value grid") {
    const std::vector<double> grid{0, 0.25, 0.5, 0.75, 1};
    std::size_t checked = 0;
    for (std::size_t n = 1; n <= 6; ++n) {
        std::vector<std::size_t> idx(n, 0);
        while (true) {
            std::vector<double> v(n), w(n, 1.0);
            for (std::size_t i = 0; i < n; ++i) v[i] = grid[idx[i]];
            auto fit = isotonic_weighted(v, w);
            auto ref = oracle::isotonic_bruteforce(v, w);
            REQUIRE(fit.values == ref);
            ++checked;
            std::size_t k = 0;
            while (k < n && ++idx[k] == grid.size()) idx[k++] = 0;
            if (k == n) break;
        }
    }
    CHECK(checked == 5 + 25 + 125 + 625 + 3125 + 15625);
}
