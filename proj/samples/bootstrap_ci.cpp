// 90% intervals for F(1) from the NPMLE and smoothed bootstraps on one
// mixed-case sample.

#include <cmath>
#include <cstdio>

#include "icboot/icboot.hpp"

int main() {
    icboot::Scenario sc{icboot::Exponential{1.0}, icboot::MixedCaseExams{3, 2.0}};
    icboot::Stream rng(7);
    icboot::BootstrapDesign data(icboot::sample_scenario(sc, 300, rng), icboot::Design::mixed);

    const double h = std::pow(300.0, -0.2);
    for (auto [name, scheme] : {std::pair{"npmle", icboot::BootstrapScheme{icboot::FromNpmle{}}},
                                std::pair{"smle ", icboot::BootstrapScheme{icboot::FromSmle{h}}}}) {
        auto res = icboot::bootstrap_roots(data, 1.0, scheme, 500, 11);
        auto ci = icboot::basic_ci(res, 0.9);
        std::printf("%s  F(1) = %.3f  [%.3f, %.3f]\n", name, res.npmle_center, ci.lo, ci.hi);
    }
    std::printf("true   F(1) = %.3f\n", sc.true_cdf(1.0));
}
