// Quantiles of Chernoff's distribution and of its kappa-scaled version for
// Exp(1) current status data at t0 = 1.

#include <cmath>
#include <cstdio>

#include "icboot/icboot.hpp"

int main() {
    icboot::ChernoffConfig cfg;
    cfg.replicates = 20000;
    auto draws = icboot::simulate_chernoff(cfg);
    const double e = std::exp(-1.0);
    const double kappa = icboot::kappa_cs(1.0 - e, e, 0.5);
    std::printf("kappa = %.4f\n   p   q(C)    q(kappa C)\n", kappa);
    for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
        double q = icboot::empirical_quantile(draws, p);
        std::printf("%4.2f  %6.3f  %6.3f\n", p, q, kappa * q);
    }
}
