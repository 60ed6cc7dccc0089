// Current status NPMLE on simulated Exp(1) data examined uniformly on [0, 2].

#include <cstdio>

#include "icboot/icboot.hpp"

int main() {
    icboot::Scenario sc{icboot::Exponential{1.0}, icboot::CurrentStatusExams{2.0}};
    icboot::Stream rng(2024);
    auto subjects = icboot::sample_scenario(sc, 500, rng);

    icboot::CurrentStatusSample data;
    for (const auto& s : subjects) data.push_back({s.times[0], s.category == 1 ? 1 : 0});

    auto F = icboot::npmle_current_status(data);
    icboot::SmoothedDistribution smle(F, 0.3);
    std::printf("   t   NPMLE   SMLE   true\n");
    for (double t = 0.25; t < 2.0; t += 0.25) {
        std::printf("%4.2f  %6.3f  %5.3f  %5.3f\n", t, F(t), smle(t), sc.true_cdf(t));
    }
}
