#pragma once

// Scenario generators and Monte Carlo experiments: coverage of bootstrap
// intervals, root distributions, 0.95-quantile trajectories and MSE curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "icboot/bootstrap.hpp"
#include "icboot/data.hpp"
#include "icboot/distribution.hpp"
#include "icboot/error.hpp"
#include "icboot/limit.hpp"
#include "icboot/parallel.hpp"
#include "icboot/random.hpp"
#include "icboot/stats.hpp"

namespace icboot {

// ---------------------------------------------------------------------------
// Scenarios
// ---------------------------------------------------------------------------

struct Exponential {
    double rate = 1.0;
};

// |Z| with Z standard normal.
struct FoldedNormal {};

using EventLaw = std::variant<Exponential, FoldedNormal>;

inline double event_cdf(const EventLaw& law, double t) {
    if (t <= 0.0) return 0.0;
    if (const auto* e = std::get_if<Exponential>(&law)) return -std::expm1(-e->rate * t);
    return std::erf(t / std::numbers::sqrt2);
}

inline double event_density(const EventLaw& law, double t) {
    if (t < 0.0) return 0.0;
    if (const auto* e = std::get_if<Exponential>(&law)) return e->rate * std::exp(-e->rate * t);
    return 2.0 * std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
}

inline double draw_event(const EventLaw& law, Stream& rng) {
    if (const auto* e = std::get_if<Exponential>(&law)) return rng.exponential(e->rate);
    return std::abs(rng.normal());
}

struct CurrentStatusExams {
    double b = 2.0;  // T ~ U[0, b]
};

struct Case2Exams {
    double b = 2.0;  // order statistics of two U[0, b]
};

struct MixedCaseExams {
    int kmax = 3;    // K uniform on {1..kmax}
    double b = 2.0;  // K order statistics of U[0, b]
};

using ExamDesign = std::variant<CurrentStatusExams, Case2Exams, MixedCaseExams>;

struct Scenario {
    EventLaw event = Exponential{1.0};
    ExamDesign exams = CurrentStatusExams{2.0};

    void validate() const {
        if (const auto* e = std::get_if<Exponential>(&event); e && !(e->rate > 0.0)) {
            throw InputError("exponential rate must be positive");
        }
        std::visit(
            [](const auto& d) {
                if (!(d.b > 0.0)) throw InputError("examination window must be positive");
                if constexpr (std::is_same_v<std::decay_t<decltype(d)>, MixedCaseExams>) {
                    if (d.kmax < 1) throw InputError("kmax must be at least 1");
                }
            },
            exams);
    }

    double window() const {
        return std::visit([](const auto& d) { return d.b; }, exams);
    }

    // Estimation mode matching the design.
    Design design() const {
        if (std::holds_alternative<CurrentStatusExams>(exams)) return Design::current_status;
        if (std::holds_alternative<Case2Exams>(exams)) return Design::case2;
        return Design::mixed;
    }

    double true_cdf(double t) const { return event_cdf(event, t); }
};

inline MixedCaseSubject sample_subject(const Scenario& sc, Stream& rng) {
    const double x = draw_event(sc.event, rng);
    const double b = sc.window();
    auto exam = [&] { return b * (1.0 - rng.uniform()); };  // (0, b]
    std::size_t K = 1;
    if (std::holds_alternative<Case2Exams>(sc.exams)) {
        K = 2;
    } else if (const auto* m = std::get_if<MixedCaseExams>(&sc.exams)) {
        K = 1 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(m->kmax)));
    }
    MixedCaseSubject s;
    s.times.resize(K);
    do {
        for (auto& t : s.times) t = exam();
        std::sort(s.times.begin(), s.times.end());
    } while (std::adjacent_find(s.times.begin(), s.times.end()) != s.times.end());
    s.category = static_cast<int>(K) + 1;
    for (std::size_t k = 0; k < K; ++k) {
        if (x <= s.times[k]) {
            s.category = static_cast<int>(k) + 1;
            break;
        }
    }
    return s;
}

inline MixedCaseSample sample_scenario(const Scenario& sc, std::size_t n, Stream& rng) {
    sc.validate();
    MixedCaseSample out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(sample_subject(sc, rng));
    return out;
}

// Density of T (current status) or of (T1, T2) on the diagonal (case 2) at t0,
// for the scale constants.
inline double exam_density(const Scenario& sc, double t0) {
    const double b = sc.window();
    if (t0 < 0.0 || t0 > b) return 0.0;
    if (std::holds_alternative<Case2Exams>(sc.exams)) return 2.0 / (b * b);
    return 1.0 / b;
}

// kappa (current status) or kappa_1 (case 2) for the scenario at t0.
inline double limit_scale(const Scenario& sc, double t0) {
    const double F = sc.true_cdf(t0), f = event_density(sc.event, t0);
    if (std::holds_alternative<Case2Exams>(sc.exams)) return kappa_case2(f, exam_density(sc, t0));
    if (std::holds_alternative<CurrentStatusExams>(sc.exams)) return kappa_cs(F, f, exam_density(sc, t0));
    throw InputError("no known limit scale for mixed-case designs");
}

// ---------------------------------------------------------------------------
// Coverage
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    Scenario scenario;
    std::size_t n = 500;
    double t0 = 1.0;
    double level = 0.9;
    std::size_t reps = 500;
    int B = 500;
    BootstrapScheme scheme = FromNpmle{};
    std::uint64_t seed = 1;

    void validate() const {
        scenario.validate();
        icboot::validate(scheme);
        if (n < 1) throw InputError("sample size must be positive");
        if (reps < 1 || B < 1) throw InputError("reps and B must be positive");
        if (!(level > 0.0 && level < 1.0)) throw InputError("level must lie in (0, 1)");
    }
};

struct CoverageReport {
    double coverage = 0.0;
    double mean_length = 0.0;
    std::size_t reps = 0;
    std::size_t failures = 0;
    std::size_t covered = 0;
};

inline MixedCaseSample experiment_dataset(const ExperimentConfig& cfg, std::size_t rep) {
    Stream rng = Stream::derive(cfg.seed, {stream_domain::data, static_cast<std::uint64_t>(rep)});
    return sample_scenario(cfg.scenario, cfg.n, rng);
}

inline CoverageReport coverage_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const double truth = cfg.scenario.true_cdf(cfg.t0);
    std::vector<std::optional<ConfidenceInterval>> cis(cfg.reps);
    parallel_for(cfg.reps, [&](std::size_t r) {
        try {
            BootstrapDesign data(experiment_dataset(cfg, r), cfg.scenario.design());
            auto seed = derive_seed(cfg.seed, {stream_domain::nested_boot, static_cast<std::uint64_t>(r)});
            cis[r] = basic_ci(bootstrap_roots(data, cfg.t0, cfg.scheme, cfg.B, seed), cfg.level);
        } catch (const NumericalError&) {
            cis[r].reset();
        }
    });
    CoverageReport rep;
    rep.reps = cfg.reps;
    double total_len = 0.0;
    for (const auto& ci : cis) {
        if (!ci) {
            ++rep.failures;
            continue;
        }
        rep.covered += ci->contains(truth) ? 1 : 0;
        total_len += ci->length();
    }
    const std::size_t good = rep.reps - rep.failures;
    if (good > 0) {
        rep.coverage = static_cast<double>(rep.covered) / static_cast<double>(good);
        rep.mean_length = total_len / static_cast<double>(good);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Figure data
// ---------------------------------------------------------------------------

struct RootSamples {
    std::vector<double> mc_roots;    // rate * (NPMLE(t0) - F(t0)) over fresh datasets
    std::vector<double> boot_roots;  // bootstrap roots from one dataset
};

// mc_roots from cfg.reps datasets; boot_roots from one further dataset with cfg.B
// replicates. For case 2 the Monte Carlo roots use the one-step estimator
// started at the true F, matching what the bootstrap mimics.
inline RootSamples figure1_density_data(const ExperimentConfig& cfg) {
    cfg.validate();
    const double truth = cfg.scenario.true_cdf(cfg.t0);
    const double rate = root_rate(cfg.scenario.design(), cfg.n);
    RootSamples out;
    out.mc_roots.resize(cfg.reps);
    parallel_for(cfg.reps, [&](std::size_t r) {
        auto sample = experiment_dataset(cfg, r);
        double est;
        if (cfg.scenario.design() == Design::case2) {
            auto F = [&](double t) { return cfg.scenario.true_cdf(t); };
            est = icm_one_step(sample, F).distribution(cfg.t0);
        } else {
            est = BootstrapDesign(std::move(sample), cfg.scenario.design()).npmle()(cfg.t0);
        }
        out.mc_roots[r] = rate * (est - truth);
    });
    Stream rng = Stream::derive(cfg.seed, {stream_domain::figure, 1});
    BootstrapDesign data(sample_scenario(cfg.scenario, cfg.n, rng), cfg.scenario.design());
    out.boot_roots = bootstrap_roots(data, cfg.t0, cfg.scheme, cfg.B, derive_seed(cfg.seed, {stream_domain::figure, 2})).roots;
    return out;
}

struct QuantilePoint {
    std::size_t n;
    double q95;
};

struct QuantileTrajectory {
    std::vector<QuantilePoint> points;
    double reference = 0.0;  // kappa * q_0.95 of Chernoff's distribution
};

// Nested data: subject i always comes from stream (seed, sequence, i), so the
// dataset of size n is a prefix of every larger one.
inline MixedCaseSample nested_prefix(const Scenario& sc, std::size_t n, std::uint64_t seed) {
    MixedCaseSample out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Stream rng = Stream::derive(seed, {stream_domain::sequence, static_cast<std::uint64_t>(i)});
        out.push_back(sample_subject(sc, rng));
    }
    return out;
}

inline double chernoff_quantile(double p, const ChernoffConfig& cfg) {
    auto draws = simulate_chernoff(cfg);
    return empirical_quantile(draws, p);
}

inline QuantileTrajectory figure2_quantile_trajectory(const Scenario& sc, double t0, const BootstrapScheme& scheme,
                                                      std::span<const std::size_t> n_grid, int B, std::uint64_t seed,
                                                      double chernoff_q95) {
    sc.validate();
    for (std::size_t i = 1; i < n_grid.size(); ++i) {
        if (!(n_grid[i] > n_grid[i - 1])) throw InputError("n_grid must be increasing");
    }
    QuantileTrajectory out;
    out.reference = limit_scale(sc, t0) * chernoff_q95;
    if (n_grid.empty()) return out;
    auto full = nested_prefix(sc, n_grid.back(), seed);
    for (std::size_t n : n_grid) {
        MixedCaseSample prefix(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(n));
        BootstrapDesign data(std::move(prefix), sc.design());
        auto res = bootstrap_roots(data, t0, scheme, B, derive_seed(seed, {stream_domain::nested_boot, n}));
        out.points.push_back({n, empirical_quantile(res.roots, 0.95)});
    }
    return out;
}

// MSE(h) = E{SMLE_h(t0) - F(t0)}^2 over reps fresh datasets.
inline std::vector<BmsePoint> true_mse_curve(const Scenario& sc, std::size_t n, double t0,
                                             std::span<const double> h_grid, std::size_t reps, std::uint64_t seed) {
    sc.validate();
    if (h_grid.empty()) throw InputError("bandwidth grid is empty");
    const double truth = sc.true_cdf(t0);
    const std::size_t G = h_grid.size();
    std::vector<double> sq(reps * G);
    parallel_for(reps, [&](std::size_t r) {
        Stream rng = Stream::derive(seed, {stream_domain::data, static_cast<std::uint64_t>(r)});
        auto fit = BootstrapDesign(sample_scenario(sc, n, rng), sc.design()).npmle();
        for (std::size_t g = 0; g < G; ++g) {
            double v = SmoothedDistribution(fit, h_grid[g])(t0) - truth;
            sq[r * G + g] = v * v;
        }
    });
    std::vector<BmsePoint> curve;
    for (std::size_t g = 0; g < G; ++g) {
        double s = 0.0;
        for (std::size_t r = 0; r < reps; ++r) s += sq[r * G + g];
        curve.push_back({h_grid[g], s / static_cast<double>(reps)});
    }
    return curve;
}

inline std::vector<double> default_bandwidth_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 20; ++i) g.push_back(i / 20.0);
    return g;
}

// Published 95% comparison rows for the Exp(1), K ~ U{1..4}, U[0,3] design at
// F(log 2) = 0.5; only the smoothed-bootstrap row is recomputed here.
struct PublishedComparisonRow {
    std::string method;
    std::string quantity;
    std::vector<double> values;
};

inline const std::vector<std::size_t>& comparison_sample_sizes() {
    static const std::vector<std::size_t> ns{50, 100, 200, 500, 1000, 1500, 2000};
    return ns;
}

inline const std::vector<PublishedComparisonRow>& published_comparison_rows() {
    static const std::vector<PublishedComparisonRow> rows{
        {"PL", "coverage", {0.90, 0.92, 0.92, 0.95, 0.94, 0.94, 0.94}},
        {"PL", "length", {0.41, 0.33, 0.26, 0.20, 0.16, 0.14, 0.12}},
        {"m-out-of-n", "coverage", {0.97, 0.97, 0.96, 0.96, 0.95, 0.96, 0.97}},
        {"m-out-of-n", "length", {0.54, 0.47, 0.31, 0.24, 0.17, 0.16, 0.14}},
    };
    return rows;
}

// Bandwidth used for the comparison design: 0.5 up to n = 500, 0.3 beyond.
inline double comparison_bandwidth(std::size_t n) { return n <= 500 ? 0.5 : 0.3; }

// Exp(1) events, K uniform on {1..4}, exams on [0, 3]; target F(log 2) = 0.5.
inline Scenario comparison_scenario() { return {Exponential{1.0}, MixedCaseExams{4, 3.0}}; }

inline ExperimentConfig comparison_config(std::size_t n, std::size_t reps, int B, std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.scenario = comparison_scenario();
    cfg.n = n;
    cfg.t0 = std::log(2.0);
    cfg.level = 0.95;
    cfg.reps = reps;
    cfg.B = B;
    cfg.scheme = FromSmle{comparison_bandwidth(n)};
    cfg.seed = seed;
    return cfg;
}

}  // namespace icboot
