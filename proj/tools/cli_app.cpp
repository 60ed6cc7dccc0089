#include "cli_app.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "icboot/icboot.hpp"

namespace icboot::cli {

namespace fs = std::filesystem;

namespace {

// ---------------------------------------------------------------------------
// Parameters: every command declares its keys once; values come from the
// command line, then the config file, then the default.
// ---------------------------------------------------------------------------

struct Param {
    std::string name;
    std::string fallback;  // empty = required
    std::string help;
    bool list = false;     // repeatable flag, comma-separated in config files
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto b = item.find_first_not_of(" \t");
        auto e = item.find_last_not_of(" \t");
        if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
    return out;
}

double to_real(const std::string& key, const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw InputError("--" + key + ": expected a number, got '" + s + "'");
    }
    return v;
}

long long to_integer(const std::string& key, const std::string& s) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw InputError("--" + key + ": expected an integer, got '" + s + "'");
    }
    return v;
}

class Settings {
public:
    void set(const std::string& key, std::vector<std::string> values) { values_[key] = std::move(values); }

    const std::vector<std::string>& raw(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end() || it->second.empty()) throw InputError("missing required option --" + key);
        return it->second;
    }

    std::string str(const std::string& key) const { return raw(key).front(); }
    double real(const std::string& key) const { return to_real(key, str(key)); }

    double positive(const std::string& key) const {
        double v = real(key);
        if (!(v > 0.0)) throw InputError("--" + key + " must be positive");
        return v;
    }

    long long count(const std::string& key) const {
        long long v = to_integer(key, str(key));
        if (v < 1) throw InputError("--" + key + " must be at least 1");
        return v;
    }

    std::uint64_t seed() const {
        const auto& s = str("seed");
        std::uint64_t v = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
            throw InputError("--seed: expected a nonnegative integer, got '" + s + "'");
        }
        return v;
    }

    std::vector<double> reals(const std::string& key) const {
        std::vector<double> out;
        for (const auto& s : raw(key)) out.push_back(to_real(key, s));
        return out;
    }

    std::string to_config(const std::string& command) const {
        std::ostringstream out;
        out << "# icboot " << command << "\n";
        for (const auto& [k, v] : values_) out << k << " = " << join(v) << "\n";
        return out.str();
    }

private:
    std::map<std::string, std::vector<std::string>> values_;
};

// Flat "key = value" lines; '#' starts a comment.
std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw InputError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        auto strip = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        auto key = strip(line.substr(0, eq));
        if (key.empty()) throw InputError(path + ":" + std::to_string(line_no) + ": empty key");
        if (out.count(key)) throw InputError(path + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
        out[key] = strip(line.substr(eq + 1));
    }
    return out;
}

// Files are collected first and written only after the command succeeded.
class Outputs {
public:
    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }

    void write(const fs::path& dir, const std::string& sidecar) const {
        fs::create_directories(dir);
        auto put = [&](const std::string& name, const std::string& content) {
            std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
            if (!f) throw InputError("cannot write '" + (dir / name).string() + "'");
            f << content;
        };
        for (const auto& [name, content] : files_) put(name, content);
        put("resolved_config.txt", sidecar);
    }

private:
    std::vector<std::pair<std::string, std::string>> files_;
};

struct Context {
    const Settings& s;
    Outputs& files;
    std::ostream& out;
};

struct Command {
    std::string path;  // e.g. "simulate coverage"
    std::string help;
    std::vector<Param> params;
    std::function<void(Context&)> run;
};

std::string num(double v) { return format_number(v); }

std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Shared pieces
// ---------------------------------------------------------------------------

const std::vector<Param> kScenarioParams{
    {"law", "exp", "event-time law: exp | folded-normal"},
    {"rate", "1", "rate of the exponential law"},
    {"design", "cs", "examination design: cs | case2 | mixed"},
    {"window", "2", "examination times uniform on [0, window]"},
    {"kmax", "3", "mixed case: number of exams uniform on 1..kmax"},
};

Scenario scenario_from(const Settings& s) {
    Scenario sc;
    const auto law = s.str("law");
    if (law == "exp") sc.event = Exponential{s.positive("rate")};
    else if (law == "folded-normal") sc.event = FoldedNormal{};
    else throw InputError("--law must be exp or folded-normal");
    const double b = s.positive("window");
    const auto design = s.str("design");
    if (design == "cs") sc.exams = CurrentStatusExams{b};
    else if (design == "case2") sc.exams = Case2Exams{b};
    else if (design == "mixed") sc.exams = MixedCaseExams{static_cast<int>(s.count("kmax")), b};
    else throw InputError("--design must be cs, case2 or mixed");
    sc.validate();
    return sc;
}

double default_bandwidth(std::size_t n) { return std::pow(static_cast<double>(n), -0.2); }

// "npmle" or "smle" with --bandwidth as a number or n^-1/5.
BootstrapScheme scheme_from(const std::string& name, const std::string& bandwidth, std::size_t n) {
    if (name == "npmle") return FromNpmle{};
    if (name != "smle") throw InputError("--scheme must be npmle or smle");
    double h = bandwidth == "n^-1/5" ? default_bandwidth(n) : to_real("bandwidth", bandwidth);
    BootstrapScheme scheme = FromSmle{h};
    validate(scheme);
    return scheme;
}

std::string scheme_name(const BootstrapScheme& s) { return std::holds_alternative<FromNpmle>(s) ? "npmle" : "smle"; }

double scheme_bandwidth(const BootstrapScheme& s) {
    if (const auto* p = std::get_if<FromSmle>(&s)) return p->bandwidth;
    return 0.0;
}

Dataset load_input(const Settings& s) {
    const auto path = s.str("input");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open input file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_dataset(buf.str(), parse_format(s.str("format")));
}

Design design_from(const std::string& name, DatasetFormat format) {
    if (name == "auto") return format == DatasetFormat::current_status ? Design::current_status : Design::mixed;
    if (name == "cs") return Design::current_status;
    if (name == "case2") return Design::case2;
    if (name == "mixed") return Design::mixed;
    throw InputError("--design must be auto, cs, case2 or mixed");
}

std::vector<double> grid_from(const Settings& s) {
    auto g = s.reals("grid");
    for (double h : g) {
        if (!(h > 0.0)) throw InputError("--grid values must be positive");
    }
    return g;
}

std::string default_grid_text() {
    std::vector<std::string> v;
    for (double h : default_bandwidth_grid()) v.push_back(num(h));
    return join(v);
}

double initial_bandwidth(const Settings& s, std::size_t n) {
    const auto h0 = s.str("h0");
    return h0 == "n^-1/5" ? default_bandwidth(n) : to_real("h0", h0);
}

BootstrapScheme bmse_source(const Settings& s, std::size_t n) {
    const auto src = s.str("source");
    if (src == "npmle") return FromNpmle{};
    if (src != "smle") throw InputError("--source must be npmle or smle");
    BootstrapScheme scheme = FromSmle{initial_bandwidth(s, n)};
    validate(scheme);
    return scheme;
}

const std::vector<Param> kDataParams{
    {"input", "", "data file"},
    {"format", "current-status", "current-status | intervals | mixed-long"},
    {"design", "auto", "refit mode: auto | cs | case2 | mixed"},
};

const std::vector<Param> kBmseParams{
    {"grid", default_grid_text(), "bandwidth grid", true},
    {"source", "smle", "BMSE resampling source: npmle | smle"},
    {"h0", "n^-1/5", "initial bandwidth of the smoothed source"},
};

std::vector<BmsePoint> bmse_for(const BootstrapDesign& data, const Settings& s, double t0, int B) {
    auto grid = grid_from(s);
    auto source = bmse_source(s, data.size());
    return bmse_curve(data, t0, source, grid, B, derive_seed(s.seed(), {stream_domain::bmse}));
}

std::string bmse_csv(const std::vector<BmsePoint>& curve) {
    std::string csv = "h,bmse\n";
    for (const auto& p : curve) csv += num(p.h) + "," + num(p.bmse) + "\n";
    return csv;
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

void cmd_fit(Context& c) {
    auto ds = load_input(c.s);
    std::string csv = "s,cumulative\n";
    if (ds.format == DatasetFormat::current_status) {
        validate(ds.current_status);
        std::vector<double> times;
        std::vector<int> delta;
        for (const auto& r : ds.current_status) {
            times.push_back(r.t);
            delta.push_back(r.delta);
        }
        CurrentStatusDesign design(times);
        auto values = design.fit_values(delta);
        auto distinct = design.distinct_times();
        for (std::size_t j = 0; j < values.size(); ++j) csv += num(distinct[j]) + "," + num(values[j]) + "\n";
    } else {
        IntervalNpmleOptions opts;
        opts.tol = c.s.positive("tol");
        opts.max_iter = static_cast<int>(c.s.count("max-iter"));
        auto fit = npmle_interval_censored(ds.censoring_intervals(), opts);
        double cum = 0.0;
        for (std::size_t k = 0; k < fit.support.size(); ++k) {
            cum += fit.masses[k];
            csv += num(fit.support[k].r) + "," + num(cum) + "\n";
        }
    }
    c.files.add("npmle.csv", csv);
    c.out << "fitted " << ds.size() << " records\n";
}

void cmd_ci(Context& c) {
    auto ds = load_input(c.s);
    BootstrapDesign data(ds.subjects(), design_from(c.s.str("design"), ds.format));
    const double t0 = c.s.real("at");
    const int B = static_cast<int>(c.s.count("boot"));
    BootstrapScheme scheme;
    if (c.s.str("scheme") == "smle" && c.s.str("bandwidth") == "auto") {
        scheme = FromSmle{select_bandwidth(bmse_for(data, c.s, t0, B))};
    } else {
        scheme = scheme_from(c.s.str("scheme"), c.s.str("bandwidth"), data.size());
    }
    auto res = bootstrap_roots(data, t0, scheme, B, derive_seed(c.s.seed(), {stream_domain::roots}));
    auto ci = basic_ci(res, c.s.real("level"));
    std::string csv = "t0,estimate,level,lower,upper,scheme,bandwidth,boot,failures\n";
    csv += num(t0) + "," + num(res.npmle_center) + "," + num(c.s.real("level")) + "," + num(ci.lo) + "," +
           num(ci.hi) + "," + scheme_name(scheme) + "," + num(scheme_bandwidth(scheme)) + "," + std::to_string(B) +
           "," + std::to_string(res.failures) + "\n";
    c.files.add("ci.csv", csv);
    c.out << "F(" << fixed2(t0) << ") = " << fixed2(res.npmle_center) << "  CI [" << fixed2(ci.lo) << ", "
          << fixed2(ci.hi) << "]\n";
}

void cmd_bandwidth(Context& c) {
    auto ds = load_input(c.s);
    BootstrapDesign data(ds.subjects(), design_from(c.s.str("design"), ds.format));
    auto curve = bmse_for(data, c.s, c.s.real("at"), static_cast<int>(c.s.count("boot")));
    const double h = select_bandwidth(curve);
    c.files.add("bmse.csv", bmse_csv(curve));
    c.files.add("selected_bandwidth.csv", "h\n" + num(h) + "\n");
    c.out << "selected h = " << num(h) << "\n";
}

void cmd_coverage(Context& c) {
    ExperimentConfig cfg;
    cfg.scenario = scenario_from(c.s);
    cfg.n = static_cast<std::size_t>(c.s.count("n"));
    cfg.t0 = c.s.real("at");
    cfg.level = c.s.real("level");
    cfg.reps = static_cast<std::size_t>(c.s.count("reps"));
    cfg.B = static_cast<int>(c.s.count("boot"));
    cfg.scheme = scheme_from(c.s.str("scheme"), c.s.str("bandwidth"), cfg.n);
    cfg.seed = c.s.seed();
    auto rep = coverage_experiment(cfg);
    std::string csv = "n,t0,level,scheme,bandwidth,reps,boot,coverage,mean_length,failures\n";
    csv += std::to_string(cfg.n) + "," + num(cfg.t0) + "," + num(cfg.level) + "," + scheme_name(cfg.scheme) + "," +
           num(scheme_bandwidth(cfg.scheme)) + "," + std::to_string(rep.reps) + "," + std::to_string(cfg.B) + "," +
           num(rep.coverage) + "," + num(rep.mean_length) + "," + std::to_string(rep.failures) + "\n";
    c.files.add("coverage.csv", csv);
    c.out << "coverage " << fixed2(rep.coverage) << "  mean length " << fixed2(rep.mean_length) << "\n";
}

void cmd_comparison(Context& c) {
    const auto reps = static_cast<std::size_t>(c.s.count("reps"));
    const int B = static_cast<int>(c.s.count("boot"));
    std::vector<std::size_t> ns;
    for (const auto& v : c.s.raw("n-grid")) {
        auto n = to_integer("n-grid", v);
        if (n < 2) throw InputError("--n-grid values must be at least 2");
        ns.push_back(static_cast<std::size_t>(n));
    }
    std::string cov = "SMLE,coverage", len = "SMLE,length", head = "method,quantity";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        auto rep = coverage_experiment(comparison_config(ns[i], reps, B, derive_seed(c.s.seed(), {ns[i]})));
        head += ",n=" + std::to_string(ns[i]);
        cov += "," + num(rep.coverage);
        len += "," + num(rep.mean_length);
        c.out << "n=" << ns[i] << "  coverage " << fixed2(rep.coverage) << "  length " << fixed2(rep.mean_length)
              << "\n";
    }
    std::string csv = head + "\n" + cov + "\n" + len + "\n";
    if (ns == comparison_sample_sizes()) {
        for (const auto& row : published_comparison_rows()) {
            csv += row.method + "," + row.quantity;
            for (double v : row.values) csv += "," + num(v);
            csv += "\n";
        }
    }
    c.files.add("comparison.csv", csv);
}

ChernoffConfig chernoff_from(const Settings& s) {
    ChernoffConfig cfg;
    cfg.half_width = s.positive("half-width");
    cfg.dt = s.positive("dt");
    cfg.replicates = static_cast<std::size_t>(s.count("replicates"));
    cfg.seed = s.seed();
    cfg.validate();
    return cfg;
}

void cmd_chernoff(Context& c) {
    auto draws = simulate_chernoff(chernoff_from(c.s));
    std::string csv = "p,quantile\n";
    for (int i = 1; i <= 19; ++i) {
        const double p = i / 20.0;
        csv += num(p) + "," + num(empirical_quantile(draws, p)) + "\n";
    }
    c.files.add("chernoff_quantiles.csv", csv);
    c.out << "simulated " << draws.size() << " draws\n";
}

std::string column_csv(const char* header, const std::vector<double>& v) {
    std::string csv = std::string(header) + "\n";
    for (double x : v) csv += num(x) + "\n";
    return csv;
}

void cmd_fig1(Context& c) {
    ExperimentConfig cfg;
    cfg.scenario = scenario_from(c.s);
    cfg.n = static_cast<std::size_t>(c.s.count("n"));
    cfg.t0 = c.s.real("at");
    cfg.reps = static_cast<std::size_t>(c.s.count("reps"));
    cfg.B = static_cast<int>(c.s.count("boot"));
    cfg.scheme = scheme_from(c.s.str("scheme"), c.s.str("bandwidth"), cfg.n);
    cfg.seed = c.s.seed();
    auto data = figure1_density_data(cfg);
    c.files.add("fig1_mc_roots.csv", column_csv("root", data.mc_roots));
    c.files.add("fig1_boot_roots.csv", column_csv("root", data.boot_roots));
    c.out << "KS distance " << fixed2(ks_distance(data.mc_roots, data.boot_roots)) << "\n";
}

void cmd_fig2(Context& c) {
    auto sc = scenario_from(c.s);
    const double t0 = c.s.real("at");
    std::vector<std::size_t> ns;
    for (const auto& v : c.s.raw("n-grid")) {
        auto n = to_integer("n-grid", v);
        if (n < 2) throw InputError("--n-grid values must be at least 2");
        ns.push_back(static_cast<std::size_t>(n));
    }
    ChernoffConfig ccfg;
    ccfg.replicates = static_cast<std::size_t>(c.s.count("replicates"));
    ccfg.seed = derive_seed(c.s.seed(), {stream_domain::figure, 0});
    const double q95 = chernoff_quantile(0.95, ccfg);
    const auto sequences = static_cast<std::uint64_t>(c.s.count("sequences"));
    const int B = static_cast<int>(c.s.count("boot"));
    std::string csv = "scheme,sequence,n,q95\n";
    double reference = 0.0;
    const auto& schemes = c.s.raw("scheme");
    for (std::size_t si = 0; si < schemes.size(); ++si) {
        for (std::uint64_t q = 0; q < sequences; ++q) {
            // both schemes see the same data sequences
            auto seq_seed = derive_seed(c.s.seed(), {stream_domain::sequence, q});
            auto scheme = scheme_from(schemes[si], c.s.str("bandwidth"), ns.front());
            auto traj = figure2_quantile_trajectory(sc, t0, scheme, ns, B, seq_seed, q95);
            reference = traj.reference;
            for (const auto& p : traj.points) {
                csv += schemes[si] + "," + std::to_string(q + 1) + "," + std::to_string(p.n) + "," + num(p.q95) + "\n";
            }
        }
    }
    c.files.add("fig2_trajectories.csv", csv);
    c.files.add("fig2_reference.csv", "scale,chernoff_q95,reference\n" + num(limit_scale(sc, t0)) + "," + num(q95) +
                                          "," + num(reference) + "\n");
    c.out << "reference " << fixed2(reference) << "\n";
}

void cmd_fig3(Context& c) {
    auto sc = scenario_from(c.s);
    const auto n = static_cast<std::size_t>(c.s.count("n"));
    const double t0 = c.s.real("at");
    const auto grid = grid_from(c.s);
    const int B = static_cast<int>(c.s.count("boot"));
    const auto seed = c.s.seed();

    Stream rng = Stream::derive(seed, {stream_domain::figure, 3});
    BootstrapDesign data(sample_scenario(sc, n, rng), sc.design());

    std::vector<std::pair<std::string, std::vector<BmsePoint>>> curves;
    curves.emplace_back("true", true_mse_curve(sc, n, t0, grid, static_cast<std::size_t>(c.s.count("reps")), seed));
    auto bseed = derive_seed(seed, {stream_domain::bmse});
    curves.emplace_back("npmle", bmse_curve(data, t0, FromNpmle{}, grid, B, bseed));
    for (double h0 : c.s.reals("h0")) {
        curves.emplace_back("smle:" + num(h0), bmse_curve(data, t0, FromSmle{h0}, grid, B, bseed));
    }
    std::string csv = "curve,h,mse\n", arg = "curve,argmin\n";
    for (const auto& [name, curve] : curves) {
        for (const auto& p : curve) csv += name + "," + num(p.h) + "," + num(p.bmse) + "\n";
        arg += name + "," + num(select_bandwidth(curve)) + "\n";
    }
    c.files.add("fig3_curves.csv", csv);
    c.files.add("fig3_argmins.csv", arg);
    c.out << arg;
}

void cmd_realdata(Context& c) {
    const auto data = load_breast_cancer();
    const auto ts = c.s.reals("at");
    const auto levels = c.s.reals("level");
    const auto& schemes = c.s.raw("scheme");
    const int B = static_cast<int>(c.s.count("boot"));
    const auto design = design_from(c.s.str("design"), DatasetFormat::intervals);
    const auto version = std::string(kBreastCancerVersion);
    const auto checksum = breast_cancer_checksum();

    struct Group {
        const char* label;
        const std::vector<CensoringInterval>* intervals;
    };
    const Group groups[] = {{"T=1", &data.radio_chemo}, {"T=0", &data.radiotherapy}};

    std::string csv = "group,method,t,estimate,level,lower,upper,bandwidth,dataset_version,dataset_checksum\n";
    std::ostringstream table;
    table << "group  method  t   estimate  level  CI\n";
    for (std::size_t g = 0; g < 2; ++g) {
        BootstrapDesign bd(subjects_from_intervals(*groups[g].intervals), design);
        for (std::size_t si = 0; si < schemes.size(); ++si) {
            for (std::size_t ti = 0; ti < ts.size(); ++ti) {
                BootstrapScheme scheme;
                if (schemes[si] == "smle" && c.s.str("bandwidth") == "auto") {
                    auto grid = grid_from(c.s);
                    auto src = bmse_source(c.s, bd.size());
                    auto curve = bmse_curve(bd, ts[ti], src, grid, B,
                                            derive_seed(c.s.seed(), {stream_domain::bmse, g, ti}));
                    scheme = FromSmle{select_bandwidth(curve)};
                } else {
                    scheme = scheme_from(schemes[si], c.s.str("bandwidth"), bd.size());
                }
                auto res = bootstrap_roots(bd, ts[ti], scheme, B, derive_seed(c.s.seed(), {stream_domain::roots, g, ti, si}));
                for (double level : levels) {
                    auto ci = basic_ci(res, level);
                    csv += std::string(groups[g].label) + "," + schemes[si] + "," + num(ts[ti]) + "," +
                           num(res.npmle_center) + "," + num(level) + "," + num(ci.lo) + "," + num(ci.hi) + "," +
                           num(scheme_bandwidth(scheme)) + "," + version + "," + checksum + "\n";
                    table << groups[g].label << "    " << std::left << std::setw(6) << schemes[si] << "  "
                          << std::setw(3) << num(ts[ti]) << " " << fixed2(res.npmle_center) << "      "
                          << fixed2(level) << "   [" << fixed2(ci.lo) << ", " << fixed2(ci.hi) << "]\n";
                }
            }
        }
    }
    c.files.add("table5.csv", csv);
    c.out << table.str();
}

std::vector<Param> with(std::vector<Param> base, const std::vector<Param>& more) {
    base.insert(base.end(), more.begin(), more.end());
    return base;
}

std::vector<Command> commands() {
    const std::vector<Param> common{
        {"seed", "1", "master seed"},
        {"out", "icboot_out", "output directory"},
    };
    std::string ns;
    for (int n = 500; n <= 5000; n += 500) ns += (ns.empty() ? "" : ",") + std::to_string(n);
    std::vector<Command> cmds;
    cmds.push_back({"fit", "NPMLE step function",
                    with(common, {kDataParams[0], kDataParams[1],
                                  {"tol", "1e-8", "ICM tolerance on the Fenchel violation"},
                                  {"max-iter", "500", "ICM iteration cap"}}),
                    cmd_fit});
    cmds.push_back({"ci", "bootstrap confidence interval at one time",
                    with(with(common, kDataParams),
                         with({{"at", "", "evaluation time t0"},
                               {"level", "0.9", "confidence level"},
                               {"scheme", "smle", "bootstrap source: npmle | smle"},
                               {"bandwidth", "n^-1/5", "smoothing bandwidth, a number, n^-1/5 or auto"},
                               {"boot", "500", "bootstrap replicates"}},
                              kBmseParams)),
                    cmd_ci});
    cmds.push_back({"bandwidth", "bootstrap MSE curve and selected bandwidth",
                    with(with(common, kDataParams),
                         with({{"at", "", "evaluation time t0"}, {"boot", "500", "bootstrap replicates"}}, kBmseParams)),
                    cmd_bandwidth});
    cmds.push_back({"simulate coverage", "coverage of bootstrap intervals",
                    with(with(common, kScenarioParams),
                         {{"n", "500", "sample size"},
                          {"at", "1", "evaluation time t0"},
                          {"level", "0.9", "confidence level"},
                          {"reps", "500", "number of intervals"},
                          {"boot", "500", "bootstrap replicates per interval"},
                          {"scheme", "smle", "bootstrap source: npmle | smle"},
                          {"bandwidth", "n^-1/5", "smoothing bandwidth"}}),
                    cmd_coverage});
    std::string cns;
    for (auto n : comparison_sample_sizes()) cns += (cns.empty() ? "" : ",") + std::to_string(n);
    cmds.push_back({"simulate comparison", "95% smoothed-bootstrap coverage beside published PL and m-out-of-n rows",
                    with(common, {{"n-grid", cns, "sample sizes", true},
                                  {"reps", "1000", "intervals per sample size"},
                                  {"boot", "500", "bootstrap replicates per interval"}}),
                    cmd_comparison});
    cmds.push_back({"simulate chernoff", "quantiles of Chernoff's distribution",
                    with(common, {{"half-width", "4", "grid half-width"},
                                  {"dt", "0.001", "grid step"},
                                  {"replicates", "10000", "number of draws"}}),
                    cmd_chernoff});
    cmds.push_back({"figures fig1", "root samples: Monte Carlo and bootstrap",
                    with(with(common, kScenarioParams),
                         {{"n", "500", "sample size"},
                          {"at", "1", "evaluation time t0"},
                          {"reps", "10000", "Monte Carlo datasets"},
                          {"boot", "10000", "bootstrap replicates"},
                          {"scheme", "smle", "bootstrap source: npmle | smle"},
                          {"bandwidth", "0.3", "smoothing bandwidth"}}),
                    cmd_fig1});
    cmds.push_back({"figures fig2", "0.95 quantile of bootstrap roots along growing samples",
                    with(with(common, kScenarioParams),
                         {{"at", "1", "evaluation time t0"},
                          {"n-grid", ns, "sample sizes", true},
                          {"scheme", "npmle,smle", "bootstrap sources", true},
                          {"bandwidth", "0.3", "smoothing bandwidth"},
                          {"boot", "1000", "bootstrap replicates"},
                          {"sequences", "2", "independent data sequences"},
                          {"replicates", "10000", "Chernoff draws for the reference"}}),
                    cmd_fig2});
    cmds.push_back({"figures fig3", "true MSE and bootstrap MSE curves",
                    with(with(common, kScenarioParams),
                         {{"n", "1000", "sample size"},
                          {"at", "1", "evaluation time t0"},
                          {"grid", default_grid_text(), "bandwidth grid", true},
                          {"h0", "0.3,0.4,0.5,0.6,0.7", "initial bandwidths", true},
                          {"boot", "500", "bootstrap replicates"},
                          {"reps", "500", "datasets for the true MSE"}}),
                    cmd_fig3});
    std::string rgrid;
    for (int h = 1; h <= 20; ++h) rgrid += (rgrid.empty() ? "" : ",") + std::to_string(h);
    cmds.push_back({"realdata", "breast cosmesis confidence intervals",
                    with(common, {{"at", "20,30", "evaluation times", true},
                                  {"level", "0.9,0.95", "confidence levels", true},
                                  {"scheme", "smle,npmle", "bootstrap sources", true},
                                  {"bandwidth", "10", "smoothing bandwidth or auto"},
                                  {"boot", "500", "bootstrap replicates"},
                                  {"design", "mixed", "refit mode: mixed | case2"},
                                  {"grid", rgrid, "bandwidth grid for auto", true},
                                  {"source", "smle", "BMSE resampling source"},
                                  {"h0", "10", "initial bandwidth for auto"}}),
                    cmd_realdata});
    return cmds;
}

struct Leaf {
    const Command* cmd;
    CLI::App* app;
    std::map<std::string, std::vector<std::string>> given;
    std::string config;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    const auto cmds = commands();
    CLI::App app{"Interval-censored NPMLE, smoothed bootstrap and simulation tools", "icboot"};
    app.require_subcommand(1);
    std::map<std::string, CLI::App*> groups;
    std::vector<std::unique_ptr<Leaf>> leaves;

    for (const auto& cmd : cmds) {
        auto space = cmd.path.find(' ');
        CLI::App* parent = &app;
        std::string name = cmd.path;
        if (space != std::string::npos) {
            auto group = cmd.path.substr(0, space);
            name = cmd.path.substr(space + 1);
            if (!groups.count(group)) {
                groups[group] = app.add_subcommand(group, group + " commands");
                groups[group]->require_subcommand(1);
            }
            parent = groups[group];
        }
        auto leaf = std::make_unique<Leaf>();
        leaf->cmd = &cmd;
        leaf->app = parent->add_subcommand(name, cmd.help);
        for (const auto& p : cmd.params) {
            auto* opt = leaf->app->add_option("--" + p.name, leaf->given[p.name], p.help);
            if (p.list) {
                opt->delimiter(',');
            } else {
                opt->expected(1);
            }
        }
        leaf->app->add_option("--config", leaf->config, "flat key = value file; flags override it");
        leaves.push_back(std::move(leaf));
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        err << app.help();
        return 1;
    }

    const Leaf* chosen = nullptr;
    for (const auto& l : leaves) {
        if (l->app->parsed()) chosen = l.get();
    }
    if (!chosen) {
        err << app.help();
        return 1;
    }

    try {
        std::map<std::string, std::string> file;
        if (!chosen->config.empty()) file = read_config_file(chosen->config);
        Settings settings;
        for (const auto& p : chosen->cmd->params) {
            auto it = chosen->given.find(p.name);
            std::vector<std::string> v;
            if (it != chosen->given.end() && !it->second.empty()) {
                v = it->second;
            } else if (auto f = file.find(p.name); f != file.end()) {
                v = p.list ? split_list(f->second) : std::vector<std::string>{f->second};
            } else if (!p.fallback.empty()) {
                v = p.list ? split_list(p.fallback) : std::vector<std::string>{p.fallback};
            } else {
                throw InputError("missing required option --" + p.name);
            }
            if (v.empty()) throw InputError("option --" + p.name + " has no value");
            settings.set(p.name, std::move(v));
            file.erase(p.name);
        }
        if (!file.empty()) throw InputError("unknown config key '" + file.begin()->first + "'");

        Outputs files;
        Context ctx{settings, files, out};
        chosen->cmd->run(ctx);
        files.write(settings.str("out"), settings.to_config(chosen->cmd->path));
        return 0;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace icboot::cli
