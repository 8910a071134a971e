#include "qpolar/runner.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "qpolar/crosscheck.hpp"
#include "qpolar/errors.hpp"
#include "qpolar/prep_sim.hpp"
#include "qpolar/q1_code.hpp"
#include "qpolar/reliability.hpp"
#include "qpolar/rng.hpp"
#include "qpolar/steane_ec.hpp"
#include "version.hpp"

namespace qpolar {

namespace {

using nlohmann::json;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::vector<int> parse_n_list(const json& cfg) {
    std::vector<int> out;
    auto push_range = [&](int lo, int hi) {
        if (lo < 1 || hi < lo || hi > 14) throw UsageError("invalid n range");
        for (int n = lo; n <= hi; n++) out.push_back(n);
    };
    if (cfg.contains("n")) {
        const json& v = cfg["n"];
        if (v.is_number_integer()) {
            push_range(v.get<int>(), v.get<int>());
        } else if (v.is_string()) {
            std::string s = v.get<std::string>();
            size_t dots = s.find("..");
            if (dots == std::string::npos) push_range(std::stoi(s), std::stoi(s));
            else push_range(std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2)));
        } else {
            throw UsageError("n must be an integer or \"lo..hi\"");
        }
    } else if (cfg.contains("N")) {
        int nn = cfg["N"].get<int>();
        if (nn < 2 || (nn & (nn - 1)) != 0) throw UsageError("N must be a power of two >= 2");
        int n = 0;
        while ((1 << n) < nn) n++;
        push_range(n, n);
    } else {
        throw UsageError("missing n/N");
    }
    return out;
}

int parse_single_n(const json& cfg) {
    auto v = parse_n_list(cfg);
    if (v.size() != 1) throw UsageError("this command takes a single n/N");
    return v[0];
}

std::vector<double> parse_p_grid(const json& cfg, const char* key = "p_grid") {
    std::vector<double> grid;
    if (cfg.contains(key)) {
        const json& v = cfg[key];
        if (v.is_array()) {
            for (const auto& x : v) grid.push_back(x.get<double>());
        } else if (v.is_number()) {
            grid.push_back(v.get<double>());
        } else if (v.is_string()) {
            // "p1,p2,..." explicit list, or "a:b:steps" log-spaced inclusive
            std::string s = v.get<std::string>();
            if (s.find(',') != std::string::npos) {
                size_t pos = 0;
                while (pos <= s.size()) {
                    size_t c = s.find(',', pos);
                    if (c == std::string::npos) c = s.size();
                    grid.push_back(std::stod(s.substr(pos, c - pos)));
                    pos = c + 1;
                }
                for (double p : grid)
                    if (p < 0 || p > 1) throw UsageError("p values must be in [0,1]");
                return grid;
            }
            size_t c1 = s.find(':');
            size_t c2 = (c1 == std::string::npos) ? std::string::npos : s.find(':', c1 + 1);
            if (c2 == std::string::npos) throw UsageError("p-grid must be a:b:steps");
            double a = std::stod(s.substr(0, c1));
            double b = std::stod(s.substr(c1 + 1, c2 - c1 - 1));
            int steps = std::stoi(s.substr(c2 + 1));
            if (steps < 1 || a <= 0 || b <= 0) throw UsageError("invalid p-grid");
            for (int k = 0; k < steps; k++) {
                double t = (steps == 1) ? 0.0 : (double)k / (steps - 1);
                grid.push_back(a * std::pow(b / a, t));
            }
        } else {
            throw UsageError("invalid p-grid");
        }
    } else if (cfg.contains("p")) {
        grid.push_back(cfg["p"].get<double>());
    }
    for (double p : grid)
        if (p < 0 || p > 1) throw UsageError("p values must be in [0,1]");
    return grid;
}

struct Common {
    uint64_t seed = 1;
    int threads = 0;
    std::string channel = "depolarizing";
    std::string mode = "ignore-corr";
    uint64_t de_pop = 1000000;
};

Common parse_common(const json& cfg) {
    Common c;
    if (cfg.contains("seed")) c.seed = cfg["seed"].get<uint64_t>();
    if (cfg.contains("threads")) c.threads = cfg["threads"].get<int>();
    if (cfg.contains("channel")) c.channel = cfg["channel"].get<std::string>();
    if (cfg.contains("mode")) c.mode = cfg["mode"].get<std::string>();
    if (cfg.contains("de_pop")) c.de_pop = cfg["de_pop"].get<uint64_t>();
    if (c.channel != "depolarizing" && c.channel != "erasure")
        throw UsageError("channel must be depolarizing or erasure");
    if (c.mode != "ignore-corr" && c.mode != "use-corr")
        throw UsageError("mode must be use-corr or ignore-corr");
    return c;
}

// The echoed configuration omits the thread count so that fixed-seed outputs
// are byte-identical across thread counts.
json echo_config(const json& cfg) {
    json e = cfg;
    e.erase("threads");
    return e;
}

std::string csv_header(const std::string& command, const json& cfg, uint64_t seed) {
    std::ostringstream os;
    os << "# qpolar " << QPOLAR_VERSION << "\n";
    os << "# command " << command << "\n";
    os << "# seed " << seed << "\n";
    os << "# config " << echo_config(cfg).dump() << "\n";
    return os.str();
}

json json_envelope(const std::string& command, const json& cfg, uint64_t seed) {
    json j;
    j["version"] = QPOLAR_VERSION;
    j["command"] = command;
    j["seed"] = seed;
    j["config"] = echo_config(cfg);
    j["rows"] = json::array();
    return j;
}

ReliabilityProfile build_profile(int n, const Common& c, double p) {
    if (c.channel == "erasure") return erasure_profile(n, p);
    return depolarizing_profile(n, p, c.mode == "use-corr", c.de_pop, c.seed, c.threads);
}

double default_p(const Common& c) {
    // The erasure default sits deep in the small-eps regime where the optimal
    // position ordering has stabilized; larger eps shifts the argmin.
    return c.channel == "erasure" ? 1e-4 : 1e-3;
}

bool has_p_grid(const json& cfg) {
    return cfg.contains("p_grid") || cfg.contains("p");
}

RunResult cmd_construct(const json& cfg) {
    Common c = parse_common(cfg);
    auto ns = parse_n_list(cfg);
    auto grid = parse_p_grid(cfg);
    if (!has_p_grid(cfg)) grid.push_back(default_p(c));
    if (grid.size() > 1) throw UsageError("construct takes a single channel parameter");
    std::string family = cfg.value("family", "both");
    if (family != "q1" && family != "shor" && family != "both")
        throw UsageError("family must be q1, shor, or both");

    json env = json_envelope("construct", cfg, c.seed);
    std::ostringstream csv;
    csv << csv_header("construct", cfg, c.seed);
    csv << "n,family,i,min_distance,p_e_l\n";
    if (grid.empty()) ns.clear();       // explicit empty grid: empty table
    for (int n : ns) {
        ReliabilityProfile prof = build_profile(n, c, grid[0]);
        for (const char* fam : {"q1", "shor"}) {
            if (family != "both" && family != fam) continue;
            Q1Code code = construct(n, prof,
                                    std::string(fam) == "q1" ? CodeFamily::q1
                                                             : CodeFamily::shor);
            int d = min_distance(code);
            double pe = q1_position_ler(prof, code.i);
            csv << n << ',' << fam << ',' << code.i << ',' << d << ','
                << fmt_double(pe) << "\n";
            json row;
            row["n"] = n;
            row["family"] = fam;
            row["i"] = code.i;
            row["min_distance"] = d;
            row["p_e_l"] = pe;
            env["rows"].push_back(row);
        }
    }
    return {csv.str(), env.dump(2) + "\n"};
}

RunResult cmd_prep_rate(const json& cfg) {
    Common c = parse_common(cfg);
    int n = parse_single_n(cfg);
    if (!cfg.contains("i")) throw UsageError("prep-rate requires i");
    int i = cfg["i"].get<int>();
    Q1Code code{n, i};
    if (i < 1 || (size_t)i > code.N()) throw UsageError("i out of range");
    auto grid = parse_p_grid(cfg);
    if (!has_p_grid(cfg)) throw UsageError("prep-rate requires a p grid");
    uint64_t attempts = cfg.value("trials", (uint64_t)100000);
    std::string target = cfg.value("target", "both");
    PrepOptions opts;
    opts.skip_leading = cfg.value("skip_leading", true);
    opts.track_reps = false;

    std::vector<std::pair<std::string, PrepTarget>> targets;
    if (target == "logical_zero" || target == "both")
        targets.push_back({"logical_zero", PrepTarget::logical_zero});
    if (target == "logical_plus" || target == "both")
        targets.push_back({"logical_plus", PrepTarget::logical_plus});
    if (targets.empty()) throw UsageError("target must be logical_zero, logical_plus, or both");

    json env = json_envelope("prep-rate", cfg, c.seed);
    std::ostringstream csv;
    csv << csv_header("prep-rate", cfg, c.seed);
    csv << "N,i,target,p,attempts,accepted,p_prep,ci_lo,ci_hi,mean_wx,mean_wz\n";
    for (double p : grid) {
        for (auto& [name, tgt] : targets) {
            if (tgt == PrepTarget::logical_plus && i < 2) continue;
            PrepRateStats st = estimate_prep_rate(code, tgt, NoiseModel{p}, attempts,
                                                  c.seed, c.threads, opts);
            csv << code.N() << ',' << i << ',' << name << ',' << fmt_double(p) << ','
                << st.attempts << ',' << st.accepted << ',' << fmt_double(st.p_prep)
                << ',' << fmt_double(st.ci_lo) << ',' << fmt_double(st.ci_hi) << ','
                << fmt_double(st.mean_wx) << ',' << fmt_double(st.mean_wz) << "\n";
            json row;
            row["N"] = code.N();
            row["i"] = i;
            row["target"] = name;
            row["p"] = p;
            row["attempts"] = st.attempts;
            row["accepted"] = st.accepted;
            row["p_prep"] = st.p_prep;
            row["ci_lo"] = st.ci_lo;
            row["ci_hi"] = st.ci_hi;
            row["mean_wx"] = st.mean_wx;
            row["mean_wz"] = st.mean_wz;
            env["rows"].push_back(row);
        }
    }
    return {csv.str(), env.dump(2) + "\n"};
}

// Log-linear interpolation of the crossing of the LER curve with the diagonal
// LER = p; NaN when the series does not cross.
double diagonal_crossing(const std::vector<std::pair<double, double>>& series) {
    for (size_t k = 0; k + 1 < series.size(); k++) {
        auto [p1, l1] = series[k];
        auto [p2, l2] = series[k + 1];
        if (l1 <= 0 || l2 <= 0) continue;
        double g1 = std::log(l1) - std::log(p1);
        double g2 = std::log(l2) - std::log(p2);
        if ((g1 <= 0 && g2 > 0) || (g1 >= 0 && g2 < 0)) {
            double t = (0 - g1) / (g2 - g1);
            return std::exp(std::log(p1) + t * (std::log(p2) - std::log(p1)));
        }
    }
    return std::nan("");
}

RunResult cmd_ler(const json& cfg) {
    Common c = parse_common(cfg);
    int n = parse_single_n(cfg);
    if (!cfg.contains("i")) throw UsageError("ler requires i");
    int i = cfg["i"].get<int>();
    Q1Code code{n, i};
    if (i < 2 || (size_t)i > code.N()) throw UsageError("ler requires 2 <= i <= N");
    auto grid = parse_p_grid(cfg);
    if (!has_p_grid(cfg)) throw UsageError("ler requires a p grid");
    std::string method = cfg.value("method", "both");
    if (method != "mc" && method != "de" && method != "both")
        throw UsageError("method must be mc, de, or both");
    uint64_t f = cfg.value("failures", (uint64_t)100);
    uint64_t max_trials = cfg.value("trials", (uint64_t)10000000);
    uint64_t prep_runs = cfg.value("prep_runs", (uint64_t)0);

    json env = json_envelope("ler", cfg, c.seed);
    std::ostringstream csv;
    csv << csv_header("ler", cfg, c.seed);
    std::ostringstream body;
    body << "N,i,p,method,P_X_L,P_Z_L,P_e_L,trials_x,trials_z,failures,censored_flag,seed\n";
    std::vector<std::pair<double, double>> mc_series, de_series;
    auto emit = [&](double p, const char* meth, const LerEstimate& est, uint64_t fails) {
        body << code.N() << ',' << i << ',' << fmt_double(p) << ',' << meth << ','
             << fmt_double(est.p_x_l) << ',' << fmt_double(est.p_z_l) << ','
             << fmt_double(est.p_e_l) << ',' << est.trials_x << ',' << est.trials_z
             << ',' << fails << ',' << (est.censored ? 1 : 0) << ',' << c.seed << "\n";
        json row;
        row["N"] = code.N();
        row["i"] = i;
        row["p"] = p;
        row["method"] = meth;
        row["P_X_L"] = est.p_x_l;
        row["P_Z_L"] = est.p_z_l;
        row["P_e_L"] = est.p_e_l;
        row["trials_x"] = est.trials_x;
        row["trials_z"] = est.trials_z;
        row["failures"] = fails;
        row["censored_flag"] = est.censored;
        row["seed"] = c.seed;
        env["rows"].push_back(row);
    };
    for (double p : grid) {
        if (method != "de") {
            LerEstimate est = estimate_ler_mc(code, NoiseModel{p}, f, max_trials,
                                              c.seed, c.threads);
            emit(p, "mc", est, f);
            if (!est.censored) mc_series.push_back({p, est.p_e_l});
        }
        if (method != "mc") {
            LerEstimate est = estimate_ler_de(code, NoiseModel{p}, prep_runs,
                                              c.de_pop, c.seed, c.threads);
            emit(p, "de", est, 0);
            de_series.push_back({p, est.p_e_l});
        }
    }
    env["meta"] = json::object();
    double th_mc = diagonal_crossing(mc_series);
    double th_de = diagonal_crossing(de_series);
    if (!std::isnan(th_mc)) {
        csv << "# pseudothreshold_mc " << fmt_double(th_mc) << "\n";
        env["meta"]["pseudothreshold_mc"] = th_mc;
    }
    if (!std::isnan(th_de)) {
        csv << "# pseudothreshold_de " << fmt_double(th_de) << "\n";
        env["meta"]["pseudothreshold_de"] = th_de;
    }
    csv << body.str();
    return {csv.str(), env.dump(2) + "\n"};
}

RunResult cmd_selftest(const json& cfg) {
    Common c = parse_common(cfg);
    bool corrupt = cfg.value("corrupt_transform", false);
    std::ostringstream rep;
    bool all_ok = true;
    auto check = [&](const char* name, bool ok) {
        rep << (ok ? "PASS " : "FAIL ") << name << "\n";
        all_ok = all_ok && ok;
    };

    {
        auto rng = substream(c.seed, "selftest-inv");
        bool ok = true;
        for (size_t len : {2u, 8u, 64u, 512u, 4096u}) {
            for (int t = 0; t < 40 && ok; t++) {
                BitVec v = BitVec::make(len);
                for (size_t b = 0; b < len; b++)
                    if (random_bit(rng)) v.flip(b);
                BitVec w = v;
                polar_transform(w);
                if (corrupt) w.flip(0);
                polar_transform(w);
                ok = ok && (w == v);
                BitVec y = v;
                polar_transform_transpose(y);
                polar_transform_transpose(y);
                ok = ok && (y == v);
            }
        }
        check("transform_involution", ok);
    }
    {
        bool ok = true;
        for (int n = 1; n <= 3 && ok; n++) {
            size_t nn = (size_t)1 << n;
            for (int i = 1; (size_t)i <= nn && ok; i++)
                for (uint64_t s = 0; s < 20 && ok; s++)
                    ok = oracle_prep_fidelity(n, i, PrepTarget::generic,
                                              c.seed + s) >= 1 - 1e-9;
        }
        check("oracle_equivalence", ok);
    }
    {
        auto rng = substream(c.seed, "selftest-t3");
        bool ok = true;
        int done = 0;
        while (done < 200) {
            PrepOutcome out = prepare_noisy(4, 7, PrepTarget::logical_zero,
                                            NoiseModel{1e-2}, rng);
            if (!out.accepted) continue;
            done++;
            ok = ok && weight(out.rep_x) <= out.fault_count &&
                 weight(out.rep_z) <= out.fault_count;
        }
        check("canonical_weight_bound", ok);
    }
    {
        Q1Code code{4, 7};
        PrepRateStats st = estimate_prep_rate(code, PrepTarget::logical_zero,
                                              NoiseModel{0.0}, 200, c.seed, c.threads);
        bool ok = st.p_prep == 1.0;
        auto rng = substream(c.seed, "selftest-p0");
        ScDecoder dec(code.n);
        for (int t = 0; t < 20 && ok; t++) {
            ok = ok && !mc_x_trial(code, NoiseModel{0.0}, rng, dec).logical_error;
            ok = ok && !mc_z_trial(code, NoiseModel{0.0}, rng, dec).logical_error;
        }
        check("zero_noise_sanity", ok);
    }
    {
        Q1Code code{4, 7};
        PrepRateStats a = estimate_prep_rate(code, PrepTarget::logical_zero,
                                             NoiseModel{1e-3}, 2048, c.seed, 1);
        PrepRateStats b = estimate_prep_rate(code, PrepTarget::logical_zero,
                                             NoiseModel{1e-3}, 2048, c.seed, 2);
        check("thread_determinism", a.accepted == b.accepted &&
                                        a.mean_wx == b.mean_wx &&
                                        a.mean_wz == b.mean_wz);
    }

    json env = json_envelope("selftest", cfg, c.seed);
    env["report"] = rep.str();
    env["passed"] = all_ok;
    std::string csv = csv_header("selftest", cfg, c.seed) + rep.str();
    if (!all_ok) throw SelftestError(rep.str());
    return {csv, env.dump(2) + "\n"};
}

}

const char* version_string() { return QPOLAR_VERSION; }

RunResult run_command(const std::string& command, const std::string& config_json) {
    json cfg;
    if (config_json.empty()) {
        cfg = json::object();
    } else {
        cfg = json::parse(config_json, nullptr, false);
        if (cfg.is_discarded()) throw UsageError("config is not valid JSON");
        if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    }
    if (command == "construct") return cmd_construct(cfg);
    if (command == "prep-rate") return cmd_prep_rate(cfg);
    if (command == "ler") return cmd_ler(cfg);
    if (command == "selftest") return cmd_selftest(cfg);
    throw UsageError("unknown command: " + command);
}

}
