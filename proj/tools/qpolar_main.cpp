// Command-line front end; talks to the core exclusively through the C API.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpolar/qpolar.h"

namespace {

using nlohmann::json;

struct Flags {
    std::string config_path, n, family, channel, mode, p_grid, target, method;
    std::string out, format = "csv";
    int64_t bigN = -1;
    int64_t i = -1;
    uint64_t seed = 0;
    bool seed_set = false;
    int64_t trials = -1, failures = -1, de_pop = -1, prep_runs = -1;
    int threads = 0;
    bool threads_set = false;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config_path, "JSON config file (flags override)");
    sub->add_option("--n", f.n, "code depth n (construct accepts lo..hi)");
    sub->add_option("--N", f.bigN, "code size N = 2^n");
    sub->add_option("--i", f.i, "information position (1-based)");
    sub->add_option("--family", f.family, "q1 | shor | both")
        ->check(CLI::IsMember({"q1", "shor", "both"}));
    sub->add_option("--channel", f.channel, "depolarizing | erasure")
        ->check(CLI::IsMember({"depolarizing", "erasure"}));
    sub->add_option("--mode", f.mode, "use-corr | ignore-corr")
        ->check(CLI::IsMember({"use-corr", "ignore-corr"}));
    sub->add_option("--p-grid", f.p_grid,
                    "a:b:steps (log-spaced), comma list, or single value");
    sub->add_option("--target", f.target, "logical_zero | logical_plus | both")
        ->check(CLI::IsMember({"logical_zero", "logical_plus", "both"}));
    sub->add_option("--method", f.method, "mc | de | both")
        ->check(CLI::IsMember({"mc", "de", "both"}));
    auto* s = sub->add_option("--seed", f.seed, "master RNG seed");
    s->each([&f](const std::string&) { f.seed_set = true; });
    sub->add_option("--trials", f.trials, "attempt/trial budget");
    sub->add_option("--failures", f.failures, "MC failure target per side");
    sub->add_option("--de-pop", f.de_pop, "density evolution population");
    sub->add_option("--prep-runs", f.prep_runs, "accepted preparations for DE statistics");
    auto* t = sub->add_option("--threads", f.threads, "worker threads (0 = machine)");
    t->each([&f](const std::string&) { f.threads_set = true; });
    sub->add_option("--out", f.out, "output path (default stdout)");
    sub->add_option("--format", f.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
}

int build_config(const Flags& f, json& cfg, std::string& err) {
    cfg = json::object();
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) {
            err = "cannot open config file: " + f.config_path;
            return 1;
        }
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = json::parse(ss.str(), nullptr, false);
        if (cfg.is_discarded() || !cfg.is_object()) {
            err = "config file is not a JSON object";
            return 1;
        }
    }
    if (!f.n.empty() && f.bigN >= 0) {
        err = "give either --n or --N, not both";
        return 1;
    }
    if (!f.n.empty()) {
        if (f.n.find("..") == std::string::npos) cfg["n"] = std::stol(f.n);
        else cfg["n"] = f.n;
    }
    if (f.bigN >= 0) cfg["N"] = f.bigN;
    if (f.i >= 0) cfg["i"] = f.i;
    if (!f.family.empty()) cfg["family"] = f.family;
    if (!f.channel.empty()) cfg["channel"] = f.channel;
    if (!f.mode.empty()) cfg["mode"] = f.mode;
    if (!f.p_grid.empty()) {
        // single numeric value, comma list, or a:b:steps
        if (f.p_grid.find(':') == std::string::npos &&
            f.p_grid.find(',') == std::string::npos)
            cfg["p"] = std::stod(f.p_grid);
        else
            cfg["p_grid"] = f.p_grid;
    }
    if (!f.target.empty()) cfg["target"] = f.target;
    if (!f.method.empty()) cfg["method"] = f.method;
    if (f.seed_set) cfg["seed"] = f.seed;
    if (f.trials >= 0) cfg["trials"] = f.trials;
    if (f.failures >= 0) cfg["failures"] = f.failures;
    if (f.de_pop >= 0) cfg["de_pop"] = f.de_pop;
    if (f.prep_runs >= 0) cfg["prep_runs"] = f.prep_runs;
    if (f.threads_set) cfg["threads"] = f.threads;
    return 0;
}

int run_one(const std::string& command, const Flags& f) {
    json cfg;
    std::string err;
    if (build_config(f, cfg, err)) {
        std::cerr << "error: " << err << "\n";
        return 1;
    }
    qp_result* r = nullptr;
    qp_status st = qp_run(command.c_str(), cfg.dump().c_str(), &r);
    int rc = 0;
    if (st == QP_OK) {
        const char* text = (f.format == "json") ? qp_result_json(r) : qp_result_csv(r);
        if (f.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream outf(f.out, std::ios::binary);
            if (!outf) {
                std::cerr << "error: cannot write " << f.out << "\n";
                rc = 1;
            } else {
                outf << text;
            }
        }
    } else {
        std::cerr << "error: " << qp_result_error(r) << "\n";
        switch (st) {
            case QP_ERR_USAGE: rc = 1; break;
            case QP_ERR_RESOURCE: rc = 2; break;
            case QP_ERR_SELFTEST: rc = 3; break;
            default: rc = 1; break;
        }
    }
    qp_result_free(r);
    return rc;
}

}

int main(int argc, char** argv) {
    CLI::App app{std::string("qpolar ") + qp_version() +
                 " - quantum polar code simulation toolkit"};
    app.require_subcommand(1);

    Flags fc, fp, fl, fs;
    CLI::App* c1 = app.add_subcommand("construct", "code construction tables");
    add_common(c1, fc);
    CLI::App* c2 = app.add_subcommand("prep-rate", "preparation acceptance rates");
    add_common(c2, fp);
    CLI::App* c3 = app.add_subcommand("ler", "logical error rates (MC and DE)");
    add_common(c3, fl);
    CLI::App* c4 = app.add_subcommand("selftest", "oracle-backed invariant suite");
    add_common(c4, fs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 1 : 0;
    }

    if (c1->parsed()) return run_one("construct", fc);
    if (c2->parsed()) return run_one("prep-rate", fp);
    if (c3->parsed()) return run_one("ler", fl);
    if (c4->parsed()) return run_one("selftest", fs);
    return 1;
}
