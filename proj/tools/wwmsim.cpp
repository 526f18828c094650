// Copyright 2026 The wwmsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// wwmsim: verification, rank counting, simulation and search from the shell.
// Exit codes: 0 success, 1 verification failure, 2 usage error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wwm/embedded_data.hpp"
#include "wwm/magic_poly.hpp"
#include "wwm/phasespace.hpp"
#include "wwm/rank_counter.hpp"
#include "wwm/stab_search.hpp"
#include "wwm/verify.hpp"
#include "wwm/wwm_simulator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wwm;

namespace {

constexpr const char *kVersion = "0.1.0";

struct Globals {
    std::string out;
    unsigned jobs = 0;
    uint64_t seed = 1;
};

std::string fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h = (h ^ c) * 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

json fixture_hashes() {
    json j = json::object();
    for (const auto &[name, body] : embedded_files()) {
        j[name] = "fnv1a64:" + fnv1a(body);
    }
    return j;
}

class Artifacts {
  public:
    Artifacts(const Globals &g, std::string command, json config) : g_(g), cmd_(std::move(command)) {
        cfg_ = std::move(config);
        cfg_["command"] = cmd_;
        cfg_["jobs"] = g.jobs;
        cfg_["seed"] = g.seed;
        fs::create_directories(g.out);
    }

    fs::path path(const std::string &suffix) const {
        return fs::path(g_.out) / (cmd_ + suffix);
    }

    void write_json(const json &result, const std::string &suffix = ".json") const {
        json doc = {{"tool", "wwmsim"}, {"version", kVersion}, {"config", cfg_}, {"fixtures", fixture_hashes()},
                    {"result", result}};
        std::ofstream(path(suffix)) << doc.dump(2) << '\n';
    }

    template <class F>
    void write_text(const std::string &suffix, F &&fill) const {
        std::ofstream os(path(suffix));
        fill(os);
    }

  private:
    const Globals &g_;
    std::string cmd_;
    json cfg_;
};

CircuitSpec load_circuit(const std::string &file) {
    std::ifstream in(file);
    if (!in) {
        throw CLI::ValidationError("circuit", "cannot read " + file);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_circuit(ss.str());
}

int cmd_verify(const Globals &g, const std::string &letter, size_t samples) {
    VerifyReport r = letter == "D" ? verify_appendix_d(samples, g.seed) : verify_appendix(letter);
    Artifacts a(g, "verify-appendix-" + letter, {{"appendix", letter}, {"samples", samples}});
    a.write_json(r.to_json());
    std::cout << r.summary() << '\n';
    if (!r.ok) {
        a.write_text(".diff.txt", [&](std::ostream &os) {
            for (const auto &d : r.diffs) {
                os << d << '\n';
            }
            if (r.diff_count > r.diffs.size()) {
                os << "... " << r.diff_count - r.diffs.size() << " more\n";
            }
        });
        for (size_t i = 0; i < std::min<size_t>(10, r.diffs.size()); i++) {
            std::cout << "  " << r.diffs[i] << '\n';
        }
        std::cout << "diff report: " << a.path(".diff.txt").string() << '\n';
        return 1;
    }
    return 0;
}

int cmd_wigner(const Globals &g, size_t k, const std::string &state, bool use_float) {
    if (k < 1 || k > kDenseQuditCap) {
        throw CLI::ValidationError("--k", "must be in 1.." + std::to_string(kDenseQuditCap));
    }
    const Modulus md = Modulus::checked(3, 2);
    std::vector<CyclotomicAmplitude> psi;
    if (state == "magic") {
        psi = magic_state_vector(k, md);
    } else {
        psi.assign(ipow_u(3, k), CyclotomicAmplitude::integer(md, 0));
        psi[0] = CyclotomicAmplitude::integer(md, 1);
    }
    WignerTable W;
    if (use_float) {
        auto v = to_complex(psi);
        ComplexOperator rho(v.size(), 0.0);
        for (size_t i = 0; i < v.size(); i++) {
            for (size_t j = 0; j < v.size(); j++) {
                rho(i, j) = v[i] * std::conj(v[j]);
            }
        }
        W = weyl_symbol(rho, k, FloatOps{3});
    } else {
        W = weyl_symbol(outer(psi, psi), k, ExactOps{md});
    }
    Artifacts a(g, "wigner", {{"k", k}, {"state", state}, {"mode", use_float ? "float" : "exact"}});
    a.write_text(".csv", [&](std::ostream &os) { W.write_csv(os); });
    double neg = 0, sum = 0;
    for (double v : W.values) {
        neg += std::fabs(v);
        sum += v;
    }
    a.write_json({{"points", W.values.size()}, {"sum", sum}, {"negativity", neg}, {"csv", a.path(".csv").string()}});
    std::cout << W.values.size() << " points, sum " << sum << ", negativity " << neg << '\n';
    return 0;
}

int cmd_rank(const Globals &g, size_t k, bool exhaustive, size_t samples) {
    if (k != 1 && k != 2 && k != 3 && k != 6 && k != 12) {
        throw CLI::ValidationError("--k", "must be one of 1, 2, 3, 6, 12");
    }
    if (!exhaustive && samples == 0) {
        exhaustive = k <= kExhaustiveRankCap;
        samples = exhaustive ? 0 : 1000;
    }
    auto p = transformed_magic_poly(k);
    auto strat = exhaustive ? RankStrategy::exhaustive() : RankStrategy::sample(samples, g.seed);
    auto rep = worst_case_rank(p, strat, default_merge_rules(k), g.jobs);
    Artifacts a(g, "rank-k" + std::to_string(k),
                {{"k", k}, {"strategy", exhaustive ? "exhaustive" : "sample"}, {"samples", samples}});
    auto j = rep.to_json();
    if (!exhaustive) {
        j["evidence"] = "sampled; full enumeration not attempted";
    }
    a.write_json(j);
    std::cout << "k=" << k << " worst_case=" << rep.worst_case << " over " << rep.points << " points\n";
    return 0;
}

int cmd_table1(const Globals &g) {
    auto rows = table1_rows();
    Artifacts a(g, "table1", {{"base", table1_base()}});
    a.write_text(".csv", [&](std::ostream &os) { write_table1_csv(os, rows); });
    json j = json::array();
    for (const auto &r : rows) {
        j.push_back({{"k", r.k}, {"dp", r.dp}, {"partition", r.partition}, {"projection", r.projection},
                     {"printed", r.printed}, {"printed_upper", r.printed_upper}, {"exponent", r.exponent},
                     {"flag", r.flag}});
    }
    a.write_json({{"rows", j}, {"csv", a.path(".csv").string()}});
    write_table1_csv(std::cout, rows);
    return 0;
}

int cmd_simulate(const Globals &g, const std::string &file, const std::string &method) {
    auto c = load_circuit(file);
    auto r = method == "dense" ? simulate_dense(c) : simulate_wwm(c);
    Artifacts a(g, "simulate", {{"circuit", c.str()}, {"method", method}});
    a.write_json(r.to_json());
    std::cout << "p = " << r.p;
    if (r.exact.typed()) {
        std::cout << " (exact " << r.exact.str() << ")";
    }
    std::cout << '\n';
    return 0;
}

int cmd_negativity(const Globals &g, const std::string &file, size_t samples) {
    auto c = load_circuit(file);
    double neg = total_negativity(c);
    if (samples == 0) {
        samples = prescribed_samples(neg);
    }
    auto r = estimate_negativity_mc(c, samples, g.seed, g.jobs);
    Artifacts a(g, "negativity", {{"circuit", c.str()}, {"samples", samples}, {"mode", "float"}});
    auto j = r.to_json();
    j["negativity"] = neg;
    j["samples"] = samples;
    a.write_json(j);
    std::cout << "p ~ " << r.p << " +/- " << r.ci << " (" << samples << " samples)\n";
    return 0;
}

int cmd_stabrank(const Globals &g, size_t t, size_t chi, const AnnealSchedule &sched, size_t restarts) {
    if (t < 1 || t > 4) {
        throw CLI::ValidationError("--t", "must be in 1..4");
    }
    auto res = anneal_search(magic_target(t), t, chi, sched, restarts, g.seed, g.jobs);
    Artifacts a(g, "stabrank-t" + std::to_string(t) + "-chi" + std::to_string(chi),
                {{"t", t}, {"chi", chi}, {"restarts", restarts}, {"steps", sched.steps},
                 {"beta_start", sched.beta_start}, {"beta_end", sched.beta_end}});
    a.write_text(".trace.csv", [&](std::ostream &os) {
        os << "step,beta,F,accepted\n";
        os.precision(12);
        for (const auto &r : res.trace) {
            os << r.step << ',' << r.beta << ',' << r.F << ',' << (r.accepted ? 1 : 0) << '\n';
        }
    });
    json states = json::array();
    for (const auto &s : res.best.states) {
        states.push_back(s.cert.to_json());
    }
    bool ok = res.best_F >= 1.0 - kAnnealStopGap;
    a.write_json({{"best_F", res.best_F},
                  {"success", ok},
                  {"successes", res.successes},
                  {"best_restart", res.best_restart},
                  {"restart_F", res.restart_F},
                  {"restart_steps", res.restart_steps},
                  {"ensemble", states},
                  {"trace_csv", a.path(".trace.csv").string()}});
    std::printf("chi=%zu t=%zu best F=%.9f, %zu/%zu restarts reached 1-1e-6\n", chi, t, res.best_F, res.successes,
                restarts);
    return 0;
}

int cmd_curves(const Globals &g, size_t tmax) {
    auto pts = term_count_curve(tmax, table1_base());
    Artifacts a(g, "curves", {{"tmax", tmax}, {"base", table1_base()}});
    a.write_text(".csv", [&](std::ostream &os) {
        os << "t,family,log3_terms\n";
        for (const auto &p : pts) {
            os << p.t << ',' << p.family << ',' << p.log3_terms << '\n';
        }
    });
    a.write_json({{"points", pts.size()}, {"csv", a.path(".csv").string()}});
    std::cout << pts.size() << " curve points written to " << a.path(".csv").string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Wigner-function simulation of Clifford+T qutrit circuits"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    Globals g;
    const char *env = std::getenv("WWMSIM_OUT");
    g.out = env && *env ? env : "wwmsim_out";
    g.jobs = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--out", g.out, "artifact directory (default $WWMSIM_OUT or ./wwmsim_out)");
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "random seed");

    std::function<int()> action;

    auto *verify = app.add_subcommand("verify-appendix", "check a stored polynomial fixture against oracles");
    std::string letter;
    size_t vsamples = 2000;
    verify->add_option("appendix", letter, "B, C, D or E")->required()->check(CLI::IsMember({"B", "C", "D", "E"}));
    verify->add_option("--samples", vsamples, "sampled points for D");
    verify->callback([&] { action = [&] { return cmd_verify(g, letter, vsamples); }; });

    auto *wig = app.add_subcommand("wigner", "dense Wigner table of |T>^k or |0>^k");
    size_t wk = 1;
    std::string state = "magic";
    bool wfloat = false;
    wig->add_option("--k", wk, "number of qutrits");
    wig->add_option("--state", state)->check(CLI::IsMember({"magic", "zero"}));
    wig->add_flag("--float", wfloat, "floating-point instead of exact arithmetic");
    wig->callback([&] { action = [&] { return cmd_wigner(g, wk, state, wfloat); }; });

    auto *rank = app.add_subcommand("rank", "worst-case reduced Gauss-sum count");
    size_t rk = 0, rsamples = 0;
    bool exhaustive = false;
    rank->add_option("--k", rk)->required();
    auto *ex = rank->add_flag("--exhaustive", exhaustive, "all phase points");
    rank->add_option("--samples", rsamples, "random phase points")->excludes(ex);
    rank->callback([&] { action = [&] { return cmd_rank(g, rk, exhaustive, rsamples); }; });

    auto *t1 = app.add_subcommand("table1", "tensor-bound row against the reference values");
    t1->callback([&] { action = [&] { return cmd_table1(g); }; });

    auto *sim = app.add_subcommand("simulate", "exact outcome probability");
    std::string sfile, method = "wwm";
    sim->add_option("circuit", sfile)->required();
    sim->add_option("--method", method)->check(CLI::IsMember({"wwm", "dense"}));
    sim->callback([&] { action = [&] { return cmd_simulate(g, sfile, method); }; });

    auto *negc = app.add_subcommand("negativity", "Monte Carlo estimate from the input quasi-probabilities");
    std::string nfile;
    size_t nsamples = 0;
    negc->add_option("circuit", nfile)->required();
    negc->add_option("--samples", nsamples, "0 picks the prescribed count");
    negc->callback([&] { action = [&] { return cmd_negativity(g, nfile, nsamples); }; });

    auto *sr = app.add_subcommand("stabrank", "annealed search for a stabilizer decomposition of |T>^t");
    size_t st = 1, chi = 3, restarts = 20;
    AnnealSchedule sched;
    sr->add_option("--t", st)->required();
    sr->add_option("--chi", chi)->required()->check(CLI::PositiveNumber);
    sr->add_option("--steps", sched.steps);
    sr->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
    sr->add_option("--beta-start", sched.beta_start);
    sr->add_option("--beta-end", sched.beta_end);
    sr->add_option("--trace-every", sched.trace_every);
    sr->callback([&] { action = [&] { return cmd_stabrank(g, st, chi, sched, restarts); }; });

    auto *cur = app.add_subcommand("curves", "log3 term counts per method versus t");
    size_t tmax = 36;
    cur->add_option("--tmax", tmax)->required()->check(CLI::PositiveNumber);
    cur->callback([&] { action = [&] { return cmd_curves(g, tmax); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        std::cerr << '\n' << app.help();
        return 2;
    }
    try {
        return action();
    } catch (const CLI::Error &e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
