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

#ifndef WWM_RANK_COUNTER_HPP
#define WWM_RANK_COUNTER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "wwm/gauss_sum.hpp"
#include "wwm/magic_poly.hpp"

namespace wwm {

/// Pair-merge rule: within a group of slices sharing all other cubic values,
/// two values of `pair_var` whose families (indexed by `family_vars`) have
/// equal exact totals are evaluated once and doubled.
struct MergeRule {
    size_t pair_var = 0;              // 0-based y index
    std::vector<size_t> family_vars;  // 0-based y indices
    std::optional<size_t> anchor;     // require y_a == x_{q_a}
    bool conjugate = false;           // families pair as t_b = conj(t_a); keep one, weight 2 Re
};

/// Rules matching the coefficient-swap conditions of the canned sequences.
inline std::vector<MergeRule> default_merge_rules(size_t k) {
    if (k == 6) {
        return {MergeRule{2, {3}, 0, true}};
    }
    if (k == 12) {
        return {MergeRule{5, {4}, std::nullopt}};
    }
    return {};
}

struct ReducedEvaluation {
    size_t count = 0;        // Gauss sums that must be evaluated
    size_t assignments = 0;  // cubic assignments before reduction
    size_t zero_dropped = 0;
    size_t plane_waves = 0;  // surviving slices with a rank-deficient form
    size_t merges = 0;
    CyclotomicAmplitude full;     // sum of all slices, no prefactor
    CyclotomicAmplitude reduced;  // sum of kept slices times multipliers
};

/// Per-slice weight after merging.
enum SliceWeight : int { kOnce = 1, kTwice = 2, kTwiceReal = 3 };

class RankCounter {
   public:
    RankCounter(const ExponentialSumPoly &p, std::vector<MergeRule> rules)
        : ev_(p, classify_variables(p)), rules_(std::move(rules)) {
        c_ = ev_.classification().cubic.size();
        for (const auto &r : rules_) {
            for (size_t v : r.family_vars) {
                check_cubic(v);
            }
            check_cubic(r.pair_var);
            if (r.anchor) {
                check_cubic(*r.anchor);
            }
        }
    }

    explicit RankCounter(const ExponentialSumPoly &p) : RankCounter(p, default_merge_rules(p.k)) {
    }

    const VariableClassification &classification() const {
        return ev_.classification();
    }

    /// Cubic assignments, first cubic variable least significant.
    size_t assignment_count() const {
        return (size_t)ipow_u(3, c_);
    }

    ReducedEvaluation evaluate(const PhasePoint &x, bool with_values = true) {
        const int64_t d = ev_.poly().md.d;
        ev_.set_x(x);
        const size_t A = (size_t)ipow_u((uint64_t)d, c_);
        ReducedEvaluation out;
        out.assignments = A;
        std::vector<CyclotomicAmplitude> val(A);
        std::vector<char> alive(A, 0);
        std::vector<int> mult(A, 1);
        std::vector<int64_t> asg(c_);
        for (size_t t = 0; t < A; t++) {
            decode(t, asg, d);
            GaussSumSpec s = ev_.spec(asg);
            ReducedForm r = reduce_form(s);
            if (r.provably_zero()) {
                out.zero_dropped++;
                continue;
            }
            alive[t] = 1;
            if (r.rank < s.m) {
                out.plane_waves++;
            }
            if (with_values || !rules_.empty()) {
                val[t] = eval_closed(s);
            }
        }
        for (const auto &rule : rules_) {
            apply_rule(rule, x, d, alive, mult, val, out);
        }
        for (size_t t = 0; t < A; t++) {
            out.count += alive[t] ? 1 : 0;
        }
        if (with_values) {
            // Full sum recomputed from every slice, dropped ones included.
            out.full = CyclotomicAmplitude::integer(ev_.poly().md, 0);
            out.reduced = out.full;
            for (size_t t = 0; t < A; t++) {
                decode(t, asg, d);
                out.full += eval_closed(ev_.spec(asg));
                if (alive[t]) {
                    if (mult[t] == kTwiceReal) {
                        out.reduced += val[t] + val[t].conj();
                    } else {
                        out.reduced += val[t] * CyclotomicAmplitude::integer(ev_.poly().md, mult[t]);
                    }
                }
            }
        }
        return out;
    }

    /// Slice value for a full cubic assignment at the current x.
    CyclotomicAmplitude slice(const PhasePoint &x, const std::vector<int64_t> &asg) {
        ev_.set_x(x);
        return eval_closed(ev_.spec(asg));
    }

   private:
    void check_cubic(size_t v) const {
        const auto &cu = ev_.classification().cubic;
        if (std::find(cu.begin(), cu.end(), v) == cu.end()) {
            throw std::invalid_argument("merge rule names a non-cubic variable y" + std::to_string(v + 1));
        }
    }

    size_t pos(size_t yvar) const {
        const auto &cu = ev_.classification().cubic;
        return (size_t)(std::find(cu.begin(), cu.end(), yvar) - cu.begin());
    }

    void decode(size_t t, std::vector<int64_t> &asg, int64_t d) const {
        for (size_t i = 0; i < c_; i++) {
            asg[i] = (int64_t)(t % d);
            t /= d;
        }
    }

    void apply_rule(const MergeRule &rule, const PhasePoint &x, int64_t d, std::vector<char> &alive,
                    std::vector<int> &mult, const std::vector<CyclotomicAmplitude> &val, ReducedEvaluation &out) {
        const size_t A = alive.size();
        const size_t pp = pos(rule.pair_var);
        std::vector<size_t> fam;
        for (size_t v : rule.family_vars) {
            fam.push_back(pos(v));
        }
        std::vector<uint64_t> stride(c_);
        for (size_t i = 0; i < c_; i++) {
            stride[i] = ipow_u((uint64_t)d, i);
        }
        std::vector<int64_t> asg(c_);
        auto is_free = [&](size_t i) {
            return i == pp || std::find(fam.begin(), fam.end(), i) != fam.end();
        };
        const uint64_t fam_size = ipow_u((uint64_t)d, fam.size());
        for (size_t base = 0; base < A; base++) {
            decode(base, asg, d);
            bool is_base = true;
            for (size_t i = 0; i < c_; i++) {
                if (is_free(i) && asg[i] != 0) {
                    is_base = false;
                }
            }
            if (!is_base) {
                continue;
            }
            if (rule.anchor && mod(asg[pos(*rule.anchor)] - x.xq[*rule.anchor], d) != 0) {
                // Anchor is itself a cubic variable; the base has it fixed.
                continue;
            }
            auto family = [&](int64_t a) {
                std::vector<size_t> ids;
                for (uint64_t f = 0; f < fam_size; f++) {
                    size_t t = base + (size_t)(a * (int64_t)stride[pp]);
                    uint64_t r = f;
                    for (size_t fi : fam) {
                        t += (size_t)((r % d) * stride[fi]);
                        r /= d;
                    }
                    ids.push_back(t);
                }
                return ids;
            };
            std::vector<char> used(d, 0);
            for (int64_t a = 0; a < d; a++) {
                for (int64_t b = a + 1; b < d; b++) {
                    if (used[a] || used[b]) {
                        continue;
                    }
                    auto fa = family(a), fb = family(b);
                    size_t na = 0, nb = 0;
                    CyclotomicAmplitude ta = CyclotomicAmplitude::integer(ev_.poly().md, 0), tb = ta;
                    bool fresh = true;
                    for (size_t t : fa) {
                        fresh = fresh && mult[t] == 1;
                        if (alive[t]) {
                            na++;
                            ta += val[t];
                        }
                    }
                    for (size_t t : fb) {
                        fresh = fresh && mult[t] == 1;
                        if (alive[t]) {
                            nb++;
                            tb += val[t];
                        }
                    }
                    bool paired = rule.conjugate ? ta == tb.conj() : ta == tb;
                    if (!fresh || na == 0 || nb == 0 || !paired) {
                        continue;
                    }
                    auto &keep = na <= nb ? fa : fb;
                    auto &drop = na <= nb ? fb : fa;
                    for (size_t t : keep) {
                        mult[t] = rule.conjugate ? kTwiceReal : kTwice;
                    }
                    for (size_t t : drop) {
                        alive[t] = 0;
                    }
                    used[a] = used[b] = 1;
                    out.merges++;
                }
            }
        }
        (void)A;
    }

    SliceEvaluator ev_;
    std::vector<MergeRule> rules_;
    size_t c_ = 0;
};

/// Surviving Gauss-sum count at one phase point.
inline size_t count_reduced(const ExponentialSumPoly &p, const PhasePoint &x) {
    RankCounter rc(p);
    return rc.evaluate(x, false).count;
}

struct RankReport {
    size_t k = 0;
    std::string strategy;
    uint64_t seed = 0;
    size_t points = 0;
    size_t worst_case = 0;
    PhasePoint worst_x;
    std::map<size_t, size_t> histogram;            // count -> number of x
    std::map<std::string, size_t> reduction_log;  // mechanism -> number of x where it fired
    size_t unreduced = 0;
    std::vector<std::string> flags;

    nlohmann::json to_json() const {
        nlohmann::json h = nlohmann::json::object();
        for (auto [c, n] : histogram) {
            h[std::to_string(c)] = n;
        }
        return {{"k", k},
                {"strategy", strategy},
                {"seed", seed},
                {"points", points},
                {"worst_case", worst_case},
                {"worst_x", {{"xp", worst_x.xp}, {"xq", worst_x.xq}}},
                {"unreduced", unreduced},
                {"histogram", h},
                {"reduction_log", reduction_log},
                {"flags", flags}};
    }
};

struct RankStrategy {
    enum Kind { Exhaustive, Sample } kind = Exhaustive;
    size_t samples = 0;
    uint64_t seed = 0;

    static RankStrategy exhaustive() {
        return {};
    }
    static RankStrategy sample(size_t n, uint64_t seed) {
        return {Sample, n, seed};
    }
};

constexpr size_t kExhaustiveRankCap = 6;

/// Aggregates count_reduced over x. Points are split into contiguous chunks
/// per worker and merged in order, so the report does not depend on threads.
inline RankReport worst_case_rank(const ExponentialSumPoly &p, const RankStrategy &strategy,
                                  std::vector<MergeRule> rules, unsigned threads = 0) {
    const int64_t d = p.md.d;
    std::vector<PhasePoint> pts;
    RankReport rep;
    rep.k = p.k;
    if (strategy.kind == RankStrategy::Exhaustive) {
        if (p.k > kExhaustiveRankCap) {
            throw std::length_error("exhaustive rank counting is capped at k = 6");
        }
        rep.strategy = "exhaustive";
        uint64_t total = ipow_u((uint64_t)d, 2 * p.k);
        pts.reserve(total);
        for (uint64_t i = 0; i < total; i++) {
            pts.push_back(PhasePoint::from_index(i, p.k, d));
        }
    } else {
        rep.strategy = "sample";
        rep.seed = strategy.seed;
        std::mt19937_64 rng(strategy.seed);
        std::uniform_int_distribution<int64_t> dig(0, d - 1);
        for (size_t s = 0; s < strategy.samples; s++) {
            PhasePoint x;
            x.xp.resize(p.k);
            x.xq.resize(p.k);
            for (auto &v : x.xp) {
                v = dig(rng);
            }
            for (auto &v : x.xq) {
                v = dig(rng);
            }
            pts.push_back(x);
        }
    }
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = (unsigned)std::min<size_t>(threads, std::max<size_t>(1, pts.size()));
    struct Partial {
        std::vector<ReducedEvaluation> ev;
    };
    std::vector<Partial> parts(threads);
    auto work = [&](unsigned w) {
        RankCounter rc(p, rules);
        size_t lo = pts.size() * w / threads, hi = pts.size() * (w + 1) / threads;
        for (size_t i = lo; i < hi; i++) {
            parts[w].ev.push_back(rc.evaluate(pts[i], false));
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; w++) {
            pool.emplace_back(work, w);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    size_t i = 0;
    for (const auto &part : parts) {
        for (const auto &e : part.ev) {
            rep.histogram[e.count]++;
            rep.unreduced = e.assignments;
            if (e.count > rep.worst_case || i == 0) {
                rep.worst_case = e.count;
                rep.worst_x = pts[i];
            }
            if (e.zero_dropped) {
                rep.reduction_log["zero-sum"]++;
            }
            if (e.plane_waves) {
                rep.reduction_log["plane-wave"]++;
            }
            if (e.merges) {
                rep.reduction_log["pair-merge"]++;
            }
            i++;
        }
    }
    rep.points = pts.size();
    if (rep.strategy == "sample") {
        rep.flags.push_back("sampled evidence only; exhaustive enumeration not performed");
    }
    return rep;
}

inline RankReport worst_case_rank(const ExponentialSumPoly &p, const RankStrategy &strategy) {
    return worst_case_rank(p, strategy, default_merge_rules(p.k));
}

struct TensorBound {
    long double value = 1;
    double log3 = 0;
    std::vector<size_t> partition;  // parts in descending order
};

/// Minimize the product of base values over additive partitions of t.
inline TensorBound tensor_bound(size_t t, const std::map<size_t, uint64_t> &base) {
    if (base.empty() || t < 1) {
        throw std::invalid_argument("tensor_bound needs a nonempty base and t >= 1");
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> best(t + 1, inf);
    std::vector<size_t> choice(t + 1, 0);
    best[0] = 0;
    for (size_t s = 1; s <= t; s++) {
        // Larger parts are tried first so ties keep the coarser partition.
        for (auto it = base.rbegin(); it != base.rend(); ++it) {
            size_t part = it->first;
            if (part == 0 || part > s || best[s - part] == inf) {
                continue;
            }
            double c = best[s - part] + std::log((double)it->second) / std::log(3.0);
            if (c < best[s] - 1e-12) {
                best[s] = c;
                choice[s] = part;
            }
        }
    }
    if (best[t] == inf) {
        throw std::invalid_argument("t = " + std::to_string(t) + " cannot be covered by the base parts");
    }
    TensorBound tb;
    for (size_t s = t; s > 0; s -= choice[s]) {
        tb.partition.push_back(choice[s]);
        tb.value *= (long double)base.at(choice[s]);
    }
    std::sort(tb.partition.rbegin(), tb.partition.rend());
    tb.log3 = best[t];
    return tb;
}

inline std::map<size_t, uint64_t> table1_base() {
    return {{1, 3}, {2, 3}, {3, 8}, {6, 24}, {12, 486}};
}

/// Reference qutrit row, k = 1..14; `upper` marks entries printed as bounds.
struct PrintedXi {
    size_t k;
    uint64_t value;
    bool upper;
};

inline std::vector<PrintedXi> table1_printed() {
    return {{1, 3, false},   {2, 3, false},    {3, 8, false},     {4, 9, false},    {5, 24, false},
            {6, 24, false},  {7, 72, true},    {8, 72, false},    {9, 216, true},   {10, 216, false},
            {11, 486, true}, {12, 486, false}, {13, 1458, true},  {14, 1458, false}};
}

struct Table1Row {
    size_t k;
    uint64_t dp;          // multiplicative tensor bound
    std::vector<size_t> partition;
    uint64_t projection;  // min over t >= k of the DP (drop extra qutrits)
    uint64_t printed;
    bool printed_upper;
    double exponent;  // log3(dp) / k
    std::string flag;
};

inline std::vector<Table1Row> table1_rows(const std::map<size_t, uint64_t> &base = table1_base()) {
    std::vector<Table1Row> rows;
    auto printed = table1_printed();
    const size_t kmax = printed.back().k;
    std::vector<uint64_t> dp(kmax + 2);
    std::vector<std::vector<size_t>> parts(kmax + 2);
    for (size_t k = 1; k <= kmax + 1; k++) {
        auto tb = tensor_bound(k, base);
        dp[k] = (uint64_t)std::llround((double)tb.value);
        parts[k] = tb.partition;
    }
    for (const auto &pr : printed) {
        Table1Row r;
        r.k = pr.k;
        r.dp = dp[pr.k];
        r.partition = parts[pr.k];
        r.projection = *std::min_element(dp.begin() + (long)pr.k, dp.end());
        r.printed = pr.value;
        r.printed_upper = pr.upper;
        r.exponent = std::log((double)r.dp) / std::log(3.0) / (double)pr.k;
        if (r.dp != r.printed) {
            if (r.projection == r.printed) {
                r.flag = "printed value matches the projection bound, not the multiplicative DP";
            } else {
                r.flag = "DISCREPANCY: DP " + std::to_string(r.dp) + " vs printed " + std::to_string(r.printed);
            }
        }
        rows.push_back(r);
    }
    return rows;
}

inline void write_table1_csv(std::ostream &os, const std::vector<Table1Row> &rows) {
    os << "k,dp_bound,partition,projection_bound,printed,printed_is_upper,dp_exponent,flag\n";
    for (const auto &r : rows) {
        std::string part;
        for (size_t i = 0; i < r.partition.size(); i++) {
            part += (i ? "+" : "") + std::to_string(r.partition[i]);
        }
        char exp[32];
        std::snprintf(exp, sizeof exp, "%.3f", r.exponent);
        os << r.k << ',' << r.dp << ',' << part << ',' << r.projection << ',' << r.printed << ','
           << (r.printed_upper ? "true" : "false") << ',' << exp << ",\"" << r.flag << "\"\n";
    }
}

}  // namespace wwm

#endif
