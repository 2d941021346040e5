#include "h4free/acceptance.hpp"

#include "h4free/amalgam.hpp"
#include "h4free/core.hpp"
#include "h4free/indep.hpp"
#include "h4free/solver.hpp"
#include "h4free/witness.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace h4free {

namespace {

using Rng = std::mt19937_64;

// R(a,b,c) ∧ R(a,c,d) ∧ R(a,d,b) ∧ R(b,d,c) under some labeling
bool brute_h4(const Hypertournament& h, std::array<PointId, 4> s) {
    std::sort(s.begin(), s.end());
    do {
        const auto [a, b, c, d] = s;
        if (h.eval_r(a, b, c) && h.eval_r(a, c, d) && h.eval_r(a, d, b) && h.eval_r(b, d, c)) return true;
    } while (std::next_permutation(s.begin(), s.end()));
    return false;
}

std::size_t brute_h4_count(const Hypertournament& h) {
    std::size_t bad = 0;
    const auto n = static_cast<PointId>(h.size());
    for (PointId a = 0; a < n; ++a)
        for (PointId b = a + 1; b < n; ++b)
            for (PointId c = b + 1; c < n; ++c)
                for (PointId d = c + 1; d < n; ++d) bad += brute_h4(h, {a, b, c, d});
    return bad;
}

Hypertournament random_h4_free(std::size_t n, Rng& rng) {
    SolveOptions opts;
    opts.value_seed = rng();
    return solve(PartialHypertournament(n), ConstraintSet{}, opts).solution->model;
}

std::vector<PointId> iota_ids(std::size_t n) {
    std::vector<PointId> v(n);
    std::iota(v.begin(), v.end(), PointId{0});
    return v;
}

std::vector<PointId> sorted(std::vector<PointId> v) {
    std::sort(v.begin(), v.end());
    return v;
}

std::string fmt(const char* pattern, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, pattern, args...);
    return buf;
}

struct Outcome {
    bool pass;
    std::string detail;
};

Outcome a1_axioms(Rng& rng) {
    std::size_t triples = 0, violations = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 8)(rng);
        Hypertournament h(n);
        for (std::size_t t = 0; t < triple_count(n); ++t) h.set_orient_at(t, orientation_of(rng() & 1u));
        for (PointId a = 0; a < n; ++a)
            for (PointId b = 0; b < n; ++b)
                for (PointId c = 0; c < n; ++c) {
                    if (a == b || b == c || a == c) continue;
                    ++triples;
                    const bool r = h.eval_r(a, b, c);
                    if (r != h.eval_r(b, c, a) || r != h.eval_r(c, a, b)) ++violations;
                    if (r == h.eval_r(b, a, c) || r == h.eval_r(a, c, b)) ++violations;
                }
    }
    return {violations == 0, fmt("200 structures, %zu ordered triples, %zu violations", triples, violations)};
}

Outcome a2_parity(Rng&) {
    std::size_t classes[3] = {0, 0, 0}, problems = 0;
    for (std::uint64_t mask = 0; mask < 16; ++mask) {
        const Hypertournament h = Hypertournament::from_mask(4, mask);
        std::vector<PointId> seq = iota_ids(4);
        std::optional<std::size_t> parity;
        bool h4_every_order = true, c4_some_order = false;
        do {
            const auto order = LinearOrder::from_sequence(seq);
            const Hypergraph3 g = encode(h, order);
            const std::size_t edges = g.edges.size();
            if (!parity) parity = edges % 2;
            else if (*parity != edges % 2) ++problems;
            bool two_gap = false, two_adjacent = false;
            if (edges == 2) {
                const auto e0 = *g.edges.begin(), e1 = *std::next(g.edges.begin());
                std::vector<PointId> common;
                std::set_intersection(e0.begin(), e0.end(), e1.begin(), e1.end(), std::back_inserter(common));
                if (common.size() == 2) {
                    const std::size_t r0 = order.rank(common[0]), r1 = order.rank(common[1]);
                    const std::size_t gap = r0 > r1 ? r0 - r1 : r1 - r0;
                    two_gap = gap == 2;
                    two_adjacent = gap == 1;
                }
            }
            h4_every_order = h4_every_order && two_gap;
            c4_some_order = c4_some_order || edges == 0 || edges == 4 || two_adjacent;
        } while (std::next_permutation(seq.begin(), seq.end()));

        const bool h4 = brute_h4(h, {0, 1, 2, 3});
        const bool o4 = *parity == 1;
        if (h4 != h4_every_order) ++problems;
        if (h4 + o4 + c4_some_order != 1) ++problems;
        const FourClass got = classify_4set(h, std::array<PointId, 4>{0, 1, 2, 3});
        const FourClass want = h4 ? FourClass::H4 : o4 ? FourClass::O4 : FourClass::C4;
        if (got != want) ++problems;
        ++classes[static_cast<int>(want)];
    }
    const bool pass = problems == 0 && classes[0] == 6 && classes[1] == 8 && classes[2] == 2;
    return {pass, fmt("16 patterns x 24 orders: C4 %zu, O4 %zu, H4 %zu, %zu disagreements", classes[0], classes[1],
                      classes[2], problems)};
}

Outcome a3_amalgamation(Rng& rng) {
    std::size_t failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 5)(rng);
        const Hypertournament a = random_h4_free(n, rng);
        const auto dom = iota_ids(n);
        const auto types = enumerate_one_point_types(a, dom, ClassSet::h4_free());
        std::uniform_int_distribution<std::size_t> pick(0, types.size() - 1);
        const OnePointType t1 = types[pick(rng)], t2 = types[pick(rng)];
        const Hypertournament c = amalgamate_one_point(a, t1, t2);
        const auto b1 = static_cast<PointId>(n), b2 = static_cast<PointId>(n + 1);
        bool ok = c.size() == n + 2 && brute_h4_count(c) == 0 && c.induced(dom) == a &&
                  OnePointType::read_off(c, b1, dom) == t1 && OnePointType::read_off(c, b2, dom) == t2;
        for (PointId p = 0; p < n && ok; ++p) ok = c.eval_r(b1, b2, p);
        failures += !ok;
    }
    return {failures == 0, fmt("500 one-point problems, %zu failures", failures)};
}

Outcome a4_extension(std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    const GenericResult g = build_generic(12, ClassSet::h4_free(), 3, seed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // recount independently at the end
    const ExtensionReport again = check_extension_property(g.structure, ClassSet::h4_free(), 3);
    const bool pass = again.holds() && brute_h4_count(g.structure) == 0 && secs < 60;
    return {pass, g.report + fmt("; recount %zu/%zu unrealized; %s", again.unrealized, again.types,
                                 secs < 60 ? "built within 60s" : "build exceeded 60s")};
}

Outcome a5_sop3(Rng&) {
    const WitnessReport cycle = sop3_cycle_check();
    std::size_t models = 0;
    for (std::uint64_t mask = 0; mask < 1024; ++mask) {
        const Hypertournament h = Hypertournament::from_mask(5, mask);
        if (brute_h4_count(h) != 0) continue;
        auto phi = [&](PointId x, PointId y) { return h.eval_r(x, y, 0) && h.eval_r(x, 1, y); };
        models += phi(2, 3) && phi(3, 4) && phi(4, 2);
    }
    const auto [w, chain] = sop3_build(6);
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) pairs += w.h.eval_r(w.c[i], w.c[j], w.a) && w.h.eval_r(w.c[i], w.b, w.c[j]);
    const bool pass = cycle.pass && models == 0 && chain.pass && pairs == 15 && brute_h4_count(w.h) == 0;
    return {pass, fmt("3-cycle %s, brute force %zu/1024; chain of 6: %zu/15 pairs", cycle.pass ? "UNSAT" : "not refuted",
                      models, pairs)};
}

Outcome a6_tp2(Rng&) {
    const auto [w, report] = tp2_build(3, 4);
    std::size_t pairs_unsat = 0, paths_sat = 0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            for (std::size_t k = j + 1; k < 4; ++k) {
                ConstraintSet cs;
                cs.declare_var("x");
                tp2_add_phi(cs, "x", w.c(i, j), w.d(i, j));
                tp2_add_phi(cs, "x", w.c(i, k), w.d(i, k));
                pairs_unsat += !solve(w.h, cs).sat();
            }
    for (std::size_t f = 0; f < 64; ++f) {
        ConstraintSet cs;
        cs.declare_var("x");
        for (std::size_t i = 0; i < 3; ++i) {
            const std::size_t col = (f >> (2 * i)) & 3u;
            tp2_add_phi(cs, "x", w.c(i, col), w.d(i, col));
        }
        paths_sat += solve(w.h, cs).sat();
    }
    const std::size_t bad = brute_h4_count(w.h);
    const bool pass = report.pass && pairs_unsat == 18 && paths_sat == 64 && bad == 0;
    return {pass, fmt("%zu/18 row pairs UNSAT, %zu/64 paths SAT, %zu H4 in %zu points", pairs_unsat, paths_sat, bad,
                      w.h.size())};
}

Outcome a7_nsop4(std::uint64_t seed) {
    std::size_t verified = 0, total = 0, unsat = 0, no_input = 0;
    auto run = [&](std::size_t m, std::size_t n, const std::vector<bool>& eps) {
        ++total;
        const auto [in, made] = nsop4_make_input(m, n, eps, seed);
        if (!in) {
            ++no_input;
            return;
        }
        const WitnessReport r = nsop4_build_cycle(*in);
        if (r.counterexample && (r.counterexample->find("Sigma") == 0 || r.counterexample->find("Gamma") == 0)) ++unsat;
        verified += r.pass;
    };
    run(1, 1, {true});
    run(1, 1, {false});
    for (std::uint32_t pat = 0; pat < 16; ++pat) run(1, 2, {bool(pat & 1u), bool(pat & 2u), bool(pat & 4u), bool(pat & 8u)});
    return {verified == total && unsat == 0,
            fmt("%zu/%zu cycles verified (2 at n=1, 16 at n=2), %zu Sigma/Gamma UNSAT, %zu inputs missing", verified,
                total, unsat, no_input)};
}

Outcome a8_ip2(Rng&) {
    const auto [w, report] = ip2_build(2);
    const std::size_t bad = brute_h4_count(w.h);
    std::size_t subsets_ok = 0;
    for (std::size_t mask = 0; mask < 16; ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                ok = ok && w.h.eval_r(w.x0[i], w.x1[j], w.y[mask]) == bool((mask >> (i * 2 + j)) & 1u);
        subsets_ok += ok;
    }
    const std::size_t n = w.h.size();
    const std::size_t quads = n * (n - 1) * (n - 2) * (n - 3) / 24;
    return {report.pass && bad == 0 && subsets_ok == 16 && n == 20,
            fmt("%zu points, %zu 4-subsets, %zu H4; %zu/16 subsets read correctly", n, quads, bad, subsets_ok)};
}

Outcome a9_asymmetry(Rng&) {
    const auto [h, witness] = asymmetry_witness();
    std::vector<std::vector<PointId>> sets(32);
    for (std::uint32_t m = 0; m < 32; ++m)
        for (PointId p = 0; p < 5; ++p)
            if (m >> p & 1u) sets[m].push_back(p);
    std::size_t structures = 0, checked = 0, symmetric = 0;
    for (std::size_t n = 3; n <= 5; ++n) {
        const std::uint32_t all = (1u << n) - 1;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << triple_count(n)); ++mask) {
            ++structures;
            const Hypertournament g = Hypertournament::from_mask(n, mask);
            for (std::uint32_t c = 1; c <= all; ++c)
                for (std::uint32_t a = 0; a <= all; ++a) {
                    if ((a & ~c) == 0) continue;
                    for (std::uint32_t b = 0; b <= all; ++b) {
                        if ((b & ~c) == 0 || !ind_ht(g, sets[a], sets[b], sets[c])) continue;
                        ++checked;
                        symmetric += ind_ht(g, sets[b], sets[a], sets[c]);
                    }
                }
        }
    }
    return {witness.pass && symmetric == 0 && checked > 0,
            fmt("witness %s; %zu structures on 3..5 points, %zu independent triples (A,B,C), %zu symmetric",
                witness.pass ? "ok" : "failed", structures, checked, symmetric)};
}

Outcome a10_kim(std::uint64_t seed) {
    const WitnessReport r = conant_triviality_report({8, 4, 2, 2, 4}, 50, seed);
    return {r.pass, r.details.back() + fmt(", %zu solver calls", r.solver_calls) +
                        (r.counterexample ? "; " + *r.counterexample : std::string())};
}

Outcome a11_empty_base(Rng&) {
    const WitnessReport r = empty_base_obstruction();
    ConstraintSet cs;
    cs.declare_var("x");
    cs.add(Term::var("x"), Term::point(0), Term::point(1), true);
    cs.add(Term::var("x"), Term::point(1), Term::point(0), true);
    const bool unsat = !solve(PartialHypertournament(2), cs).sat();
    return {r.pass && unsat, std::string("R(x,a,b) with R(x,b,a): ") + (unsat ? "UNSAT" : "SAT")};
}

Outcome a12_claim1(Rng& rng) {
    std::size_t case2 = 0, case1 = 0, ok2 = 0, ok1 = 0;
    auto verify = [&](const Hypertournament& h, const std::vector<PointId>& c, PointId a, PointId b, PointId bp) {
        const Claim1Result res = claim1_witness(h, c, a, b, bp);
        if (!res.report.pass) return false;
        std::vector<PointId> cb = c, ca = c;
        cb.push_back(b);
        ca.push_back(res.a_prime);
        cb = sorted(cb);
        ca = sorted(ca);
        return brute_h4_count(res.h) == 0 && qf_type(res.h, {res.a_prime}, cb) == qf_type(res.h, {a}, cb) &&
               qf_type(res.h, {bp}, ca) == qf_type(res.h, {b}, ca);
    };
    while (case2 < 100 || case1 < 20) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 8)(rng);
        const std::size_t csize = std::uniform_int_distribution<std::size_t>(0, std::min<std::size_t>(4, n - 3))(rng);
        const Hypertournament h = random_h4_free(n, rng);
        std::vector<PointId> perm = iota_ids(n);
        std::shuffle(perm.begin(), perm.end(), rng);
        const std::vector<PointId> c = sorted({perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(csize)});
        const PointId a = perm[csize], b = perm[csize + 1], bp = perm[csize + 2];
        if (case2 < 100 && qf_type(h, {b}, c) == qf_type(h, {bp}, c)) {
            ++case2;
            ok2 += verify(h, c, a, b, bp);
        }
        if (case1 < 20 && qf_type(h, {b}, c) == qf_type(h, {a}, c)) {
            ++case1;
            ok1 += verify(h, c, a, b, a);
        }
    }
    const WitnessReport pair = claim1_pair_obstruction();
    return {ok2 == 100 && ok1 == 20 && pair.pass,
            fmt("case 2: %zu/100, case 1: %zu/20; pair analogue on the TP2 row %s", ok2, ok1,
                pair.pass ? "UNSAT" : "not refuted")};
}

Outcome a13_oracle(Rng& rng) {
    std::size_t agree = 0, sat = 0, trials = 0, max_free = 0;
    while (trials < 300) {
        const std::size_t base_n = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
        const std::size_t lo = base_n < 3 ? 3 - base_n : 0;
        const std::size_t vars = std::uniform_int_distribution<std::size_t>(lo, std::max<std::size_t>(lo, 2))(rng);
        const std::size_t n = base_n + vars;
        PartialHypertournament base(base_n);
        for (std::size_t t = 0; t < triple_count(base_n); ++t)
            if (rng() % 10 < 7) base.assign(triple_from_index(t), orientation_of(rng() & 1u));
        const std::size_t open = triple_count(n) - base.assigned_count();
        if (open > 25) continue;
        ConstraintSet cs;
        for (std::size_t v = 0; v < vars; ++v) cs.declare_var("v" + std::to_string(v));
        auto term = [&](PointId id) { return id < base_n ? Term::point(id) : Term::var("v" + std::to_string(id - base_n)); };
        const std::size_t lits = rng() % 9;
        for (std::size_t l = 0; l < lits; ++l) {
            std::vector<PointId> ids = iota_ids(n);
            std::shuffle(ids.begin(), ids.end(), rng);
            cs.add(term(ids[0]), term(ids[1]), term(ids[2]), rng() & 1u);
        }
        ++trials;
        max_free = std::max(max_free, open);
        const bool s = solve(base, cs).sat();
        agree += s == (count_completions(base, cs, 1).count > 0);
        sat += s;
    }
    return {agree == 300, fmt("%zu/300 agree (%zu SAT, %zu UNSAT, up to %zu free triples)", agree, sat, 300 - sat, max_free)};
}

} // namespace

std::string CriterionResult::line() const {
    return id + (pass ? " PASS " : " FAIL ") + title + ": " + detail;
}

std::vector<std::string> acceptance_ids() {
    return {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A9", "A10", "A11", "A12", "A13"};
}

std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only, std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    struct Entry {
        const char* id;
        const char* title;
        std::function<Outcome(Rng&)> run;
    };
    const std::vector<Entry> entries{
        {"A1", "axioms", a1_axioms},
        {"A2", "parity and classification", a2_parity},
        {"A3", "one-point strong amalgamation", a3_amalgamation},
        {"A4", "depth-3 extension property at 12 points", [seed](Rng&) { return a4_extension(seed); }},
        {"A5", "SOP3", a5_sop3},
        {"A6", "TP2", a6_tp2},
        {"A7", "NSOP4 4-cycles", [seed](Rng&) { return a7_nsop4(seed); }},
        {"A8", "IP2", a8_ip2},
        {"A9", "ht asymmetry", a9_asymmetry},
        {"A10", "Kim-dividing triviality", [seed](Rng&) { return a10_kim(seed); }},
        {"A11", "empty-base obstruction", a11_empty_base},
        {"A12", "one-point back-and-forth", a12_claim1},
        {"A13", "solver vs brute force", a13_oracle},
    };
    for (const auto& id : only)
        if (std::none_of(entries.begin(), entries.end(), [&](const Entry& e) { return id == e.id; }))
            throw std::invalid_argument("unknown criterion " + id);

    std::vector<CriterionResult> out;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const Entry& e = entries[i];
        if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end()) continue;
        Rng rng(seed + 7919 * (i + 1));
        CriterionResult r;
        r.id = e.id;
        r.title = e.title;
        const auto start = std::chrono::steady_clock::now();
        try {
            const Outcome o = e.run(rng);
            r.pass = o.pass;
            r.detail = o.detail;
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("error: ") + ex.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace h4free
