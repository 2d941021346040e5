#include "h4free/indep.hpp"

#include "h4free/solver.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace h4free {

namespace {

bool contains(const std::vector<PointId>& v, PointId p) { return std::find(v.begin(), v.end(), p) != v.end(); }

std::vector<PointId> sorted_unique(std::vector<PointId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::string var_name(std::size_t i) { return "y" + std::to_string(i); }

// First tuple of distinct base points (lexicographic) with the internal type of b;
// otherwise the first |b| base points, cycled.
std::vector<PointId> default_anchor(const Hypertournament& h, const std::vector<PointId>& m,
                                    const std::vector<PointId>& b) {
    const std::size_t width = b.size();
    if (width <= m.size()) {
        const QfType want = qf_type(h, b, {});
        std::vector<PointId> cur;
        std::vector<bool> used(m.size(), false);
        std::optional<std::vector<PointId>> found;
        std::function<void()> rec = [&] {
            if (found) return;
            if (cur.size() == width) {
                if (qf_type(h, cur, {}) == want) found = cur;
                return;
            }
            for (std::size_t i = 0; i < m.size() && !found; ++i) {
                if (used[i]) continue;
                used[i] = true;
                cur.push_back(m[i]);
                rec();
                cur.pop_back();
                used[i] = false;
            }
        };
        rec();
        if (found) return *found;
    }
    std::vector<PointId> anchor;
    for (std::size_t i = 0; i < width; ++i) anchor.push_back(m[i % m.size()]);
    return anchor;
}

} // namespace

bool ind_ht(const Hypertournament& h, const std::vector<PointId>& a, const std::vector<PointId>& b,
            const std::vector<PointId>& c) {
    for (PointId p : a)
        if (contains(b, p) && !contains(c, p)) return false;
    for (PointId x : a) {
        if (contains(c, x)) continue;
        for (PointId z : b) {
            if (contains(c, z)) continue;
            for (PointId y : c)
                if (!h.eval_r(x, y, z)) return false;
        }
    }
    return true;
}

std::pair<Hypertournament, WitnessReport> asymmetry_witness() {
    Hypertournament h(3);
    h.set_r(0, 1, 2, true);
    WitnessReport r;
    r.claim = "ht.asymmetry";
    r.pass = true;
    auto expect = [&](bool got, bool want, const std::string& what) {
        r.details.push_back(what + (got ? " holds" : " fails"));
        if (got != want) {
            r.pass = false;
            if (!r.counterexample) r.counterexample = what;
            r.artifact = h;
        }
    };
    expect(ind_ht(h, {0}, {2}, {1}), true, "{0} ind_{1} {2}");
    expect(ind_ht(h, {2}, {0}, {1}), false, "{2} ind_{1} {0}");
    expect(ind_ht(h, {0}, {2}, {}) && ind_ht(h, {2}, {0}, {}), true, "both directions over the empty set");
    for (bool o : {true, false}) {
        Hypertournament g(3);
        g.set_r(0, 1, 2, o);
        const int holds = ind_ht(g, {0}, {2}, {1}) + ind_ht(g, {2}, {0}, {1});
        expect(holds == 1, true, std::string("exactly one direction with R(0,1,2) ") + (o ? "true" : "false"));
    }
    return {h, r};
}

MorleyResult build_ht_morley(const MorleyConfig& cfg) {
    const Hypertournament& h = cfg.h;
    const std::size_t width = cfg.b.size();
    if (cfg.m.empty()) throw std::domain_error("morley: empty base");
    if (width == 0) throw std::domain_error("morley: empty tuple");
    if (cfg.length == 0) throw std::domain_error("morley: length must be positive");
    const std::vector<PointId> m = sorted_unique(cfg.m);
    if (m.back() >= h.size()) throw std::domain_error("morley: base point out of range");
    for (PointId p : cfg.b) {
        if (p >= h.size()) throw std::domain_error("morley: tuple point out of range");
        if (contains(m, p)) throw std::domain_error("morley: tuple meets the base");
    }
    if (sorted_unique(cfg.b).size() != width) throw std::domain_error("morley: repeated tuple point");
    std::vector<PointId> anchor = cfg.anchor;
    if (anchor.empty()) anchor = default_anchor(h, m, cfg.b);
    if (anchor.size() != width) throw std::domain_error("morley: anchor length differs from tuple length");
    for (PointId p : anchor)
        if (!contains(m, p)) throw std::domain_error("morley: anchor outside the base");

    MorleyResult out;
    out.h = h;
    out.seq.push_back(cfg.b);
    out.report.claim = "ht.morley";
    const QfType p = qf_type(h, cfg.b, m);

    for (std::size_t copy = 1; copy < cfg.length; ++copy) {
        const Hypertournament& g = out.h;
        std::vector<PointId> outside;
        for (PointId q = 0; q < g.size(); ++q)
            if (!contains(m, q)) outside.push_back(q);

        ConstraintSet cs;
        for (std::size_t k = 0; k < width; ++k) cs.declare_var(var_name(k));
        add_type_literals(cs, p, [](const Slot& s) {
            return s.kind == Slot::Kind::Base ? Term::point(s.id) : Term::var(var_name(s.id));
        });
        for (std::size_t k = 0; k < width; ++k) {
            const Term y = Term::var(var_name(k));
            for (PointId q : m)
                for (PointId a : outside) cs.add(y, Term::point(q), Term::point(a), true); // (i)
            for (std::size_t u = 0; u < outside.size(); ++u)
                for (std::size_t v = u + 1; v < outside.size(); ++v)
                    cs.add(y, Term::point(outside[u]), Term::point(outside[v]), g.r(anchor[k], outside[u], outside[v]));
            for (std::size_t l = k + 1; l < width; ++l)
                if (anchor[k] != anchor[l])
                    for (PointId a : outside) cs.add(y, Term::var(var_name(l)), Term::point(a), g.r(anchor[k], anchor[l], a));
        }
        const auto res = solve(g, cs);
        ++out.report.solver_calls;
        if (!res.sat()) {
            out.report.pass = false;
            out.report.counterexample = "copy " + std::to_string(copy) + ": " + res.conflict.value_or("UNSAT");
            out.report.details.push_back(*out.report.counterexample);
            out.report.artifact = out.h;
            return out;
        }
        std::vector<PointId> ids(width);
        std::iota(ids.begin(), ids.end(), static_cast<PointId>(g.size()));
        out.h = res.solution->model;
        out.seq.push_back(std::move(ids));
    }

    out.report.pass = true;
    if (const auto bad = find_h4(out.h)) {
        out.report.pass = false;
        out.report.counterexample = "H4 at {" + std::to_string((*bad)[0]) + "," + std::to_string((*bad)[1]) + "," +
                                    std::to_string((*bad)[2]) + "," + std::to_string((*bad)[3]) + "}";
    }
    if (!is_ht_morley(out.h, m, out.seq)) {
        out.report.pass = false;
        if (!out.report.counterexample) out.report.counterexample = "sequence is not ht-Morley";
    }
    out.report.details.push_back(std::to_string(out.seq.size()) + " tuples of length " + std::to_string(width) +
                                 " over " + std::to_string(m.size()) + " base points");
    if (!out.report.pass) out.report.artifact = out.h;
    return out;
}

bool is_ht_morley(const Hypertournament& h, const std::vector<PointId>& m,
                  const std::vector<std::vector<PointId>>& seq) {
    const std::vector<PointId> base = sorted_unique(m);
    for (const auto& t : seq)
        for (PointId p : t)
            if (p >= h.size() || contains(base, p)) return false;
    if (seq.empty()) return true;
    const QfType first = qf_type(h, seq[0], base);
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (seq[i].size() != seq[0].size() || qf_type(h, seq[i], base) != first) return false;
    for (std::size_t i = 0; i < seq.size(); ++i)
        for (std::size_t j = i + 1; j < seq.size(); ++j)
            for (PointId q : base)
                for (PointId x : seq[i])
                    for (PointId y : seq[j])
                        if (x == y || !h.eval_r(q, x, y)) return false;
    return true;
}

WitnessReport kim_survival(const Hypertournament& h, const std::vector<PointId>& m, const std::vector<PointId>& b,
                           const QfType& p, std::size_t k) {
    std::vector<PointId> base = m;
    base.insert(base.end(), b.begin(), b.end());
    base = sorted_unique(base);
    if (p.base != base) throw std::domain_error("kim: p is not a type over m and b");

    WitnessReport r;
    r.claim = "kim.survival";
    MorleyConfig cfg{h, m, b, k, {}};
    const MorleyResult seq = build_ht_morley(cfg);
    r.solver_calls += seq.report.solver_calls;
    if (!seq.report.pass) {
        r.pass = false;
        r.counterexample = "no Morley sequence: " + seq.report.counterexample.value_or("");
        r.artifact = seq.h;
        return r;
    }

    // substructure on m and the copies
    std::vector<PointId> keep = sorted_unique(m);
    for (const auto& t : seq.seq) keep.insert(keep.end(), t.begin(), t.end());
    std::map<PointId, PointId> local;
    for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = static_cast<PointId>(i);
    const Hypertournament sub = seq.h.induced(keep);
    auto coord_of = [&](PointId q) -> std::optional<std::size_t> {
        const auto it = std::find(b.begin(), b.end(), q);
        if (it == b.end()) return std::nullopt;
        return static_cast<std::size_t>(it - b.begin());
    };

    // coordinates pinned to a point of b must equal its copy in every instance
    std::map<std::size_t, PointId> pinned;
    for (std::size_t t = 0; t < p.arity; ++t) {
        if (!p.equals[t]) continue;
        const auto c = coord_of(*p.equals[t]);
        if (!c) continue;
        for (std::size_t i = 0; i < seq.seq.size(); ++i) {
            const PointId target = seq.seq[i][*c];
            const auto [it, fresh] = pinned.emplace(t, target);
            if (!fresh && it->second != target) {
                r.pass = false;
                r.counterexample = "coordinate " + std::to_string(t) + " would equal both " + std::to_string(it->second) +
                                   " and " + std::to_string(target);
                r.details.push_back("UNSAT: " + *r.counterexample);
                r.artifact = seq.h;
                return r;
            }
        }
    }

    ConstraintSet cs;
    for (std::size_t t = 0; t < p.arity; ++t)
        if (!p.equals[t]) cs.declare_var("x" + std::to_string(t));
    for (std::size_t i = 0; i < seq.seq.size(); ++i) {
        add_type_literals(cs, p, [&](const Slot& s) {
            if (s.kind == Slot::Kind::Tuple) {
                if (!p.equals[s.id]) return Term::var("x" + std::to_string(s.id));
                const auto c = coord_of(*p.equals[s.id]);
                return Term::point(local.at(c ? seq.seq[i][*c] : *p.equals[s.id]));
            }
            const auto c = coord_of(s.id);
            return Term::point(local.at(c ? seq.seq[i][*c] : s.id));
        });
    }
    const auto res = solve(sub, cs);
    ++r.solver_calls;
    r.pass = res.sat();
    r.details.push_back(std::to_string(seq.seq.size()) + " instances over " + std::to_string(sub.size()) + " points: " +
                        (res.sat() ? "SAT" : "UNSAT"));
    if (!res.sat()) {
        r.counterexample = res.conflict.value_or("UNSAT");
        r.artifact = sub;
    }
    return r;
}

WitnessReport conant_triviality_report(const SweepSizes& sizes, std::size_t trials, std::uint64_t seed) {
    if (sizes.max_m == 0 || sizes.max_b == 0 || sizes.max_a == 0 || sizes.length == 0)
        throw std::domain_error("conant: sizes must be positive");
    if (sizes.points < sizes.max_m + sizes.max_b + sizes.max_a)
        throw std::domain_error("conant: too few points for the requested sizes");
    WitnessReport r;
    r.claim = "conant.triviality";
    r.pass = true;
    std::mt19937_64 rng(seed);
    std::size_t sat = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        SolveOptions opts;
        opts.value_seed = rng();
        const Hypertournament h = solve(PartialHypertournament(sizes.points), ConstraintSet{}, opts).solution->model;
        std::vector<PointId> perm(sizes.points);
        std::iota(perm.begin(), perm.end(), PointId{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        auto pick = [&](std::size_t hi) { return std::uniform_int_distribution<std::size_t>(1, hi)(rng); };
        const std::size_t nm = pick(sizes.max_m), nb = pick(sizes.max_b), na = pick(sizes.max_a);
        std::vector<PointId> m(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(nm));
        std::vector<PointId> b(perm.begin() + static_cast<std::ptrdiff_t>(nm),
                               perm.begin() + static_cast<std::ptrdiff_t>(nm + nb));
        // a avoids b; it may share points with m
        std::vector<PointId> pool(m);
        pool.insert(pool.end(), perm.begin() + static_cast<std::ptrdiff_t>(nm + nb), perm.end());
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<PointId> a(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(na));
        std::vector<PointId> base = m;
        base.insert(base.end(), b.begin(), b.end());
        std::sort(base.begin(), base.end());
        const auto sub = kim_survival(h, m, b, qf_type(h, a, base), sizes.length);
        r.solver_calls += sub.solver_calls;
        if (sub.pass) {
            ++sat;
        } else if (r.pass) {
            r.pass = false;
            r.counterexample = "trial " + std::to_string(trial) + ": " + sub.counterexample.value_or("UNSAT");
            r.artifact = h;
        }
    }
    r.details.push_back(std::to_string(sat) + " of " + std::to_string(trials) + " instances SAT");
    return r;
}

} // namespace h4free
