#include "h4free/witness.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace h4free {

namespace {

std::string set_str(const std::vector<PointId>& v) {
    std::string s = "{";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + "}";
}

std::string var_name(const char* stem, std::size_t i) { return stem + std::to_string(i); }

// Records H4-freeness of h in the report; returns it.
bool check_h4_free(WitnessReport& r, const Hypertournament& h) {
    const auto bad = find_h4(h);
    const std::size_t subsets = h.size() < 4 ? 0 : h.size() * (h.size() - 1) * (h.size() - 2) * (h.size() - 3) / 24;
    if (bad) {
        r.details.push_back("H4 at " + set_str({(*bad)[0], (*bad)[1], (*bad)[2], (*bad)[3]}));
        if (!r.counterexample) r.counterexample = r.details.back();
        return false;
    }
    r.details.push_back(std::to_string(h.size()) + " points, " + std::to_string(subsets) + " 4-subsets, no H4");
    return true;
}

void fail(WitnessReport& r, const std::string& why, const std::optional<Hypertournament>& artifact = std::nullopt) {
    r.pass = false;
    r.details.push_back(why);
    if (!r.counterexample) r.counterexample = why;
    if (artifact && !r.artifact) r.artifact = artifact;
}

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::string WitnessReport::line() const { return "CLAIM " + claim + (pass ? " PASS" : " FAIL"); }

std::string WitnessReport::text() const {
    std::ostringstream out;
    out << line() << "\n";
    for (const auto& d : details) out << "  " << d << "\n";
    out << "  solver calls: " << solver_calls << ", completions checked: " << completions_checked << "\n";
    if (counterexample) out << "  counterexample: " << *counterexample << "\n";
    return out.str();
}

WitnessReport combine(std::string claim, const std::vector<WitnessReport>& parts) {
    WitnessReport r;
    r.claim = std::move(claim);
    r.pass = true;
    for (const auto& p : parts) {
        r.pass = r.pass && p.pass;
        r.solver_calls += p.solver_calls;
        r.completions_checked += p.completions_checked;
        r.details.push_back(p.line());
        if (!p.pass && !r.counterexample) {
            r.counterexample = p.claim + ": " + p.counterexample.value_or("failed");
            r.artifact = p.artifact;
        }
    }
    return r;
}

// --- IP2 -------------------------------------------------------------------

std::pair<Ip2Witness, WitnessReport> ip2_build(std::size_t n, std::size_t max_points) {
    if (n == 0) throw std::domain_error("ip2: grid size must be positive");
    const std::size_t cells = n * n;
    if (cells > 16 || 2 * n + (std::size_t{1} << cells) > max_points)
        throw BudgetExceeded("ip2: n=" + std::to_string(n) + " needs more than " + std::to_string(max_points) + " points");

    Ip2Witness w;
    w.n = n;
    const std::size_t ys = std::size_t{1} << cells;
    const std::size_t total = 2 * n + ys;
    for (std::size_t i = 0; i < n; ++i) {
        w.x0.push_back(static_cast<PointId>(i));
        w.x1.push_back(static_cast<PointId>(n + i));
    }
    for (std::size_t mask = 0; mask < ys; ++mask) w.y.push_back(static_cast<PointId>(2 * n + mask));

    // <* : lexicographic on characteristic vectors, cell 0 first
    auto key = [&](PointId y) {
        const std::size_t mask = y - 2 * n;
        std::size_t k = 0;
        for (std::size_t c = 0; c < cells; ++c)
            if (mask >> c & 1u) k |= std::size_t{1} << (cells - 1 - c);
        return k;
    };
    auto kind = [&](PointId p) { return p < n ? 0 : p < 2 * n ? 1 : 2; };
    auto rank = [&](PointId p) { return kind(p) == 2 ? key(p) : p; };

    w.h = Hypertournament(total);
    for (std::size_t t = 0; t < triple_count(total); ++t) {
        const TripleKey k = triple_from_index(t);
        std::array<PointId, 3> v{k.i, k.j, k.k};
        std::sort(v.begin(), v.end(), [&](PointId p, PointId q) {
            return kind(p) != kind(q) ? kind(p) < kind(q) : rank(p) < rank(q);
        });
        int cnt[3] = {0, 0, 0};
        for (PointId p : v) ++cnt[kind(p)];
        if (cnt[2] == 0) {
            if (cnt[0] == 3 || cnt[1] == 3 || cnt[0] == 2) w.h.set_r(v[0], v[1], v[2], true); // (ii), (iii)
            else w.h.set_r(v[1], v[2], v[0], true);                                           // (iii), side 1 twice
        } else if (cnt[2] == 1) {
            if (cnt[0] == 1) {
                const std::size_t i = v[0], j = v[1] - n, mask = v[2] - 2 * n;
                w.h.set_r(v[0], v[1], v[2], (mask >> (i * n + j)) & 1u); // (i)
            } else {
                w.h.set_r(v[0], v[1], v[2], true); // (iv)
            }
        } else {
            w.h.set_r(v[0], v[1], v[2], true); // (v), (vi)
        }
    }

    WitnessReport r;
    r.claim = "ip2";
    r.pass = check_h4_free(r, w.h);
    std::size_t checked = 0;
    for (std::size_t mask = 0; mask < ys; ++mask)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                ++checked;
                const bool want = (mask >> (i * n + j)) & 1u;
                if (w.h.eval_r(w.x0[i], w.x1[j], w.y[mask]) != want)
                    fail(r, "membership of (" + std::to_string(i) + "," + std::to_string(j) + ") in subset " +
                                std::to_string(mask) + " misread", w.h);
            }
    r.details.push_back("membership pattern checked on " + std::to_string(ys) + " subsets (" + std::to_string(checked) +
                        " cells)");
    if (!r.pass) r.artifact = w.h;
    return {std::move(w), std::move(r)};
}

// --- SOP3 ------------------------------------------------------------------

bool sop3_phi(const Hypertournament& h, PointId x, PointId y, PointId a, PointId b) {
    return h.eval_r(x, y, a) && h.eval_r(x, b, y);
}

std::pair<Sop3Witness, WitnessReport> sop3_build(std::size_t m) {
    if (m < 2) throw std::domain_error("sop3: chain length must be at least 2");
    Sop3Witness w;
    w.h = Hypertournament(m + 2);
    for (std::size_t i = 0; i < m; ++i) w.c.push_back(static_cast<PointId>(2 + i));
    for (std::size_t i = 0; i < m; ++i) {
        w.h.set_r(w.c[i], w.b, w.a, true); // (iii)
        for (std::size_t j = i + 1; j < m; ++j) {
            w.h.set_r(w.c[i], w.c[j], w.a, true); // (i)
            w.h.set_r(w.c[i], w.b, w.c[j], true);
            for (std::size_t k = j + 1; k < m; ++k) w.h.set_r(w.c[i], w.c[j], w.c[k], true); // (ii)
        }
    }

    WitnessReport r;
    r.claim = "sop3.chain";
    r.pass = check_h4_free(r, w.h);
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            ++pairs;
            if (!sop3_phi(w.h, w.c[i], w.c[j], w.a, w.b))
                fail(r, "phi(c" + std::to_string(i) + ", c" + std::to_string(j) + ") fails", w.h);
        }
    r.details.push_back("phi(c_i, c_j) checked on " + std::to_string(pairs) + " increasing pairs");
    if (!r.pass) r.artifact = w.h;
    return {std::move(w), std::move(r)};
}

WitnessReport sop3_cycle_check() {
    WitnessReport r;
    r.claim = "sop3.cycle";
    r.pass = true;
    const Term a = Term::point(0), b = Term::point(1);
    auto phi = [&](ConstraintSet& cs, const std::string& x, const std::string& y) {
        cs.add(Term::var(x), Term::var(y), a, true);
        cs.add(Term::var(x), b, Term::var(y), true);
    };
    ConstraintSet cycle;
    for (const char* v : {"x0", "x1", "x2"}) cycle.declare_var(v);
    phi(cycle, "x0", "x1");
    phi(cycle, "x1", "x2");
    phi(cycle, "x2", "x0");

    const auto solved = solve(PartialHypertournament(2), cycle);
    ++r.solver_calls;
    if (solved.sat()) fail(r, "3-cycle is satisfiable", solved.solution->model);
    else r.details.push_back("3-cycle: UNSAT");

    const auto count = count_completions(PartialHypertournament(2), cycle, 1u << 20);
    r.completions_checked += count.enumerated;
    r.details.push_back("3-cycle: " + std::to_string(count.count) + " of " + std::to_string(count.enumerated) +
                        " completions");
    if (count.count != 0) fail(r, "brute force found a completion of the 3-cycle");

    ConstraintSet chain;
    for (const char* v : {"x0", "x1", "x2"}) chain.declare_var(v);
    phi(chain, "x0", "x1");
    phi(chain, "x1", "x2");
    const auto open = solve(PartialHypertournament(2), chain);
    ++r.solver_calls;
    if (!open.sat()) fail(r, "2-chain is unsatisfiable: " + open.conflict.value_or(""));
    else r.details.push_back("2-chain: SAT");
    return r;
}

// --- TP2 -------------------------------------------------------------------

void tp2_add_phi(ConstraintSet& cs, const std::string& x, PointId c, PointId d) {
    const Term X = Term::var(x), C = Term::point(c), D = Term::point(d);
    const Term E = Term::point(Tp2Witness::e), F = Term::point(Tp2Witness::f);
    cs.add(X, C, D, true);
    cs.add(X, D, E, true);
    cs.add(X, E, F, true);
    cs.add(X, C, F, true);
    cs.add(X, E, C, true);
    cs.add(X, F, D, true);
}

namespace {

Hypertournament tp2_structure(std::size_t rows, std::size_t cols) {
    const std::size_t total = 2 + 2 * rows * cols;
    Hypertournament h(total);
    enum Kind { E, F, X, Y };
    struct Item {
        Kind kind;
        std::size_t row, col;
        PointId id;
    };
    auto item = [&](PointId p) -> Item {
        if (p == Tp2Witness::e) return {E, 0, 0, p};
        if (p == Tp2Witness::f) return {F, 0, 0, p};
        const std::size_t cell = (p - 2) / 2;
        return {(p - 2) % 2 ? Y : X, cell / cols, cell % cols, p};
    };
    // order for triples meeting two or more rows: cells row-major, c before d, then e, f
    auto pos = [&](PointId p) -> std::size_t {
        if (p == Tp2Witness::e) return total;
        if (p == Tp2Witness::f) return total + 1;
        return p;
    };

    for (std::size_t t = 0; t < triple_count(total); ++t) {
        const TripleKey k = triple_from_index(t);
        std::array<Item, 3> v{item(k.i), item(k.j), item(k.k)};
        std::vector<std::size_t> rows_met;
        for (const auto& it : v)
            if (it.kind == X || it.kind == Y)
                if (std::find(rows_met.begin(), rows_met.end(), it.row) == rows_met.end()) rows_met.push_back(it.row);
        if (rows_met.size() >= 2) {
            std::array<PointId, 3> s{k.i, k.j, k.k};
            std::sort(s.begin(), s.end(), [&](PointId a, PointId b) { return pos(a) < pos(b); });
            h.set_r(s[0], s[1], s[2], true);
            continue;
        }
        // one row: the items of the indiscernible sequence, column index as sequence index
        std::sort(v.begin(), v.end(), [](const Item& a, const Item& b) {
            return a.kind != b.kind ? a.kind < b.kind : a.col < b.col;
        });
        const Kind k0 = v[0].kind, k1 = v[1].kind, k2 = v[2].kind;
        if (k0 == E && k1 == F) {
            h.set_r(v[2].id, v[0].id, v[1].id, true); // R(c,e,f), R(d,e,f)
        } else if ((k0 == E || k0 == F) && k1 == X && k2 == Y) {
            const std::size_t i = v[1].col, j = v[2].col;
            if (i == j) {
                if (k0 == E) h.set_r(v[1].id, v[2].id, v[0].id, true); // R(c,d,e)
                else h.set_r(v[1].id, v[0].id, v[2].id, true);         // R(c,f,d)
            } else if (k0 == E) {
                h.set_r(v[0].id, v[2].id, v[1].id, i < j); // R(e, y_j, x_i) iff i < j
            } else {
                h.set_r(v[0].id, v[1].id, v[2].id, i < j); // R(f, x_i, y_j) iff i < j
            }
        } else if (k0 == E || k0 == F) {
            h.set_r(v[0].id, v[1].id, v[2].id, true); // R(e, x_i, x_j), i < j; same for f and y
        } else {
            h.set_r(v[0].id, v[1].id, v[2].id, true); // x/y chains: (iv) and (v)
        }
    }
    return h;
}

} // namespace

std::pair<Tp2Witness, WitnessReport> tp2_build(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw std::domain_error("tp2: empty array");
    if (rows * cols > 16) throw BudgetExceeded("tp2: at most 16 cells");
    Tp2Witness w;
    w.rows = rows;
    w.cols = cols;
    w.h = tp2_structure(rows, cols);

    WitnessReport r;
    r.claim = "tp2";
    r.pass = check_h4_free(r, w.h);
    if (!r.pass) r.artifact = w.h;

    std::size_t pair_count = 0, path_count = 0;
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            for (std::size_t k = j + 1; k < cols; ++k) {
                ConstraintSet cs;
                cs.declare_var("x");
                tp2_add_phi(cs, "x", w.c(i, j), w.d(i, j));
                tp2_add_phi(cs, "x", w.c(i, k), w.d(i, k));
                ++r.solver_calls;
                ++pair_count;
                if (solve(w.h, cs).sat())
                    fail(r, "row " + std::to_string(i) + " columns " + std::to_string(j) + "," + std::to_string(k) +
                                " jointly consistent", w.h);
            }
    r.details.push_back(std::to_string(pair_count) + " same-row pairs inconsistent");

    std::vector<std::size_t> path(rows, 0);
    for (;;) {
        ConstraintSet cs;
        cs.declare_var("x");
        for (std::size_t i = 0; i < rows; ++i) tp2_add_phi(cs, "x", w.c(i, path[i]), w.d(i, path[i]));
        ++r.solver_calls;
        ++path_count;
        const auto res = solve(w.h, cs);
        if (!res.sat()) {
            std::string p;
            for (std::size_t c : path) p += std::to_string(c);
            fail(r, "path " + p + " inconsistent: " + res.conflict.value_or(""), w.h);
        }
        std::size_t i = 0;
        while (i < rows && ++path[i] == cols) path[i++] = 0;
        if (i == rows) break;
    }
    r.details.push_back(std::to_string(path_count) + " paths consistent");
    return {std::move(w), std::move(r)};
}

// --- NSOP4 -----------------------------------------------------------------

std::pair<std::optional<Nsop4Input>, WitnessReport> nsop4_make_input(std::size_t m, std::size_t n,
                                                                     const std::vector<bool>& eps, std::uint64_t seed) {
    if (n == 0) throw std::domain_error("nsop4: tuples must be nonempty");
    if (eps.size() != m * n * n)
        throw std::domain_error("nsop4: pattern has " + std::to_string(eps.size()) + " entries, expected " +
                                std::to_string(m * n * n));
    Nsop4Input in;
    in.m = m;
    in.n = n;
    in.eps = eps;
    for (std::size_t i = 0; i < m; ++i) in.c.push_back(static_cast<PointId>(i));
    for (std::size_t j = 0; j < n; ++j) in.b0.push_back(static_cast<PointId>(m + j));
    for (std::size_t j = 0; j < n; ++j) in.b1.push_back(static_cast<PointId>(m + n + j));

    WitnessReport r;
    r.claim = "nsop4.input";

    // free bits: triples of c+b0 that meet c; b0 is internally ordered by index
    const std::size_t small = m + n;
    std::vector<std::size_t> free_triples;
    for (std::size_t t = 0; t < triple_count(small); ++t)
        if (triple_from_index(t).i < m) free_triples.push_back(t);
    const bool exhaustive = free_triples.size() <= 16;
    const std::uint64_t space = exhaustive ? std::uint64_t{1} << free_triples.size() : 256;
    std::mt19937_64 rng(seed);
    const std::uint64_t start = exhaustive ? rng() % space : 0;

    for (std::uint64_t attempt = 0; attempt < space; ++attempt) {
        Hypertournament part(small, Orientation::Plus);
        const std::uint64_t bits = exhaustive ? (start + attempt) % space : rng();
        for (std::size_t f = 0; f < free_triples.size(); ++f) {
            const bool bit = exhaustive ? (bits >> f) & 1u : static_cast<bool>(mix(bits + f) & 1u);
            part.set_orient_at(free_triples[f], orientation_of(bit));
        }
        if (!is_h4_free(part)) continue;

        Hypertournament h(m + 2 * n);
        auto from_b1 = [&](PointId p) { return p >= m + n ? static_cast<PointId>(p - n) : p; };
        for (std::size_t t = 0; t < triple_count(h.size()); ++t) {
            const TripleKey k = triple_from_index(t);
            const int in_b0 = (k.i >= m && k.i < m + n) + (k.j >= m && k.j < m + n) + (k.k >= m && k.k < m + n);
            const int in_b1 = (k.i >= m + n) + (k.j >= m + n) + (k.k >= m + n);
            if (in_b1 == 0) {
                h.set_orient_at(t, part.orient_at(t));
            } else if (in_b0 == 0) {
                h.set_r(k.i, k.j, k.k, part.eval_r(from_b1(k.i), from_b1(k.j), from_b1(k.k)));
            } else if (k.i < m) {
                // c_i, b0_j, b1_k
                h.set_r(k.i, k.j, k.k, in.eps_at(k.i, k.j - m, k.k - m - n));
            } else {
                h.set_r(k.i, k.j, k.k, true); // mixed b0/b1 triples in index order
            }
        }
        ++r.completions_checked;
        if (!is_h4_free(h)) continue;
        in.h = std::move(h);
        r.pass = true;
        r.details.push_back("input found after " + std::to_string(attempt + 1) + " candidate types of b0 over c" +
                            (exhaustive ? " (exhaustive order)" : " (seeded)"));
        if (qf_type(in.h, in.b0, in.c) != qf_type(in.h, in.b1, in.c)) fail(r, "b0 and b1 differ over c", in.h);
        return {std::move(in), std::move(r)};
    }
    fail(r, std::string("no H4-free input for this pattern") + (exhaustive ? " (exhaustive)" : " within 256 seeded tries"));
    return {std::nullopt, std::move(r)};
}

WitnessReport nsop4_build_cycle(const Nsop4Input& in) {
    WitnessReport r;
    r.claim = "nsop4.cycle";
    const std::size_t n = in.n, base_size = in.h.size();
    std::vector<PointId> b0b1 = in.b0;
    b0b1.insert(b0b1.end(), in.b1.begin(), in.b1.end());
    const QfType p = qf_type(in.h, b0b1, in.c);
    auto point = [](const Slot& s) { return Term::point(s.id); };

    // Sigma(x): (b1, x) has type p over c; R(c_i, b0_j, x_k); R(b0_i, x_j, b1_k)
    ConstraintSet sigma;
    for (std::size_t k = 0; k < n; ++k) sigma.declare_var(var_name("x", k));
    add_type_literals(sigma, p, [&](const Slot& s) {
        if (s.kind == Slot::Kind::Base) return point(s);
        return s.id < n ? Term::point(in.b1[s.id]) : Term::var(var_name("x", s.id - n));
    });
    for (PointId c : in.c)
        for (PointId b : in.b0)
            for (std::size_t k = 0; k < n; ++k) sigma.add(Term::point(c), Term::point(b), Term::var(var_name("x", k)), true);
    for (PointId b : in.b0)
        for (std::size_t j = 0; j < n; ++j)
            for (PointId b1 : in.b1) sigma.add(Term::point(b), Term::var(var_name("x", j)), Term::point(b1), true);
    const auto s1 = solve(in.h, sigma);
    ++r.solver_calls;
    if (!s1.sat()) {
        fail(r, "Sigma UNSAT: " + s1.conflict.value_or(""), in.h);
        return r;
    }
    std::vector<PointId> b2(n);
    for (std::size_t k = 0; k < n; ++k) b2[k] = static_cast<PointId>(base_size + k);
    r.details.push_back("Sigma SAT: b2* = " + set_str(b2));

    // Gamma(y): (y, b0) and (b2*, y) have type p over c; R(b0_i, b2*_j, y_k)
    ConstraintSet gamma;
    for (std::size_t k = 0; k < n; ++k) gamma.declare_var(var_name("y", k));
    add_type_literals(gamma, p, [&](const Slot& s) {
        if (s.kind == Slot::Kind::Base) return point(s);
        return s.id < n ? Term::var(var_name("y", s.id)) : Term::point(in.b0[s.id - n]);
    });
    add_type_literals(gamma, p, [&](const Slot& s) {
        if (s.kind == Slot::Kind::Base) return point(s);
        return s.id < n ? Term::point(b2[s.id]) : Term::var(var_name("y", s.id - n));
    });
    for (PointId b : in.b0)
        for (PointId x : b2)
            for (std::size_t k = 0; k < n; ++k) gamma.add(Term::point(b), Term::point(x), Term::var(var_name("y", k)), true);
    const auto s2 = solve(s1.solution->model, gamma);
    ++r.solver_calls;
    if (!s2.sat()) {
        fail(r, "Gamma UNSAT: " + s2.conflict.value_or(""), s1.solution->model);
        return r;
    }
    const Hypertournament& h = s2.solution->model;
    std::vector<PointId> b3(n);
    for (std::size_t k = 0; k < n; ++k) b3[k] = static_cast<PointId>(base_size + n + k);
    r.details.push_back("Gamma SAT: b3* = " + set_str(b3));

    r.pass = check_h4_free(r, h);
    const std::vector<std::pair<std::vector<PointId>, std::vector<PointId>>> links{
        {in.b0, in.b1}, {in.b1, b2}, {b2, b3}, {b3, in.b0}};
    const char* names[] = {"p(b0, b1)", "p(b1, b2*)", "p(b2*, b3*)", "p(b3*, b0)"};
    for (std::size_t l = 0; l < links.size(); ++l) {
        std::vector<PointId> t = links[l].first;
        t.insert(t.end(), links[l].second.begin(), links[l].second.end());
        if (qf_type(h, t, in.c) == p) r.details.push_back(std::string(names[l]) + " holds");
        else fail(r, std::string(names[l]) + " fails", h);
    }
    if (!r.pass) r.artifact = h;
    return r;
}

// --- invariant extension template --------------------------------------------

TemplateExtension invariant_extension_template(const Hypertournament& h, const std::vector<PointId>& a,
                                               const std::vector<PointId>& astar, const QfType& p) {
    if (a.empty()) throw std::domain_error("template: A must be nonempty");
    std::vector<PointId> sorted_a = a;
    std::sort(sorted_a.begin(), sorted_a.end());
    if (std::adjacent_find(sorted_a.begin(), sorted_a.end()) != sorted_a.end() || sorted_a.back() >= h.size())
        throw std::domain_error("template: A must be distinct points of the structure");
    if (p.base != sorted_a) throw std::domain_error("template: p is not a type over A");
    if (astar.size() != p.arity) throw std::domain_error("template: astar length differs from the arity of p");
    for (PointId s : astar)
        if (!std::binary_search(sorted_a.begin(), sorted_a.end(), s)) throw std::domain_error("template: astar outside A");
    for (const auto& e : p.equals)
        if (e) throw std::domain_error("template: p describes a tuple meeting A");

    const std::size_t arity = p.arity, n = h.size();
    std::vector<PointId> outside;
    for (PointId q = 0; q < n; ++q)
        if (!std::binary_search(sorted_a.begin(), sorted_a.end(), q)) outside.push_back(q);

    ConstraintSet cs;
    for (std::size_t i = 0; i < arity; ++i) cs.declare_var(var_name("x", i));
    add_type_literals(cs, p, [&](const Slot& s) {
        return s.kind == Slot::Kind::Base ? Term::point(s.id) : Term::var(var_name("x", s.id));
    });
    for (std::size_t i = 0; i < arity; ++i) {
        const Term x = Term::var(var_name("x", i));
        for (PointId q : sorted_a)
            for (PointId b : outside) cs.add(x, Term::point(q), Term::point(b), true); // (i)
        for (std::size_t u = 0; u < outside.size(); ++u)
            for (std::size_t v = u + 1; v < outside.size(); ++v)
                cs.add(x, Term::point(outside[u]), Term::point(outside[v]), h.r(astar[i], outside[u], outside[v])); // (ii)
        for (std::size_t j = i + 1; j < arity; ++j)
            if (astar[i] != astar[j])
                for (PointId b : outside)
                    cs.add(x, Term::var(var_name("x", j)), Term::point(b), h.r(astar[i], astar[j], b));
    }

    TemplateExtension out;
    out.report.claim = "template";
    const auto res = solve(h, cs);
    ++out.report.solver_calls;
    if (!res.sat()) {
        out.h = h;
        fail(out.report, "template UNSAT: " + res.conflict.value_or(""), h);
        return out;
    }
    out.h = res.solution->model;
    for (std::size_t i = 0; i < arity; ++i) out.tuple.push_back(static_cast<PointId>(n + i));
    out.report.pass = check_h4_free(out.report, out.h);
    if (qf_type(out.h, out.tuple, sorted_a) != p) fail(out.report, "realized tuple does not have type p", out.h);

    // invariance: the sign on (x_i, b1, b2) depends only on the type of (b1, b2) over A
    std::map<QfType, std::vector<bool>, bool (*)(const QfType&, const QfType&)> seen(
        [](const QfType& l, const QfType& r) { return l.atoms < r.atoms; });
    std::size_t pairs = 0;
    for (PointId b1 : outside)
        for (PointId b2 : outside) {
            if (b1 == b2) continue;
            ++pairs;
            std::vector<bool> signs;
            for (PointId x : out.tuple) signs.push_back(out.h.r(x, b1, b2));
            auto [it, fresh] = seen.emplace(qf_type(out.h, {b1, b2}, sorted_a), signs);
            if (!fresh && it->second != signs)
                fail(out.report, "pairs with equal type over A get different signs at (" + std::to_string(b1) + "," +
                                     std::to_string(b2) + ")",
                     out.h);
        }
    out.report.details.push_back("invariance checked on " + std::to_string(pairs) + " ordered outside pairs in " +
                                 std::to_string(seen.size()) + " type classes");
    if (!out.report.pass && !out.report.artifact) out.report.artifact = out.h;
    return out;
}

// --- empty base ----------------------------------------------------------------

WitnessReport empty_base_obstruction() {
    WitnessReport r;
    r.claim = "empty-base";
    r.pass = true;
    auto run = [&](std::vector<std::pair<bool, bool>> lits, bool expect_sat, const std::string& name) {
        ConstraintSet cs;
        cs.declare_var("x");
        for (auto [swapped, holds] : lits)
            cs.add(Term::var("x"), Term::point(swapped ? 1 : 0), Term::point(swapped ? 0 : 1), holds);
        const auto res = solve(PartialHypertournament(2), cs);
        ++r.solver_calls;
        const auto count = count_completions(PartialHypertournament(2), cs, 16);
        r.completions_checked += count.enumerated;
        const bool ok = res.sat() == expect_sat && (count.count > 0) == expect_sat;
        r.details.push_back(name + ": " + (res.sat() ? "SAT" : "UNSAT"));
        if (!ok) fail(r, name + " gave the wrong verdict");
    };
    run({{false, true}, {true, true}}, false, "R(x,a,b) and R(x,b,a)");
    run({{false, false}, {true, false}}, false, "not R(x,a,b) and not R(x,b,a)");
    run({{false, true}}, true, "R(x,a,b) alone");
    run({{true, true}}, true, "R(x,b,a) alone");
    return r;
}

// --- one-point back-and-forth --------------------------------------------------------

Claim1Result claim1_witness(const Hypertournament& h, const std::vector<PointId>& c, PointId a, PointId b, PointId bp) {
    std::vector<PointId> cs_sorted = c;
    std::sort(cs_sorted.begin(), cs_sorted.end());
    if (std::adjacent_find(cs_sorted.begin(), cs_sorted.end()) != cs_sorted.end())
        throw std::domain_error("claim1: C has repeated points");
    for (PointId q : cs_sorted)
        if (q >= h.size()) throw std::domain_error("claim1: C point out of range");
    if (a >= h.size() || b >= h.size() || bp >= h.size()) throw std::domain_error("claim1: point out of range");
    auto in_c = [&](PointId q) { return std::binary_search(cs_sorted.begin(), cs_sorted.end(), q); };
    if (in_c(a) || in_c(b) || in_c(bp)) throw std::domain_error("claim1: a, b and b' must lie outside C");
    if (a == b) throw std::domain_error("claim1: a and b must differ");
    if (qf_type(h, {b}, cs_sorted) != qf_type(h, {bp}, cs_sorted))
        throw std::domain_error("claim1: b and b' have different types over C");

    Claim1Result out;
    out.report.claim = "claim1";
    std::vector<PointId> cb = cs_sorted;
    cb.insert(std::upper_bound(cb.begin(), cb.end(), b), b);

    if (bp == b) {
        out.h = h;
        out.a_prime = a;
        out.report.pass = true;
        out.report.details.push_back("b' = b: a' = a");
        return out;
    }

    ConstraintSet sys;
    sys.declare_var("x");
    const Term x = Term::var("x");
    add_type_literals(sys, qf_type(h, {a}, cb), [&](const Slot& s) {
        return s.kind == Slot::Kind::Base ? Term::point(s.id) : x;
    });
    const bool case1 = bp == a;
    if (case1) {
        for (PointId ci : cs_sorted) sys.add(x, Term::point(a), Term::point(ci), h.r(a, b, ci)); // (i)
        sys.add(x, Term::point(a), Term::point(b), true);                                          // (ii)
    } else {
        for (PointId ci : cs_sorted) {
            sys.add(x, Term::point(bp), Term::point(ci), h.r(a, b, ci)); // (i)
            sys.add(x, Term::point(a), Term::point(ci), true);           // (iii)
        }
        sys.add(x, Term::point(a), Term::point(b), true); // (ii)
        sys.add(x, Term::point(a), Term::point(bp), true);
        sys.add(x, Term::point(b), Term::point(bp), h.r(a, b, bp)); // (iv)
    }
    out.report.details.push_back(case1 ? "case b' = a" : "case b' != a");
    const auto res = solve(h, sys);
    ++out.report.solver_calls;
    if (!res.sat()) {
        out.h = h;
        fail(out.report, "Sigma UNSAT: " + res.conflict.value_or(""), h);
        return out;
    }
    out.h = res.solution->model;
    out.a_prime = static_cast<PointId>(h.size());
    out.report.pass = check_h4_free(out.report, out.h);

    std::vector<PointId> ca = cs_sorted;
    ca.insert(std::upper_bound(ca.begin(), ca.end(), out.a_prime), out.a_prime);
    if (qf_type(out.h, {out.a_prime}, cb) != qf_type(out.h, {a}, cb)) fail(out.report, "a' does not have the type of a over Cb", out.h);
    else out.report.details.push_back("a' has the type of a over Cb");
    if (qf_type(out.h, {bp}, ca) != qf_type(out.h, {b}, ca)) fail(out.report, "b' and b differ over Ca'", out.h);
    else out.report.details.push_back("b' and b agree over Ca'");
    return out;
}

WitnessReport claim1_pair_obstruction() {
    WitnessReport r;
    r.claim = "claim1.pair";
    const auto [w, built] = tp2_build(1, 2);
    const PointId e = Tp2Witness::e, f = Tp2Witness::f;
    const PointId c0 = w.c(0, 0), d0 = w.d(0, 0), c1 = w.c(0, 1), d1 = w.d(0, 1);

    // a realizes phi(x, b0)
    ConstraintSet with_a;
    with_a.declare_var("a");
    tp2_add_phi(with_a, "a", c0, d0);
    const auto ra = solve(w.h, with_a);
    ++r.solver_calls;
    if (!ra.sat()) {
        fail(r, "phi(x, b0) has no realization", w.h);
        return r;
    }
    const Hypertournament& h = ra.solution->model;
    const PointId a = static_cast<PointId>(w.h.size());

    // a' with the type of a over e f b0, and b1 with the type of b0 over e f a'
    ConstraintSet sys;
    sys.declare_var("x");
    const Term x = Term::var("x");
    add_type_literals(sys, qf_type(h, {a}, {e, f, c0, d0}), [&](const Slot& s) {
        return s.kind == Slot::Kind::Base ? Term::point(s.id) : x;
    });
    add_type_literals(sys, qf_type(h, {c0, d0}, {e, f, a}), [&](const Slot& s) {
        if (s.kind == Slot::Kind::Base) return s.id == a ? x : Term::point(s.id);
        return Term::point(s.id == 0 ? c1 : d1);
    });
    const auto res = solve(h, sys);
    ++r.solver_calls;
    if (res.sat()) {
        fail(r, "pair analogue is consistent", res.solution->model);
    } else {
        r.pass = true;
        r.details.push_back("pair analogue UNSAT: " + res.conflict.value_or("exhausted"));
    }
    return r;
}

} // namespace h4free
