#include "h4free/solver.hpp"

#include <algorithm>
#include <sstream>

namespace h4free {

std::string Term::str() const {
    if (is_point()) return std::to_string(std::get<PointId>(ref));
    return std::get<std::string>(ref);
}

void ConstraintSet::declare_var(const std::string& name) {
    if (name.empty()) throw std::invalid_argument("empty variable name");
    if (var_index_.contains(name)) throw std::invalid_argument("variable '" + name + "' declared twice");
    var_index_.emplace(name, vars_.size());
    vars_.push_back(name);
}

bool ConstraintSet::has_var(const std::string& name) const { return var_index_.contains(name); }

void ConstraintSet::add(Term a, Term b, Term c, bool holds) {
    lits_.push_back({{std::move(a), std::move(b), std::move(c)}, orientation_of(holds)});
}

void ConstraintSet::add(const Literal& lit) { lits_.push_back(lit); }

PointId ConstraintSet::var_id(const std::string& name, std::size_t base_size) const {
    auto it = var_index_.find(name);
    if (it == var_index_.end()) throw std::domain_error("unresolvable name '" + name + "'");
    return static_cast<PointId>(base_size + it->second);
}

namespace {

std::string key_str(const TripleKey& k) {
    return "{" + std::to_string(k.i) + "," + std::to_string(k.j) + "," + std::to_string(k.k) + "}";
}

std::string literal_str(const Literal& lit) {
    return std::string(lit.holds() ? "" : "~") + "R(" + lit.args[0].str() + "," + lit.args[1].str() + "," +
           lit.args[2].str() + ")";
}

PointId resolve(const Term& t, const ConstraintSet& cs, std::size_t base_size) {
    if (t.is_point()) {
        const PointId p = std::get<PointId>(t.ref);
        if (p >= base_size)
            throw std::domain_error("point " + std::to_string(p) + " out of range for base of size " +
                                    std::to_string(base_size));
        return p;
    }
    return cs.var_id(std::get<std::string>(t.ref), base_size);
}

struct Normalized {
    std::size_t index;
    std::int8_t value; // 1 = Plus on the sorted key
    TripleKey key;
};

Normalized normalize(const Literal& lit, const ConstraintSet& cs, std::size_t base_size) {
    const PointId a = resolve(lit.args[0], cs, base_size);
    const PointId b = resolve(lit.args[1], cs, base_size);
    const PointId c = resolve(lit.args[2], cs, base_size);
    if (a == b || b == c || a == c) throw std::domain_error("literal " + literal_str(lit) + " repeats an argument");
    bool odd = false;
    const TripleKey key = TripleKey::sorted(a, b, c, &odd);
    return {key.index(), static_cast<std::int8_t>(lit.holds() != odd ? 1 : 0), key};
}

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Search {
public:
    Search(std::size_t n, ClassSet allowed, const SolveOptions& opts) : n_(n), opts_(opts), vals_(triple_count(n), -1) {
        for (unsigned m = 0; m < 16; ++m) allowed_[m] = allowed.contains(four_class_of_pattern(m));
        lex_.reserve(vals_.size());
        for (PointId i = 0; i < n; ++i)
            for (PointId j = i + 1; j < n; ++j)
                for (PointId k = j + 1; k < n; ++k) lex_.push_back(triple_index(i, j, k));
    }

    std::int8_t value(std::size_t t) const { return vals_[t]; }
    void set_initial(std::size_t t, std::int8_t v) { vals_[t] = v; }

    /// Checks and propagates from every assigned triple.
    bool root_propagate(std::string* why) {
        for (std::size_t t = 0; t < vals_.size(); ++t)
            if (vals_[t] >= 0) queue_.push_back(t);
        if (!propagate()) {
            if (why != nullptr) *why = "root propagation conflict at 4-set " + last_conflict_;
            return false;
        }
        trail_.clear();
        return true;
    }

    bool run() { return dfs(0); }
    const SolveStats& stats() const { return stats_; }

private:
    void assign(std::size_t t, std::int8_t v) {
        vals_[t] = v;
        trail_.push_back(t);
        queue_.push_back(t);
    }

    void undo_to(std::size_t mark) {
        while (trail_.size() > mark) {
            vals_[trail_.back()] = -1;
            trail_.pop_back();
        }
    }

    bool check_4set(PointId a, PointId b, PointId c, PointId d) {
        const std::array<std::size_t, 4> ids{triple_index(a, b, c), triple_index(a, b, d), triple_index(a, c, d),
                                             triple_index(b, c, d)};
        unsigned pattern = 0;
        int open = -1;
        int open_count = 0;
        for (int s = 0; s < 4; ++s) {
            const std::int8_t v = vals_[ids[s]];
            if (v < 0) {
                open = s;
                ++open_count;
            } else if (v == 1) {
                pattern |= 1u << s;
            }
        }
        if (open_count == 0) {
            if (allowed_[pattern]) return true;
            last_conflict_ = "{" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
                             std::to_string(d) + "}";
            return false;
        }
        if (open_count > 1 || !opts_.propagate) return true;
        const bool ok0 = allowed_[pattern];
        const bool ok1 = allowed_[pattern | (1u << open)];
        if (ok0 && ok1) return true;
        if (!ok0 && !ok1) {
            last_conflict_ = "{" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
                             std::to_string(d) + "}";
            return false;
        }
        ++stats_.propagations;
        assign(ids[open], ok1 ? 1 : 0);
        return true;
    }

    bool propagate() {
        std::size_t head = 0;
        while (head < queue_.size()) {
            const TripleKey key = triple_from_index(queue_[head++]);
            for (PointId l = 0; l < n_; ++l) {
                if (l == key.i || l == key.j || l == key.k) continue;
                std::array<PointId, 4> s{key.i, key.j, key.k, l};
                std::sort(s.begin(), s.end());
                if (!check_4set(s[0], s[1], s[2], s[3])) {
                    queue_.clear();
                    return false;
                }
            }
        }
        queue_.clear();
        return true;
    }

    bool dfs(std::size_t pos) {
        while (pos < lex_.size() && vals_[lex_[pos]] >= 0) ++pos;
        if (pos == lex_.size()) return true;
        ++stats_.nodes;
        if (opts_.max_nodes != 0 && stats_.nodes > opts_.max_nodes)
            throw BudgetExceeded("solver node budget of " + std::to_string(opts_.max_nodes) + " exceeded");
        const std::size_t t = lex_[pos];
        std::int8_t first = 1;
        if (opts_.value_seed) first = static_cast<std::int8_t>(splitmix(*opts_.value_seed ^ (stats_.nodes * 0x2545f4914f6cdd1dULL)) & 1);
        for (std::int8_t v : {first, static_cast<std::int8_t>(1 - first)}) {
            const std::size_t mark = trail_.size();
            assign(t, v);
            if (propagate() && dfs(pos + 1)) return true;
            undo_to(mark);
        }
        ++stats_.backtracks;
        return false;
    }

    std::size_t n_;
    SolveOptions opts_;
    std::vector<std::int8_t> vals_;
    std::vector<std::size_t> lex_;
    std::vector<std::size_t> trail_;
    std::vector<std::size_t> queue_;
    std::array<bool, 16> allowed_{};
    std::string last_conflict_;
    SolveStats stats_;
};

} // namespace

bool literal_holds(const Hypertournament& h, const Literal& lit, const std::map<std::string, PointId>& assignment) {
    std::array<PointId, 3> ids{};
    for (int s = 0; s < 3; ++s) {
        const Term& t = lit.args[s];
        if (t.is_point()) ids[s] = std::get<PointId>(t.ref);
        else ids[s] = assignment.at(std::get<std::string>(t.ref));
    }
    return h.eval_r(ids[0], ids[1], ids[2]) == lit.holds();
}

SolveResult solve(const PartialHypertournament& base, const ConstraintSet& cs, const SolveOptions& opts) {
    const std::size_t base_n = base.size();
    const std::size_t n = base_n + cs.variables().size();
    Search search(n, opts.allowed, opts);
    SolveResult result;

    for (std::size_t t = 0; t < triple_count(base_n); ++t)
        if (auto o = base.get_at(t)) search.set_initial(t, *o == Orientation::Plus ? 1 : 0);

    // Literal compilation happens before any search, so contradictions are reported up front.
    std::vector<std::optional<std::pair<std::int8_t, std::size_t>>> from_literal(triple_count(n));
    const auto& lits = cs.literals();
    for (std::size_t li = 0; li < lits.size(); ++li) {
        const Normalized nl = normalize(lits[li], cs, base_n);
        if (auto prev = from_literal[nl.index]) {
            if (prev->first != nl.value) {
                result.conflict = "contradictory literals " + literal_str(lits[prev->second]) + " and " +
                                  literal_str(lits[li]) + " on " + key_str(nl.key);
                return result;
            }
            continue;
        }
        from_literal[nl.index] = std::make_pair(nl.value, li);
        const std::int8_t current = search.value(nl.index);
        if (current >= 0 && current != nl.value) {
            result.conflict = "literal " + literal_str(lits[li]) + " contradicts the base on " + key_str(nl.key);
            return result;
        }
        search.set_initial(nl.index, nl.value);
    }

    std::string why;
    if (!search.root_propagate(&why)) {
        result.conflict = why;
        result.stats = search.stats();
        return result;
    }
    const bool sat = search.run();
    result.stats = search.stats();
    if (!sat) return result;

    Solution sol;
    sol.model = Hypertournament(n);
    for (std::size_t t = 0; t < triple_count(n); ++t)
        sol.model.set_orient_at(t, search.value(t) == 1 ? Orientation::Plus : Orientation::Minus);
    for (const auto& v : cs.variables()) sol.assignment.emplace(v, cs.var_id(v, base_n));

    // Soundness is checked on every return.
    if (!in_constrained_class(sol.model, opts.allowed)) throw std::logic_error("solver returned a model outside the class");
    for (const auto& lit : lits)
        if (!literal_holds(sol.model, lit, sol.assignment))
            throw std::logic_error("solver returned a model violating " + literal_str(lit));
    for (std::size_t t = 0; t < triple_count(base_n); ++t)
        if (auto o = base.get_at(t); o && *o != sol.model.orient_at(t))
            throw std::logic_error("solver model disagrees with the base");
    result.solution = std::move(sol);
    return result;
}

SolveResult solve(const Hypertournament& base, const ConstraintSet& cs, const SolveOptions& opts) {
    return solve(base.as_partial(), cs, opts);
}

CompletionCount count_completions(const PartialHypertournament& base, const ConstraintSet& cs, std::uint64_t cap,
                                  ClassSet allowed, std::size_t max_free) {
    const std::size_t base_n = base.size();
    const std::size_t n = base_n + cs.variables().size();
    Hypertournament h(n);
    std::vector<std::size_t> open;
    for (std::size_t t = 0; t < triple_count(n); ++t) {
        if (t < triple_count(base_n)) {
            if (auto o = base.get_at(t)) {
                h.set_orient_at(t, *o);
                continue;
            }
        }
        open.push_back(t);
    }
    CompletionCount out;
    out.free_triples = open.size();
    if (open.size() > max_free)
        throw BudgetExceeded("count_completions: " + std::to_string(open.size()) + " free triples exceeds budget of " +
                             std::to_string(max_free));

    struct Resolved {
        PointId a, b, c;
        bool holds;
    };
    std::vector<Resolved> lits;
    for (const auto& lit : cs.literals()) {
        std::array<PointId, 3> ids{};
        for (int s = 0; s < 3; ++s) ids[s] = resolve(lit.args[s], cs, base_n);
        if (ids[0] == ids[1] || ids[1] == ids[2] || ids[0] == ids[2])
            throw std::domain_error("literal " + literal_str(lit) + " repeats an argument");
        lits.push_back({ids[0], ids[1], ids[2], lit.holds()});
    }
    const auto subsets = all_4subsets(n);

    const std::uint64_t total = std::uint64_t{1} << open.size();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        for (std::size_t s = 0; s < open.size(); ++s)
            h.set_orient_at(open[s], (mask >> s) & 1 ? Orientation::Plus : Orientation::Minus);
        ++out.enumerated;
        bool ok = std::all_of(lits.begin(), lits.end(), [&](const Resolved& l) { return h.eval_r(l.a, l.b, l.c) == l.holds; });
        for (std::size_t s = 0; ok && s < subsets.size(); ++s) ok = allowed.contains(classify_4set(h, subsets[s]));
        if (!ok) continue;
        if (++out.count >= cap) {
            out.truncated = mask + 1 < total;
            break;
        }
    }
    return out;
}

std::optional<Hypertournament> extend_by_point(const Hypertournament& h, const OnePointType& t, ClassSet allowed) {
    const std::size_t n = h.size();
    if (t.domain().size() != n)
        throw std::domain_error("extend_by_point: type covers " + std::to_string(t.domain().size()) + " of " +
                                std::to_string(n) + " points");
    for (PointId p = 0; p < n; ++p)
        if (t.domain()[p] != p) throw std::domain_error("extend_by_point: type domain is not the whole structure");
    Hypertournament out = h;
    const PointId x = out.add_point();
    for (PointId a = 0; a < n; ++a)
        for (PointId b = a + 1; b < n; ++b) out.set_r(x, a, b, t.r_with(a, b));
    for (PointId a = 0; a < n; ++a)
        for (PointId b = a + 1; b < n; ++b)
            for (PointId c = b + 1; c < n; ++c)
                if (!allowed.contains(classify_4set(out, std::array<PointId, 4>{a, b, c, x}))) return std::nullopt;
    return out;
}

std::size_t add_type_literals(ConstraintSet& cs, const QfType& p, const std::function<Term(const Slot&)>& term) {
    std::size_t skipped = 0;
    for (const auto& atom : p.atoms) {
        const Term a = term(atom.slots[0]), b = term(atom.slots[1]), c = term(atom.slots[2]);
        if (a == b || b == c || a == c) {
            ++skipped;
            continue;
        }
        cs.add(a, b, c, atom.holds);
    }
    return skipped;
}

} // namespace h4free
