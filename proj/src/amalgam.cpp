#include "h4free/amalgam.hpp"

#include "h4free/solver.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace h4free {

namespace {

std::vector<std::vector<PointId>> subsets_of_size(std::size_t n, std::size_t r) {
    std::vector<std::vector<PointId>> out;
    if (r > n) return out;
    std::vector<PointId> cur(r);
    std::iota(cur.begin(), cur.end(), PointId{0});
    for (;;) {
        out.push_back(cur);
        std::size_t i = r;
        while (i > 0 && cur[i - 1] == n - r + (i - 1)) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < r; ++j) cur[j] = cur[j - 1] + 1;
    }
    return out;
}

std::vector<PointId> all_points(std::size_t n) {
    std::vector<PointId> v(n);
    std::iota(v.begin(), v.end(), PointId{0});
    return v;
}

void require_total_type(const Hypertournament& a, const OnePointType& t, const char* which) {
    if (t.domain() != all_points(a.size()))
        throw std::domain_error(std::string(which) + " does not cover every point of A");
}

} // namespace

Embedding Embedding::identity(std::size_t n) { return {all_points(n)}; }

bool is_embedding(const Hypertournament& source, const Hypertournament& target, const Embedding& f) {
    if (f.map.size() != source.size()) return false;
    std::vector<bool> used(target.size(), false);
    for (PointId p : f.map) {
        if (p >= target.size() || used[p]) return false;
        used[p] = true;
    }
    for (std::size_t t = 0; t < triple_count(source.size()); ++t) {
        const TripleKey k = triple_from_index(t);
        if (source.orient_at(t) == Orientation::Plus) {
            if (!target.r(f.map[k.i], f.map[k.j], f.map[k.k])) return false;
        } else if (target.r(f.map[k.i], f.map[k.j], f.map[k.k])) {
            return false;
        }
    }
    return true;
}

Hypertournament amalgamate_one_point(const Hypertournament& a, const OnePointType& t1, const OnePointType& t2) {
    if (!is_h4_free(a)) throw std::domain_error("A is not H4-free");
    require_total_type(a, t1, "t1");
    require_total_type(a, t2, "t2");
    if (!extend_by_point(a, t1)) throw std::domain_error("A extended by t1 is not H4-free");
    if (!extend_by_point(a, t2)) throw std::domain_error("A extended by t2 is not H4-free");

    const std::size_t n = a.size();
    Hypertournament c = a;
    const PointId b1 = c.add_point();
    const PointId b2 = c.add_point();
    for (PointId x = 0; x < n; ++x)
        for (PointId y = x + 1; y < n; ++y) {
            c.set_r(b1, x, y, t1.r_with(x, y));
            c.set_r(b2, x, y, t2.r_with(x, y));
        }
    for (PointId x = 0; x < n; ++x) c.set_r(b1, b2, x, true);
    if (!is_h4_free(c)) throw std::logic_error("one-point amalgam is not H4-free");
    return c;
}

Amalgam strong_amalgamate(const Hypertournament& a, const Hypertournament& b1, const Hypertournament& b2,
                          const Embedding& f1, const Embedding& f2) {
    if (!is_embedding(a, b1, f1)) throw std::domain_error("f1 is not an embedding of A into B1");
    if (!is_embedding(a, b2, f2)) throw std::domain_error("f2 is not an embedding of A into B2");
    if (!is_h4_free(b1) || !is_h4_free(b2)) throw std::domain_error("B1 and B2 must be H4-free");

    const std::size_t m = a.size();
    constexpr PointId none = ~PointId{0};
    auto place = [&](const Hypertournament& b, const Embedding& f, PointId next) {
        std::vector<PointId> g(b.size(), none);
        for (PointId p = 0; p < m; ++p) g[f.map[p]] = p;
        for (PointId q = 0; q < b.size(); ++q)
            if (g[q] == none) g[q] = next++;
        return g;
    };
    Amalgam out;
    out.g1.map = place(b1, f1, static_cast<PointId>(m));
    const std::size_t s = b1.size() - m;
    out.g2.map = place(b2, f2, static_cast<PointId>(m + s));
    const std::size_t n = m + s + (b2.size() - m);

    // back maps and ranks in the amalgamation order
    std::vector<PointId> from1(n, none), from2(n, none);
    for (PointId q = 0; q < b1.size(); ++q) from1[out.g1.map[q]] = q;
    for (PointId q = 0; q < b2.size(); ++q) from2[out.g2.map[q]] = q;
    std::vector<std::size_t> rank(n);
    for (PointId p = 0; p < n; ++p) {
        if (p < m) rank[p] = s + p;
        else if (p < m + s) rank[p] = s - 1 - (p - m);
        else rank[p] = p;
    }

    out.c = Hypertournament(n);
    for (std::size_t t = 0; t < triple_count(n); ++t) {
        const TripleKey k = triple_from_index(t);
        if (from1[k.i] != none && from1[k.j] != none && from1[k.k] != none) {
            out.c.set_r(k.i, k.j, k.k, b1.r(from1[k.i], from1[k.j], from1[k.k]));
        } else if (from2[k.i] != none && from2[k.j] != none && from2[k.k] != none) {
            out.c.set_r(k.i, k.j, k.k, b2.r(from2[k.i], from2[k.j], from2[k.k]));
        } else {
            std::array<PointId, 3> v{k.i, k.j, k.k};
            std::sort(v.begin(), v.end(), [&](PointId x, PointId y) { return rank[x] < rank[y]; });
            out.c.set_r(v[0], v[1], v[2], false);
        }
    }
    if (!is_h4_free(out.c)) throw std::logic_error("strong amalgam is not H4-free");
    return out;
}

bool type_admissible(const Hypertournament& h, const OnePointType& t, ClassSet allowed) {
    const auto& dom = t.domain();
    Hypertournament small = h.induced(dom);
    const PointId x = small.add_point();
    for (PointId i = 0; i < dom.size(); ++i)
        for (PointId j = i + 1; j < dom.size(); ++j) small.set_r(x, i, j, t.r_with(dom[i], dom[j]));
    return in_constrained_class(small, allowed);
}

std::vector<OnePointType> enumerate_one_point_types(const Hypertournament& h, const std::vector<PointId>& domain,
                                                    ClassSet allowed) {
    if (domain.size() > 6) throw BudgetExceeded("type enumeration is capped at 6 domain points");
    if (!std::is_sorted(domain.begin(), domain.end())) throw std::domain_error("domain must be sorted");
    const std::size_t pairs = domain.size() * (domain.size() - (domain.empty() ? 0 : 1)) / 2;
    std::vector<OnePointType> out;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << pairs); ++idx) {
        OnePointType t = OnePointType::from_index(domain, idx);
        if (type_admissible(h, t, allowed)) out.push_back(std::move(t));
    }
    return out;
}

std::optional<PointId> realize_type(const Hypertournament& h, const OnePointType& t, ClassSet allowed) {
    if (!type_admissible(h, t, allowed)) return std::nullopt;
    const auto& dom = t.domain();
    for (PointId p = 0; p < h.size(); ++p) {
        if (std::binary_search(dom.begin(), dom.end(), p)) continue;
        if (OnePointType::read_off(h, p, dom) == t) return p;
    }
    return std::nullopt;
}

namespace {

// Admissible type indices over a subset depend only on the induced pattern.
class AdmissibleCache {
public:
    explicit AdmissibleCache(ClassSet allowed) : allowed_(allowed) {}

    const std::vector<std::uint64_t>& get(std::size_t size, std::uint64_t pattern) {
        auto [it, fresh] = cache_.try_emplace({size, pattern});
        if (fresh) {
            const Hypertournament shape = Hypertournament::from_mask(size, pattern);
            const std::size_t pairs = size * (size > 0 ? size - 1 : 0) / 2;
            for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << pairs); ++idx)
                if (type_admissible(shape, OnePointType::from_index(all_points(size), idx), allowed_))
                    it->second.push_back(idx);
        }
        return it->second;
    }

private:
    ClassSet allowed_;
    std::map<std::pair<std::size_t, std::uint64_t>, std::vector<std::uint64_t>> cache_;
};

std::vector<OnePointType> unrealized_types(const Hypertournament& h, ClassSet allowed, std::size_t depth,
                                           ExtensionReport* report) {
    if (depth > 6) throw BudgetExceeded("extension checks are capped at depth 6");
    AdmissibleCache cache(allowed);
    std::vector<OnePointType> missing;
    ExtensionReport r;
    std::vector<char> seen;
    for (std::size_t size = 0; size <= std::min(depth, h.size()); ++size) {
        const std::size_t pairs = size * (size > 0 ? size - 1 : 0) / 2;
        for (const auto& subset : subsets_of_size(h.size(), size)) {
            ++r.subsets;
            std::uint64_t pattern = 0;
            for (std::size_t t = 0; t < triple_count(size); ++t) {
                const TripleKey k = triple_from_index(t);
                if (h.r(subset[k.i], subset[k.j], subset[k.k])) pattern |= std::uint64_t{1} << t;
            }
            seen.assign(std::size_t{1} << pairs, 0);
            for (PointId x = 0; x < h.size(); ++x) {
                if (std::binary_search(subset.begin(), subset.end(), x)) continue;
                std::uint64_t idx = 0;
                std::size_t slot = 0;
                for (std::size_t i = 0; i < size; ++i)
                    for (std::size_t j = i + 1; j < size; ++j, ++slot)
                        if (h.r(x, subset[i], subset[j])) idx |= std::uint64_t{1} << slot;
                seen[idx] = 1;
            }
            for (std::uint64_t idx : cache.get(size, pattern)) {
                ++r.types;
                if (seen[idx]) continue;
                ++r.unrealized;
                missing.push_back(OnePointType::from_index(subset, idx));
                if (!r.first_missing) r.first_missing = missing.back();
            }
        }
    }
    if (report) *report = r;
    return missing;
}

} // namespace

ExtensionReport check_extension_property(const Hypertournament& h, ClassSet allowed, std::size_t depth) {
    ExtensionReport r;
    unrealized_types(h, allowed, depth, &r);
    return r;
}

bool is_amalgamation_class(ClassSet s) {
    using F = FourClass;
    return s == ClassSet::all() || s == ClassSet{F::C4, F::H4} || s == ClassSet{F::C4} || s == ClassSet{F::C4, F::O4};
}

GenericResult build_generic(std::size_t n, ClassSet allowed, std::size_t depth, std::uint64_t seed) {
    if (!is_amalgamation_class(allowed)) throw std::domain_error("class set " + allowed.name() + " has no amalgamation");
    std::mt19937_64 rng(seed);
    GenericResult out;
    Hypertournament h(0);

    auto add_point = [&](const std::map<std::pair<PointId, PointId>, bool>& want, std::uint64_t budget) {
        ConstraintSet cs;
        cs.declare_var("x");
        for (const auto& [pair, holds] : want) cs.add(Term::var("x"), Term::point(pair.first), Term::point(pair.second), holds);
        SolveOptions opts;
        opts.allowed = allowed;
        opts.value_seed = rng();
        opts.max_nodes = budget;
        ++out.solver_calls;
        return solve(h, cs, opts);
    };

    // seed structure: depth + 1 points, unconstrained
    while (h.size() < std::min(n, depth + 1)) {
        auto r = add_point({}, 0);
        if (!r.sat()) throw std::logic_error("class " + allowed.name() + " has no structure of size " + std::to_string(h.size() + 1));
        h = std::move(r.solution->model);
    }

    std::size_t cursor = 0; // round-robin position among unrealized types
    for (;;) {
        ExtensionReport rep;
        const auto missing = unrealized_types(h, allowed, depth, &rep);
        out.extension = rep;
        if (missing.empty() && !out.saturated_at) out.saturated_at = h.size();
        if (h.size() >= n) break;

        std::map<std::pair<PointId, PointId>, bool> want;
        std::optional<Hypertournament> next;
        if (!missing.empty()) {
            cursor %= missing.size();
            const std::size_t first = cursor;
            // realize the chosen type, then pack in further compatible ones
            std::size_t attempts = 0;
            for (std::size_t step = 0; step < missing.size() && attempts < 4096; ++step) {
                const OnePointType& t = missing[(first + step) % missing.size()];
                auto trial = want;
                bool clash = false;
                const auto& dom = t.domain();
                for (std::size_t i = 0; i < dom.size() && !clash; ++i)
                    for (std::size_t j = i + 1; j < dom.size(); ++j) {
                        const bool bit = t.r_with(dom[i], dom[j]);
                        auto [it, fresh] = trial.emplace(std::pair{dom[i], dom[j]}, bit);
                        if (!fresh && it->second != bit) {
                            clash = true;
                            break;
                        }
                    }
                if (clash) continue;
                ++attempts;
                SolveResult r;
                try {
                    r = add_point(trial, step == 0 ? 0 : 20000);
                } catch (const BudgetExceeded&) {
                    continue;
                }
                if (r.sat()) {
                    want = std::move(trial);
                    next = std::move(r.solution->model);
                } else if (step == 0) {
                    throw std::logic_error("admissible type failed to extend: class " + allowed.name());
                }
            }
            ++cursor;
        }
        // re-seed the unconstrained triples a few times; keep the fewest unrealized types
        std::size_t best = next ? unrealized_types(*next, allowed, depth, nullptr).size() : SIZE_MAX;
        for (int round = 0; round < 8 && best > 0; ++round) {
            auto r = add_point(want, 0);
            if (!r.sat()) continue;
            const std::size_t left = unrealized_types(r.solution->model, allowed, depth, nullptr).size();
            if (left < best) {
                best = left;
                next = std::move(r.solution->model);
            }
        }
        if (!next) throw std::logic_error("could not add a point");
        h = std::move(*next);
        ++out.points_added;
    }

    if (!in_constrained_class(h, allowed)) throw std::logic_error("generic structure left its class");
    out.structure = std::move(h);
    std::ostringstream msg;
    msg << "n=" << n << " class=" << allowed.name() << " depth=" << depth << " seed=" << seed << ": "
        << out.extension.types - out.extension.unrealized << " of " << out.extension.types << " admissible types over "
        << out.extension.subsets << " subsets realized";
    if (out.saturated_at) msg << "; extension property first held at " << *out.saturated_at << " points";
    if (!out.complete()) msg << "; incomplete, " << out.extension.unrealized << " types unrealized (n too small)";
    out.report = msg.str();
    return out;
}

} // namespace h4free
