#include "h4free/core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace h4free {

namespace {

void require_distinct_in_range(std::size_t n, std::initializer_list<PointId> pts) {
    for (auto it = pts.begin(); it != pts.end(); ++it) {
        if (*it >= n) {
            throw std::domain_error("point " + std::to_string(*it) + " out of range for " + std::to_string(n) +
                                    "-point structure");
        }
        for (auto jt = std::next(it); jt != pts.end(); ++jt) {
            if (*it == *jt) throw std::domain_error("repeated point " + std::to_string(*it));
        }
    }
}

std::size_t words_for(std::size_t triples) { return (triples + 63) / 64; }

} // namespace

TripleKey TripleKey::sorted(PointId a, PointId b, PointId c, bool* odd) {
    bool parity = false;
    if (a > b) { std::swap(a, b); parity = !parity; }
    if (b > c) { std::swap(b, c); parity = !parity; }
    if (a > b) { std::swap(a, b); parity = !parity; }
    if (odd != nullptr) *odd = parity;
    return {a, b, c};
}

std::size_t triple_index(PointId i, PointId j, PointId k) {
    const std::size_t ii = i, jj = j, kk = k;
    return kk * (kk - 1) * (kk - 2) / 6 + jj * (jj - 1) / 2 + ii;
}

std::size_t TripleKey::index() const { return triple_index(i, j, k); }

TripleKey triple_from_index(std::size_t index) {
    std::size_t k = 2;
    while (triple_count(k + 1) <= index) ++k;
    index -= triple_count(k);
    std::size_t j = 1;
    while ((j + 1) * j / 2 <= index) ++j;
    index -= j * (j - 1) / 2;
    return {static_cast<PointId>(index), static_cast<PointId>(j), static_cast<PointId>(k)};
}

// ---------------------------------------------------------------------------

Hypertournament::Hypertournament(std::size_t n, Orientation fill)
    : n_(n), bits_(words_for(triple_count(n)), fill == Orientation::Plus ? ~std::uint64_t{0} : 0) {
    const std::size_t t = triple_count(n);
    if (fill == Orientation::Plus && t % 64 != 0) bits_.back() &= (std::uint64_t{1} << (t % 64)) - 1;
}

Hypertournament Hypertournament::from_mask(std::size_t n, std::uint64_t mask) {
    if (triple_count(n) > 64) throw std::domain_error("from_mask: more than 64 triples");
    Hypertournament h(n);
    if (!h.bits_.empty()) {
        const std::size_t t = triple_count(n);
        h.bits_[0] = t == 64 ? mask : mask & ((std::uint64_t{1} << t) - 1);
    }
    return h;
}

Orientation Hypertournament::orient(const TripleKey& key) const {
    require_distinct_in_range(n_, {key.i, key.j, key.k});
    if (!(key.i < key.j && key.j < key.k)) throw std::domain_error("TripleKey not sorted");
    return orient_at(key.index());
}

void Hypertournament::set_orient(const TripleKey& key, Orientation o) {
    require_distinct_in_range(n_, {key.i, key.j, key.k});
    if (!(key.i < key.j && key.j < key.k)) throw std::domain_error("TripleKey not sorted");
    set_orient_at(key.index(), o);
}

void Hypertournament::set_orient_at(std::size_t index, Orientation o) {
    const std::uint64_t m = std::uint64_t{1} << (index & 63);
    if (o == Orientation::Plus) bits_[index >> 6] |= m;
    else bits_[index >> 6] &= ~m;
}

void Hypertournament::set_r(PointId a, PointId b, PointId c, bool holds) {
    require_distinct_in_range(n_, {a, b, c});
    bool odd = false;
    const TripleKey key = TripleKey::sorted(a, b, c, &odd);
    set_orient_at(key.index(), orientation_of(holds != odd));
}

bool Hypertournament::eval_r(PointId a, PointId b, PointId c) const {
    require_distinct_in_range(n_, {a, b, c});
    return r(a, b, c);
}

bool Hypertournament::r(PointId a, PointId b, PointId c) const {
    bool odd = false;
    const TripleKey key = TripleKey::sorted(a, b, c, &odd);
    return (orient_at(key.index()) == Orientation::Plus) != odd;
}

PointId Hypertournament::add_point() {
    const auto p = static_cast<PointId>(n_);
    ++n_;
    bits_.resize(words_for(triple_count(n_)), 0);
    return p;
}

Hypertournament Hypertournament::induced(const std::vector<PointId>& points) const {
    Hypertournament out(points.size());
    for (PointId k = 2; k < points.size(); ++k)
        for (PointId j = 1; j < k; ++j)
            for (PointId i = 0; i < j; ++i)
                out.set_orient_at(triple_index(i, j, k), orientation_of(eval_r(points[i], points[j], points[k])));
    return out;
}

Hypertournament Hypertournament::relabel(const std::vector<PointId>& perm) const {
    if (perm.size() != n_) throw std::domain_error("relabel: permutation size mismatch");
    std::vector<PointId> inverse(n_, 0);
    std::vector<bool> seen(n_, false);
    for (PointId p = 0; p < n_; ++p) {
        if (perm[p] >= n_ || seen[perm[p]]) throw std::domain_error("relabel: not a permutation");
        seen[perm[p]] = true;
        inverse[perm[p]] = p;
    }
    return induced(inverse);
}

PartialHypertournament Hypertournament::as_partial() const {
    PartialHypertournament p(n_);
    for (std::size_t t = 0; t < triple_count(n_); ++t) p.assign(triple_from_index(t), orient_at(t));
    return p;
}

// ---------------------------------------------------------------------------

void PartialHypertournament::assign(const TripleKey& key, Orientation o) {
    require_distinct_in_range(n_, {key.i, key.j, key.k});
    if (!(key.i < key.j && key.j < key.k)) throw std::invalid_argument("TripleKey not sorted");
    auto& cell = cells_[key.index()];
    if (cell.has_value()) {
        throw std::invalid_argument("triple " + std::to_string(key.i) + " " + std::to_string(key.j) + " " +
                                    std::to_string(key.k) + " assigned twice");
    }
    cell = o;
}

void PartialHypertournament::assign_r(PointId a, PointId b, PointId c, bool holds) {
    require_distinct_in_range(n_, {a, b, c});
    bool odd = false;
    const TripleKey key = TripleKey::sorted(a, b, c, &odd);
    assign(key, orientation_of(holds != odd));
}

std::size_t PartialHypertournament::assigned_count() const {
    return static_cast<std::size_t>(std::count_if(cells_.begin(), cells_.end(), [](const auto& c) { return c.has_value(); }));
}

PointId PartialHypertournament::add_point() {
    const auto p = static_cast<PointId>(n_);
    ++n_;
    cells_.resize(triple_count(n_));
    return p;
}

Hypertournament PartialHypertournament::to_total() const {
    Hypertournament h(n_);
    for (std::size_t t = 0; t < cells_.size(); ++t) {
        if (!cells_[t]) {
            const TripleKey key = triple_from_index(t);
            throw std::invalid_argument("structure is partial: triple " + std::to_string(key.i) + " " +
                                        std::to_string(key.j) + " " + std::to_string(key.k) + " unset");
        }
        h.set_orient_at(t, *cells_[t]);
    }
    return h;
}

// ---------------------------------------------------------------------------

LinearOrder LinearOrder::identity(std::size_t n) {
    std::vector<PointId> seq(n);
    std::iota(seq.begin(), seq.end(), PointId{0});
    return from_sequence(std::move(seq));
}

LinearOrder LinearOrder::from_sequence(std::vector<PointId> sequence) {
    LinearOrder order;
    order.rank_.assign(sequence.size(), sequence.size());
    for (std::size_t pos = 0; pos < sequence.size(); ++pos) {
        const PointId p = sequence[pos];
        if (p >= sequence.size() || order.rank_[p] != sequence.size())
            throw std::domain_error("linear order is not a permutation");
        order.rank_[p] = pos;
    }
    order.sequence_ = std::move(sequence);
    return order;
}

bool Hypergraph3::has_edge(PointId a, PointId b, PointId c) const {
    std::array<PointId, 3> e{a, b, c};
    std::sort(e.begin(), e.end());
    return edges.contains(e);
}

Hypergraph3 encode(const Hypertournament& h, const LinearOrder& order) {
    if (order.size() != h.size()) throw std::domain_error("encode: order size mismatch");
    Hypergraph3 g{h.size(), {}};
    const auto& seq = order.sequence();
    for (std::size_t x = 0; x < seq.size(); ++x)
        for (std::size_t y = x + 1; y < seq.size(); ++y)
            for (std::size_t z = y + 1; z < seq.size(); ++z)
                if (h.r(seq[x], seq[y], seq[z])) {
                    std::array<PointId, 3> e{seq[x], seq[y], seq[z]};
                    std::sort(e.begin(), e.end());
                    g.edges.insert(e);
                }
    return g;
}

Hypertournament decode(const Hypergraph3& g, const LinearOrder& order) {
    if (order.size() != g.n) throw std::domain_error("decode: order size mismatch");
    Hypertournament h(g.n);
    const auto& seq = order.sequence();
    for (std::size_t x = 0; x < seq.size(); ++x)
        for (std::size_t y = x + 1; y < seq.size(); ++y)
            for (std::size_t z = y + 1; z < seq.size(); ++z)
                h.set_r(seq[x], seq[y], seq[z], g.has_edge(seq[x], seq[y], seq[z]));
    return h;
}

// ---------------------------------------------------------------------------

std::string to_string(FourClass c) {
    switch (c) {
    case FourClass::C4: return "C4";
    case FourClass::O4: return "O4";
    case FourClass::H4: return "H4";
    }
    return "?";
}

ClassSet ClassSet::parse(const std::string& text) {
    ClassSet s;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::string tok = text.substr(pos, 2);
        if (tok == "c4" || tok == "C4") s.bits_ |= bit(FourClass::C4);
        else if (tok == "o4" || tok == "O4") s.bits_ |= bit(FourClass::O4);
        else if (tok == "h4" || tok == "H4") s.bits_ |= bit(FourClass::H4);
        else throw std::invalid_argument("unknown class set '" + text + "'");
        pos += 2;
        if (pos < text.size() && text[pos] == ',') ++pos;
    }
    if (s.bits_ == 0) throw std::invalid_argument("empty class set");
    return s;
}

std::string ClassSet::name() const {
    std::string out;
    for (FourClass c : {FourClass::C4, FourClass::O4, FourClass::H4})
        if (contains(c)) out += to_string(c) == "C4" ? "c4" : to_string(c) == "O4" ? "o4" : "h4";
    return out;
}

bool h4_conjunction_holds(const Hypertournament& h, const std::array<PointId, 4>& s) {
    std::array<PointId, 4> l = s;
    std::sort(l.begin(), l.end());
    do {
        const auto [a, b, c, d] = l;
        if (h.r(a, b, c) && h.r(a, c, d) && h.r(a, d, b) && h.r(b, d, c)) return true;
    } while (std::next_permutation(l.begin(), l.end()));
    return false;
}

FourClass classify_4set(const Hypertournament& h, const std::array<PointId, 4>& s) {
    require_distinct_in_range(h.size(), {s[0], s[1], s[2], s[3]});
    std::array<PointId, 4> q = s;
    std::sort(q.begin(), q.end());
    // Hyperedge parity under any one order decides O4.
    const int edges = int(h.r(q[0], q[1], q[2])) + int(h.r(q[0], q[1], q[3])) + int(h.r(q[0], q[2], q[3])) +
                      int(h.r(q[1], q[2], q[3]));
    if (edges % 2 == 1) return FourClass::O4;
    return h4_conjunction_holds(h, q) ? FourClass::H4 : FourClass::C4;
}

FourClass classify_4set(const Hypertournament& h, const std::vector<PointId>& s) {
    if (s.size() != 4) throw std::domain_error("classify_4set needs exactly 4 points, got " + std::to_string(s.size()));
    return classify_4set(h, std::array<PointId, 4>{s[0], s[1], s[2], s[3]});
}

FourClass four_class_of_pattern(unsigned pattern) {
    static const std::array<FourClass, 16> table = [] {
        std::array<FourClass, 16> t{};
        for (unsigned m = 0; m < 16; ++m) t[m] = classify_4set(Hypertournament::from_mask(4, m), std::array<PointId, 4>{0, 1, 2, 3});
        return t;
    }();
    return table.at(pattern & 15u);
}

namespace {

unsigned pattern_of(const Hypertournament& h, PointId a, PointId b, PointId c, PointId d) {
    // a < b < c < d
    return unsigned(h.orient_at(triple_index(a, b, c)) == Orientation::Plus) |
           unsigned(h.orient_at(triple_index(a, b, d)) == Orientation::Plus) << 1 |
           unsigned(h.orient_at(triple_index(a, c, d)) == Orientation::Plus) << 2 |
           unsigned(h.orient_at(triple_index(b, c, d)) == Orientation::Plus) << 3;
}

template <typename F> bool for_each_4subset(std::size_t n, F&& f) {
    for (PointId d = 3; d < n; ++d)
        for (PointId c = 2; c < d; ++c)
            for (PointId b = 1; b < c; ++b)
                for (PointId a = 0; a < b; ++a)
                    if (!f(a, b, c, d)) return false;
    return true;
}

} // namespace

std::optional<std::array<PointId, 4>> first_violation(const Hypertournament& h, ClassSet allowed) {
    std::optional<std::array<PointId, 4>> best;
    // Lexicographically first violating subset.
    const std::size_t n = h.size();
    for (PointId a = 0; a < n && !best; ++a)
        for (PointId b = a + 1; b < n && !best; ++b)
            for (PointId c = b + 1; c < n && !best; ++c)
                for (PointId d = c + 1; d < n && !best; ++d)
                    if (!allowed.contains(four_class_of_pattern(pattern_of(h, a, b, c, d)))) best = {{a, b, c, d}};
    return best;
}

bool in_constrained_class(const Hypertournament& h, ClassSet allowed) {
    return for_each_4subset(h.size(), [&](PointId a, PointId b, PointId c, PointId d) {
        return allowed.contains(four_class_of_pattern(pattern_of(h, a, b, c, d)));
    });
}

std::optional<std::array<PointId, 4>> find_h4(const Hypertournament& h) { return first_violation(h, ClassSet::h4_free()); }

bool is_h4_free(const Hypertournament& h) { return in_constrained_class(h, ClassSet::h4_free()); }

ClassTally tally_classes(const Hypertournament& h) {
    ClassTally t;
    for_each_4subset(h.size(), [&](PointId a, PointId b, PointId c, PointId d) {
        switch (four_class_of_pattern(pattern_of(h, a, b, c, d))) {
        case FourClass::C4: ++t.c4; break;
        case FourClass::O4: ++t.o4; break;
        case FourClass::H4: ++t.h4; break;
        }
        return true;
    });
    return t;
}

std::vector<std::array<PointId, 4>> all_4subsets(std::size_t n) {
    std::vector<std::array<PointId, 4>> out;
    for (PointId a = 0; a < n; ++a)
        for (PointId b = a + 1; b < n; ++b)
            for (PointId c = b + 1; c < n; ++c)
                for (PointId d = c + 1; d < n; ++d) out.push_back({a, b, c, d});
    return out;
}

// ---------------------------------------------------------------------------

QfType qf_type(const Hypertournament& h, const std::vector<PointId>& tuple, const std::vector<PointId>& base) {
    QfType t;
    t.arity = tuple.size();
    t.base = base;
    std::sort(t.base.begin(), t.base.end());
    t.base.erase(std::unique(t.base.begin(), t.base.end()), t.base.end());
    for (PointId p : t.base)
        if (p >= h.size()) throw std::domain_error("qf_type: base point out of range");
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] >= h.size()) throw std::domain_error("qf_type: tuple point out of range");
        for (std::size_t j = i + 1; j < tuple.size(); ++j)
            if (tuple[i] == tuple[j]) throw std::domain_error("qf_type: repeated tuple point");
    }

    std::vector<std::pair<Slot, PointId>> slots;
    t.equals.assign(tuple.size(), std::nullopt);
    for (std::size_t i = 0; i < tuple.size(); ++i) {
        slots.emplace_back(Slot::tuple(static_cast<PointId>(i)), tuple[i]);
        if (std::binary_search(t.base.begin(), t.base.end(), tuple[i])) t.equals[i] = tuple[i];
    }
    for (PointId p : t.base)
        if (std::find(tuple.begin(), tuple.end(), p) == tuple.end()) slots.emplace_back(Slot::base(p), p);
    std::sort(slots.begin(), slots.end());

    for (std::size_t x = 0; x < slots.size(); ++x)
        for (std::size_t y = x + 1; y < slots.size(); ++y)
            for (std::size_t z = y + 1; z < slots.size(); ++z) {
                if (slots[x].first.kind != Slot::Kind::Tuple && slots[y].first.kind != Slot::Kind::Tuple &&
                    slots[z].first.kind != Slot::Kind::Tuple)
                    continue;
                t.atoms.push_back({{slots[x].first, slots[y].first, slots[z].first},
                                   h.r(slots[x].second, slots[y].second, slots[z].second)});
            }
    std::sort(t.atoms.begin(), t.atoms.end());
    return t;
}

// ---------------------------------------------------------------------------

namespace {

// Out-degree sequence of the link tournament b -> c iff R(p, b, c).
std::vector<std::size_t> link_signature(const Hypertournament& h, PointId p) {
    std::vector<std::size_t> deg;
    for (PointId b = 0; b < h.size(); ++b) {
        if (b == p) continue;
        std::size_t d = 0;
        for (PointId c = 0; c < h.size(); ++c)
            if (c != p && c != b && h.r(p, b, c)) ++d;
        deg.push_back(d);
    }
    std::sort(deg.begin(), deg.end());
    return deg;
}

bool extend_iso(const Hypertournament& a, const Hypertournament& b, const std::vector<std::vector<std::size_t>>& sa,
                const std::vector<std::vector<std::size_t>>& sb, std::vector<PointId>& map, std::vector<bool>& used,
                PointId next) {
    if (next == a.size()) return true;
    for (PointId cand = 0; cand < b.size(); ++cand) {
        if (used[cand] || sa[next] != sb[cand]) continue;
        bool ok = true;
        for (PointId x = 0; x < next && ok; ++x)
            for (PointId y = x + 1; y < next && ok; ++y)
                ok = a.r(x, y, next) == b.r(map[x], map[y], cand);
        if (!ok) continue;
        map[next] = cand;
        used[cand] = true;
        if (extend_iso(a, b, sa, sb, map, used, next + 1)) return true;
        used[cand] = false;
    }
    return false;
}

} // namespace

std::optional<std::vector<PointId>> find_isomorphism(const Hypertournament& a, const Hypertournament& b,
                                                     std::size_t max_points) {
    if (a.size() > max_points || b.size() > max_points)
        throw BudgetExceeded("find_isomorphism: too large (" + std::to_string(std::max(a.size(), b.size())) +
                             " points, cap " + std::to_string(max_points) + ")");
    if (a.size() != b.size()) return std::nullopt;
    std::vector<std::vector<std::size_t>> sa, sb;
    for (PointId p = 0; p < a.size(); ++p) {
        sa.push_back(link_signature(a, p));
        sb.push_back(link_signature(b, p));
    }
    {
        auto ma = sa, mb = sb;
        std::sort(ma.begin(), ma.end());
        std::sort(mb.begin(), mb.end());
        if (ma != mb) return std::nullopt;
    }
    std::vector<PointId> map(a.size(), 0);
    std::vector<bool> used(b.size(), false);
    if (!extend_iso(a, b, sa, sb, map, used, 0)) return std::nullopt;
    return map;
}

// ---------------------------------------------------------------------------

OnePointType::OnePointType(std::vector<PointId> domain, std::vector<bool> bits)
    : domain_(std::move(domain)), bits_(std::move(bits)) {
    if (!std::is_sorted(domain_.begin(), domain_.end()) ||
        std::adjacent_find(domain_.begin(), domain_.end()) != domain_.end())
        throw std::domain_error("OnePointType: domain must be sorted and distinct");
    const std::size_t m = domain_.size();
    if (bits_.size() != m * (m - (m > 0 ? 1 : 0)) / 2)
        throw std::domain_error("OnePointType: incomplete type (" + std::to_string(bits_.size()) + " of " +
                                std::to_string(m * (m > 0 ? m - 1 : 0) / 2) + " pairs)");
}

OnePointType OnePointType::read_off(const Hypertournament& h, PointId p, std::vector<PointId> domain) {
    std::sort(domain.begin(), domain.end());
    std::vector<bool> bits;
    for (std::size_t x = 0; x < domain.size(); ++x)
        for (std::size_t y = x + 1; y < domain.size(); ++y) bits.push_back(h.eval_r(p, domain[x], domain[y]));
    return {std::move(domain), std::move(bits)};
}

OnePointType OnePointType::from_index(std::vector<PointId> domain, std::uint64_t index) {
    std::sort(domain.begin(), domain.end());
    const std::size_t m = domain.size();
    const std::size_t pairs = m * (m > 0 ? m - 1 : 0) / 2;
    if (pairs > 63) throw BudgetExceeded("OnePointType::from_index: domain too large");
    std::vector<bool> bits(pairs);
    for (std::size_t t = 0; t < pairs; ++t) bits[t] = (index >> t) & 1u;
    return {std::move(domain), std::move(bits)};
}

std::size_t OnePointType::pair_slot(PointId a, PointId b, bool* swapped) const {
    auto ia = std::lower_bound(domain_.begin(), domain_.end(), a);
    auto ib = std::lower_bound(domain_.begin(), domain_.end(), b);
    if (a == b || ia == domain_.end() || *ia != a || ib == domain_.end() || *ib != b)
        throw std::domain_error("OnePointType: pair outside domain");
    std::size_t p = static_cast<std::size_t>(ia - domain_.begin());
    std::size_t q = static_cast<std::size_t>(ib - domain_.begin());
    *swapped = p > q;
    if (p > q) std::swap(p, q);
    const std::size_t m = domain_.size();
    return p * m - p * (p + 1) / 2 + (q - p - 1);
}

bool OnePointType::r_with(PointId a, PointId b) const {
    bool swapped = false;
    const std::size_t s = pair_slot(a, b, &swapped);
    return bits_[s] != swapped;
}

void OnePointType::set_r_with(PointId a, PointId b, bool holds) {
    bool swapped = false;
    const std::size_t s = pair_slot(a, b, &swapped);
    bits_[s] = holds != swapped;
}

} // namespace h4free
