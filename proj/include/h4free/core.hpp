#pragma once

// Finite 3-hypertournaments: one orientation bit per sorted triple, with
// R evaluated through permutation parity. Cyclic invariance and reversal
// negation therefore hold by construction.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace h4free {

using PointId = std::uint32_t;

/// Thrown when a request exceeds a hard size or enumeration budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Orientation : std::uint8_t { Plus, Minus };

inline Orientation flip(Orientation o) {
    return o == Orientation::Plus ? Orientation::Minus : Orientation::Plus;
}

inline Orientation orientation_of(bool holds) { return holds ? Orientation::Plus : Orientation::Minus; }

/// Sorted support of an R-atom.
struct TripleKey {
    PointId i = 0, j = 0, k = 0;

    /// Sorts (a, b, c); `odd` receives the parity of the sorting permutation.
    static TripleKey sorted(PointId a, PointId b, PointId c, bool* odd = nullptr);

    /// Position in colexicographic order, so appending a point only appends keys.
    std::size_t index() const;

    auto operator<=>(const TripleKey&) const = default;
};

inline std::size_t triple_count(std::size_t n) { return n < 3 ? 0 : n * (n - 1) * (n - 2) / 6; }
std::size_t triple_index(PointId i, PointId j, PointId k);
TripleKey triple_from_index(std::size_t index);

class PartialHypertournament;

class Hypertournament {
public:
    Hypertournament() = default;
    /// All triples oriented `fill`.
    explicit Hypertournament(std::size_t n, Orientation fill = Orientation::Minus);

    /// Interprets bit t of `mask` (colex triple order) as Plus. Requires C(n,3) <= 64.
    static Hypertournament from_mask(std::size_t n, std::uint64_t mask);

    std::size_t size() const { return n_; }

    Orientation orient(const TripleKey& key) const;
    Orientation orient_at(std::size_t index) const { return (bits_[index >> 6] >> (index & 63)) & 1 ? Orientation::Plus : Orientation::Minus; }
    void set_orient(const TripleKey& key, Orientation o);
    void set_orient_at(std::size_t index, Orientation o);

    /// Sets the orientation so that R(a, b, c) holds (or fails).
    void set_r(PointId a, PointId b, PointId c, bool holds);

    /// R(a, b, c). Throws std::domain_error on repeated or out-of-range points.
    bool eval_r(PointId a, PointId b, PointId c) const;
    /// R(a, b, c) without argument checks.
    bool r(PointId a, PointId b, PointId c) const;

    /// Appends a fresh point; its triples start as Minus.
    PointId add_point();

    /// Induced substructure on `points`, relabelled 0..|points|-1 in the given order.
    Hypertournament induced(const std::vector<PointId>& points) const;

    /// Relabels: point p of *this becomes perm[p] in the result.
    Hypertournament relabel(const std::vector<PointId>& perm) const;

    PartialHypertournament as_partial() const;

    bool operator==(const Hypertournament&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> bits_;
};

class PartialHypertournament {
public:
    PartialHypertournament() = default;
    explicit PartialHypertournament(std::size_t n) : n_(n), cells_(triple_count(n)) {}

    std::size_t size() const { return n_; }
    std::optional<Orientation> get(const TripleKey& key) const { return cells_.at(key.index()); }
    std::optional<Orientation> get_at(std::size_t index) const { return cells_[index]; }

    /// Assigns an unset key; throws std::invalid_argument if already assigned.
    void assign(const TripleKey& key, Orientation o);
    void assign_r(PointId a, PointId b, PointId c, bool holds);
    void unassign(const TripleKey& key) { cells_.at(key.index()).reset(); }

    std::size_t assigned_count() const;
    bool is_total() const { return assigned_count() == cells_.size(); }

    PointId add_point();

    /// Throws std::invalid_argument unless every triple is assigned.
    Hypertournament to_total() const;

    bool operator==(const PartialHypertournament&) const = default;

private:
    std::size_t n_ = 0;
    std::vector<std::optional<Orientation>> cells_;
};

/// Bijection point -> position.
class LinearOrder {
public:
    static LinearOrder identity(std::size_t n);
    /// `sequence[k]` is the point at position k. Throws unless a permutation.
    static LinearOrder from_sequence(std::vector<PointId> sequence);

    std::size_t size() const { return sequence_.size(); }
    std::size_t rank(PointId p) const { return rank_.at(p); }
    PointId at(std::size_t position) const { return sequence_.at(position); }
    const std::vector<PointId>& sequence() const { return sequence_; }

private:
    std::vector<PointId> sequence_;
    std::vector<std::size_t> rank_;
};

struct Hypergraph3 {
    std::size_t n = 0;
    std::set<std::array<PointId, 3>> edges; ///< each edge stored sorted by id

    bool has_edge(PointId a, PointId b, PointId c) const;
    bool operator==(const Hypergraph3&) const = default;
};

/// Edge {a,b,c} present iff R(a,b,c) with a,b,c listed in increasing `order`.
Hypergraph3 encode(const Hypertournament& h, const LinearOrder& order);
/// Inverse of encode for the same order.
Hypertournament decode(const Hypergraph3& g, const LinearOrder& order);

enum class FourClass : std::uint8_t { C4, O4, H4 };

std::string to_string(FourClass c);

/// Subset of {C4, O4, H4}.
class ClassSet {
public:
    constexpr ClassSet() = default;
    constexpr ClassSet(std::initializer_list<FourClass> classes) {
        for (FourClass c : classes) bits_ |= bit(c);
    }

    static constexpr ClassSet all() { return {FourClass::C4, FourClass::O4, FourClass::H4}; }
    static constexpr ClassSet h4_free() { return {FourClass::C4, FourClass::O4}; }

    /// Accepts the CLI spellings: c4o4h4, c4h4, c4, c4o4 (and any other combination).
    static ClassSet parse(const std::string& text);

    constexpr bool contains(FourClass c) const { return (bits_ & bit(c)) != 0; }
    constexpr std::uint8_t bits() const { return bits_; }
    std::string name() const;

    constexpr bool operator==(const ClassSet&) const = default;

private:
    static constexpr std::uint8_t bit(FourClass c) { return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c)); }
    std::uint8_t bits_ = 0;
};

/// Classifies the 4-point substructure on `s`. Throws std::domain_error unless
/// `s` holds four distinct in-range points.
FourClass classify_4set(const Hypertournament& h, const std::array<PointId, 4>& s);
FourClass classify_4set(const Hypertournament& h, const std::vector<PointId>& s);

/// Class of a 4-point structure given its orientation bits on the sorted
/// points w<x<y<z: bit0 = wxy, bit1 = wxz, bit2 = wyz, bit3 = xyz (1 = Plus).
FourClass four_class_of_pattern(unsigned pattern);

/// True iff some labelling (a,b,c,d) of `s` has R(a,b,c), R(a,c,d), R(a,d,b), R(b,d,c).
bool h4_conjunction_holds(const Hypertournament& h, const std::array<PointId, 4>& s);

bool is_h4_free(const Hypertournament& h);
std::optional<std::array<PointId, 4>> find_h4(const Hypertournament& h);
bool in_constrained_class(const Hypertournament& h, ClassSet allowed);
/// First 4-subset (lexicographic) whose class is outside `allowed`.
std::optional<std::array<PointId, 4>> first_violation(const Hypertournament& h, ClassSet allowed);

struct ClassTally {
    std::size_t c4 = 0, o4 = 0, h4 = 0;
    std::size_t total() const { return c4 + o4 + h4; }
};
ClassTally tally_classes(const Hypertournament& h);

/// Position of a type atom: either a tuple coordinate or a base point.
struct Slot {
    enum class Kind : std::uint8_t { Tuple, Base };
    Kind kind = Kind::Tuple;
    PointId id = 0; ///< tuple coordinate or base point id

    static Slot tuple(PointId i) { return {Kind::Tuple, i}; }
    static Slot base(PointId p) { return {Kind::Base, p}; }
    auto operator<=>(const Slot&) const = default;
};

struct TypeAtom {
    std::array<Slot, 3> slots; ///< canonically sorted
    bool holds = false;        ///< R(slots[0], slots[1], slots[2])
    auto operator<=>(const TypeAtom&) const = default;
};

/// Quantifier-free type of a tuple over a base set. Equality of QfTypes is the
/// finite stand-in for equality of complete types, which is faithful because
/// the limit theory eliminates quantifiers.
struct QfType {
    std::size_t arity = 0;
    std::vector<PointId> base;                  ///< sorted, deduplicated
    std::vector<std::optional<PointId>> equals; ///< per coordinate: base point it coincides with
    std::vector<TypeAtom> atoms;                ///< sorted

    bool operator==(const QfType&) const = default;
};

/// Records every R-atom supported in tuple ∪ base that meets the tuple.
/// Throws std::domain_error on repeated tuple points or out-of-range ids.
QfType qf_type(const Hypertournament& h, const std::vector<PointId>& tuple, const std::vector<PointId>& base);

/// Throws BudgetExceeded when either structure has more than `max_points` points.
std::optional<std::vector<PointId>> find_isomorphism(const Hypertournament& a, const Hypertournament& b,
                                                     std::size_t max_points = 8);

/// One-point extension type: truth of R(x, a, b) for every pair a < b of `domain`.
class OnePointType {
public:
    OnePointType() = default;
    /// `domain` is sorted; `bits` has one entry per pair in lexicographic pair order.
    OnePointType(std::vector<PointId> domain, std::vector<bool> bits);

    /// The type realized by point p of h over `domain`.
    static OnePointType read_off(const Hypertournament& h, PointId p, std::vector<PointId> domain);
    /// The `index`-th of the 2^C(|domain|,2) candidate types.
    static OnePointType from_index(std::vector<PointId> domain, std::uint64_t index);

    const std::vector<PointId>& domain() const { return domain_; }
    std::size_t pair_count() const { return bits_.size(); }
    /// R(x, a, b) for distinct a, b in the domain, in either argument order.
    bool r_with(PointId a, PointId b) const;
    void set_r_with(PointId a, PointId b, bool holds);

    bool operator==(const OnePointType&) const = default;

private:
    std::size_t pair_slot(PointId a, PointId b, bool* swapped) const;
    std::vector<PointId> domain_;
    std::vector<bool> bits_;
};

std::vector<std::array<PointId, 4>> all_4subsets(std::size_t n);

} // namespace h4free
