#pragma once

// Strong amalgamation and finite approximations of generic structures.

#include "h4free/core.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace h4free {

/// Injective map from the points of a source structure into a target: source p goes to map[p].
struct Embedding {
    std::vector<PointId> map;

    static Embedding identity(std::size_t n);
    bool operator==(const Embedding&) const = default;
};

bool is_embedding(const Hypertournament& source, const Hypertournament& target, const Embedding& f);

/// Amalgam of A·b1 and A·b2 over A, where bi realizes ti over all of A.
/// b1 gets id |A|, b2 gets id |A|+1, and R(b1, b2, a) holds for every a in A.
/// Throws std::domain_error if A is not H4-free, a type does not cover A, or
/// a one-point extension leaves the class.
Hypertournament amalgamate_one_point(const Hypertournament& a, const OnePointType& t1, const OnePointType& t2);

struct Amalgam {
    Hypertournament c;
    Embedding g1, g2;
};

/// Strong amalgam of B1 and B2 over A along f1, f2. Points of C: A first (in A's order),
/// then B1's new points, then B2's new points. Triples meeting both new parts are
/// non-edges for the order (B1's new points, reversed) < A < (B2's new points).
/// Throws std::domain_error on non-embeddings or inputs that are not H4-free.
Amalgam strong_amalgamate(const Hypertournament& a, const Hypertournament& b1, const Hypertournament& b2,
                          const Embedding& f1, const Embedding& f2);

/// Whether a point realizing t over its domain keeps every 4-subset of domain ∪ {x} in `allowed`.
bool type_admissible(const Hypertournament& h, const OnePointType& t, ClassSet allowed);

/// All admissible types over `domain` (sorted), in index order. Throws BudgetExceeded for |domain| > 6.
std::vector<OnePointType> enumerate_one_point_types(const Hypertournament& h, const std::vector<PointId>& domain,
                                                    ClassSet allowed);

/// Least point outside the domain realizing t, or none (also none when t is not admissible).
std::optional<PointId> realize_type(const Hypertournament& h, const OnePointType& t, ClassSet allowed);

struct ExtensionReport {
    std::size_t subsets = 0;    ///< subsets of size <= depth examined
    std::size_t types = 0;      ///< admissible types over them
    std::size_t unrealized = 0; ///< of which no point realizes
    std::optional<OnePointType> first_missing;
    bool holds() const { return unrealized == 0; }
};

/// Checks that every admissible type over every subset of size <= depth is realized.
ExtensionReport check_extension_property(const Hypertournament& h, ClassSet allowed, std::size_t depth);

struct GenericResult {
    Hypertournament structure;
    ExtensionReport extension;
    std::size_t points_added = 0; ///< points added after the seed structure
    std::size_t solver_calls = 0;
    /// Size at which the extension property first held, if it did within n points.
    std::optional<std::size_t> saturated_at;
    std::string report;
    bool complete() const { return extension.holds(); }
};

/// Grows an `allowed`-constrained structure on n points, realizing unrealized types over
/// subsets of size <= depth one new point at a time. Deterministic in seed. When n is too
/// small the result is partial and `report` says how many types are still missing.
/// Throws std::domain_error for class sets without amalgamation.
GenericResult build_generic(std::size_t n, ClassSet allowed, std::size_t depth, std::uint64_t seed);

/// The four class sets closed under amalgamation.
bool is_amalgamation_class(ClassSet s);

} // namespace h4free
