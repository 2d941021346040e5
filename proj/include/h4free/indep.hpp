#pragma once

// The ht independence relation, ht-Morley sequences built from the invariant
// template, and survival of isolating formulas along them.

#include "h4free/core.hpp"
#include "h4free/witness.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace h4free {

/// A ⫫ht_C B: A ∩ B ⊆ C and R(a, c, b) for a in A∖C, c in C, b in B∖C.
bool ind_ht(const Hypertournament& h, const std::vector<PointId>& a, const std::vector<PointId>& b,
            const std::vector<PointId>& c);

/// Three points with R(0, 1, 2): {0} ⫫ht_{1} {2} holds and the reverse fails.
std::pair<Hypertournament, WitnessReport> asymmetry_witness();

struct MorleyConfig {
    Hypertournament h;
    std::vector<PointId> m;      ///< base set
    std::vector<PointId> b;      ///< first tuple, disjoint from m
    std::size_t length = 1;      ///< number of tuples, b included
    std::vector<PointId> anchor; ///< template tuple in m; empty means the first tuple of distinct
                                 ///< points of m with b's internal type, else m's first |b| points cycled
};

struct MorleyResult {
    Hypertournament h;                      ///< input plus the appended copies
    std::vector<std::vector<PointId>> seq;  ///< seq[0] = b
    WitnessReport report;
};

/// Appends copies b_1..b_{k-1}; each has the type of b over m, satisfies R(y, m, a)
/// for m in M and every earlier point a outside M, and copies the anchor's relations
/// to points outside M. Throws std::domain_error on empty m or b, b meeting m, or a
/// bad anchor.
MorleyResult build_ht_morley(const MorleyConfig& cfg);

/// Tuples disjoint from m, equal types over m, and R(m, b_{i,k}, b_{j,l}) for i < j.
bool is_ht_morley(const Hypertournament& h, const std::vector<PointId>& m,
                  const std::vector<std::vector<PointId>>& seq);

/// Builds a Morley sequence of length k from b over m, instantiates p (a type of some
/// tuple over m ∪ b) at every copy and solves the conjunction on the substructure
/// induced on m and the copies. A coordinate of p equal to a point of b is pinned to
/// that point's copy, so k >= 2 makes such a system UNSAT.
WitnessReport kim_survival(const Hypertournament& h, const std::vector<PointId>& m, const std::vector<PointId>& b,
                           const QfType& p, std::size_t k);

struct SweepSizes {
    std::size_t points = 9;
    std::size_t max_m = 4;
    std::size_t max_b = 2;
    std::size_t max_a = 2;
    std::size_t length = 4;
};

/// Random kim_survival instances with a ∩ b ⊆ m; passes iff every one is SAT.
WitnessReport conant_triviality_report(const SweepSizes& sizes, std::size_t trials, std::uint64_t seed);

} // namespace h4free
