#pragma once

// Explicit constructions for the classification properties (IP2, SOP3, TP2, NSOP4),
// the invariant extension template, the obstruction over the empty base, and the
// one-point back-and-forth step. Every structure emitted here is checked H4-free.

#include "h4free/core.hpp"
#include "h4free/solver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace h4free {

struct WitnessReport {
    std::string claim;
    bool pass = false;
    std::size_t solver_calls = 0;
    std::size_t completions_checked = 0;
    std::vector<std::string> details;
    std::optional<std::string> counterexample;
    /// Structure the claim is about; always present on failure.
    std::optional<Hypertournament> artifact;

    /// "CLAIM <id> PASS" or "CLAIM <id> FAIL".
    std::string line() const;
    /// line() followed by indented details and the counterexample.
    std::string text() const;
};

/// Merges sub-reports: passes iff all do; counts are summed.
WitnessReport combine(std::string claim, const std::vector<WitnessReport>& parts);

// --- IP2 -------------------------------------------------------------------

struct Ip2Witness {
    Hypertournament h;
    std::size_t n = 0;
    std::vector<PointId> x0, x1;
    std::vector<PointId> y; ///< y[mask]: subset I of the grid, cell (i,j) is bit i*n+j
};

/// Refuses (BudgetExceeded) when 2n + 2^(n*n) exceeds max_points.
std::pair<Ip2Witness, WitnessReport> ip2_build(std::size_t n, std::size_t max_points = 64);

// --- SOP3 ------------------------------------------------------------------

struct Sop3Witness {
    Hypertournament h;
    PointId a = 0, b = 1;
    std::vector<PointId> c;
};

/// phi(x, y) = R(x, y, a) and R(x, b, y).
bool sop3_phi(const Hypertournament& h, PointId x, PointId y, PointId a, PointId b);
/// Requires m >= 2.
std::pair<Sop3Witness, WitnessReport> sop3_build(std::size_t m);
/// The 3-cycle phi(x0,x1), phi(x1,x2), phi(x2,x0) over fresh a, b: solver and brute force.
WitnessReport sop3_cycle_check();

// --- TP2 -------------------------------------------------------------------

struct Tp2Witness {
    Hypertournament h;
    std::size_t rows = 0, cols = 0;
    static constexpr PointId e = 0, f = 1;
    PointId c(std::size_t i, std::size_t j) const { return static_cast<PointId>(2 + 2 * (i * cols + j)); }
    PointId d(std::size_t i, std::size_t j) const { return c(i, j) + 1; }
};

/// phi(x, (c,d)) over e, f as six literals on variable `x`.
void tp2_add_phi(ConstraintSet& cs, const std::string& x, PointId c, PointId d);
/// Requires rows*cols <= 16 (BudgetExceeded otherwise). Checks every same-row pair is
/// inconsistent and every path (one cell per row) is consistent.
std::pair<Tp2Witness, WitnessReport> tp2_build(std::size_t rows, std::size_t cols);

// --- NSOP4 -----------------------------------------------------------------

struct Nsop4Input {
    Hypertournament h;
    std::size_t m = 0, n = 0;
    std::vector<PointId> c, b0, b1;
    std::vector<bool> eps; ///< eps[(i*n + j)*n + k]: R(c_i, b0_j, b1_k)

    bool eps_at(std::size_t i, std::size_t j, std::size_t k) const { return eps[(i * n + j) * n + k]; }
};

/// Builds c, b0, b1 with equal types over c, b0 and b1 internally ordered by index,
/// and the eps pattern installed. Returns no input (and a failing report) if no
/// H4-free structure was found within the seeded attempts.
std::pair<std::optional<Nsop4Input>, WitnessReport> nsop4_make_input(std::size_t m, std::size_t n,
                                                                     const std::vector<bool>& eps, std::uint64_t seed);
/// Solves for b2*, then b3*, and checks the four links p(b0,b1), p(b1,b2*), p(b2*,b3*), p(b3*,b0).
WitnessReport nsop4_build_cycle(const Nsop4Input& input);

// --- invariant extension template --------------------------------------------

struct TemplateExtension {
    Hypertournament h;
    std::vector<PointId> tuple; ///< the realization of p
    WitnessReport report;
};

/// Extends h by a fresh tuple realizing p (a type over A of a tuple disjoint from A),
/// with R(x_i, a, b) for a in A, b outside A, and R(x_i, b1, b2) <-> R(astar_i, b1, b2).
/// Throws std::domain_error on empty A, astar outside A, arity mismatch, or a p that
/// does not describe a tuple disjoint from A over exactly A.
TemplateExtension invariant_extension_template(const Hypertournament& h, const std::vector<PointId>& a,
                                               const std::vector<PointId>& astar, const QfType& p);

// --- empty base ----------------------------------------------------------------

/// {R(x,a,b), R(x,b,a)} has no model; either literal alone has one.
WitnessReport empty_base_obstruction();

// --- one-point back-and-forth --------------------------------------------------------

struct Claim1Result {
    Hypertournament h; ///< input extended by a' (unchanged when bp = b)
    PointId a_prime = 0;
    WitnessReport report;
};

/// Given bp with the type of b over C, finds a' with the type of a over C+b such that
/// bp and b have the same type over C+a'. Throws std::domain_error on bad input.
Claim1Result claim1_witness(const Hypertournament& h, const std::vector<PointId>& c, PointId a, PointId b, PointId bp);

/// The same statement for the pair b = (c0,d0), bp = (c1,d1) of the 1x2 TP2 row is
/// inconsistent: passes iff the solver reports UNSAT.
WitnessReport claim1_pair_obstruction();

} // namespace h4free
