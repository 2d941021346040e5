#pragma once

// Completion oracle: does a partial 3-hypertournament plus signed R-literals
// extend to a total structure whose 4-subsets all lie in a class set
// (H4-free by default)?

#include "h4free/core.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace h4free {

/// Argument of a literal: a point of the base structure or a named fresh variable.
struct Term {
    std::variant<PointId, std::string> ref;

    static Term point(PointId p) { return {p}; }
    static Term var(std::string name) { return {std::move(name)}; }
    bool is_point() const { return std::holds_alternative<PointId>(ref); }
    std::string str() const;

    bool operator==(const Term&) const = default;
};

/// R(args[0], args[1], args[2]) holds (sign Plus) or fails (sign Minus).
struct Literal {
    std::array<Term, 3> args;
    Orientation sign = Orientation::Plus;

    bool holds() const { return sign == Orientation::Plus; }
};

class ConstraintSet {
public:
    /// Declares a fresh point. Redeclaration throws std::invalid_argument.
    void declare_var(const std::string& name);
    bool has_var(const std::string& name) const;
    const std::vector<std::string>& variables() const { return vars_; }

    void add(Term a, Term b, Term c, bool holds);
    /// Shorthand for add(...) with explicit sign.
    void add(const Literal& lit);
    const std::vector<Literal>& literals() const { return lits_; }

    /// Id of a declared variable once placed after `base_size` points.
    PointId var_id(const std::string& name, std::size_t base_size) const;

private:
    std::vector<std::string> vars_;
    std::map<std::string, std::size_t> var_index_;
    std::vector<Literal> lits_;
};

struct SolveOptions {
    ClassSet allowed = ClassSet::h4_free();
    /// Forward checking: a 4-set with one open triple forces (or refutes) it.
    bool propagate = true;
    /// Decision-node budget; 0 means unlimited. Exceeding throws BudgetExceeded.
    std::uint64_t max_nodes = 0;
    /// When set, each decision tries a seeded pseudo-random value first instead of Plus.
    std::optional<std::uint64_t> value_seed;
};

struct SolveStats {
    std::uint64_t nodes = 0;
    std::uint64_t propagations = 0;
    std::uint64_t backtracks = 0;
};

struct Solution {
    Hypertournament model;                   ///< base points first, then variables in declaration order
    std::map<std::string, PointId> assignment; ///< variable -> point id in `model`
};

struct SolveResult {
    std::optional<Solution> solution;
    /// Set when UNSAT was detected before search (contradictory literals or a
    /// base that already violates the class).
    std::optional<std::string> conflict;
    SolveStats stats;

    bool sat() const { return solution.has_value(); }
};

/// Exhaustive depth-first search over open triples in lexicographic key order,
/// Plus first. Throws std::domain_error on unresolvable names, repeated
/// arguments or out-of-range points.
SolveResult solve(const PartialHypertournament& base, const ConstraintSet& cs, const SolveOptions& opts = {});

/// Convenience overload for a total base.
SolveResult solve(const Hypertournament& base, const ConstraintSet& cs, const SolveOptions& opts = {});

struct CompletionCount {
    std::uint64_t count = 0;      ///< satisfying completions found (truncated at cap)
    std::uint64_t enumerated = 0; ///< assignments visited
    std::size_t free_triples = 0;
    bool truncated = false;
};

/// Brute-force oracle: enumerates every orientation of the open triples.
/// Refuses (BudgetExceeded) above `max_free` open triples.
CompletionCount count_completions(const PartialHypertournament& base, const ConstraintSet& cs, std::uint64_t cap,
                                  ClassSet allowed = ClassSet::h4_free(), std::size_t max_free = 25);

/// The unique extension of h by one point of type t (t must cover all of h).
/// Returns nullopt when the extension leaves `allowed`.
std::optional<Hypertournament> extend_by_point(const Hypertournament& h, const OnePointType& t,
                                               ClassSet allowed = ClassSet::h4_free());

/// Adds one literal per atom of `p`, resolving slots through `term`. Atoms whose resolved
/// arguments repeat are skipped; returns how many were skipped.
std::size_t add_type_literals(ConstraintSet& cs, const QfType& p, const std::function<Term(const Slot&)>& term);

/// True iff `lit` holds in `h` after resolving variables through `assignment`.
bool literal_holds(const Hypertournament& h, const Literal& lit, const std::map<std::string, PointId>& assignment);

} // namespace h4free
