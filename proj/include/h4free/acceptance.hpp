#pragma once

// Desk-scale acceptance suite A1..A13. Each criterion recomputes its expectations
// with brute-force oracles where the library would otherwise check itself.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace h4free {

struct CriterionResult {
    std::string id;
    std::string title;
    bool pass = false;
    std::string detail;
    double seconds = 0;

    /// "<id> PASS|FAIL <title>: <detail>"
    std::string line() const;
};

std::vector<std::string> acceptance_ids();

/// Runs the listed criteria (all when empty) in id order. `on_result` is called as each finishes.
std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only = {}, std::uint64_t seed = 20240601,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

} // namespace h4free
