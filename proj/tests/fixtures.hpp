#pragma once

#include "h4free/core.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

namespace h4free::testing {

/// {012:+, 023:+, 013:-, 123:-}: R(0,1,2), R(0,2,3), R(0,3,1), R(1,3,2) all hold.
inline Hypertournament h4_canonical() { return Hypertournament::from_mask(4, 0b0101); }

inline Hypertournament random_structure(std::size_t n, std::mt19937_64& rng) {
    Hypertournament h(n);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t t = 0; t < triple_count(n); ++t) h.set_orient_at(t, coin(rng) ? Orientation::Plus : Orientation::Minus);
    return h;
}

/// Random H4-free structure grown point by point with rejection on each new point.
inline Hypertournament random_h4_free(std::size_t n, std::mt19937_64& rng) {
    Hypertournament h(std::min<std::size_t>(n, 3));
    std::bernoulli_distribution coin(0.5);
    for (std::size_t t = 0; t < triple_count(h.size()); ++t) h.set_orient_at(t, coin(rng) ? Orientation::Plus : Orientation::Minus);
    while (h.size() < n) {
        for (;;) {
            Hypertournament cand = h;
            const PointId x = cand.add_point();
            for (PointId a = 0; a < x; ++a)
                for (PointId b = a + 1; b < x; ++b) cand.set_r(x, a, b, coin(rng));
            if (is_h4_free(cand)) {
                h = std::move(cand);
                break;
            }
        }
    }
    return h;
}

inline std::vector<PointId> random_permutation(std::size_t n, std::mt19937_64& rng) {
    std::vector<PointId> p(n);
    std::iota(p.begin(), p.end(), PointId{0});
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

} // namespace h4free::testing
