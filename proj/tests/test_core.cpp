#include "fixtures.hpp"
#include "h4free/core.hpp"

#include <doctest.h>

#include <map>

using namespace h4free;
using namespace h4free::testing;

namespace {

// Independent description of the classes via hyperedge counts under every
// linear order (test-only oracle).
int edges_under(const Hypertournament& h, const std::array<PointId, 4>& seq) {
    int e = 0;
    for (int x = 0; x < 4; ++x)
        for (int y = x + 1; y < 4; ++y)
            for (int z = y + 1; z < 4; ++z) e += h.r(seq[x], seq[y], seq[z]);
    return e;
}

// Edges present under `seq` order, as position triples.
std::vector<std::array<int, 3>> edges_at(const Hypertournament& h, const std::array<PointId, 4>& seq) {
    std::vector<std::array<int, 3>> out;
    for (int x = 0; x < 4; ++x)
        for (int y = x + 1; y < 4; ++y)
            for (int z = y + 1; z < 4; ++z)
                if (h.r(seq[x], seq[y], seq[z])) out.push_back({x, y, z});
    return out;
}

// Two edges meeting in positions p<q; returns the number of positions strictly between.
std::optional<int> between_of_shared_pair(const std::vector<std::array<int, 3>>& e) {
    if (e.size() != 2) return std::nullopt;
    std::vector<int> shared;
    for (int v : e[0])
        if (std::find(e[1].begin(), e[1].end(), v) != e[1].end()) shared.push_back(v);
    if (shared.size() != 2) return std::nullopt;
    return shared[1] - shared[0] - 1;
}

bool order_based_h4(const Hypertournament& h) {
    std::array<PointId, 4> seq{0, 1, 2, 3};
    do {
        auto b = between_of_shared_pair(edges_at(h, seq));
        if (!b || *b != 1) return false;
    } while (std::next_permutation(seq.begin(), seq.end()));
    return true;
}

bool order_based_c4(const Hypertournament& h) {
    std::array<PointId, 4> seq{0, 1, 2, 3};
    do {
        const auto e = edges_at(h, seq);
        if (e.size() == 4 || e.empty()) return true;
        if (auto b = between_of_shared_pair(e); b && *b == 0) return true;
    } while (std::next_permutation(seq.begin(), seq.end()));
    return false;
}

} // namespace

TEST_CASE("eval_r follows the sorted orientation and permutation parity") {
    Hypertournament h(3);
    h.set_orient({0, 1, 2}, Orientation::Plus);
    CHECK(h.eval_r(0, 1, 2));
    CHECK(h.eval_r(1, 2, 0));
    CHECK_FALSE(h.eval_r(0, 2, 1));

    CHECK_THROWS_AS((void)h.eval_r(0, 0, 1), std::domain_error);
    CHECK_THROWS_AS((void)h.eval_r(0, 1, 3), std::domain_error);
}

TEST_CASE("axioms hold on random structures") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto h = random_structure(3 + trial % 6, rng);
        const auto n = static_cast<PointId>(h.size());
        for (PointId a = 0; a < n; ++a)
            for (PointId b = 0; b < n; ++b)
                for (PointId c = 0; c < n; ++c) {
                    if (a == b || b == c || a == c) continue;
                    const bool v = h.eval_r(a, b, c);
                    REQUIRE(v == h.eval_r(b, c, a));
                    REQUIRE(v == h.eval_r(c, a, b));
                    REQUIRE(v != h.eval_r(a, c, b));
                }
    }
}

TEST_CASE("triple index round trips") {
    std::size_t t = 0;
    for (PointId k = 2; k < 12; ++k)
        for (PointId j = 1; j < k; ++j)
            for (PointId i = 0; i < j; ++i) {
                const auto key = triple_from_index(triple_index(i, j, k));
                CHECK(key == TripleKey{i, j, k});
                ++t;
            }
    CHECK(t == triple_count(12));
}

TEST_CASE("encode and decode") {
    SUBCASE("H4-canonical under the natural order") {
        const auto g = encode(h4_canonical(), LinearOrder::identity(4));
        CHECK(g.edges == std::set<std::array<PointId, 3>>{{0, 1, 2}, {0, 2, 3}});
    }
    SUBCASE("all-Plus is complete") {
        CHECK(encode(Hypertournament(4, Orientation::Plus), LinearOrder::identity(4)).edges.size() == 4);
    }
    SUBCASE("empty edge set decodes to R false along the order") {
        const auto ord = LinearOrder::from_sequence({2, 0, 3, 1});
        const auto h = decode(Hypergraph3{4, {}}, ord);
        for (std::size_t x = 0; x < 4; ++x)
            for (std::size_t y = x + 1; y < 4; ++y)
                for (std::size_t z = y + 1; z < 4; ++z) CHECK_FALSE(h.eval_r(ord.at(x), ord.at(y), ord.at(z)));
    }
    SUBCASE("a single edge decodes to O4") {
        const auto h = decode(Hypergraph3{4, {{0, 1, 2}}}, LinearOrder::identity(4));
        CHECK(classify_4set(h, std::array<PointId, 4>{0, 1, 2, 3}) == FourClass::O4);
    }
    SUBCASE("round trip on random structures and orders") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 3 + trial % 6;
            const auto h = random_structure(n, rng);
            const auto ord = LinearOrder::from_sequence(random_permutation(n, rng));
            const auto g = encode(h, ord);
            REQUIRE(decode(g, ord) == h);
            REQUIRE(encode(decode(g, ord), ord) == g);
        }
    }
    CHECK_THROWS_AS(LinearOrder::from_sequence({0, 0, 1}), std::domain_error);
}

TEST_CASE("classification of the three 4-point structures") {
    CHECK(classify_4set(h4_canonical(), std::array<PointId, 4>{0, 1, 2, 3}) == FourClass::H4);
    CHECK(classify_4set(Hypertournament(4, Orientation::Plus), std::array<PointId, 4>{0, 1, 2, 3}) == FourClass::C4);
    CHECK(classify_4set(Hypertournament::from_mask(4, 0b0001), std::array<PointId, 4>{0, 1, 2, 3}) == FourClass::O4);
    CHECK(h4_conjunction_holds(h4_canonical(), {0, 1, 2, 3}));

    CHECK_THROWS_AS(classify_4set(h4_canonical(), std::vector<PointId>{0, 1, 2}), std::domain_error);
    CHECK_THROWS_AS(classify_4set(h4_canonical(), std::array<PointId, 4>{0, 1, 2, 2}), std::domain_error);
}

TEST_CASE("classification agrees with the order-based description on all 16 patterns") {
    std::map<FourClass, int> counts;
    for (unsigned m = 0; m < 16; ++m) {
        const auto h = Hypertournament::from_mask(4, m);
        const FourClass c = classify_4set(h, std::array<PointId, 4>{0, 1, 2, 3});
        ++counts[c];
        CHECK(four_class_of_pattern(m) == c);

        // parity is order invariant
        std::array<PointId, 4> seq{0, 1, 2, 3};
        const int parity = edges_under(h, seq) % 2;
        do {
            CHECK(edges_under(h, seq) % 2 == parity);
        } while (std::next_permutation(seq.begin(), seq.end()));

        const bool o4 = parity == 1;
        const bool h4 = order_based_h4(h);
        const bool c4 = order_based_c4(h);
        CHECK(int(o4) + int(h4) + int(c4) == 1);
        CHECK((c == FourClass::O4) == o4);
        CHECK((c == FourClass::H4) == h4);
        CHECK((c == FourClass::C4) == c4);
    }
    CHECK(counts[FourClass::C4] == 6);
    CHECK(counts[FourClass::O4] == 8);
    CHECK(counts[FourClass::H4] == 2);
}

TEST_CASE("H4-freeness and constrained classes") {
    CHECK_FALSE(is_h4_free(h4_canonical()));
    CHECK(find_h4(h4_canonical()) == std::array<PointId, 4>{0, 1, 2, 3});
    CHECK(is_h4_free(Hypertournament(3)));
    CHECK(is_h4_free(Hypertournament(0)));
    CHECK(in_constrained_class(h4_canonical(), ClassSet::all()));
    CHECK_FALSE(in_constrained_class(h4_canonical(), ClassSet::h4_free()));
    CHECK(in_constrained_class(Hypertournament(5, Orientation::Plus), ClassSet{FourClass::C4}));

    const auto t = tally_classes(Hypertournament(5, Orientation::Plus));
    CHECK(t.c4 == 5);
    CHECK(t.total() == 5);
}

TEST_CASE("the R(a,b,c) and R(a,b,d) criterion rules out H4") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const auto h = random_structure(4, rng);
        const auto perm = random_permutation(4, rng);
        const PointId a = perm[0], b = perm[1], c = perm[2], d = perm[3];
        if (h.r(a, b, c) && h.r(a, b, d)) CHECK(classify_4set(h, std::array<PointId, 4>{a, b, c, d}) != FourClass::H4);
    }
}

TEST_CASE("classification is isomorphism invariant") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto h = random_structure(6, rng);
        const auto perm = random_permutation(6, rng);
        const auto g = h.relabel(perm);
        for (const auto& s : all_4subsets(6)) {
            const std::array<PointId, 4> img{perm[s[0]], perm[s[1]], perm[s[2]], perm[s[3]]};
            REQUIRE(classify_4set(h, s) == classify_4set(g, img));
        }
    }
}

TEST_CASE("qf_type") {
    std::mt19937_64 rng(23);
    const auto h = random_structure(6, rng);
    CHECK(qf_type(h, {3}, {}).atoms.empty());
    CHECK(qf_type(h, {3, 4}, {}).atoms.empty());
    CHECK(qf_type(h, {3, 4}, {0}).atoms.size() == 1);
    CHECK(qf_type(h, {3}, {0, 1, 2}).atoms.size() == 3);

    SUBCASE("relabeling that fixes the base preserves the type") {
        for (int trial = 0; trial < 50; ++trial) {
            const auto g = random_structure(7, rng);
            // permute points 3..6, fix 0..2
            std::vector<PointId> perm{0, 1, 2, 3, 4, 5, 6};
            std::shuffle(perm.begin() + 3, perm.end(), rng);
            const auto moved = g.relabel(perm);
            CHECK(qf_type(g, {3, 5}, {0, 1, 2}) == qf_type(moved, {perm[3], perm[5]}, {0, 1, 2}));
        }
    }
    SUBCASE("tuple points inside the base are recorded as equalities") {
        const auto t = qf_type(h, {1}, {1, 2});
        REQUIRE(t.equals.size() == 1);
        CHECK(t.equals[0] == PointId{1});
        CHECK(qf_type(h, {3}, {1, 2}).equals[0] == std::nullopt);
    }
    CHECK_THROWS_AS(qf_type(h, {1, 1}, {}), std::domain_error);
}

TEST_CASE("find_isomorphism") {
    const auto h4 = h4_canonical();
    auto self = find_isomorphism(h4, h4);
    REQUIRE(self);
    std::vector<PointId> perm{0, 1, 2, 3};
    int found = 0;
    do {
        const auto g = h4.relabel(perm);
        auto iso = find_isomorphism(h4, g);
        REQUIRE(iso);
        for (PointId a = 0; a < 4; ++a)
            for (PointId b = 0; b < 4; ++b)
                for (PointId c = 0; c < 4; ++c)
                    if (a != b && b != c && a != c) CHECK(h4.r(a, b, c) == g.r((*iso)[a], (*iso)[b], (*iso)[c]));
        ++found;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(found == 24);
    CHECK_FALSE(find_isomorphism(h4, Hypertournament(4, Orientation::Plus)));
    CHECK_FALSE(find_isomorphism(h4, Hypertournament(5)));
    CHECK_THROWS_AS(find_isomorphism(Hypertournament(9), Hypertournament(9)), BudgetExceeded);

    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = random_structure(7, rng);
        const auto p = random_permutation(7, rng);
        auto iso = find_isomorphism(g, g.relabel(p));
        REQUIRE(iso);
        CHECK(g.relabel(*iso) == g.relabel(p));
    }
}

TEST_CASE("OnePointType") {
    std::mt19937_64 rng(31);
    const auto h = random_structure(6, rng);
    const auto t = OnePointType::read_off(h, 5, {0, 2, 3});
    CHECK(t.pair_count() == 3);
    CHECK(t.r_with(0, 2) == h.r(5, 0, 2));
    CHECK(t.r_with(3, 0) == h.r(5, 3, 0));
    CHECK_THROWS_AS((void)t.r_with(0, 1), std::domain_error);
    CHECK_THROWS_AS(OnePointType({0, 1, 2}, {true}), std::domain_error);

    CHECK(OnePointType::from_index({0, 1, 2}, 0b101).r_with(0, 1));
    CHECK_FALSE(OnePointType::from_index({0, 1, 2}, 0b101).r_with(0, 2));
    CHECK(OnePointType::from_index({0, 1, 2}, 0b101).r_with(1, 2));
}

TEST_CASE("class set parsing") {
    CHECK(ClassSet::parse("c4o4") == ClassSet::h4_free());
    CHECK(ClassSet::parse("c4o4h4") == ClassSet::all());
    CHECK(ClassSet::parse("c4h4") == ClassSet{FourClass::C4, FourClass::H4});
    CHECK(ClassSet::parse("c4").name() == "c4");
    CHECK_THROWS_AS(ClassSet::parse("x4"), std::invalid_argument);
}
