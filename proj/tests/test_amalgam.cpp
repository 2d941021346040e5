#include "fixtures.hpp"
#include "h4free/amalgam.hpp"
#include "h4free/solver.hpp"

#include <doctest.h>

using namespace h4free;
using namespace h4free::testing;

namespace {

OnePointType random_admissible(const Hypertournament& a, std::mt19937_64& rng, ClassSet s = ClassSet::h4_free()) {
    std::vector<PointId> dom(a.size());
    std::iota(dom.begin(), dom.end(), PointId{0});
    const auto types = enumerate_one_point_types(a, dom, s);
    return types[std::uniform_int_distribution<std::size_t>(0, types.size() - 1)(rng)];
}

/// A extended by k fresh points (ids |A|..), H4-free.
Hypertournament random_extension(const Hypertournament& a, std::size_t k, std::mt19937_64& rng) {
    ConstraintSet cs;
    for (std::size_t v = 0; v < k; ++v) cs.declare_var("x" + std::to_string(v));
    SolveOptions opts;
    opts.value_seed = rng();
    return solve(a, cs, opts).solution->model;
}

std::size_t edges_under_some_order_max(const Hypertournament& h, const std::array<PointId, 4>& s) {
    std::array<PointId, 4> perm = s;
    std::sort(perm.begin(), perm.end());
    std::size_t best = 0;
    do {
        std::size_t e = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j)
                for (int k = j + 1; k < 4; ++k) e += h.r(perm[i], perm[j], perm[k]);
        best = std::max(best, e);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

TEST_CASE("one-point amalgamation examples") {
    const auto c = amalgamate_one_point(Hypertournament(1), OnePointType({0}, {}), OnePointType({0}, {}));
    REQUIRE(c.size() == 3);
    CHECK(c.eval_r(1, 2, 0));

    std::mt19937_64 rng(3);
    const auto a = random_h4_free(3, rng);
    const auto t = random_admissible(a, rng);
    const auto same = amalgamate_one_point(a, t, t);
    CHECK(OnePointType::read_off(same, 3, {0, 1, 2}) == t);
    CHECK(OnePointType::read_off(same, 4, {0, 1, 2}) == t);
    CHECK(same.size() == 5);
}

TEST_CASE("one-point amalgamation: 500 random problems") {
    std::mt19937_64 rng(500);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
        const auto a = random_h4_free(m, rng);
        const auto t1 = random_admissible(a, rng), t2 = random_admissible(a, rng);
        const auto c = amalgamate_one_point(a, t1, t2);
        REQUIRE(c.size() == m + 2);
        CHECK(is_h4_free(c));
        std::vector<PointId> base(m);
        std::iota(base.begin(), base.end(), PointId{0});
        CHECK(c.induced(base) == a);
        CHECK(OnePointType::read_off(c, m, base) == t1);
        CHECK(OnePointType::read_off(c, m + 1, base) == t2);
        for (PointId p = 0; p < m; ++p) CHECK(c.eval_r(m, m + 1, p));
    }
}

TEST_CASE("one-point amalgamation preconditions") {
    CHECK_THROWS_AS(amalgamate_one_point(h4_canonical(), OnePointType::from_index({0, 1, 2, 3}, 0),
                                         OnePointType::from_index({0, 1, 2, 3}, 0)),
                    std::domain_error);
    Hypertournament a(3);
    CHECK_THROWS_AS(amalgamate_one_point(a, OnePointType({0, 1}, {true}), OnePointType::from_index({0, 1, 2}, 0)),
                    std::domain_error);
    // the type completing H4 over the first three points of the canonical H4
    const auto base = h4_canonical().induced({0, 1, 2});
    const auto bad = OnePointType::read_off(h4_canonical(), 3, {0, 1, 2});
    CHECK_THROWS_AS(amalgamate_one_point(base, bad, OnePointType::from_index({0, 1, 2}, 0)), std::domain_error);
}

TEST_CASE("strong amalgamation") {
    std::mt19937_64 rng(77);

    SUBCASE("identity embeddings give A back") {
        const auto a = random_h4_free(5, rng);
        const auto r = strong_amalgamate(a, a, a, Embedding::identity(5), Embedding::identity(5));
        CHECK(r.c == a);
        CHECK(r.g1 == Embedding::identity(5));
    }

    SUBCASE("one new point per side agrees with the one-point case") {
        for (int trial = 0; trial < 50; ++trial) {
            const auto a = random_h4_free(4, rng);
            const auto t1 = random_admissible(a, rng), t2 = random_admissible(a, rng);
            const auto b1 = *extend_by_point(a, t1), b2 = *extend_by_point(a, t2);
            const auto r = strong_amalgamate(a, b1, b2, Embedding::identity(4), Embedding::identity(4));
            CHECK(r.c == amalgamate_one_point(a, t1, t2));
        }
    }

    SUBCASE("200 random problems with relabelled sides") {
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t m = std::uniform_int_distribution<std::size_t>(0, 4)(rng);
            const std::size_t s1 = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
            const std::size_t s2 = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
            const auto a = random_h4_free(m, rng);
            const auto p1 = random_permutation(m + s1, rng), p2 = random_permutation(m + s2, rng);
            const auto b1 = random_extension(a, s1, rng).relabel(p1);
            const auto b2 = random_extension(a, s2, rng).relabel(p2);
            Embedding f1{{p1.begin(), p1.begin() + static_cast<std::ptrdiff_t>(m)}};
            Embedding f2{{p2.begin(), p2.begin() + static_cast<std::ptrdiff_t>(m)}};
            REQUIRE(is_embedding(a, b1, f1));
            REQUIRE(is_embedding(a, b2, f2));

            const auto r = strong_amalgamate(a, b1, b2, f1, f2);
            CHECK(r.c.size() == m + s1 + s2);
            CHECK(is_h4_free(r.c));
            CHECK(is_embedding(b1, r.c, r.g1));
            CHECK(is_embedding(b2, r.c, r.g2));
            std::set<PointId> img1, img2, common;
            for (PointId p = 0; p < m; ++p) {
                CHECK(r.g1.map[f1.map[p]] == r.g2.map[f2.map[p]]);
                common.insert(r.g1.map[f1.map[p]]);
            }
            img1.insert(r.g1.map.begin(), r.g1.map.end());
            img2.insert(r.g2.map.begin(), r.g2.map.end());
            std::set<PointId> meet;
            std::set_intersection(img1.begin(), img1.end(), img2.begin(), img2.end(), std::inserter(meet, meet.end()));
            CHECK(meet == common);

            // free amalgam: no hyperedge meets both new parts under new1 (reversed) < A < new2
            std::vector<PointId> seq;
            for (std::size_t j = s1; j-- > 0;) seq.push_back(static_cast<PointId>(m + j));
            for (PointId p = 0; p < m; ++p) seq.push_back(p);
            for (std::size_t j = 0; j < s2; ++j) seq.push_back(static_cast<PointId>(m + s1 + j));
            const auto g = encode(r.c, LinearOrder::from_sequence(seq));
            for (const auto& e : g.edges) {
                bool new1 = false, new2 = false;
                for (PointId p : e) {
                    new1 |= p >= m && p < m + s1;
                    new2 |= p >= m + s1;
                }
                CHECK_FALSE((new1 && new2));
            }
        }
    }

    SUBCASE("non-embeddings are rejected") {
        const auto a = Hypertournament(3, Orientation::Plus);
        const auto b = Hypertournament(3, Orientation::Minus);
        CHECK_FALSE(is_embedding(a, b, Embedding::identity(3)));
        CHECK_FALSE(is_embedding(a, a, Embedding{{0, 0, 1}}));
        CHECK_THROWS_AS(strong_amalgamate(a, b, a, Embedding::identity(3), Embedding::identity(3)), std::domain_error);
    }
}

TEST_CASE("one-point type enumeration") {
    std::mt19937_64 rng(12);
    const auto h = random_h4_free(7, rng);
    CHECK(enumerate_one_point_types(h, {2, 5}, ClassSet::h4_free()).size() == 2);
    CHECK(enumerate_one_point_types(h, {}, ClassSet::h4_free()).size() == 1);

    for (int trial = 0; trial < 20; ++trial) {
        const auto sub = random_permutation(7, rng);
        std::vector<PointId> dom(sub.begin(), sub.begin() + 3);
        std::sort(dom.begin(), dom.end());
        std::size_t brute = 0;
        for (std::uint64_t idx = 0; idx < 8; ++idx) {
            Hypertournament four = h.induced(dom);
            const PointId x = four.add_point();
            const auto t = OnePointType::from_index(dom, idx);
            four.set_r(x, 0, 1, t.r_with(dom[0], dom[1]));
            four.set_r(x, 0, 2, t.r_with(dom[0], dom[2]));
            four.set_r(x, 1, 2, t.r_with(dom[1], dom[2]));
            brute += classify_4set(four, std::array<PointId, 4>{0, 1, 2, 3}) != FourClass::H4;
        }
        CHECK(enumerate_one_point_types(h, dom, ClassSet::h4_free()).size() == brute);
        CHECK(brute == 7);
    }
    CHECK(enumerate_one_point_types(h, {0, 1, 2, 3, 4}, ClassSet::all()).size() == 1024);
    CHECK_THROWS_AS(enumerate_one_point_types(h, {0, 1, 2, 3, 4, 5, 6}, ClassSet::all()), BudgetExceeded);
}

TEST_CASE("realize_type") {
    std::mt19937_64 rng(21);
    const auto h = random_h4_free(8, rng);
    for (PointId p = 3; p < 8; ++p) {
        const auto t = OnePointType::read_off(h, p, {0, 1, 2});
        const auto q = realize_type(h, t, ClassSet::h4_free());
        REQUIRE(q);
        CHECK(OnePointType::read_off(h, *q, {0, 1, 2}) == t);
        CHECK(*q <= p);
    }
    CHECK(realize_type(h, OnePointType({}, {}), ClassSet::h4_free()) == PointId{0});
    CHECK_FALSE(realize_type(Hypertournament(0), OnePointType({}, {}), ClassSet::h4_free()));
    CHECK_FALSE(realize_type(h4_canonical(), OnePointType::read_off(h4_canonical(), 3, {0, 1, 2}), ClassSet::h4_free()));
}

TEST_CASE("the four amalgamation classes match a brute-force one-point check") {
    // S has one-point strong amalgamation over every base of size <= 3
    auto amalgamates = [](ClassSet s) {
        for (std::size_t m = 0; m <= 3; ++m)
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << triple_count(m)); ++mask) {
                const auto a = Hypertournament::from_mask(m, mask);
                std::vector<PointId> dom(m);
                std::iota(dom.begin(), dom.end(), PointId{0});
                const auto types = enumerate_one_point_types(a, dom, s);
                for (const auto& t1 : types)
                    for (const auto& t2 : types) {
                        ConstraintSet cs;
                        cs.declare_var("u");
                        cs.declare_var("v");
                        for (PointId i = 0; i < m; ++i)
                            for (PointId j = i + 1; j < m; ++j) {
                                cs.add(Term::var("u"), Term::point(i), Term::point(j), t1.r_with(i, j));
                                cs.add(Term::var("v"), Term::point(i), Term::point(j), t2.r_with(i, j));
                            }
                        SolveOptions opts;
                        opts.allowed = s;
                        if (!solve(a, cs, opts).sat()) return false;
                    }
            }
        return true;
    };
    for (std::uint8_t bits = 1; bits < 8; ++bits) {
        ClassSet s;
        for (FourClass c : {FourClass::C4, FourClass::O4, FourClass::H4})
            if (bits & (1u << static_cast<unsigned>(c))) s = ClassSet::parse(s.name() + (c == FourClass::C4 ? "c4" : c == FourClass::O4 ? "o4" : "h4"));
        INFO(s.name());
        if (is_amalgamation_class(s)) CHECK(amalgamates(s));
    }
    CHECK_FALSE(amalgamates(ClassSet{FourClass::O4}));
    CHECK_FALSE(amalgamates(ClassSet{FourClass::H4}));
}

TEST_CASE("build_generic") {
    SUBCASE("trivial depth 1") {
        const auto r = build_generic(4, ClassSet::all(), 1, 0);
        CHECK(r.structure.size() == 4);
        CHECK(r.complete());
    }
    SUBCASE("depth 2 saturates for the non-cyclic amalgamation classes") {
        for (const char* name : {"c4o4h4", "c4h4", "c4o4"}) {
            const auto s = ClassSet::parse(name);
            const auto r = build_generic(24, s, 2, 5);
            INFO(r.report);
            CHECK(r.structure.size() == 24);
            CHECK(in_constrained_class(r.structure, s));
            CHECK(r.complete());
            CHECK(check_extension_property(r.structure, s, 2).holds());
        }
    }
    SUBCASE("reproducible in the seed") {
        const auto a = build_generic(14, ClassSet::h4_free(), 3, 9);
        const auto b = build_generic(14, ClassSet::h4_free(), 3, 9);
        CHECK(a.structure == b.structure);
        CHECK(a.report == b.report);
    }
    SUBCASE("cyclic class") {
        const auto r = build_generic(10, ClassSet{FourClass::C4}, 2, 3);
        for (const auto& s : all_4subsets(10)) CHECK(edges_under_some_order_max(r.structure, s) == 4);
        // a finite cyclic structure has neighbouring points with nothing between them
        CHECK_FALSE(r.complete());
        CHECK(build_generic(10, ClassSet{FourClass::C4}, 1, 3).complete());
    }
    SUBCASE("12 points are too few for depth 3 in the H4-free class") {
        const auto r = build_generic(12, ClassSet::h4_free(), 3, 1);
        CHECK(is_h4_free(r.structure));
        CHECK_FALSE(r.complete());
        CHECK(r.report.find("incomplete") != std::string::npos);
        CHECK(check_extension_property(r.structure, ClassSet::h4_free(), 3).unrealized == r.extension.unrealized);
    }
    CHECK_THROWS_AS(build_generic(5, ClassSet{FourClass::O4}, 1, 0), std::domain_error);
}
