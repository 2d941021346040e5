#include "fixtures.hpp"
#include "h4free/witness.hpp"

#include <doctest.h>

#include <set>

using namespace h4free;
using namespace h4free::testing;

namespace {

std::size_t count_h4(const Hypertournament& h) {
    std::size_t bad = 0;
    for (const auto& s : all_4subsets(h.size()))
        if (classify_4set(h, s) == FourClass::H4) ++bad;
    return bad;
}

} // namespace

TEST_CASE("ip2 small grids") {
    SUBCASE("n=1") {
        auto [w, r] = ip2_build(1);
        CHECK(r.pass);
        CHECK(w.h.size() == 4);
        CHECK(w.x0.size() == 1);
        CHECK(w.x1.size() == 1);
        CHECK(w.y.size() == 2);
        CHECK_FALSE(w.h.eval_r(w.x0[0], w.x1[0], w.y[0]));
        CHECK(w.h.eval_r(w.x0[0], w.x1[0], w.y[1]));
    }
    SUBCASE("n=2") {
        auto [w, r] = ip2_build(2);
        CHECK(r.pass);
        REQUIRE(w.h.size() == 20);
        CHECK(all_4subsets(20).size() == 4845);
        CHECK(count_h4(w.h) == 0);
        std::set<std::vector<bool>> rows;
        for (std::size_t mask = 0; mask < 16; ++mask) {
            std::vector<bool> row;
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) {
                    const bool member = (mask >> (i * 2 + j)) & 1u;
                    CHECK(w.h.eval_r(w.x0[i], w.x1[j], w.y[mask]) == member);
                    row.push_back(w.h.eval_r(w.x0[i], w.x1[j], w.y[mask]));
                }
            rows.insert(row);
        }
        CHECK(rows.size() == 16);
    }
    SUBCASE("n=3 is refused") { CHECK_THROWS_AS(ip2_build(3), BudgetExceeded); }
    SUBCASE("n=0 is rejected") { CHECK_THROWS_AS(ip2_build(0), std::domain_error); }
}

TEST_CASE("sop3 chains") {
    for (std::size_t m : {2u, 3u, 4u, 6u, 9u}) {
        CAPTURE(m);
        auto [w, r] = sop3_build(m);
        CHECK(r.pass);
        CHECK(w.h.size() == m + 2);
        CHECK(count_h4(w.h) == 0);
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (i != j) {
                    CHECK(sop3_phi(w.h, w.c[i], w.c[j], w.a, w.b) == (i < j));
                    pairs += i < j;
                }
        CHECK(pairs == m * (m - 1) / 2);
        // triples inside the chain follow the order only
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                for (std::size_t k = 0; k < m; ++k)
                    if (i != j && j != k && i != k)
                        CHECK(w.h.r(w.c[i], w.c[j], w.c[k]) == ((i < j) + (j < k) + (i < k) == 3 ||
                                                                 (i < j) + (j < k) + (i < k) == 1));
    }
    CHECK_THROWS_AS(sop3_build(1), std::domain_error);
}

TEST_CASE("sop3 cycle is inconsistent") {
    const auto r = sop3_cycle_check();
    CHECK(r.pass);
    CHECK(r.completions_checked == 1024);
    CHECK(r.line() == "CLAIM sop3.cycle PASS");

    // independent brute force: 2 base points plus x0,x1,x2, all 10 triples free
    std::size_t models = 0;
    for (std::uint32_t mask = 0; mask < 1024; ++mask) {
        const Hypertournament h = Hypertournament::from_mask(5, mask);
        if (!is_h4_free(h)) continue;
        auto phi = [&](PointId x, PointId y) { return sop3_phi(h, x, y, 0, 1); };
        models += phi(2, 3) && phi(3, 4) && phi(4, 2);
    }
    CHECK(models == 0);
}

TEST_CASE("tp2 arrays") {
    SUBCASE("1x2 row is 2-inconsistent") {
        auto [w, r] = tp2_build(1, 2);
        CHECK(r.pass);
        ConstraintSet cs;
        cs.declare_var("x");
        tp2_add_phi(cs, "x", w.c(0, 0), w.d(0, 0));
        tp2_add_phi(cs, "x", w.c(0, 1), w.d(0, 1));
        CHECK_FALSE(solve(w.h, cs).sat());
    }
    SUBCASE("3x4") {
        auto [w, r] = tp2_build(3, 4);
        CHECK(r.pass);
        CHECK(w.h.size() == 26);
        CHECK(count_h4(w.h) == 0);
        CHECK(r.solver_calls == 64 + 18);
        bool saw_paths = false, saw_pairs = false;
        for (const auto& d : r.details) {
            saw_paths = saw_paths || d == "64 paths consistent";
            saw_pairs = saw_pairs || d == "18 same-row pairs inconsistent";
        }
        CHECK(saw_paths);
        CHECK(saw_pairs);
    }
    SUBCASE("non-adjacent pairs in a longer row") {
        auto [w, r] = tp2_build(1, 5);
        CHECK(r.pass);
        for (std::size_t j = 0; j < 5; ++j)
            for (std::size_t k = j + 1; k < 5; ++k) {
                ConstraintSet cs;
                cs.declare_var("x");
                tp2_add_phi(cs, "x", w.c(0, k), w.d(0, k));
                tp2_add_phi(cs, "x", w.c(0, j), w.d(0, j));
                CHECK_FALSE(solve(w.h, cs).sat());
            }
    }
    SUBCASE("each cell is a realized row type") {
        auto [w, r] = tp2_build(2, 3);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                const PointId c = w.c(i, j), d = w.d(i, j);
                CHECK(w.h.r(c, d, Tp2Witness::e));
                CHECK(w.h.r(d, Tp2Witness::e, Tp2Witness::f));
                CHECK(w.h.r(c, Tp2Witness::e, Tp2Witness::f));
                CHECK(w.h.r(c, Tp2Witness::f, d));
            }
    }
    SUBCASE("budget") {
        CHECK_THROWS_AS(tp2_build(5, 4), BudgetExceeded);
        CHECK_THROWS_AS(tp2_build(0, 2), std::domain_error);
    }
}

TEST_CASE("nsop4 inputs") {
    SUBCASE("m=n=1, eps=1") {
        auto [in, r] = nsop4_make_input(1, 1, {true}, 0);
        REQUIRE(in);
        CHECK(r.pass);
        CHECK(in->h.size() == 3);
        CHECK(in->h.r(in->c[0], in->b0[0], in->b1[0]));
    }
    SUBCASE("m=n=1, eps=0") {
        auto [in, r] = nsop4_make_input(1, 1, {false}, 0);
        REQUIRE(in);
        CHECK(in->h.r(in->b0[0], in->c[0], in->b1[0]));
    }
    SUBCASE("pattern read-back on random inputs") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t m = 1 + rng() % 2, n = 1 + rng() % 2;
            std::vector<bool> eps(m * n * n);
            for (std::size_t t = 0; t < eps.size(); ++t) eps[t] = rng() & 1u;
            auto [in, r] = nsop4_make_input(m, n, eps, rng());
            REQUIRE(in);
            CHECK(is_h4_free(in->h));
            CHECK(qf_type(in->h, in->b0, in->c) == qf_type(in->h, in->b1, in->c));
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k)
                        CHECK(in->h.eval_r(in->c[i], in->b0[j], in->b1[k]) == eps[(i * n + j) * n + k]);
            // order-like type on b0 b1
            std::vector<PointId> bb = in->b0;
            bb.insert(bb.end(), in->b1.begin(), in->b1.end());
            for (std::size_t u = 0; u < bb.size(); ++u)
                for (std::size_t v = u + 1; v < bb.size(); ++v)
                    for (std::size_t w = v + 1; w < bb.size(); ++w) CHECK(in->h.eval_r(bb[u], bb[v], bb[w]));
        }
    }
    SUBCASE("bad dimensions") { CHECK_THROWS_AS(nsop4_make_input(1, 2, {true}, 0), std::domain_error); }
}

TEST_CASE("nsop4 4-cycles") {
    SUBCASE("m=n=1, both patterns") {
        for (bool e : {true, false}) {
            auto [in, made] = nsop4_make_input(1, 1, {e}, 3);
            REQUIRE(in);
            const auto r = nsop4_build_cycle(*in);
            CHECK_MESSAGE(r.pass, r.text());
            CHECK(r.solver_calls == 2);
        }
    }
    SUBCASE("m=1, n=2, all 16 patterns") {
        for (std::uint32_t pat = 0; pat < 16; ++pat) {
            std::vector<bool> eps(4);
            for (std::size_t t = 0; t < 4; ++t) eps[t] = (pat >> t) & 1u;
            auto [in, made] = nsop4_make_input(1, 2, eps, 7);
            REQUIRE_MESSAGE(in, made.text());
            const auto r = nsop4_build_cycle(*in);
            CHECK_MESSAGE(r.pass, r.text());
        }
    }
    SUBCASE("m=2, n=2, seeded patterns") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<bool> eps(8);
            for (std::size_t t = 0; t < 8; ++t) eps[t] = rng() & 1u;
            auto [in, made] = nsop4_make_input(2, 2, eps, rng());
            REQUIRE(in);
            const auto r = nsop4_build_cycle(*in);
            CHECK_MESSAGE(r.pass, r.text());
        }
    }
}

TEST_CASE("invariant extension template") {
    std::mt19937_64 rng(21);
    SUBCASE("A is the whole structure") {
        const Hypertournament h = random_h4_free(4, rng);
        const std::vector<PointId> a{0, 1, 2, 3};
        Hypertournament ext = h;
        ext.add_point();
        for (PointId p = 0; p < 4; ++p)
            for (PointId q = p + 1; q < 4; ++q) ext.set_r(4, p, q, true);
        REQUIRE(is_h4_free(ext));
        const QfType p = qf_type(ext, {4}, a);
        const auto t = invariant_extension_template(h, a, {2}, p);
        CHECK(t.report.pass);
        CHECK(t.h.size() == 5);
        CHECK(t.h == ext);
    }
    SUBCASE("5 points, |A|=2, singleton tuple") {
        for (int trial = 0; trial < 30; ++trial) {
            const Hypertournament h = random_h4_free(5, rng);
            const std::vector<PointId> a{1, 3};
            // any one-point type over A is a single bit
            Hypertournament probe = h;
            const PointId y = probe.add_point();
            probe.set_r(y, 1, 3, rng() & 1u);
            const QfType p = qf_type(probe, {y}, a);
            const PointId star = a[rng() % 2];
            const auto t = invariant_extension_template(h, a, {star}, p);
            CHECK_MESSAGE(t.report.pass, t.report.text());
            CHECK(is_h4_free(t.h));
            const PointId x = t.tuple[0];
            for (PointId q : a)
                for (PointId b : {0, 2, 4}) CHECK(t.h.r(x, q, static_cast<PointId>(b)));
            for (PointId b1 : {0, 2, 4})
                for (PointId b2 : {0, 2, 4})
                    if (b1 != b2) CHECK(t.h.r(x, b1, b2) == h.r(star, b1, b2));
        }
    }
    SUBCASE("swap of equal-type outside points") {
        const Hypertournament h = random_h4_free(6, rng);
        const std::vector<PointId> a{0, 1};
        Hypertournament probe = h;
        const PointId y = probe.add_point();
        probe.set_r(y, 0, 1, true);
        const QfType p = qf_type(probe, {y}, a);
        const auto t = invariant_extension_template(h, a, {0}, p);
        REQUIRE(t.report.pass);
        const PointId x = t.tuple[0];
        for (PointId b1 = 2; b1 < 6; ++b1)
            for (PointId b2 = 2; b2 < 6; ++b2)
                if (b1 != b2 && qf_type(h, {b1, b2}, a) == qf_type(h, {b2, b1}, a))
                    CHECK(t.h.r(x, b1, b2) == t.h.r(x, b2, b1));
    }
    SUBCASE("bad input") {
        const Hypertournament h = random_h4_free(5, rng);
        const QfType p = qf_type(h, {4}, {0, 1});
        CHECK_THROWS_AS(invariant_extension_template(h, {}, {}, p), std::domain_error);
        CHECK_THROWS_AS(invariant_extension_template(h, {0, 1}, {2}, p), std::domain_error);
        CHECK_THROWS_AS(invariant_extension_template(h, {0, 1}, {0, 1}, p), std::domain_error);
        CHECK_THROWS_AS(invariant_extension_template(h, {0, 2}, {0}, p), std::domain_error);
        CHECK_THROWS_AS(invariant_extension_template(h, {0, 1}, {0}, qf_type(h, {1}, {0, 1})), std::domain_error);
    }
}

TEST_CASE("empty base obstruction") {
    const auto r = empty_base_obstruction();
    CHECK(r.pass);
    CHECK(r.solver_calls == 4);
    // the axiom directly: R(x,a,b) and R(x,b,a) always disagree
    Hypertournament h(3);
    for (Orientation o : {Orientation::Plus, Orientation::Minus}) {
        h.set_orient_at(0, o);
        CHECK(h.r(2, 0, 1) != h.r(2, 1, 0));
    }
}

TEST_CASE("one-point back-and-forth") {
    std::mt19937_64 rng(33);
    auto pick = [&](std::size_t n, std::size_t csize) {
        const auto perm = random_permutation(n, rng);
        std::vector<PointId> c(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(csize));
        std::sort(c.begin(), c.end());
        return std::make_pair(c, std::vector<PointId>(perm.begin() + static_cast<std::ptrdiff_t>(csize), perm.end()));
    };

    SUBCASE("bp = b") {
        const Hypertournament h = random_h4_free(6, rng);
        const auto res = claim1_witness(h, {0, 1}, 2, 3, 3);
        CHECK(res.report.pass);
        CHECK(res.a_prime == 2);
        CHECK(res.h == h);
        CHECK(res.report.solver_calls == 0);
    }
    SUBCASE("case 2, random") {
        int done = 0;
        for (int trial = 0; done < 100 && trial < 5000; ++trial) {
            const std::size_t n = 5 + rng() % 4, csize = rng() % 5;
            if (csize + 3 > n) continue;
            const Hypertournament h = random_h4_free(n, rng);
            auto [c, rest] = pick(n, csize);
            const PointId a = rest[0], b = rest[1], bp = rest[2];
            if (qf_type(h, {b}, c) != qf_type(h, {bp}, c)) continue;
            ++done;
            const auto res = claim1_witness(h, c, a, b, bp);
            REQUIRE_MESSAGE(res.report.pass, res.report.text());
            std::vector<PointId> cb = c, ca = c;
            cb.push_back(b);
            ca.push_back(res.a_prime);
            std::sort(cb.begin(), cb.end());
            std::sort(ca.begin(), ca.end());
            CHECK(qf_type(res.h, {res.a_prime}, cb) == qf_type(res.h, {a}, cb));
            CHECK(qf_type(res.h, {bp}, ca) == qf_type(res.h, {b}, ca));
            CHECK(is_h4_free(res.h));
        }
        CHECK(done == 100);
    }
    SUBCASE("case 1, random") {
        int done = 0;
        for (int trial = 0; done < 20 && trial < 5000; ++trial) {
            const std::size_t n = 4 + rng() % 4, csize = rng() % 4;
            if (csize + 2 > n) continue;
            const Hypertournament h = random_h4_free(n, rng);
            auto [c, rest] = pick(n, csize);
            const PointId a = rest[0], b = rest[1];
            if (qf_type(h, {b}, c) != qf_type(h, {a}, c)) continue;
            ++done;
            const auto res = claim1_witness(h, c, a, b, a);
            REQUIRE_MESSAGE(res.report.pass, res.report.text());
            std::vector<PointId> ca = c;
            ca.push_back(res.a_prime);
            std::sort(ca.begin(), ca.end());
            CHECK(qf_type(res.h, {a}, ca) == qf_type(res.h, {b}, ca));
        }
        CHECK(done == 20);
    }
    SUBCASE("preconditions") {
        const Hypertournament h = random_h4_free(6, rng);
        CHECK_THROWS_AS(claim1_witness(h, {0, 1}, 0, 2, 3), std::domain_error);
        CHECK_THROWS_AS(claim1_witness(h, {0, 1}, 2, 2, 3), std::domain_error);
        CHECK_THROWS_AS(claim1_witness(h, {0}, 2, 3, 9), std::domain_error);
        // bp of another type over C
        for (PointId bp = 3; bp < 6; ++bp)
            if (qf_type(h, {2}, {0, 1}) != qf_type(h, {bp}, {0, 1}))
                CHECK_THROWS_AS(claim1_witness(h, {0, 1}, 5 == bp ? 4 : 5, 2, bp), std::domain_error);
    }
    SUBCASE("pair analogue fails on the tp2 row") {
        const auto r = claim1_pair_obstruction();
        CHECK_MESSAGE(r.pass, r.text());
    }
}

TEST_CASE("report plumbing") {
    WitnessReport ok;
    ok.claim = "x";
    ok.pass = true;
    ok.solver_calls = 2;
    WitnessReport bad;
    bad.claim = "y";
    bad.counterexample = "boom";
    bad.artifact = Hypertournament(4);
    bad.solver_calls = 3;
    const auto all = combine("z", {ok, bad});
    CHECK_FALSE(all.pass);
    CHECK(all.solver_calls == 5);
    CHECK(all.line() == "CLAIM z FAIL");
    REQUIRE(all.artifact);
    CHECK(all.artifact->size() == 4);
    CHECK(all.text().find("y: boom") != std::string::npos);
    CHECK(combine("w", {ok}).pass);
}
