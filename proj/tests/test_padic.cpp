#include <catch_amalgamated.hpp>

#include <iwa/padic.hpp>

using namespace iwa;

TEST_CASE("context validation") {
    CHECK_THROWS_AS(padic_context(4, 12), std::invalid_argument);
    CHECK_THROWS_AS(padic_context(2, 12), std::invalid_argument);
    CHECK_THROWS_AS(padic_context(9, 12), std::invalid_argument);
    CHECK_THROWS_AS(padic_context(3, 5, 4), std::invalid_argument);  // needs N >= guard + 2
    padic_context ctx(3, 12);
    CHECK(ctx.p() == 3);
    CHECK(ctx.precision() == 12);
    CHECK(ctx.guard() == 4);
    CHECK(ctx.certified() == 8);
    CHECK(ctx.modulus() == 531441);
}

TEST_CASE("residue arithmetic at p=3, N=4") {
    padic_context ctx(3, 4, 2);  // modulus 81, narrow guard
    padic_int a(ctx, 80), b(ctx, 1);
    CHECK((a + b).residue() == 0);
    CHECK((padic_int(ctx, 4) * padic_int(ctx, 61)).residue() == 1);
    CHECK(padic_int(ctx, 4).inv().residue() == 61);
    CHECK_THROWS_AS(padic_int(ctx, 3).inv(), not_a_unit);
    CHECK(padic_int(ctx, -1).residue() == 80);
    CHECK((-padic_int(ctx, 1)).residue() == 80);
    CHECK(padic_int(ctx, 80).balanced() == -1);
    CHECK(padic_int(ctx, 40).balanced() == 40);
    CHECK(padic_int(ctx, 2).pow(4).residue() == 16);
}

TEST_CASE("valuations") {
    padic_context ctx(3, 12);
    valuation v = padic_int(ctx, 48).val();
    CHECK(v.exact);
    CHECK(v.v == 1);
    valuation vz = padic_int::zero(ctx).val();
    CHECK_FALSE(vz.exact);
    CHECK(vz.v == 12);
    CHECK(padic_int(ctx, 27).val().v == 3);

    // additivity on a spread of pairs
    for (long x : {1L, 3L, 48L, 63L, 7L, 81L}) {
        for (long y : {2L, 9L, 5L, 12L}) {
            valuation vx = padic_int(ctx, x).val();
            valuation vy = padic_int(ctx, y).val();
            valuation vxy = (padic_int(ctx, x) * padic_int(ctx, y)).val();
            if (vx.exact && vy.exact && vx.v + vy.v < ctx.precision()) {
                CHECK(vxy.exact);
                CHECK(vxy.v == vx.v + vy.v);
            }
        }
    }
}

TEST_CASE("shift_down is exact division") {
    padic_context ctx(3, 12);
    CHECK(padic_int(ctx, 54).shift_down(3).residue() == 2);
    CHECK(padic_int(ctx, 48).shift_down(1).residue() == 16);
    CHECK_THROWS_AS(padic_int(ctx, 5).shift_down(1), not_a_unit);
}

TEST_CASE("ring axioms on sampled triples") {
    padic_context ctx(3, 6);
    std::vector<long> xs = {0, 1, 5, 243, 700, 728};
    for (long a : xs)
        for (long b : xs)
            for (long c : xs) {
                padic_int pa(ctx, a), pb(ctx, b), pc(ctx, c);
                CHECK(pa * (pb + pc) == pa * pb + pa * pc);
                CHECK((pa + pb) + pc == pa + (pb + pc));
                CHECK(pa * pb == pb * pa);
                CHECK(pa - pa == padic_int::zero(ctx));
            }
}

TEST_CASE("mixed contexts are rejected") {
    padic_context c1(3, 12), c2(5, 12);
    CHECK_THROWS_AS(padic_int(c1, 1) + padic_int(c2, 1), context_mismatch);
}

TEST_CASE("cardinality outcomes") {
    padic_context ctx(3, 12);
    cardinality f = cardinality::finite(2);
    CHECK(f.is_finite());
    CHECK(f.exponent == 2);
    CHECK(f.determinate());
    cardinality i = cardinality::infinite("witness");
    CHECK(i.is_infinite());
    CHECK(i.determinate());
    cardinality u = cardinality::undetermined("why");
    CHECK(u.is_undetermined());
    CHECK_FALSE(u.determinate());
    CHECK(f == cardinality::finite(2));
    CHECK_FALSE(f == cardinality::finite(3));

    // below the certified line the answer stays finite; at or above it
    // collapses to undetermined
    CHECK(cardinality::certified_finite(7, ctx).is_finite());
    CHECK(cardinality::certified_finite(8, ctx).is_undetermined());
    CHECK(cardinality::certified_finite(11, ctx).is_undetermined());
}
