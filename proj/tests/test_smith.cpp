#include <catch_amalgamated.hpp>

#include <random>

#include <iwa/smith.hpp>

using namespace iwa;

namespace {

zmat make(long rows, long cols, std::vector<long> entries) {
    zmat m(rows, cols);
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m.at(i, j) = entries[static_cast<size_t>(i * cols + j)];
    return m;
}

void check_transforms(const zmat& a, const smith_form& sf) {
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), static_cast<unsigned long>(sf.p),
                  static_cast<unsigned long>(sf.a));
    // u * a * v is the diagonal of p^{d_i}
    zmat d = zmat_mul(zmat_mul(sf.u, a, mod), sf.v, mod);
    for (long i = 0; i < d.rows; ++i)
        for (long j = 0; j < d.cols; ++j) {
            mpz_class want = 0;
            if (i == j && i < static_cast<long>(sf.divisors.size()) &&
                sf.divisors[static_cast<size_t>(i)] < sf.a) {
                mpz_ui_pow_ui(want.get_mpz_t(), static_cast<unsigned long>(sf.p),
                              static_cast<unsigned long>(sf.divisors[static_cast<size_t>(i)]));
            }
            CHECK(d.at(i, j) == want);
        }
    // the transforms are invertible
    zmat iu = zmat_mul(sf.u, sf.uinv, mod);
    zmat iv = zmat_mul(sf.v, sf.vinv, mod);
    for (long i = 0; i < iu.rows; ++i)
        for (long j = 0; j < iu.cols; ++j) CHECK(iu.at(i, j) == (i == j ? 1 : 0));
    for (long i = 0; i < iv.rows; ++i)
        for (long j = 0; j < iv.cols; ++j) CHECK(iv.at(i, j) == (i == j ? 1 : 0));
}

}  // namespace

TEST_CASE("identity matrix") {
    zmat a = zmat::identity(2);
    smith_form sf = smith_over_zpa(a, 3, 10);
    REQUIRE(sf.divisors.size() == 2);
    CHECK(sf.divisors[0] == 0);
    CHECK(sf.divisors[1] == 0);
    CHECK(sf.coker_exponent() == 0);
    CHECK_FALSE(sf.coker_saturated());
    check_transforms(a, sf);
}

TEST_CASE("diagonal with a p-power") {
    zmat a = make(2, 2, {3, 0, 0, 1});
    smith_form sf = smith_over_zpa(a, 3, 10);
    REQUIRE(sf.divisors.size() == 2);
    CHECK(sf.divisors[0] == 0);
    CHECK(sf.divisors[1] == 1);
    CHECK(sf.coker_exponent() == 1);
    check_transforms(a, sf);
}

TEST_CASE("coupled matrix") {
    zmat a = make(2, 2, {3, 3, 3, 6});
    smith_form sf = smith_over_zpa(a, 3, 10);
    REQUIRE(sf.divisors.size() == 2);
    CHECK(sf.divisors[0] == 1);
    CHECK(sf.divisors[1] == 1);
    CHECK(sf.coker_exponent() == 2);
    check_transforms(a, sf);
}

TEST_CASE("saturation marks free rank") {
    zmat a = make(2, 2, {3, 0, 0, 0});
    smith_form sf = smith_over_zpa(a, 3, 8);
    CHECK(sf.coker_saturated());
    CHECK(sf.saturated_count() == 1);
    CHECK(sf.row_divisor(0) == 1);
    CHECK(sf.row_divisor(1) == 8);
}

TEST_CASE("wide and tall shapes") {
    // 1x2 [3 1]: the unit column kills the cokernel
    smith_form wide = smith_over_zpa(make(1, 2, {3, 1}), 3, 10);
    CHECK(wide.coker_exponent() == 0);
    // 2x1 [3; 9]: cokernel Z/3 plus a saturated row
    smith_form tall = smith_over_zpa(make(2, 1, {3, 9}), 3, 10);
    CHECK(tall.coker_saturated());
    CHECK(tall.row_divisor(0) == 1);
    CHECK(tall.row_divisor(1) == 10);
}

TEST_CASE("unimodular change of basis preserves divisors") {
    zmat a = make(3, 3, {3, 1, 0, 0, 9, 2, 0, 0, 27});
    // left-multiply by a unimodular matrix
    zmat m = make(3, 3, {1, 1, 0, 0, 1, 1, 0, 0, 1});
    mpz_class mod;
    mpz_ui_pow_ui(mod.get_mpz_t(), 3ul, 10ul);
    zmat b = zmat_mul(m, a, mod);
    smith_form sa = smith_over_zpa(a, 3, 10);
    smith_form sb = smith_over_zpa(b, 3, 10);
    CHECK(sa.divisors == sb.divisors);
    check_transforms(a, sa);
    check_transforms(b, sb);
}

TEST_CASE("random matrices satisfy the transform identity") {
    std::mt19937 rng(20260822);
    std::uniform_int_distribution<long> entry(-40, 40);
    for (int trial = 0; trial < 25; ++trial) {
        long r = 1 + trial % 4, c = 1 + (trial / 2) % 4;
        zmat a(r, c);
        for (long i = 0; i < r; ++i)
            for (long j = 0; j < c; ++j) a.at(i, j) = entry(rng);
        smith_form sf = smith_over_zpa(a, 3, 9);
        check_transforms(a, sf);
        // divisors ascend
        for (size_t i = 1; i < sf.divisors.size(); ++i)
            CHECK(sf.divisors[i - 1] <= sf.divisors[i]);
    }
}
