#include <doctest.h>

#include "dsb/bundle_map.hpp"

using namespace dsb;

namespace {

// Independent profile measurement: kernel dimension of the graded piece at
// every twist, straight from the scalar matrices. The implementation under
// test reconstructs these numbers from its splitting type; the oracle never
// looks at that reconstruction.
template <class F>
std::vector<long long> measured_profile(const BundleMap<F>& m, long long d_hi) {
    std::vector<long long> h;
    for (long long d = 0; d <= d_hi; ++d) {
        auto A = graded_piece(m, d);
        h.push_back(static_cast<long long>(mat_kernel(m.field, std::move(A)).size()));
    }
    return h;
}

template <class F>
BundleMap<F> random_section_map(const F& K, const SplittingType& tgt, std::size_t cols,
                                SplitMix64& g) {
    BundleMap<F> m{K, SplittingType::trivial(cols), tgt, {}};
    m.ent.assign(cols * tgt.rank(), bf_zero(K));
    for (std::size_t i = 0; i < tgt.rank(); ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            int deg = static_cast<int>(tgt.degs[i]);
            std::vector<typename F::Elt> cs(deg + 1);
            for (auto& x : cs) x = K.random(g);
            m.at(i, j) = bf_from_coeffs(K, deg, std::move(cs));
        }
    bm_validate(m);
    return m;
}

}  // namespace

TEST_CASE("line bundle cohomology") {
    CHECK(cohomology_line(3) == std::pair<long long, long long>{4, 0});
    CHECK(cohomology_line(-1) == std::pair<long long, long long>{0, 0});
    CHECK(cohomology_line(-3) == std::pair<long long, long long>{0, 2});
    for (long long a = -6; a <= 6; ++a) {
        auto [h0, h1] = cohomology_line(a);
        CHECK(h0 - h1 == a + 1);
    }
    // h^0(O(e) + O(e+1)) = 2e + 3 at e = 3
    SplittingType E({3, 4});
    CHECK(E.h0() == 9);
}

TEST_CASE("splitting type bookkeeping") {
    SplittingType T({1, 3, 2});
    CHECK(T.degs == std::vector<long long>{3, 2, 1});
    CHECK(T.rank() == 3);
    CHECK(T.degree() == 6);
    CHECK(T.slope() == rat_of(2));
    CHECK(T.dual().degs == std::vector<long long>{-1, -2, -3});
    CHECK(T.twist(2).degs == std::vector<long long>{5, 4, 3});
    CHECK_THROWS_AS(SplittingType{}.slope(), std::domain_error);
}

TEST_CASE("graded pieces of the coordinate map") {
    RatField Q;
    BundleMap<RatField> m{Q, SplittingType::trivial(2), SplittingType({1}), {}};
    m.ent = {parse_binary_form(Q, "s", 1), parse_binary_form(Q, "t", 1)};
    bm_validate(m);
    auto A0 = graded_piece(m, 0);
    CHECK(A0.rows == 2);
    CHECK(A0.cols == 2);
    CHECK(mat_rank(Q, A0) == 2);

    auto zero = bm_zero(Q, SplittingType::trivial(2), SplittingType({1}));
    CHECK(mat_rank(Q, graded_piece(zero, 3)) == 0);

    // rank growth is affine-linear once the twist is large: the difference of
    // ranks at d and d+1 equals the generic rank
    for (long long d = 2; d <= 4; ++d) {
        auto rd = mat_rank(Q, graded_piece(m, d));
        auto rd1 = mat_rank(Q, graded_piece(m, d + 1));
        CHECK(rd1 - rd == 1);
    }
}

TEST_CASE("kernel of the Euler-type maps") {
    RatField Q;
    BundleMap<RatField> m{Q, SplittingType::trivial(2), SplittingType({1}), {}};
    m.ent = {parse_binary_form(Q, "s", 1), parse_binary_form(Q, "t", 1)};
    auto kd = kernel_splitting(m);
    CHECK(kd.kernel.degs == std::vector<long long>{-1});
    REQUIRE(kd.basis.src.rank() == 1);
    // basis is (t, -s) up to scale; the syzygy identity is certified inside
    CHECK(kd.basis.at(0, 0).deg == 1);
    CHECK(kd.generic_rank == 1);

    BundleMap<RatField> m2{Q, SplittingType::trivial(2), SplittingType({2}), {}};
    m2.ent = {parse_binary_form(Q, "s^2", 2), parse_binary_form(Q, "t^2", 2)};
    auto kd2 = kernel_splitting(m2);
    CHECK(kd2.kernel.degs == std::vector<long long>{-2});
}

TEST_CASE("kernel of the full monomial evaluation is balanced") {
    GFpField K(101);
    for (int d = 1; d <= 8; ++d) {
        BundleMap<GFpField> m{K, SplittingType::trivial(d + 1), SplittingType({d}), {}};
        m.ent.clear();
        for (int k = 0; k <= d; ++k) m.ent.push_back(bf_monomial(K, d, k, K.one()));
        bm_validate(m);
        auto kd = kernel_splitting(m);
        CHECK(kd.kernel.rank() == static_cast<std::size_t>(d));
        for (auto b : kd.kernel.degs) CHECK(b == -1);
        // brute-force profile agrees with the reconstruction at every twist
        auto h = measured_profile(m, d + 1);
        for (long long t = 0; t < static_cast<long long>(h.size()); ++t) {
            long long expect = 0;
            for (auto bk : kd.kernel.degs) expect += std::max(0ll, t - (-bk) + 1);
            CHECK(h[static_cast<std::size_t>(t)] == expect);
        }
    }
}

TEST_CASE("randomized kernel oracle over GF(101)") {
    GFpField K(101);
    SplitMix64 g(2024);
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t rank_t = 1 + g.below(2);
        std::vector<long long> degs;
        long long total = 0;
        for (std::size_t i = 0; i < rank_t; ++i) {
            long long a = 1 + static_cast<long long>(g.below(4));
            degs.push_back(a);
            total += a;
        }
        if (total > 8) continue;
        std::size_t cols = rank_t + 1 + g.below(2);
        auto m = random_section_map(K, SplittingType(degs), cols, g);
        auto kd = kernel_splitting(m);

        // rank bookkeeping
        CHECK(kd.generic_rank + static_cast<long long>(kd.kernel.rank()) ==
              static_cast<long long>(cols));
        CHECK(kd.sampled_rank <= kd.generic_rank);

        // degree bookkeeping: deg image = -deg kernel = sum of generator twists
        long long bsum = 0;
        for (auto b : kd.kernel.degs) bsum += -b;
        CHECK(bsum == -kd.kernel.degree());
        auto [ir, idg] = image_data(m);
        CHECK(ir == kd.generic_rank);
        CHECK(idg == bsum);
        CHECK(idg >= 0);

        // the h^0 profile measured independently matches the reconstruction
        long long d_hi = 0;
        for (auto a : degs) d_hi += std::max(0ll, a);
        auto h = measured_profile(m, d_hi + 1);
        for (long long t = 0; t < static_cast<long long>(h.size()); ++t) {
            long long expect = 0;
            for (auto bk : kd.kernel.degs) expect += std::max(0ll, t - (-bk) + 1);
            CHECK(h[static_cast<std::size_t>(t)] == expect);
        }
        // monotone with nonnegative second differences, stabilizing at the
        // kernel rank
        for (std::size_t t = 1; t < h.size(); ++t) CHECK(h[t] >= h[t - 1]);
        for (std::size_t t = 2; t < h.size(); ++t)
            CHECK(h[t] - h[t - 1] >= h[t - 1] - h[t - 2]);
        if (h.size() >= 2)
            CHECK(h.back() - h[h.size() - 2] == static_cast<long long>(kd.kernel.rank()));

        // the syzygy identity as polynomial matrices
        if (kd.kernel.rank() > 0) CHECK(bm_is_zero(bm_compose(m, kd.basis)));
    }
}

TEST_CASE("kernel of a map with a twisted source") {
    RatField Q;
    // (s, t): O(1)^2 -> O(2) has kernel O(0), generated by (t, -s) at twist 0
    BundleMap<RatField> m{Q, SplittingType({1, 1}), SplittingType({2}), {}};
    m.ent = {parse_binary_form(Q, "s", 1), parse_binary_form(Q, "t", 1)};
    bm_validate(m);
    auto kd = kernel_splitting(m);
    CHECK(kd.kernel.degs == std::vector<long long>{0});
    auto [ir, idg] = image_data(m);
    CHECK(ir == 1);
    CHECK(idg == 2);  // the image is all of O(2)

    // negative twists: s*t: O(-1) -> O(1) is injective with image of degree -1
    BundleMap<RatField> inj{Q, SplittingType({-1}), SplittingType({1}), {}};
    inj.ent = {parse_binary_form(Q, "s*t", 2)};
    bm_validate(inj);
    auto kdi = kernel_splitting(inj);
    CHECK(kdi.kernel.rank() == 0);
    auto [ir2, idg2] = image_data(inj);
    CHECK(ir2 == 1);
    CHECK(idg2 == -1);
}

TEST_CASE("zero map has the source as kernel") {
    RatField Q;
    auto zero = bm_zero(Q, SplittingType::trivial(3), SplittingType({2}));
    auto kd = kernel_splitting(zero);
    CHECK(kd.kernel.degs == std::vector<long long>{0, 0, 0});
    CHECK(kd.generic_rank == 0);
    auto [ir, idg] = image_data(zero);
    CHECK(ir == 0);
    CHECK(idg == 0);
}

TEST_CASE("generic rank on small examples") {
    RatField Q;
    BundleMap<RatField> row{Q, SplittingType::trivial(2), SplittingType({1}), {}};
    row.ent = {parse_binary_form(Q, "s", 1), parse_binary_form(Q, "t", 1)};
    CHECK(generic_rank(row) == 1);

    BundleMap<RatField> diag{Q, SplittingType::trivial(2), SplittingType({1, 1}), {}};
    diag.ent = {parse_binary_form(Q, "s", 1), bf_zero(Q), bf_zero(Q), parse_binary_form(Q, "t", 1)};
    CHECK(generic_rank(diag) == 2);

    // proportional rows
    BundleMap<RatField> prop{Q, SplittingType::trivial(2), SplittingType({1, 1}), {}};
    prop.ent = {parse_binary_form(Q, "s", 1), parse_binary_form(Q, "t", 1),
                parse_binary_form(Q, "2*s", 1), parse_binary_form(Q, "2*t", 1)};
    CHECK(generic_rank(prop) == 1);
}

TEST_CASE("generic rank survives small fields where sampling cannot") {
    // s^2 t + s t^2 vanishes at every point of the line over GF(2), yet the
    // map is nonzero; only the exact elimination sees rank 1.
    GFpField K(2);
    BundleMap<GFpField> m{K, SplittingType::trivial(1), SplittingType({3}), {}};
    m.ent = {parse_binary_form(K, "s^2*t + s*t^2", 3)};
    auto kd = kernel_splitting(m);
    CHECK(kd.generic_rank == 1);
    CHECK(kd.sampled_rank == 0);
    CHECK(kd.kernel.rank() == 0);
}

TEST_CASE("transpose-dual pairs twists with entries") {
    GFpField K(7);
    SplitMix64 g(5);
    auto m = random_section_map(K, SplittingType({3, 4}), 3, g);
    auto d = bm_transpose_dual(m);
    CHECK(d.src.degs == std::vector<long long>{-3, -4});
    CHECK(d.tgt.degs == std::vector<long long>{0, 0, 0});
    auto dd = bm_transpose_dual(d);
    CHECK(dd.src == m.src);
    CHECK(dd.tgt == m.tgt);
    for (std::size_t i = 0; i < m.tgt.rank(); ++i)
        for (std::size_t j = 0; j < m.src.rank(); ++j) CHECK(bf_equal(dd.at(i, j), m.at(i, j)));
}

TEST_CASE("rank-one image degree by factorization") {
    GFpField K(101);
    SplitMix64 g(9);
    for (int trial = 0; trial < 20; ++trial) {
        // u: primitive column of degrees (a_i - m); columns g_j * u
        long long m0 = static_cast<long long>(g.below(3));
        SplittingType tgt({m0 + 1 + static_cast<long long>(g.below(2)), m0});
        std::vector<BinaryForm<GFpField>> u;
        for (std::size_t i = 0; i < 2; ++i) {
            int deg = static_cast<int>(tgt.degs[i] - m0);
            std::vector<GFpField::Elt> cs(deg + 1);
            for (auto& x : cs) x = K.random(g);
            u.push_back(bf_from_coeffs(K, deg, cs));
        }
        if (u[0].is_zero() || u[1].is_zero()) continue;
        if (bf_gcd(K, u).deg != 0) continue;  // want a primitive direction
        std::size_t cols = 2 + g.below(2);
        BundleMap<GFpField> m{K, SplittingType::trivial(cols), tgt, {}};
        m.ent.assign(cols * 2, bf_zero(K));
        long long expected = -1;
        std::vector<BinaryForm<GFpField>> gs;
        for (std::size_t j = 0; j < cols; ++j) {
            std::vector<GFpField::Elt> cs(static_cast<std::size_t>(m0) + 1);
            for (auto& x : cs) x = K.random(g);
            auto gj = bf_from_coeffs(K, static_cast<int>(m0), cs);
            gs.push_back(gj);
            for (std::size_t i = 0; i < 2; ++i) m.at(i, j) = bf_mul(u[i], gj);
        }
        bool all_zero = true;
        for (const auto& gj : gs)
            if (!gj.is_zero()) all_zero = false;
        if (all_zero) continue;
        expected = m0 - bf_gcd(K, gs).deg;
        bm_validate(m);
        CHECK(rank_one_image_degree(m) == expected);
        // agree with the kernel route
        auto [ir, idg] = image_data(m);
        CHECK(ir == 1);
        CHECK(idg == expected);
    }
}

TEST_CASE("saturation detection via maximal minors") {
    RatField Q;
    // (s, t): O(-1) -> O^2 twisted picture: here O(1)^2 receiving (s, t) is saturated
    BundleMap<RatField> sat{Q, SplittingType({0}), SplittingType({1, 1}), {}};
    sat.ent = {parse_binary_form(Q, "s", 1), parse_binary_form(Q, "t", 1)};
    bm_validate(sat);
    CHECK(injection_minor_gcd_degree(sat) == 0);

    BundleMap<RatField> unsat{Q, SplittingType({0}), SplittingType({2, 2}), {}};
    unsat.ent = {parse_binary_form(Q, "s^2", 2), parse_binary_form(Q, "s*t", 2)};
    bm_validate(unsat);
    CHECK(injection_minor_gcd_degree(unsat) == 1);
}

TEST_CASE("bundle map degree validation") {
    RatField Q;
    BundleMap<RatField> bad{Q, SplittingType::trivial(1), SplittingType({2}), {}};
    bad.ent = {parse_binary_form(Q, "s", 1)};
    CHECK_THROWS_AS(bm_validate(bad), std::invalid_argument);
    // entries below the diagonal degree must be zero, and that is legal
    BundleMap<RatField> ok{Q, SplittingType({1}), SplittingType({0}), {}};
    ok.ent = {bf_zero(Q)};
    CHECK_NOTHROW(bm_validate(ok));
}
