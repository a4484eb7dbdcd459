#include <doctest.h>

#include "dsb/butler.hpp"

using namespace dsb;

TEST_CASE("collapsed diagram: S = M on the Euler sequence") {
    RatField Q;
    auto sys = complete_system(Q, SplittingType({1}));
    auto kd = dual_span(sys);
    auto D = butler_from_subbundle(sys, summand_inclusion(Q, kd.kernel, {0}));
    CHECK(D.S.degs == std::vector<long long>{-1});
    CHECK(D.W_rows.rows == 2);  // W = V
    CHECK(D.F_S.degs == std::vector<long long>{1});
    // alpha is a unit: a degree-zero isomorphism onto E
    CHECK(D.alpha.at(0, 0).deg == 0);
    CHECK(D.N_data == std::pair<long long, long long>{0, 0});
    CHECK(D.T_data == std::pair<long long, long long>{0, 0});
    auto A = audit_properties(D);
    CHECK(A.all_pass());
}

TEST_CASE("summand S = O(-1) inside M of the complete cubic series") {
    RatField Q;
    auto sys = complete_system(Q, SplittingType({3}));
    auto kd = dual_span(sys);
    REQUIRE(kd.kernel.degs == std::vector<long long>{-1, -1, -1});
    auto D = butler_from_subbundle(sys, summand_inclusion(Q, kd.kernel, {0}));
    CHECK(D.W_rows.rows == 2);
    CHECK(D.F_S.degs == std::vector<long long>{1});
    CHECK(D.F_S.degree() == 1);
    // property (d): deg F_S <= deg Im(alpha), both equal 1 here
    CHECK(D.im_alpha.second == 1);
    auto A = audit_properties(D);
    CHECK(A.d_applicable);
    CHECK(A.all_pass());
}

TEST_CASE("S = M recovers E as F_S (double dual)") {
    RatField Q;
    auto sys = complete_system(Q, SplittingType({2}));
    auto kd = dual_span(sys);
    auto D = butler_from_subbundle(sys, summand_inclusion(Q, kd.kernel, {0, 1}));
    CHECK(D.W_rows.rows == 3);  // W = V, T strand vanishes
    CHECK(D.F_S == sys.E);
    CHECK(D.T_data == std::pair<long long, long long>{0, 0});
    CHECK(D.Q_data == std::pair<long long, long long>{0, 0});
    auto A = audit_properties(D);
    CHECK(A.all_pass());
}

TEST_CASE("diagram bookkeeping on finite-field samples") {
    GFpField K(5);
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto syso = random_generated_system(K, SplittingType({3, 4}), 4, seed);
        if (!syso) continue;
        auto kd = dual_span(*syso);
        for (std::size_t idx = 0; idx < kd.kernel.rank(); ++idx) {
            auto D = butler_from_subbundle(*syso, summand_inclusion(K, kd.kernel, {idx}));
            CHECK(static_cast<long long>(D.S.rank() + D.F_S.rank()) ==
                  static_cast<long long>(D.W_rows.rows));
            CHECK(D.S.degree() + D.F_S.degree() == 0);
            auto A = audit_properties(D);
            CHECK(A.a_W_in_H0FS);
            CHECK(A.b_generated);
            CHECK(A.b_h0_dual_zero);
            CHECK(A.c_alpha_nonzero);
            CHECK(A.exactness);
            CHECK(A.rederive_S);
            if (A.d_applicable) CHECK(A.d_deg_bound);
        }
    }
}

TEST_CASE("rank-two subbundles of a rank-three dual span") {
    GFpField K(7);
    // n = 5 sections on O(2)+O(2): M has rank 3 and degree -4
    auto syso = random_generated_system(K, SplittingType({2, 2}), 5, 6);
    REQUIRE(syso.has_value());
    auto kd = dual_span(*syso);
    REQUIRE(kd.kernel.rank() == 3);
    const std::vector<std::vector<std::size_t>> picks = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& idx : picks) {
        auto D = butler_from_subbundle(*syso, summand_inclusion(K, kd.kernel, idx));
        CHECK(D.S.rank() == 2);
        CHECK(static_cast<long long>(D.S.rank() + D.F_S.rank()) ==
              static_cast<long long>(D.W_rows.rows));
        CHECK(D.S.degree() + D.F_S.degree() == 0);
        auto A = audit_properties(D);
        CHECK(A.a_W_in_H0FS);
        CHECK(A.b_generated);
        CHECK(A.c_alpha_nonzero);
        CHECK(A.exactness);
        CHECK(A.rederive_S);
        if (A.d_applicable) CHECK(A.d_deg_bound);
        // the diagram's W always generates exactly Im(alpha)
        auto rep = subsheaf_generated(*syso, D.W_canonical);
        CHECK(rep.rank_EW == D.im_alpha.first);
        CHECK(rep.deg_EW == D.im_alpha.second);
    }
}

TEST_CASE("non-summand saturated line subbundles") {
    RatField Q;
    auto sys = complete_system(Q, SplittingType({3}));
    auto kd = dual_span(sys);  // M = O(-1)^3
    // O(-2) -> M by a column of coprime linear forms: saturated, not a summand
    BundleMap<RatField> S{Q, SplittingType({-2}), kd.kernel, {}};
    S.ent = {parse_binary_form(Q, "s", 1), parse_binary_form(Q, "t", 1),
             parse_binary_form(Q, "s + t", 1)};
    bm_validate(S);
    REQUIRE(injection_minor_gcd_degree(S) == 0);
    auto D = butler_from_subbundle(sys, S);
    CHECK(D.S.degs == std::vector<long long>{-2});
    CHECK(D.F_S.degree() == 2);
    CHECK(static_cast<long long>(D.W_rows.rows) ==
          static_cast<long long>(D.F_S.rank()) + 1);
    auto A = audit_properties(D);
    CHECK(A.a_W_in_H0FS);
    CHECK(A.b_generated);
    CHECK(A.b_h0_dual_zero);
    CHECK(A.c_alpha_nonzero);
    CHECK(A.exactness);
    CHECK(A.rederive_S);
}

TEST_CASE("max-slope S on an unstable example reproduces the violating pair") {
    GFpField K(5);
    // type (2,5,4): every generated system is linearly unstable here
    auto syso = random_generated_system(K, SplittingType({2, 3}), 4, 1);
    REQUIRE(syso.has_value());
    auto v = linstab_exhaustive(*syso);
    REQUIRE(v.kind == SystemVerdict::unstable);

    auto kd = dual_span(*syso);
    // maximal-slope line subbundle of M = top twist summand
    auto D = butler_from_subbundle(*syso, summand_inclusion(K, kd.kernel, {0}));
    auto A = audit_properties(D);
    CHECK(A.d_applicable);

    // the diagram's W generates exactly Im(alpha) = E_W
    auto rep = subsheaf_generated(*syso, D.W_canonical);
    CHECK(rep.rank_EW == D.im_alpha.first);
    CHECK(rep.deg_EW == D.im_alpha.second);

    // and the certificate of that W sits on the non-strict side
    auto cert = linstab_check_one(*syso, D.W_canonical);
    REQUIRE(cert.has_value());
    CHECK((cert->core.relation == '<' || cert->core.relation == '='));
}

TEST_CASE("non-saturated and non-injective subbundles are refused") {
    RatField Q;
    auto sys = complete_system(Q, SplittingType({3}));
    auto kd = dual_span(sys);

    // multiply a summand inclusion by a linear form: injective but the image
    // is no longer saturated, and the defect is reported
    BundleMap<RatField> bad{Q, SplittingType({-2}), kd.kernel, {}};
    bad.ent = {parse_binary_form(Q, "s", 1), bf_zero(Q), bf_zero(Q)};
    bm_validate(bad);
    CHECK_THROWS_WITH_AS(butler_from_subbundle(sys, bad),
                         doctest::Contains("not saturated"), std::invalid_argument);

    BundleMap<RatField> zero = bm_zero(Q, SplittingType({-1}), kd.kernel);
    CHECK_THROWS_AS(butler_from_subbundle(sys, zero), std::invalid_argument);

    // S must live inside this system's dual span
    auto other = complete_system(Q, SplittingType({2}));
    auto kd_other = dual_span(other);
    CHECK_THROWS_AS(butler_from_subbundle(sys, summand_inclusion(Q, kd_other.kernel, {0})),
                    std::invalid_argument);
}

TEST_CASE("max subbundle slope helper") {
    SplittingType M({-1, -2, -4});
    CHECK(max_subbundle_slope(M, 1) == rat_of(-1));
    CHECK(max_subbundle_slope(M, 2) == make_rat(-3, 2));
    CHECK(max_subbundle_slope(M, 3) == make_rat(-7, 3));
    CHECK_THROWS_AS(max_subbundle_slope(M, 0), std::invalid_argument);
    CHECK_THROWS_AS(max_subbundle_slope(M, 4), std::invalid_argument);
}
