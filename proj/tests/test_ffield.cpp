#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ffield.hpp"

using namespace vl;

TEST_CASE("canonical moduli") {
    auto F2 = make_field(2, 1);
    CHECK(F2->modulus == std::vector<u32>{0, 1}); // prime field: modulus x
    auto F4 = make_field(2, 2);
    CHECK(F4->modulus == std::vector<u32>{1, 1, 1}); // x^2+x+1, unique quadratic
    auto F8 = make_field(2, 3);
    CHECK(F8->modulus == std::vector<u32>{1, 1, 0, 1}); // x^3+x+1 beats x^3+x^2+1
    auto F16 = make_field(2, 4);
    CHECK(F16->modulus == std::vector<u32>{1, 1, 0, 0, 1}); // x^4+x+1
    auto F64 = make_field(2, 6);
    CHECK(F64->k == 6);
    CHECK(F64->q == 64);
    auto F9 = make_field(3, 2);
    CHECK(F9->q == 9);
    // canonical instances: same pointer
    CHECK(make_field(2, 2) == F4);
}

TEST_CASE("make_field rejects bad input") {
    CHECK_THROWS_AS(make_field(4, 1), VlError);
    CHECK_THROWS_AS(make_field(6, 2), VlError);
    CHECK_THROWS_AS(make_field(2, 64), VlError); // 2^64 > 2^48
}

TEST_CASE("arithmetic in GF(4)") {
    auto F = make_field(2, 2);
    u64 a = 2; // alpha = class of x
    CHECK(F->mul(a, a) == F->add(a, 1)); // alpha^2 = alpha + 1
    CHECK(F->mul(a, F->add(a, 1)) == 1); // alpha * (alpha+1) = 1
    CHECK(F->inv(a) == F->add(a, 1));
    CHECK(F->pow(a, 3) == 1);
}

TEST_CASE("frobenius") {
    auto F4 = make_field(2, 2);
    u64 a = 2;
    CHECK(F4->frob(a, 1) == F4->add(a, 1)); // alpha^2 = alpha+1
    CHECK(F4->frob(a, 0) == a);
    CHECK(F4->frob(a, 2) == a); // order 2
    CHECK(F4->frob(F4->frob(a, 1), -1) == a);

    auto F = make_field(3, 4);
    Rng rng(99);
    for (int t = 0; t < 50; ++t) {
        u64 e = rng.below(F->q);
        // cyclic Galois group of order k
        CHECK(F->frob(F->frob(e, 1), F->k - 1) == e);
    }
}

TEST_CASE("field arithmetic laws on random elements") {
    for (auto [p, k] : std::vector<std::pair<u32, u32>>{{2, 4}, {3, 2}, {5, 3}, {2, 6}}) {
        auto F = make_field(p, k);
        Rng rng(42 + p * 100 + k);
        for (int t = 0; t < 200; ++t) {
            u64 a = rng.below(F->q), b = rng.below(F->q), c = rng.below(F->q);
            CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
            CHECK(F->mul(a, b) == F->mul(b, a));
            CHECK(F->add(a, F->neg(a)) == 0);
            if (a) CHECK(F->mul(a, F->inv(a)) == 1);
            CHECK(F->pow(a, F->q) == a); // x^q = x
        }
    }
}

TEST_CASE("embeddings") {
    auto F2 = make_field(2, 1);
    auto F4 = make_field(2, 2);
    auto F8 = make_field(2, 3);
    auto F64 = make_field(2, 6);

    // 1 maps to 1
    CHECK(embed_value(F2, 1, F64) == 1);

    // image of alpha in GF(64) satisfies x^2+x+1 = 0
    u64 ia = embed_value(F4, 2, F64);
    CHECK(F64->add(F64->add(F64->mul(ia, ia), ia), 1) == 0);

    // image of GF(8) generator b satisfies b^3 = b+1
    u64 ib = embed_value(F8, 2, F64);
    CHECK(F64->pow(ib, 3) == F64->add(ib, 1));

    CHECK_THROWS_AS(embed_value(F4, 2, F8), VlError); // 2 does not divide 3

    // ring homomorphism on random pairs
    Rng rng(7);
    for (int t = 0; t < 100; ++t) {
        u64 a = rng.below(F4->q), b = rng.below(F4->q);
        CHECK(embed_value(F4, F4->add(a, b), F64) ==
              F64->add(embed_value(F4, a, F64), embed_value(F4, b, F64)));
        CHECK(embed_value(F4, F4->mul(a, b), F64) ==
              F64->mul(embed_value(F4, a, F64), embed_value(F4, b, F64)));
    }
}

TEST_CASE("factor_univariate basics") {
    auto F2 = make_field(2, 1);
    auto F4 = make_field(2, 2);

    // x^2+x+1 irreducible over GF(2)
    FqPoly f = FqPoly::from(F2, {1, 1, 1});
    auto facs = factor_univariate(f, 1);
    REQUIRE(facs.size() == 1);
    CHECK(facs[0].second == 1);
    CHECK(facs[0].first.c == std::vector<u64>{1, 1, 1});

    // over GF(4): splits into (x+alpha)(x+alpha+1)
    FqPoly g = FqPoly::from(F4, {1, 1, 1});
    auto gf = factor_univariate(g, 1);
    REQUIRE(gf.size() == 2);
    CHECK(gf[0].first.deg() == 1);
    CHECK(gf[1].first.deg() == 1);
    auto roots = poly_roots(g, 1);
    CHECK(roots == std::vector<u64>{2, 3});

    // (x+1)^2 over GF(2)
    FqPoly h = poly_mul(FqPoly::from(F2, {1, 1}), FqPoly::from(F2, {1, 1}));
    auto hf = factor_univariate(h, 1);
    REQUIRE(hf.size() == 1);
    CHECK(hf[0].second == 2);
    CHECK(hf[0].first.c == std::vector<u64>{1, 1});
}

TEST_CASE("factor_univariate roundtrip on random polynomials") {
    for (auto [p, k] : std::vector<std::pair<u32, u32>>{{2, 1}, {2, 2}, {3, 1}, {2, 4}, {3, 2}}) {
        auto F = make_field(p, k);
        Rng rng(1000 + p + k);
        for (int t = 0; t < 200; ++t) {
            int d = 1 + static_cast<int>(rng.below(8));
            FqPoly f{F, std::vector<u64>(d + 1)};
            for (auto& c : f.c) c = rng.below(F->q);
            f.c[d] = 1 + rng.below(F->q - 1); // ensure degree d
            f.normalize();
            if (f.deg() < 1) continue;
            auto facs = factor_univariate(f, t);
            FqPoly prod = FqPoly::constant(F, f.lead());
            for (auto& [g, m] : facs) {
                CHECK(g.lead() == 1);
                CHECK(is_irreducible(g));
                for (int i = 0; i < m; ++i) prod = poly_mul(prod, g);
            }
            CHECK(poly_equal(prod, f));
        }
    }
}

TEST_CASE("factorization deterministic per seed") {
    auto F = make_field(2, 4);
    FqPoly f{F, {}};
    f.c = {3, 7, 1, 9, 2, 1};
    f.normalize();
    auto a = factor_univariate(f, 5);
    auto b = factor_univariate(f, 5);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(poly_equal(a[i].first, b[i].first));
        CHECK(a[i].second == b[i].second);
    }
}
