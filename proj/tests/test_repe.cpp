#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "repe.hpp"

using namespace vl;

namespace {
FieldPtr F4() { return make_field(2, 2); }
FieldPtr F16() { return make_field(2, 4); }
PP1 lam_alpha() { return PP1::finite(Fq{F4(), 2}); }
LambdaVec lv_alpha() { return LambdaVec::make(F4(), {1, 2}); }
} // namespace

TEST_CASE("make_A block matrices") {
    ERep a = make_A(1, lam_alpha(), F4());
    CHECK(a.dim == 2);
    CHECK(a.gens[0].at(1, 0) == 1);
    CHECK(a.gens[1].at(1, 0) == 2); // alpha

    ERep a0 = make_A(1, PP1::finite(Fq{make_field(2, 1), 0}), make_field(2, 1));
    CHECK(a0.gens[1] == Mat::identity(make_field(2, 1), 2)); // lambda = 0: trivial g2

    ERep a2 = make_A(2, lam_alpha(), F4());
    CHECK(a2.dim == 4);
    CHECK(invariants(a2).cols == 2); // invariant subspace of dim 2

    ERep ainf = make_A(2, PP1::inf(), F4());
    // roles reversed: g2 has the identity corner, g1 the nilpotent Jordan corner
    CHECK(ainf.gens[1].at(2, 0) == 1);
    CHECK(ainf.gens[0].at(2, 0) == 0);
    CHECK(ainf.gens[0].at(3, 1) == 0);
}

TEST_CASE("make_V") {
    ERep v = make_V(lv_alpha());
    CHECK(v.dim == 2);
    CHECK(v.gens[0].at(1, 0) == 1);
    CHECK(v.gens[1].at(1, 0) == 2);

    // p=2, n=1: regular representation of C2
    auto F2 = make_field(2, 1);
    ERep v1 = make_V(LambdaVec::make(F2, {1}));
    CHECK(v1.dim == 2);
    CHECK(rank_of(v1.gen_minus_one(0)) == 1);

    // p=3, n=2 over GF(9) with independent entries
    auto F9 = make_field(3, 2);
    ERep v3 = make_V(LambdaVec::make(F9, {1, 3})); // 3 = generator of GF(9)
    CHECK(v3.dim == 2);
    CHECK(mat_pow(v3.gens[0], 3) == Mat::identity(F9, 2));

    // dependent entries rejected
    CHECK_THROWS_AS(make_V(LambdaVec::make(F4(), {1, 1})), VlError);
}

TEST_CASE("tensor dual dsum") {
    ERep a = make_A(1, lam_alpha(), F4());
    ERep t = tensor(a, a);
    CHECK(t.dim == 4);

    ERep d = dual(a);
    CHECK(d.dim == 2);
    // self-dual family: same invariants profile
    CHECK(invariants(d).cols == invariants(a).cols);

    ERep s = dsum(a, trivial_rep(F4(), 2, 2));
    CHECK(s.dim == 3);
    CHECK(invariants(s).cols == 2);
}

TEST_CASE("hom space dimensions") {
    FieldPtr F = F16();
    PP1 lam = PP1::finite(Fq{F, 2});
    ERep one = trivial_rep(F, 2, 2);
    ERep reg = regular_rep(F, 2, 2);

    CHECK(hom_dim(one, one) == 1);
    for (int m = 1; m <= 4; ++m) {
        ERep am = make_A(m, lam, F);
        CHECK(hom_dim(one, am) == m); // socle dimension m
        CHECK(hom_dim(am, am) == m + m * m);
    }
    // maps out of the free module are determined by the image of 1
    ERep a2 = make_A(2, lam, F);
    CHECK(hom_dim(reg, a2) == a2.dim);
    CHECK(hom_dim(reg, reg) == 4);
}

TEST_CASE("hom duality on random pairs") {
    FieldPtr F = F4();
    Rng rng(4);
    for (int t = 0; t < 6; ++t) {
        ERep a = random_module(2, 2, F, 6, 100 + t);
        ERep b = random_module(2, 2, F, 6, 200 + t);
        if (a.dim == 0 || b.dim == 0) continue;
        CHECK(hom_dim(a, b) == hom_dim(dual(b), dual(a)));
    }
}

TEST_CASE("socle radical top") {
    FieldPtr F = F4();
    ERep one = trivial_rep(F, 2, 2);
    ERep reg = regular_rep(F, 2, 2);
    CHECK(socle_space(reg).cols == 1);
    CHECK(top_dim(one) == 1);
    for (int m = 1; m <= 3; ++m) {
        ERep am = make_A(m, lam_alpha(), F);
        Mat soc = socle_space(am);
        Mat rad = radical_space(am);
        CHECK(soc.cols == m);
        CHECK(rad.cols == m);
        CHECK(subspace_contains(soc, rad));
        CHECK(subspace_contains(rad, soc));
    }
}

TEST_CASE("omega") {
    FieldPtr F = F4();
    ERep one = trivial_rep(F, 2, 2);

    ERep w1 = omega(one, 1);
    CHECK(w1.dim == 3);
    CHECK(socle_space(w1).cols == 1); // simple socle

    ERep wm1 = omega(one, -1);
    CHECK(wm1.dim == 3);
    CHECK(top_dim(wm1) == 1); // simple top

    ERep w0 = omega(one, 0);
    CHECK(w0.dim == 1);

    // omega and its inverse cancel stably
    ERep back = omega(omega(one, 1), -1);
    CHECK(back.dim == 1);
    CHECK(top_dim(back) == 1);

    ERep w2 = omega(one, 2);
    CHECK(w2.dim == 5);
    ERep wm2 = omega(one, -2);
    CHECK(wm2.dim == 5);
    CHECK(top_dim(w2) == 3);
    CHECK(top_dim(wm2) == 2);
}

TEST_CASE("h_lambda") {
    FieldPtr F = F4();
    auto lv = lv_alpha();
    ERep reg = regular_rep(F, 2, 2);
    ERep one = trivial_rep(F, 2, 2);
    ERep v = make_V(lv);

    Mat h_reg = h_lambda(reg, lv);
    CHECK(h_reg.cols == 1);
    Mat inv_reg = invariants(reg);
    CHECK(subspace_contains(inv_reg, h_reg));
    CHECK(subspace_contains(h_reg, inv_reg)); // equality on projectives

    CHECK(h_lambda(one, lv).cols == 0);
    Mat hv = h_lambda(v, lv);
    CHECK(hv.cols == 1);
    CHECK(subspace_contains(socle_space(v), hv));

    // always inside invariants
    for (int t = 0; t < 5; ++t) {
        ERep m = random_module(2, 2, F, 8, 300 + t);
        if (m.dim == 0) continue;
        CHECK(subspace_contains(invariants(m), h_lambda(m, lv)));
    }
}

TEST_CASE("k_ideal") {
    FieldPtr F = F4();
    auto lv = lv_alpha();
    ERep one = trivial_rep(F, 2, 2);
    ERep v = make_V(lv);

    // K(1, V) is all of Hom(1, V)
    auto q1 = quot_hom_data(one, v, lv);
    CHECK(q1.full.dim() == 1);
    CHECK(q1.ideal_vecs.cols == 1);
    CHECK(q1.quotient_dim == 0);

    // K(1, 1) = 0
    auto q2 = quot_hom_data(one, one, lv);
    CHECK(q2.full.dim() == 1);
    CHECK(q2.ideal_vecs.cols == 0);
    CHECK(q2.quotient_dim == 1);

    // dim K(V, V) = 1, so End(V)/K is one-dimensional
    auto q3 = quot_hom_data(v, v, lv);
    CHECK(q3.full.dim() == 2);
    CHECK(q3.ideal_vecs.cols == 1);
    CHECK(q3.quotient_dim == 1);
}

TEST_CASE("ideal closure under composition and tensoring") {
    FieldPtr F = F16();
    auto lv = LambdaVec::make(F, {1, 2});
    ERep v = make_V(lv);
    ERep a2 = make_A(2, PP1::finite(Fq{F, 2}), F);
    ERep z = make_A(1, PP1::finite(Fq{F, 2}), F);

    Mat kvv = k_ideal_vecs(v, a2, lv);
    HomSpace hv = hom_space(v, a2);
    Rng rng(9);
    for (int t = 0; t < 10 && kvv.cols > 0; ++t) {
        // random element of K(v, a2)
        std::vector<u64> coeff(kvv.cols);
        for (auto& c : coeff) c = rng.below(F->q);
        std::vector<u64> vec(static_cast<size_t>(v.dim) * a2.dim, 0);
        for (int j = 0; j < kvv.cols; ++j)
            for (size_t i = 0; i < vec.size(); ++i)
                vec[i] = F->add(vec[i], F->mul(coeff[j], kvv.at(static_cast<int>(i), j)));
        Mat kmat = unvec(F, vec, a2.dim, v.dim);
        // compose with random maps a: v' -> v and b: a2 -> a2'
        HomSpace pre = hom_space(z, v);
        HomSpace post = hom_space(a2, a2);
        if (pre.dim() == 0 || post.dim() == 0) continue;
        Mat a = pre.basis[rng.below(pre.dim())];
        Mat b = post.basis[rng.below(post.dim())];
        Mat comp = mat_mul(b, mat_mul(kmat, a));
        Mat kk = k_ideal_vecs(z, a2, lv);
        auto cv = vec_of(comp);
        CHECK(subspace_contains(kk, col_matrix(F, cv)));
        // tensoring with identity stays in the ideal
        Mat kz = kron(kmat, Mat::identity(F, z.dim));
        Mat kk2 = k_ideal_vecs(tensor(v, z), tensor(a2, z), lv);
        CHECK(subspace_contains(kk2, col_matrix(F, vec_of(kz))));
    }
}

TEST_CASE("negligible") {
    FieldPtr F = F4();
    ERep one = trivial_rep(F, 2, 2);
    ERep a2 = make_A(2, lam_alpha(), F4());
    CHECK(negligible(Mat::identity(F, a2.dim), a2, a2));
    CHECK(!negligible(Mat::identity(F, 1), one, one));
    ERep wm1 = omega(one, -1);
    CHECK(!negligible(Mat::identity(F, wm1.dim), wm1, wm1)); // odd dimension
}

TEST_CASE("split_free") {
    FieldPtr F = F4();
    ERep reg = regular_rep(F, 2, 2);
    ERep a1 = make_A(1, lam_alpha(), F);

    auto s0 = split_free(a1);
    CHECK(s0.free_rank == 0);
    CHECK(s0.residue.dim == 2);

    ERep m = dsum(dsum(reg, a1), reg);
    auto s = split_free(m);
    CHECK(s.free_rank == 2);
    CHECK(s.residue.dim == 2);

    // tensor products of A's contain known free parts
    ERep t = tensor(make_A(2, lam_alpha(), F), make_A(2, lam_alpha(), F));
    auto st = split_free(t);
    CHECK(st.free_rank == 2); // 16 = 8 + 2*4
    CHECK(st.residue.dim == 8);

    // over C_2^3 as well
    ERep reg3 = regular_rep(F, 2, 3);
    ERep one3 = trivial_rep(F, 2, 3);
    auto s3 = split_free(dsum(one3, reg3));
    CHECK(s3.free_rank == 1);
    CHECK(s3.residue.dim == 1);
}

TEST_CASE("tensor with unit is identity") {
    FieldPtr F = F4();
    for (int t = 0; t < 5; ++t) {
        ERep m = random_module(2, 2, F, 8, 500 + t);
        if (m.dim == 0) continue;
        ERep mt = tensor(m, trivial_rep(F, 2, 2));
        CHECK(mt.dim == m.dim);
        for (int i = 0; i < m.n; ++i) CHECK(mt.gens[i] == m.gens[i]);
    }
}

TEST_CASE("random_module determinism and relations") {
    FieldPtr F = F4();
    CHECK(random_module(2, 2, F, 0, 5).dim == 0);
    ERep a = random_module(2, 2, F, 8, 77);
    ERep b = random_module(2, 2, F, 8, 77);
    CHECK(a.dim == b.dim);
    for (int i = 0; i < a.n; ++i) CHECK(a.gens[i] == b.gens[i]);
    ERep c = random_module(2, 2, F, 8, 78);
    bool same = (c.dim == a.dim);
    if (same) {
        bool all_eq = true;
        for (int i = 0; i < a.n; ++i)
            if (!(c.gens[i] == a.gens[i])) all_eq = false;
        // different seeds should usually differ; not a hard guarantee
        WARN(all_eq == false);
    }
}

TEST_CASE("frobenius interplay with module data") {
    // invariants of V over growing fields stay rank 1
    for (auto [p, k] : std::vector<std::pair<u32, u32>>{{2, 2}, {2, 4}, {3, 2}}) {
        auto F = make_field(p, k);
        LambdaVec lv = LambdaVec::make(F, {1, static_cast<u64>(p)});
        if (!lv.faithful()) continue;
        ERep v = make_V(lv);
        CHECK(invariants(v).cols == 1);
    }
}
