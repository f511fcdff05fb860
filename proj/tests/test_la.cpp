#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "la.hpp"

using namespace vl;

namespace {
Mat random_mat(FieldPtr F, int r, int c, Rng& rng) {
    Mat m(F, r, c);
    for (auto& x : m.a) x = rng.below(F->q);
    return m;
}
} // namespace

TEST_CASE("rref examples") {
    auto F2 = make_field(2, 1);
    Mat m(F2, 2, 2);
    m.at(0, 0) = 1; m.at(1, 0) = 1; m.at(1, 1) = 1;
    CHECK(rank_of(m) == 2);

    Mat z(F2, 3, 3);
    CHECK(rank_of(z) == 0);

    Mat ones(F2, 2, 2);
    ones.at(0, 0) = ones.at(0, 1) = ones.at(1, 0) = ones.at(1, 1) = 1;
    CHECK(rank_of(ones) == 1);
    Mat K = kernel(ones);
    REQUIRE(K.cols == 1);
    CHECK(K.at(0, 0) == 1);
    CHECK(K.at(1, 0) == 1);
}

TEST_CASE("kernel examples") {
    auto F2 = make_field(2, 1);
    // g-1 for g = [[1,0],[1,1]]
    Mat n(F2, 2, 2);
    n.at(1, 0) = 1;
    Mat K = kernel(n);
    REQUIRE(K.cols == 1);
    CHECK(K.at(0, 0) == 0);
    CHECK(K.at(1, 0) == 1);

    CHECK(kernel(Mat::identity(F2, 4)).cols == 0);

    auto F4 = make_field(2, 2);
    Mat row(F4, 1, 2);
    row.at(0, 0) = 1; row.at(0, 1) = 1;
    Mat K2 = kernel(row);
    REQUIRE(K2.cols == 1);
    CHECK(K2.at(0, 0) == K2.at(1, 0));
}

TEST_CASE("rank-nullity on random matrices") {
    for (auto [p, k] : std::vector<std::pair<u32, u32>>{{2, 1}, {2, 2}, {3, 1}, {2, 4}}) {
        auto F = make_field(p, k);
        Rng rng(500 + p * 10 + k);
        for (int t = 0; t < 125; ++t) {
            int r = 1 + static_cast<int>(rng.below(8));
            int c = 1 + static_cast<int>(rng.below(8));
            Mat m = random_mat(F, r, c, rng);
            Mat K = kernel(m);
            CHECK(rank_of(m) + K.cols == c);
            if (K.cols) CHECK(mat_mul(m, K).is_zero());
        }
    }
}

TEST_CASE("packed elimination agrees with scalar path") {
    auto F4 = make_field(2, 2);
    Rng rng(77);
    // large enough to hit the packed path
    Mat m = random_mat(F4, 160, 128, rng);
    auto big = rref(m); // packed
    // force scalar by slicing into a small check: verify R*ker = 0 and rank consistency
    Mat K = kernel(m);
    CHECK(rank_of(m) + K.cols == m.cols);
    CHECK(mat_mul(m, K).is_zero());
    // idempotence: rref of rref is itself
    auto again = rref(big.R);
    CHECK(again.R == big.R);
}

TEST_CASE("kron") {
    auto F2 = make_field(2, 1);
    CHECK(kron(Mat::identity(F2, 2), Mat::identity(F2, 2)) == Mat::identity(F2, 4));

    auto F4 = make_field(2, 2);
    Rng rng(3);
    Mat a = random_mat(F4, 2, 2, rng), b = random_mat(F4, 3, 3, rng);
    CHECK(kron(a, b).rows == 6);
    CHECK(kron(a, b).cols == 6);

    // mixed product property on random 2x2
    for (int t = 0; t < 20; ++t) {
        Mat x = random_mat(F4, 2, 2, rng), y = random_mat(F4, 2, 2, rng);
        Mat z = random_mat(F4, 2, 2, rng), w = random_mat(F4, 2, 2, rng);
        CHECK(mat_mul(kron(x, y), kron(z, w)) == kron(mat_mul(x, z), mat_mul(y, w)));
    }

    // associativity under the fixed index convention
    for (int t = 0; t < 10; ++t) {
        Mat x = random_mat(F4, 2, 2, rng), y = random_mat(F4, 3, 3, rng), z = random_mat(F4, 2, 2, rng);
        CHECK(kron(kron(x, y), z) == kron(x, kron(y, z)));
    }
}

TEST_CASE("solve and inverse") {
    auto F = make_field(2, 2);
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        Mat m = random_mat(F, 4, 4, rng);
        auto mi = inverse(m);
        if (mi) {
            CHECK(mat_mul(m, *mi) == Mat::identity(F, 4));
        } else {
            CHECK(rank_of(m) < 4);
        }
    }
}

TEST_CASE("subspace helpers") {
    auto F = make_field(2, 2);
    Rng rng(13);
    Mat b = random_mat(F, 6, 3, rng);
    Mat cb = canonical_basis(b);
    CHECK(cb.cols == rank_of(b));
    CHECK(subspace_contains(cb, b));
    CHECK(subspace_contains(b, cb));

    Mat comp = pivot_complement(cb, 6);
    CHECK(cb.cols + comp.cols == 6);
    CHECK(rank_of(hstack(cb, comp)) == 6);
}

TEST_CASE("structured op agrees with materialization") {
    auto F = make_field(2, 2);
    Rng rng(21);
    Mat a = random_mat(F, 3, 3, rng), b = random_mat(F, 4, 4, rng), c = random_mat(F, 2, 2, rng);
    auto op = StructuredOp::kron_op(F, {a, b, c});
    Mat dense = kron(kron(a, b), c);
    CHECK(op.materialize() == dense);

    std::vector<int> perm(24);
    for (int i = 0; i < 24; ++i) perm[i] = (i * 7 + 3) % 24;
    auto pop = StructuredOp::perm_op(F, perm);
    auto s = StructuredOp::sum(op, pop);
    Mat mdense = s.materialize();
    for (int t = 0; t < 5; ++t) {
        std::vector<u64> v(24);
        for (auto& x : v) x = rng.below(F->q);
        CHECK(s.apply(v) == mat_apply(mdense, v));
    }
}

TEST_CASE("intersect_kernels") {
    auto F = make_field(2, 1);
    // zero operator: full space
    auto zero = StructuredOp::dense(Mat(F, 4, 4));
    CHECK(intersect_kernels({zero}, 4).cols == 4);
    // identity: nothing
    auto id = StructuredOp::dense(Mat::identity(F, 4));
    CHECK(intersect_kernels({id}, 4).cols == 0);

    // agreement with the dense stacked kernel on random ops
    auto F4 = make_field(2, 2);
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        Mat a = random_mat(F4, 6, 6, rng), b = random_mat(F4, 6, 6, rng);
        Mat stacked = vstack(a, b);
        Mat K1 = kernel(stacked);
        Mat K2 = intersect_kernels({StructuredOp::dense(a), StructuredOp::dense(b)}, 6);
        CHECK(K1.cols == K2.cols);
        CHECK(subspace_contains(K1, K2));
    }
}
