#pragma once

#include "ffield.hpp"

#include <optional>

namespace vl {

// Dense row-major matrix over a fixed field; entries are packed Fq values.
struct Mat {
    FieldPtr F = nullptr;
    int rows = 0, cols = 0;
    std::vector<u64> a;

    Mat() = default;
    Mat(FieldPtr F_, int r, int c) : F(F_), rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

    u64& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    u64 at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    static Mat identity(FieldPtr F, int n);
    static Mat zero(FieldPtr F, int r, int c) { return Mat(F, r, c); }

    bool operator==(const Mat& o) const {
        return F == o.F && rows == o.rows && cols == o.cols && a == o.a;
    }
    bool is_zero() const {
        for (u64 x : a) if (x) return false;
        return true;
    }
};

Mat mat_add(const Mat& x, const Mat& y);
Mat mat_sub(const Mat& x, const Mat& y);
Mat mat_mul(const Mat& x, const Mat& y);
Mat mat_scale(const Mat& x, u64 s);
Mat transpose(const Mat& x);
u64 trace(const Mat& x);

// Kronecker product; the left factor is the most significant index:
// (i1,i2) -> i1*x2.rows + i2. Fixed project-wide.
Mat kron(const Mat& x, const Mat& y);

// apply to a column vector
std::vector<u64> mat_apply(const Mat& m, const std::vector<u64>& v);

struct RrefResult {
    Mat R;                    // reduced row echelon form
    std::vector<int> pivots;  // pivot column per nonzero row
    int rank = 0;
};

RrefResult rref(const Mat& m);
int rank_of(const Mat& m);

// Columns form a basis of the right null space; deterministic (pivot order).
Mat kernel(const Mat& m);

// Column space basis (as columns), deterministic.
Mat column_space(const Mat& m);

// Solve m x = b for one or many right-hand sides; nullopt if inconsistent.
std::optional<Mat> solve(const Mat& m, const Mat& b);

std::optional<Mat> inverse(const Mat& m);

// x^e for square x
Mat mat_pow(Mat x, u64 e);

// Horizontal / vertical stacking.
Mat hstack(const Mat& x, const Mat& y);
Mat vstack(const Mat& x, const Mat& y);

// Submatrix of selected columns.
Mat take_cols(const Mat& m, const std::vector<int>& idx);

// entries of column j
std::vector<u64> col_of(const Mat& m, int j);
Mat col_matrix(FieldPtr F, const std::vector<u64>& v);

// vec(T) with column-major layout: T (r x c) -> vector of length r*c where
// entry (i,j) sits at j*r + i.
std::vector<u64> vec_of(const Mat& t);
Mat unvec(FieldPtr F, const std::vector<u64>& v, int rows, int cols);

// ---- subspaces ---------------------------------------------------------------

// Reduce the columns of basis to a canonical independent spanning set.
Mat canonical_basis(const Mat& basis);

// Coordinates of v in the column space of basis (basis must be independent);
// nullopt if v is outside.
std::optional<std::vector<u64>> coords_in(const Mat& basis, const std::vector<u64>& v);

bool subspace_contains(const Mat& basis, const Mat& candidates);

// Basis of the intersection of two column spaces.
Mat intersect_spaces(const Mat& x, const Mat& y);

// Basis of sum of column spaces.
Mat sum_spaces(const Mat& x, const Mat& y);

// A complement of the column space of basis inside the full space, chosen by
// pivot positions (canonical).
Mat pivot_complement(const Mat& basis, int ambient_dim);

// ---- structured operators ----------------------------------------------------

// Lazily evaluated operator on a tensor-product space: a sum of Kronecker
// products of small factors plus coordinate permutations, never materialized
// unless asked. apply() agrees with dense materialization (tested on small dims).
struct StructuredOp {
    struct Term {
        u64 scale = 1;
        std::vector<Mat> factors;      // Kronecker factors, left = most significant
        std::vector<int> perm;         // optional coordinate permutation applied after
    };
    FieldPtr F = nullptr;
    int dim = 0;
    std::vector<Term> terms;

    static StructuredOp dense(const Mat& m);
    static StructuredOp kron_op(FieldPtr F, const std::vector<Mat>& factors);
    static StructuredOp perm_op(FieldPtr F, const std::vector<int>& perm);
    static StructuredOp sum(StructuredOp a, const StructuredOp& b);
    StructuredOp scaled(u64 s) const;

    std::vector<u64> apply(const std::vector<u64>& v) const;
    Mat materialize() const; // dense dim x dim; for tests and small dims
};

// Basis of the intersection of kernels, computed by iterated restriction: the
// kernel of the first operator, then each next operator restricted to the
// running subspace. Dense dim x dim matrices are only formed per-column.
Mat intersect_kernels(const std::vector<StructuredOp>& ops, int dim);

// Same for dense operators.
Mat intersect_kernels_dense(const std::vector<Mat>& ops);

// Kernel of a sparse matrix given by (row, col, value) triplets. Rows are
// compressed; characteristic 2 uses the packed eliminator internally.
struct Triplet {
    int r, c;
    u64 v;
};
Mat kernel_of_triplets(FieldPtr F, int rows, int cols, const std::vector<Triplet>& entries);

} // namespace vl
