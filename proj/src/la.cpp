#include "la.hpp"

#include <algorithm>
#include <cstring>

namespace vl {

Mat Mat::identity(FieldPtr F, int n) {
    Mat m(F, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Mat mat_add(const Mat& x, const Mat& y) {
    require(x.F == y.F && x.rows == y.rows && x.cols == y.cols, "mat_add: shape/field mismatch");
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.F->add(x.a[i], y.a[i]);
    return r;
}

Mat mat_sub(const Mat& x, const Mat& y) {
    require(x.F == y.F && x.rows == y.rows && x.cols == y.cols, "mat_sub: shape/field mismatch");
    Mat r = x;
    for (size_t i = 0; i < r.a.size(); ++i) r.a[i] = x.F->sub(x.a[i], y.a[i]);
    return r;
}

Mat mat_mul(const Mat& x, const Mat& y) {
    require(x.F == y.F, "mat_mul: field mismatch");
    require(x.cols == y.rows, "mat_mul: inner dimension mismatch");
    FieldPtr F = x.F;
    Mat r(F, x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int l = 0; l < x.cols; ++l) {
            u64 xv = x.at(i, l);
            if (!xv) continue;
            const u64* yrow = &y.a[static_cast<size_t>(l) * y.cols];
            u64* rrow = &r.a[static_cast<size_t>(i) * y.cols];
            for (int j = 0; j < y.cols; ++j) {
                if (yrow[j]) rrow[j] = F->add(rrow[j], F->mul(xv, yrow[j]));
            }
        }
    }
    return r;
}

Mat mat_scale(const Mat& x, u64 s) {
    Mat r = x;
    for (auto& v : r.a) v = x.F->mul(v, s);
    return r;
}

Mat transpose(const Mat& x) {
    Mat r(x.F, x.cols, x.rows);
    for (int i = 0; i < x.rows; ++i)
        for (int j = 0; j < x.cols; ++j) r.at(j, i) = x.at(i, j);
    return r;
}

u64 trace(const Mat& x) {
    require(x.rows == x.cols, "trace: not square");
    u64 t = 0;
    for (int i = 0; i < x.rows; ++i) t = x.F->add(t, x.at(i, i));
    return t;
}

Mat kron(const Mat& x, const Mat& y) {
    require(x.F == y.F, "kron: field mismatch");
    FieldPtr F = x.F;
    Mat r(F, x.rows * y.rows, x.cols * y.cols);
    for (int i1 = 0; i1 < x.rows; ++i1)
        for (int j1 = 0; j1 < x.cols; ++j1) {
            u64 v = x.at(i1, j1);
            if (!v) continue;
            for (int i2 = 0; i2 < y.rows; ++i2)
                for (int j2 = 0; j2 < y.cols; ++j2) {
                    u64 w = y.at(i2, j2);
                    if (w) r.at(i1 * y.rows + i2, j1 * y.cols + j2) = F->mul(v, w);
                }
        }
    return r;
}

std::vector<u64> mat_apply(const Mat& m, const std::vector<u64>& v) {
    require(static_cast<int>(v.size()) == m.cols, "mat_apply: size mismatch");
    std::vector<u64> r(m.rows, 0);
    for (int i = 0; i < m.rows; ++i) {
        u64 acc = 0;
        const u64* row = &m.a[static_cast<size_t>(i) * m.cols];
        for (int j = 0; j < m.cols; ++j)
            if (row[j] && v[j]) acc = m.F->add(acc, m.F->mul(row[j], v[j]));
        r[i] = acc;
    }
    return r;
}

// ---- packed elimination for characteristic 2 --------------------------------

namespace {

// k bitplanes per row, 64-bit words; used for large GF(2^k) elimination
struct PackedRows {
    FieldPtr F;
    int rows, cols, k, words;
    std::vector<u64> bits; // ((row * k) + plane) * words + word

    PackedRows(FieldPtr F_, int r, int c)
        : F(F_), rows(r), cols(c), k(static_cast<int>(F_->k)),
          words((c + 63) / 64), bits(static_cast<size_t>(r) * F_->k * ((c + 63) / 64), 0) {}

    PackedRows(const Mat& m) : PackedRows(m.F, m.rows, m.cols) {
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                u64 v = m.at(i, j);
                for (int s = 0; s < k; ++s)
                    if ((v >> s) & 1) plane(i, s)[j >> 6] |= 1ULL << (j & 63);
            }
    }

    void xor_entry(int i, int j, u64 v) {
        for (int s = 0; s < k; ++s)
            if ((v >> s) & 1) plane(i, s)[j >> 6] ^= 1ULL << (j & 63);
    }

    u64* plane(int row, int s) { return &bits[(static_cast<size_t>(row) * k + s) * words]; }
    const u64* plane(int row, int s) const { return &bits[(static_cast<size_t>(row) * k + s) * words]; }

    u64 get(int i, int j) const {
        u64 v = 0;
        for (int s = 0; s < k; ++s)
            v |= ((plane(i, s)[j >> 6] >> (j & 63)) & 1) << s;
        return v;
    }

    // bit matrix of multiplication by c: column s holds c * x^s
    void mul_table(u64 c, u64 out[16]) const {
        u64 xs = 1;
        for (int s = 0; s < k; ++s) {
            out[s] = F->mul(c, xs);
            xs = F->mul(xs, 2); // times x
        }
    }

    // row[dst] += c * row[src]
    void addmul(int dst, int src, u64 c) {
        if (!c) return;
        u64 tab[16];
        mul_table(c, tab);
        for (int t = 0; t < k; ++t) {
            u64* out = plane(dst, t);
            for (int s = 0; s < k; ++s) {
                if ((tab[s] >> t) & 1) {
                    const u64* in = plane(src, s);
                    for (int w = 0; w < words; ++w) out[w] ^= in[w];
                }
            }
        }
    }

    // row[i] *= c
    void scale(int i, u64 c) {
        if (c == 1) return;
        u64 tab[16];
        mul_table(c, tab);
        std::vector<u64> tmp(static_cast<size_t>(k) * words);
        for (int s = 0; s < k; ++s)
            std::memcpy(&tmp[static_cast<size_t>(s) * words], plane(i, s), sizeof(u64) * words);
        for (int t = 0; t < k; ++t) {
            u64* out = plane(i, t);
            std::memset(out, 0, sizeof(u64) * words);
            for (int s = 0; s < k; ++s)
                if ((tab[s] >> t) & 1)
                    for (int w = 0; w < words; ++w) out[w] ^= tmp[static_cast<size_t>(s) * words + w];
        }
    }

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int s = 0; s < k; ++s) {
            u64 *pi = plane(i, s), *pj = plane(j, s);
            for (int w = 0; w < words; ++w) std::swap(pi[w], pj[w]);
        }
    }

    Mat to_mat() const {
        Mat m(F, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = get(i, j);
        return m;
    }
};

std::vector<int> rref_packed_inplace(PackedRows& P) {
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < P.cols && r < P.rows; ++c) {
        int piv = -1;
        for (int i = r; i < P.rows; ++i)
            if (P.get(i, c)) { piv = i; break; }
        if (piv < 0) continue;
        P.swap_rows(r, piv);
        u64 v = P.get(r, c);
        P.scale(r, P.F->inv(v));
        for (int i = 0; i < P.rows; ++i) {
            if (i == r) continue;
            u64 w = P.get(i, c);
            if (w) P.addmul(i, r, w); // char 2: add = subtract
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

RrefResult rref_packed(const Mat& m) {
    PackedRows P(m);
    RrefResult res;
    res.pivots = rref_packed_inplace(P);
    res.rank = static_cast<int>(res.pivots.size());
    res.R = P.to_mat();
    return res;
}

// kernel basis straight from a reduced PackedRows, avoiding dense intermediates
Mat kernel_from_packed(const PackedRows& P, const std::vector<int>& pivots) {
    std::vector<char> is_pivot(P.cols, 0);
    for (int c : pivots) is_pivot[c] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < P.cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Mat K(P.F, P.cols, static_cast<int>(free_cols.size()));
    for (size_t b = 0; b < free_cols.size(); ++b) {
        int fc = free_cols[b];
        K.at(fc, static_cast<int>(b)) = 1;
        for (size_t r = 0; r < pivots.size(); ++r)
            K.at(pivots[r], static_cast<int>(b)) = P.get(static_cast<int>(r), fc); // char 2: -x = x
    }
    return K;
}

RrefResult rref_scalar(const Mat& m) {
    FieldPtr F = m.F;
    Mat R = m;
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < R.cols && r < R.rows; ++c) {
        int piv = -1;
        for (int i = r; i < R.rows; ++i)
            if (R.at(i, c)) { piv = i; break; }
        if (piv < 0) continue;
        if (piv != r)
            for (int j = 0; j < R.cols; ++j) std::swap(R.at(r, j), R.at(piv, j));
        u64 inv = F->inv(R.at(r, c));
        if (inv != 1)
            for (int j = c; j < R.cols; ++j) R.at(r, j) = F->mul(R.at(r, j), inv);
        for (int i = 0; i < R.rows; ++i) {
            if (i == r) continue;
            u64 f = R.at(i, c);
            if (!f) continue;
            for (int j = c; j < R.cols; ++j)
                R.at(i, j) = F->sub(R.at(i, j), F->mul(f, R.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    RrefResult res;
    res.R = std::move(R);
    res.pivots = std::move(pivots);
    res.rank = r;
    return res;
}

} // namespace

RrefResult rref(const Mat& m) {
    if (m.F->p == 2 && static_cast<size_t>(m.rows) * m.cols >= 16384 && m.F->k <= 16)
        return rref_packed(m);
    return rref_scalar(m);
}

int rank_of(const Mat& m) { return rref(m).rank; }

Mat kernel(const Mat& m) {
    RrefResult rr = rref(m);
    FieldPtr F = m.F;
    std::vector<char> is_pivot(m.cols, 0);
    for (int c : rr.pivots) is_pivot[c] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    Mat K(F, m.cols, static_cast<int>(free_cols.size()));
    for (size_t b = 0; b < free_cols.size(); ++b) {
        int fc = free_cols[b];
        K.at(fc, static_cast<int>(b)) = 1;
        for (size_t r = 0; r < rr.pivots.size(); ++r)
            K.at(rr.pivots[r], static_cast<int>(b)) = F->neg(rr.R.at(static_cast<int>(r), fc));
    }
    return K;
}

Mat column_space(const Mat& m) {
    // canonical: rref of the transpose, nonzero rows back as columns
    RrefResult rr = rref(transpose(m));
    Mat B(m.F, m.rows, rr.rank);
    for (int r = 0; r < rr.rank; ++r)
        for (int j = 0; j < m.rows; ++j) B.at(j, r) = rr.R.at(r, j);
    return B;
}

Mat canonical_basis(const Mat& basis) { return column_space(basis); }

std::optional<Mat> solve(const Mat& m, const Mat& b) {
    require(m.rows == b.rows, "solve: shape mismatch");
    Mat aug = hstack(m, b);
    RrefResult rr = rref(aug);
    for (int c : rr.pivots)
        if (c >= m.cols) return std::nullopt;
    Mat x(m.F, m.cols, b.cols);
    for (size_t r = 0; r < rr.pivots.size(); ++r)
        for (int j = 0; j < b.cols; ++j)
            x.at(rr.pivots[r], j) = rr.R.at(static_cast<int>(r), m.cols + j);
    return x;
}

std::optional<Mat> inverse(const Mat& m) {
    require(m.rows == m.cols, "inverse: not square");
    auto x = solve(m, Mat::identity(m.F, m.rows));
    if (!x) return std::nullopt;
    // need full rank, not just consistency
    if (rank_of(m) != m.rows) return std::nullopt;
    return x;
}

Mat mat_pow(Mat x, u64 e) {
    require(x.rows == x.cols, "mat_pow: not square");
    Mat r = Mat::identity(x.F, x.rows);
    while (e) {
        if (e & 1) r = mat_mul(r, x);
        x = mat_mul(x, x);
        e >>= 1;
    }
    return r;
}

Mat hstack(const Mat& x, const Mat& y) {
    require(x.F == y.F && x.rows == y.rows, "hstack: mismatch");
    Mat r(x.F, x.rows, x.cols + y.cols);
    for (int i = 0; i < x.rows; ++i) {
        for (int j = 0; j < x.cols; ++j) r.at(i, j) = x.at(i, j);
        for (int j = 0; j < y.cols; ++j) r.at(i, x.cols + j) = y.at(i, j);
    }
    return r;
}

Mat vstack(const Mat& x, const Mat& y) {
    require(x.F == y.F && x.cols == y.cols, "vstack: mismatch");
    Mat r(x.F, x.rows + y.rows, x.cols);
    std::copy(x.a.begin(), x.a.end(), r.a.begin());
    std::copy(y.a.begin(), y.a.end(), r.a.begin() + x.a.size());
    return r;
}

Mat take_cols(const Mat& m, const std::vector<int>& idx) {
    Mat r(m.F, m.rows, static_cast<int>(idx.size()));
    for (int i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < idx.size(); ++j) r.at(i, static_cast<int>(j)) = m.at(i, idx[j]);
    return r;
}

std::vector<u64> col_of(const Mat& m, int j) {
    std::vector<u64> v(m.rows);
    for (int i = 0; i < m.rows; ++i) v[i] = m.at(i, j);
    return v;
}

Mat col_matrix(FieldPtr F, const std::vector<u64>& v) {
    Mat m(F, static_cast<int>(v.size()), 1);
    for (size_t i = 0; i < v.size(); ++i) m.at(static_cast<int>(i), 0) = v[i];
    return m;
}

std::vector<u64> vec_of(const Mat& t) {
    std::vector<u64> v(static_cast<size_t>(t.rows) * t.cols);
    for (int j = 0; j < t.cols; ++j)
        for (int i = 0; i < t.rows; ++i) v[static_cast<size_t>(j) * t.rows + i] = t.at(i, j);
    return v;
}

Mat unvec(FieldPtr F, const std::vector<u64>& v, int rows, int cols) {
    require(v.size() == static_cast<size_t>(rows) * cols, "unvec: size mismatch");
    Mat t(F, rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) t.at(i, j) = v[static_cast<size_t>(j) * rows + i];
    return t;
}

std::optional<std::vector<u64>> coords_in(const Mat& basis, const std::vector<u64>& v) {
    auto x = solve(basis, col_matrix(basis.F, v));
    if (!x) return std::nullopt;
    // verify (solve only checks echelon consistency)
    auto back = mat_apply(basis, col_of(*x, 0));
    if (back != v) return std::nullopt;
    return col_of(*x, 0);
}

bool subspace_contains(const Mat& basis, const Mat& candidates) {
    if (candidates.cols == 0) return true;
    Mat j = hstack(basis, candidates);
    return rank_of(j) == rank_of(basis);
}

Mat intersect_spaces(const Mat& x, const Mat& y) {
    require(x.F == y.F && x.rows == y.rows, "intersect_spaces: mismatch");
    if (x.cols == 0 || y.cols == 0) return Mat(x.F, x.rows, 0);
    Mat joint = hstack(x, y);
    Mat K = kernel(joint);
    // first x.cols coordinates give combinations of x-columns
    Mat xcoef(x.F, x.cols, K.cols);
    for (int i = 0; i < x.cols; ++i)
        for (int j = 0; j < K.cols; ++j) xcoef.at(i, j) = K.at(i, j);
    Mat inter = mat_mul(x, xcoef);
    return column_space(inter);
}

Mat sum_spaces(const Mat& x, const Mat& y) {
    if (x.cols == 0) return column_space(y);
    if (y.cols == 0) return column_space(x);
    return column_space(hstack(x, y));
}

Mat pivot_complement(const Mat& basis, int ambient_dim) {
    std::vector<char> is_pivot(ambient_dim, 0);
    if (basis.cols > 0) {
        RrefResult rr = rref(transpose(basis));
        for (int c : rr.pivots) is_pivot[c] = 1;
    }
    std::vector<int> rest;
    for (int i = 0; i < ambient_dim; ++i)
        if (!is_pivot[i]) rest.push_back(i);
    Mat C(basis.F, ambient_dim, static_cast<int>(rest.size()));
    for (size_t j = 0; j < rest.size(); ++j) C.at(rest[j], static_cast<int>(j)) = 1;
    return C;
}

// ---- StructuredOp -------------------------------------------------------------

StructuredOp StructuredOp::dense(const Mat& m) {
    require(m.rows == m.cols, "StructuredOp::dense: not square");
    StructuredOp op;
    op.F = m.F;
    op.dim = m.rows;
    Term t;
    t.factors = {m};
    op.terms.push_back(std::move(t));
    return op;
}

StructuredOp StructuredOp::kron_op(FieldPtr F, const std::vector<Mat>& factors) {
    StructuredOp op;
    op.F = F;
    int d = 1;
    for (auto& f : factors) {
        require(f.rows == f.cols, "kron_op: factors must be square");
        require(f.F == F, "kron_op: field mismatch");
        d *= f.rows;
    }
    op.dim = d;
    Term t;
    t.factors = factors;
    op.terms.push_back(std::move(t));
    return op;
}

StructuredOp StructuredOp::perm_op(FieldPtr F, const std::vector<int>& perm) {
    StructuredOp op;
    op.F = F;
    op.dim = static_cast<int>(perm.size());
    Term t;
    t.perm = perm;
    op.terms.push_back(std::move(t));
    return op;
}

StructuredOp StructuredOp::sum(StructuredOp a, const StructuredOp& b) {
    require(a.F == b.F && a.dim == b.dim, "StructuredOp::sum: mismatch");
    for (auto& t : b.terms) a.terms.push_back(t);
    return a;
}

StructuredOp StructuredOp::scaled(u64 s) const {
    StructuredOp op = *this;
    for (auto& t : op.terms) t.scale = F->mul(t.scale, s);
    return op;
}

namespace {

// apply one Kronecker factor at tensor mode position
std::vector<u64> apply_mode(FieldPtr F, const std::vector<u64>& v, const Mat& A,
                            int left, int n, int right) {
    std::vector<u64> out(v.size(), 0);
    for (int l = 0; l < left; ++l)
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) {
                u64 a = A.at(r, c);
                if (!a) continue;
                size_t src = (static_cast<size_t>(l) * n + c) * right;
                size_t dst = (static_cast<size_t>(l) * n + r) * right;
                for (int x = 0; x < right; ++x)
                    if (v[src + x]) out[dst + x] = F->add(out[dst + x], F->mul(a, v[src + x]));
            }
    return out;
}

} // namespace

std::vector<u64> StructuredOp::apply(const std::vector<u64>& v) const {
    require(static_cast<int>(v.size()) == dim, "StructuredOp::apply: size mismatch");
    std::vector<u64> acc(dim, 0);
    for (auto& t : terms) {
        std::vector<u64> cur = v;
        if (!t.factors.empty()) {
            int leftdim = 1;
            int rightdim = dim;
            for (auto& f : t.factors) {
                rightdim /= f.rows;
                cur = apply_mode(F, cur, f, leftdim, f.rows, rightdim);
                leftdim *= f.rows;
            }
        }
        if (!t.perm.empty()) {
            std::vector<u64> p(dim, 0);
            for (int i = 0; i < dim; ++i) p[t.perm[i]] = cur[i];
            cur = std::move(p);
        }
        if (t.scale != 1)
            for (auto& x : cur) x = F->mul(x, t.scale);
        for (int i = 0; i < dim; ++i)
            if (cur[i]) acc[i] = F->add(acc[i], cur[i]);
    }
    return acc;
}

Mat StructuredOp::materialize() const {
    Mat m(F, dim, dim);
    std::vector<u64> e(dim, 0);
    for (int j = 0; j < dim; ++j) {
        e.assign(dim, 0);
        e[j] = 1;
        auto col = apply(e);
        for (int i = 0; i < dim; ++i) m.at(i, j) = col[i];
    }
    return m;
}

Mat intersect_kernels_dense(const std::vector<Mat>& ops) {
    require(!ops.empty(), "intersect_kernels_dense: empty op list");
    int dim = ops[0].cols;
    FieldPtr F = ops[0].F;
    for (auto& op : ops) require(op.cols == dim && op.rows == dim, "intersect_kernels: inconsistent dims");
    Mat basis = Mat::identity(F, dim);
    for (auto& op : ops) {
        if (basis.cols == 0) break;
        Mat restricted = mat_mul(op, basis);
        Mat K = kernel(restricted);
        basis = mat_mul(basis, K);
    }
    return basis;
}

Mat kernel_of_triplets(FieldPtr F, int rows, int cols, const std::vector<Triplet>& entries) {
    // compress to used rows; untouched rows impose no condition
    std::vector<int> used;
    {
        std::vector<char> seen(rows, 0);
        for (auto& t : entries)
            if (t.v && !seen[t.r]) { seen[t.r] = 1; used.push_back(t.r); }
        std::sort(used.begin(), used.end());
    }
    std::vector<int> row_map(rows, -1);
    for (size_t i = 0; i < used.size(); ++i) row_map[used[i]] = static_cast<int>(i);
    int r2 = static_cast<int>(used.size());
    if (r2 == 0) return Mat::identity(F, cols);
    if (F->p == 2 && F->k <= 16 && static_cast<size_t>(r2) * cols >= 16384) {
        PackedRows P(F, r2, cols);
        for (auto& t : entries)
            if (t.v) P.xor_entry(row_map[t.r], t.c, t.v);
        auto pivots = rref_packed_inplace(P);
        return kernel_from_packed(P, pivots);
    }
    Mat m(F, r2, cols);
    for (auto& t : entries)
        if (t.v) m.at(row_map[t.r], t.c) = F->add(m.at(row_map[t.r], t.c), t.v);
    return kernel(m);
}

Mat intersect_kernels(const std::vector<StructuredOp>& ops, int dim) {
    require(!ops.empty(), "intersect_kernels: empty op list");
    FieldPtr F = ops[0].F;
    for (auto& op : ops) require(op.dim == dim, "intersect_kernels: inconsistent dims");
    Mat basis = Mat::identity(F, dim);
    bool first = true;
    for (auto& op : ops) {
        if (basis.cols == 0) break;
        Mat restricted(F, dim, basis.cols);
        for (int j = 0; j < basis.cols; ++j) {
            auto col = op.apply(col_of(basis, j));
            for (int i = 0; i < dim; ++i) restricted.at(i, j) = col[i];
        }
        Mat K = kernel(restricted);
        basis = first ? K : mat_mul(basis, K);
        first = false;
    }
    return basis;
}

} // namespace vl
