#include "repe.hpp"

#include <algorithm>

namespace vl {

// ---- LambdaVec ----------------------------------------------------------------

LambdaVec LambdaVec::make(FieldPtr F, std::vector<u64> entries) {
    LambdaVec lv;
    lv.F = F;
    lv.p = F->p;
    lv.n = static_cast<int>(entries.size());
    lv.entries = std::move(entries);
    return lv;
}

bool LambdaVec::faithful() const {
    // stack the GF(p)-digit vectors of the entries; injective iff full rank
    auto Fp = make_field(p, 1);
    Mat m(Fp, n, static_cast<int>(F->k));
    for (int i = 0; i < n; ++i) {
        auto d = F->digits(entries[i]);
        for (u32 j = 0; j < F->k; ++j) m.at(i, j) = d[j];
    }
    return rank_of(m) == n;
}

// ---- construction and validation ------------------------------------------------

Mat ERep::gen_minus_one(int i) const { return mat_sub(gens[i], Mat::identity(F, dim)); }

Mat ERep::group_element(const std::vector<u32>& e) const {
    Mat acc = Mat::identity(F, dim);
    for (int i = 0; i < n; ++i)
        for (u32 t = 0; t < e[i]; ++t) acc = mat_mul(acc, gens[i]);
    return acc;
}

std::vector<std::vector<u32>> group_elements(u32 p, int n) {
    std::vector<std::vector<u32>> out;
    u64 total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    for (u64 code = 0; code < total; ++code) {
        std::vector<u32> e(n);
        u64 c = code;
        for (int i = 0; i < n; ++i) { e[i] = static_cast<u32>(c % p); c /= p; }
        out.push_back(std::move(e));
    }
    return out;
}

ERep make_erep(FieldPtr F, u32 p, int n, std::vector<Mat> gens, std::string label) {
    require(static_cast<int>(gens.size()) == n, "make_erep: wrong generator count");
    int dim = gens.empty() ? 0 : gens[0].rows;
    for (auto& g : gens) {
        require(g.F == F, "make_erep: field mismatch");
        require(g.rows == dim && g.cols == dim, "make_erep: generators must be square of equal size");
    }
    Mat id = Mat::identity(F, dim);
    for (int i = 0; i < n; ++i) {
        check_internal(mat_pow(gens[i], p) == id, "generator order is not p");
        for (int j = i + 1; j < n; ++j)
            check_internal(mat_mul(gens[i], gens[j]) == mat_mul(gens[j], gens[i]),
                           "generators do not commute");
    }
    ERep r;
    r.F = F;
    r.p = p;
    r.n = n;
    r.dim = dim;
    r.gens = std::move(gens);
    r.label = std::move(label);
    return r;
}

ERep trivial_rep(FieldPtr F, u32 p, int n) {
    std::vector<Mat> gens(n, Mat::identity(F, 1));
    return make_erep(F, p, n, std::move(gens), "1");
}

ERep zero_rep(FieldPtr F, u32 p, int n) {
    std::vector<Mat> gens(n, Mat(F, 0, 0));
    return make_erep(F, p, n, std::move(gens), "0");
}

ERep perm_rep(FieldPtr F, u32 p, int n, const std::vector<std::vector<int>>& perms,
              std::string label) {
    require(static_cast<int>(perms.size()) == n, "perm_rep: wrong generator count");
    int d = perms.empty() ? 0 : static_cast<int>(perms[0].size());
    std::vector<Mat> gens;
    for (auto& perm : perms) {
        Mat g(F, d, d);
        for (int j = 0; j < d; ++j) g.at(perm[j], j) = 1;
        gens.push_back(std::move(g));
    }
    return make_erep(F, p, n, std::move(gens), std::move(label));
}

ERep regular_rep(FieldPtr F, u32 p, int n) {
    // basis = group elements in digit order; g_i increments digit i
    u64 total = 1;
    for (int i = 0; i < n; ++i) total *= p;
    u64 stride = 1;
    std::vector<std::vector<int>> perms;
    for (int i = 0; i < n; ++i) {
        std::vector<int> perm(total);
        for (u64 a = 0; a < total; ++a) {
            u64 digit = (a / stride) % p;
            u64 b = a - digit * stride + ((digit + 1) % p) * stride;
            perm[a] = static_cast<int>(b);
        }
        perms.push_back(std::move(perm));
        stride *= p;
    }
    return perm_rep(F, p, n, perms, "kE");
}

ERep make_A(int m, const PP1& lam, FieldPtr F) {
    require(m >= 1, "make_A: m must be positive");
    require(F->p == 2, "make_A: defined for p = 2");
    if (!lam.infinite) require(lam.value.F == F, "make_A: lambda must lie in the given field");
    auto jordan = [&](u64 eigen) {
        Mat J(F, m, m);
        for (int i = 0; i < m; ++i) {
            J.at(i, i) = eigen;
            if (i + 1 < m) J.at(i + 1, i) = 1;
        }
        return J;
    };
    Mat I = Mat::identity(F, m);
    auto block_gen = [&](const Mat& corner) {
        Mat g(F, 2 * m, 2 * m);
        for (int i = 0; i < m; ++i) {
            g.at(i, i) = 1;
            g.at(m + i, m + i) = 1;
            for (int j = 0; j < m; ++j)
                g.at(m + i, j) = corner.at(i, j);
        }
        return g;
    };
    Mat g1, g2;
    if (lam.infinite) {
        g1 = block_gen(jordan(0));
        g2 = block_gen(I);
    } else {
        g1 = block_gen(I);
        g2 = block_gen(jordan(lam.value.v));
    }
    std::string label = "A(" + std::to_string(m) + ")";
    return make_erep(F, 2, 2, {g1, g2}, label);
}

ERep make_V(const LambdaVec& lv) {
    require(lv.faithful(), "make_V: lambda entries are dependent over the prime field");
    std::vector<Mat> gens;
    for (int i = 0; i < lv.n; ++i) {
        Mat g = Mat::identity(lv.F, 2);
        g.at(1, 0) = lv.entries[i];
        gens.push_back(std::move(g));
    }
    return make_erep(lv.F, lv.p, lv.n, std::move(gens), "V");
}

ERep tensor(const ERep& a, const ERep& b) {
    require(a.F == b.F && a.p == b.p && a.n == b.n, "tensor: mismatched modules");
    std::vector<Mat> gens;
    for (int i = 0; i < a.n; ++i) gens.push_back(kron(a.gens[i], b.gens[i]));
    return make_erep(a.F, a.p, a.n, std::move(gens));
}

ERep dual(const ERep& a) {
    std::vector<Mat> gens;
    for (int i = 0; i < a.n; ++i) {
        Mat inv = mat_pow(a.gens[i], a.p - 1); // g^{-1}
        gens.push_back(transpose(inv));
    }
    return make_erep(a.F, a.p, a.n, std::move(gens));
}

ERep dsum(const ERep& a, const ERep& b) {
    require(a.F == b.F && a.p == b.p && a.n == b.n, "dsum: mismatched modules");
    std::vector<Mat> gens;
    for (int i = 0; i < a.n; ++i) {
        Mat g(a.F, a.dim + b.dim, a.dim + b.dim);
        for (int r = 0; r < a.dim; ++r)
            for (int c = 0; c < a.dim; ++c) g.at(r, c) = a.gens[i].at(r, c);
        for (int r = 0; r < b.dim; ++r)
            for (int c = 0; c < b.dim; ++c) g.at(a.dim + r, a.dim + c) = b.gens[i].at(r, c);
        gens.push_back(std::move(g));
    }
    return make_erep(a.F, a.p, a.n, std::move(gens));
}

Mat unit_iso(const ERep& a) { return Mat::identity(a.F, a.dim); }

// ---- subspaces -----------------------------------------------------------------

Mat invariants(const ERep& m) {
    if (m.dim == 0) return Mat(m.F, 0, 0);
    Mat basis = Mat::identity(m.F, m.dim);
    for (int i = 0; i < m.n; ++i) {
        if (basis.cols == 0) break;
        Mat r = mat_mul(m.gen_minus_one(i), basis);
        basis = mat_mul(basis, kernel(r));
    }
    return basis;
}

Mat radical_space(const ERep& m) {
    Mat acc(m.F, m.dim, 0);
    for (int i = 0; i < m.n; ++i) acc = hstack(acc, m.gen_minus_one(i));
    return column_space(acc);
}

Mat socle_space(const ERep& m) { return invariants(m); }

int top_dim(const ERep& m) { return m.dim - radical_space(m).cols; }

ERep sub_rep(const ERep& m, const Mat& basis, std::string label) {
    std::vector<Mat> gens;
    for (int i = 0; i < m.n; ++i) {
        auto g = solve(basis, mat_mul(m.gens[i], basis));
        check_internal(g.has_value(), "sub_rep: subspace is not invariant");
        gens.push_back(*g);
    }
    return make_erep(m.F, m.p, m.n, std::move(gens), std::move(label));
}

QuotientRep quotient_rep(const ERep& m, const Mat& sub_basis, std::string label) {
    Mat S = canonical_basis(sub_basis);
    Mat C = pivot_complement(S, m.dim);
    Mat full = hstack(S, C);
    auto fi = inverse(full);
    check_internal(fi.has_value(), "quotient_rep: basis assembly failed");
    // rows of inverse corresponding to the complement give quotient coordinates
    Mat proj(m.F, C.cols, m.dim);
    for (int r = 0; r < C.cols; ++r)
        for (int c = 0; c < m.dim; ++c) proj.at(r, c) = fi->at(S.cols + r, c);
    std::vector<Mat> gens;
    for (int i = 0; i < m.n; ++i)
        gens.push_back(mat_mul(proj, mat_mul(m.gens[i], C)));
    QuotientRep q;
    q.rep = make_erep(m.F, m.p, m.n, std::move(gens), std::move(label));
    q.projection = std::move(proj);
    q.section = C;
    return q;
}

// ---- Hom spaces -----------------------------------------------------------------

HomSpace hom_space(const ERep& a, const ERep& b) {
    require(a.F == b.F && a.p == b.p && a.n == b.n, "hom_space: mismatched modules");
    HomSpace hs;
    hs.source = &a;
    hs.target = &b;
    int D = a.dim * b.dim;
    if (D == 0) {
        hs.coords = Mat(a.F, D, 0);
        return hs;
    }
    // intertwiners are the fixed points of T -> g_b T g_a^{-1}; in column-major
    // vec coordinates that conjugation is kron((g_a^{-1})^T, g_b)
    Mat basis = Mat::identity(a.F, D);
    for (int i = 0; i < a.n; ++i) {
        if (basis.cols == 0) break;
        Mat ainv = mat_pow(a.gens[i], a.p - 1);
        Mat op = mat_sub(kron(transpose(ainv), b.gens[i]), Mat::identity(a.F, D));
        Mat r = mat_mul(op, basis);
        basis = mat_mul(basis, kernel(r));
    }
    hs.coords = basis;
    for (int j = 0; j < basis.cols; ++j)
        hs.basis.push_back(unvec(a.F, col_of(basis, j), b.dim, a.dim));
    return hs;
}

int hom_dim(const ERep& a, const ERep& b) { return hom_space(a, b).dim(); }

Mat h_lambda(const ERep& m, const LambdaVec& lv) {
    require(m.F == lv.F && m.n == lv.n, "h_lambda: field/rank mismatch");
    ERep V = make_V(lv);
    HomSpace hs = hom_space(V, m);
    // socle of V is spanned by e2; collect images f(e2)
    Mat images(m.F, m.dim, hs.dim());
    for (int j = 0; j < hs.dim(); ++j)
        for (int i = 0; i < m.dim; ++i) images.at(i, j) = hs.basis[j].at(i, 1);
    return column_space(images);
}

Mat k_ideal_vecs(const ERep& x, const ERep& y, const LambdaVec& lv) {
    ERep V = make_V(lv);
    ERep VX = tensor(V, x);
    HomSpace big = hom_space(VX, y);
    // u (x) id_x : x -> V (x) x sends v to e2 (x) v (u hits the socle e2)
    Mat uX(x.F, VX.dim, x.dim);
    for (int c = 0; c < x.dim; ++c) uX.at(x.dim + c, c) = 1; // e2 block of V (x) x
    Mat vecs(x.F, x.dim * y.dim, big.dim());
    for (int j = 0; j < big.dim(); ++j) {
        Mat comp = mat_mul(big.basis[j], uX);
        auto v = vec_of(comp);
        for (size_t i = 0; i < v.size(); ++i) vecs.at(static_cast<int>(i), j) = v[i];
    }
    return column_space(vecs);
}

QuotHomData quot_hom_data(const ERep& x, const ERep& y, const LambdaVec& lv) {
    QuotHomData q;
    q.full = hom_space(x, y);
    q.ideal_vecs = k_ideal_vecs(x, y, lv);
    check_internal(subspace_contains(q.full.coords, q.ideal_vecs),
                   "ideal is not inside the hom space");
    q.quotient_dim = q.full.dim() - q.ideal_vecs.cols;
    // canonical complement: hom-basis columns whose vec-coordinates extend the
    // ideal to a basis, chosen greedily in pivot order
    Mat acc = q.ideal_vecs;
    for (int j = 0; j < q.full.dim() && static_cast<int>(q.rep_indices.size()) < q.quotient_dim; ++j) {
        Mat cand = col_matrix(x.F, col_of(q.full.coords, j));
        Mat ext = hstack(acc, cand);
        if (rank_of(ext) > rank_of(acc)) {
            q.rep_indices.push_back(j);
            acc = ext;
        }
    }
    check_internal(static_cast<int>(q.rep_indices.size()) == q.quotient_dim,
                   "quotient basis selection failed");
    return q;
}

bool negligible(const Mat& f, const ERep& m, const ERep& n) {
    HomSpace back = hom_space(n, m);
    for (auto& g : back.basis)
        if (trace(mat_mul(f, g)) != 0) return false;
    return true;
}

// ---- Heller shifts ---------------------------------------------------------------

namespace {

// minimal projective cover kE^t -> m and its kernel as a module
ERep omega_plus_one(const ERep& m) {
    FieldPtr F = m.F;
    Mat rad = radical_space(m);
    Mat tops = pivot_complement(rad, m.dim); // lifts of a basis of the top
    int t = tops.cols;
    if (t == 0) return zero_rep(F, m.p, m.n);
    ERep reg = regular_rep(F, m.p, m.n);
    auto elems = group_elements(m.p, m.n);
    // cover map: basis (j, e) of kE^t sends to A_e * m_j
    Mat cover(F, m.dim, t * reg.dim);
    for (int j = 0; j < t; ++j) {
        auto mj = col_of(tops, j);
        for (size_t e = 0; e < elems.size(); ++e) {
            Mat Ae = m.group_element(elems[e]);
            auto img = mat_apply(Ae, mj);
            for (int i = 0; i < m.dim; ++i)
                cover.at(i, j * reg.dim + static_cast<int>(e)) = img[i];
        }
    }
    check_internal(rank_of(cover) == m.dim, "projective cover is not surjective");
    Mat K = kernel(cover);
    // kernel inside kE^t with the direct-sum regular action
    ERep free_t = reg;
    for (int j = 1; j < t; ++j) free_t = dsum(free_t, reg);
    return sub_rep(free_t, K);
}

} // namespace

FreeSplit split_free(const ERep& m) {
    FieldPtr F = m.F;
    FreeSplit out;
    if (m.dim == 0) {
        out.residue = m;
        out.free_embed = Mat(F, 0, 0);
        out.residue_embed = Mat(F, 0, 0);
        out.residue_proj = Mat(F, 0, 0);
        return out;
    }
    // w = prod (g_i - 1)^(p-1) spans the socle direction of each free summand
    Mat w = Mat::identity(F, m.dim);
    for (int i = 0; i < m.n; ++i) {
        Mat ni = m.gen_minus_one(i);
        for (u32 t = 0; t + 1 < m.p; ++t) w = mat_mul(w, ni);
    }
    Mat imw = column_space(w);
    int f = imw.cols;
    out.free_rank = f;
    if (f == 0) {
        out.residue = m;
        out.residue_embed = Mat::identity(F, m.dim);
        out.residue_proj = Mat::identity(F, m.dim);
        out.free_embed = Mat(F, m.dim, 0);
        return out;
    }
    auto U = solve(w, imw);
    check_internal(U.has_value(), "split_free: preimage solve failed");
    auto elems = group_elements(m.p, m.n);
    int ge = static_cast<int>(elems.size());
    std::vector<Mat> act;
    for (auto& e : elems) act.push_back(m.group_element(e));
    // free basis: columns (k, e) = A_e u_k
    Mat Fb(F, m.dim, f * ge);
    for (int k = 0; k < f; ++k) {
        auto uk = col_of(*U, k);
        for (int e = 0; e < ge; ++e) {
            auto img = mat_apply(act[e], uk);
            for (int i = 0; i < m.dim; ++i) Fb.at(i, k * ge + e) = img[i];
        }
    }
    check_internal(rank_of(Fb) == f * ge, "split_free: translates of generators are dependent");
    // functionals xi_k: 1 on (k, e=identity), 0 on the rest of F and on a complement
    Mat C = pivot_complement(column_space(Fb), m.dim);
    Mat full = hstack(Fb, C);
    auto fi = inverse(full);
    check_internal(fi.has_value(), "split_free: ambient basis not invertible");
    // xi_k = row (k*ge + 0) of inverse (coordinates w.r.t. columns of full)
    // projection onto kE^f: row (k, e) of pi = xi_k o A_{e^{-1}}
    Mat pi(F, f * ge, m.dim);
    std::vector<int> inv_elem(ge);
    {
        // index of the inverse digit vector
        for (int e = 0; e < ge; ++e) {
            u64 code = 0, mult = 1;
            for (int i = 0; i < m.n; ++i) {
                u32 d = elems[e][i];
                code += ((m.p - d) % m.p) * mult;
                mult *= m.p;
            }
            inv_elem[e] = static_cast<int>(code);
        }
    }
    for (int k = 0; k < f; ++k) {
        std::vector<u64> xi(m.dim);
        for (int c = 0; c < m.dim; ++c) xi[c] = fi->at(k * ge + 0, c);
        for (int e = 0; e < ge; ++e) {
            const Mat& A = act[inv_elem[e]];
            for (int c = 0; c < m.dim; ++c) {
                u64 acc = 0;
                for (int r = 0; r < m.dim; ++r)
                    if (xi[r] && A.at(r, c)) acc = F->add(acc, F->mul(xi[r], A.at(r, c)));
                pi.at(k * ge + e, c) = acc;
            }
        }
    }
    // the regular action on coordinates (k, e)
    ERep reg = regular_rep(F, m.p, m.n);
    for (int i = 0; i < m.n; ++i) {
        Mat lhs = mat_mul(pi, m.gens[i]);
        // block-diagonal regular generator on kE^f
        Mat rg(F, f * ge, f * ge);
        for (int k = 0; k < f; ++k)
            for (int r = 0; r < ge; ++r)
                for (int c = 0; c < ge; ++c)
                    rg.at(k * ge + r, k * ge + c) = reg.gens[i].at(r, c);
        Mat rhs = mat_mul(rg, pi);
        check_internal(lhs == rhs, "split_free: projection is not equivariant");
    }
    check_internal(mat_mul(pi, Fb) == Mat::identity(F, f * ge),
                   "split_free: projection does not split the inclusion");
    Mat M0 = kernel(pi);
    check_internal(M0.cols == m.dim - f * ge, "split_free: wrong complement dimension");
    out.free_embed = Fb;
    out.residue_embed = M0;
    out.residue = sub_rep(m, M0, m.label);
    // projection onto residue coordinates along the free part
    Mat full2 = hstack(Fb, M0);
    auto f2 = inverse(full2);
    check_internal(f2.has_value(), "split_free: splitting is not a direct sum");
    Mat rp(F, M0.cols, m.dim);
    for (int r = 0; r < M0.cols; ++r)
        for (int c = 0; c < m.dim; ++c) rp.at(r, c) = f2->at(f * ge + r, c);
    out.residue_proj = std::move(rp);
    // residue really is free-free
    Mat w0 = Mat::identity(F, out.residue.dim);
    for (int i = 0; i < m.n; ++i) {
        Mat ni = out.residue.gen_minus_one(i);
        for (u32 t = 0; t + 1 < m.p; ++t) w0 = mat_mul(w0, ni);
    }
    check_internal(w0.is_zero(), "split_free: residue still contains a free summand");
    return out;
}

ERep omega(const ERep& a, int i) {
    if (i == 0) return split_free(a).residue;
    if (i > 0) {
        ERep cur = split_free(a).residue;
        for (int t = 0; t < i; ++t) cur = omega_plus_one(cur);
        return cur;
    }
    // negative: dualize, shift, dualize back
    ERep cur = split_free(a).residue;
    for (int t = 0; t < -i; ++t) cur = dual(omega_plus_one(dual(cur)));
    return cur;
}

namespace {

ERep random_module_once(u32 p, int n, FieldPtr F, int budget, u64 seed) {
    Rng rng(seed ^ 0xc0feeULL);
    int ge = 1;
    for (int i = 0; i < n; ++i) ge *= static_cast<int>(p);
    int b = std::max<int>(2, (budget + ge - 1) / ge);
    int a = std::max<int>(1, b - 1);
    if (rng.below(5) == 0) a = b; // occasionally square, often small cokernel
    ERep reg = regular_rep(F, p, n);
    ERep free_b = reg;
    for (int j = 1; j < b; ++j) free_b = dsum(free_b, reg);
    // random module map kE^a -> kE^b: blocks are multiplications by random
    // elements of kE (left = right since E is abelian)
    auto elems = group_elements(p, n);
    Mat phi(F, b * reg.dim, a * reg.dim);
    for (int cb = 0; cb < a; ++cb)
        for (int rb = 0; rb < b; ++rb) {
            Mat acc(F, reg.dim, reg.dim);
            for (auto& e : elems) {
                u64 c = rng.below(F->q);
                if (!c) continue;
                acc = mat_add(acc, mat_scale(reg.group_element(e), c));
            }
            for (int r = 0; r < reg.dim; ++r)
                for (int c = 0; c < reg.dim; ++c)
                    phi.at(rb * reg.dim + r, cb * reg.dim + c) = acc.at(r, c);
        }
    Mat img = column_space(phi);
    if (img.cols == free_b.dim) return zero_rep(F, p, n);
    return quotient_rep(free_b, img, "random").rep;
}

} // namespace

ERep random_module(u32 p, int n, FieldPtr F, int budget, u64 seed) {
    if (budget <= 0) return zero_rep(F, p, n);
    int ge = 1;
    for (int i = 0; i < n; ++i) ge *= static_cast<int>(p);
    int cap = std::max(budget, ge);
    ERep best = zero_rep(F, p, n);
    for (u64 attempt = 0; attempt < 8; ++attempt) {
        ERep cand = random_module_once(p, n, F, budget, seed * 131 + attempt);
        if (cand.dim > 0 && cand.dim <= cap) return cand;
        if (best.dim == 0 && cand.dim > 0) best = cand;
    }
    return best;
}

} // namespace vl
