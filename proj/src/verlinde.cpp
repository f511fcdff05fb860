#include "verlinde.hpp"

#include <algorithm>
#include <sstream>

namespace vl {

std::vector<u64> quot_coords(const QuotHomData& q, const Mat& f) {
    FieldPtr F = f.F;
    // coordinates in [ideal basis | representative columns]
    Mat reps(F, q.full.coords.rows, static_cast<int>(q.rep_indices.size()));
    for (size_t t = 0; t < q.rep_indices.size(); ++t)
        for (int i = 0; i < q.full.coords.rows; ++i)
            reps.at(i, static_cast<int>(t)) = q.full.coords.at(i, q.rep_indices[t]);
    Mat basis = hstack(q.ideal_vecs, reps);
    auto c = coords_in(basis, vec_of(f));
    check_internal(c.has_value(), "quot_coords: morphism outside the hom space");
    std::vector<u64> out(q.rep_indices.size());
    for (size_t t = 0; t < q.rep_indices.size(); ++t) out[t] = (*c)[q.ideal_vecs.cols + t];
    return out;
}

BasicAlgebra basic_algebra(u32 p, int n, const LambdaVec& lv, u64 seed) {
    BasicAlgebra alg;
    alg.p = p;
    alg.n = n;
    alg.F = lv.F;
    alg.lv = lv;
    u64 pn = 1;
    for (int i = 0; i < n; ++i) pn *= p;
    require(pn <= 16, "basic_algebra: p^n above desk scale");
    int lo = static_cast<int>(pn / p) - 1;
    int hi = static_cast<int>(pn) - 2;
    auto catalog = tilting_catalog(p, lv.F, hi, seed);
    for (int i = lo; i <= hi; ++i) {
        alg.proj_indices.push_back(i);
        alg.verts.push_back(restrict_hyper(catalog[i].hyper, lv));
    }
    int nv = alg.vert_count();
    alg.qh.resize(nv);
    for (int i = 0; i < nv; ++i) {
        alg.qh[i].reserve(nv);
        for (int j = 0; j < nv; ++j)
            alg.qh[i].push_back(quot_hom_data(alg.verts[i], alg.verts[j], lv));
    }
    for (int i = 0; i < nv; ++i)
        for (int j = 0; j < nv; ++j)
            for (int t : alg.qh[i][j].rep_indices)
                alg.arrows.push_back({i, j, alg.qh[i][j].full.basis[t]});
    // structure constants
    int na = static_cast<int>(alg.arrows.size());
    alg.mult.assign(na, std::vector<std::vector<u64>>(na));
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b) {
            if (alg.arrows[a].dst != alg.arrows[b].src) continue;
            Mat comp = mat_mul(alg.arrows[b].rep, alg.arrows[a].rep);
            int i = alg.arrows[a].src, l = alg.arrows[b].dst;
            auto coords = quot_coords(alg.qh[i][l], comp);
            // store as coefficients over all arrows, nonzero only on (i -> l)
            std::vector<u64> full(na, 0);
            int t = 0;
            for (int k = 0; k < na; ++k)
                if (alg.arrows[k].src == i && alg.arrows[k].dst == l) full[k] = coords[t++];
            alg.mult[a][b] = std::move(full);
        }
    // associativity on composable triples
    auto reduce = [&](int i, int l, const Mat& f) { return quot_coords(alg.qh[i][l], f); };
    for (int a = 0; a < na; ++a)
        for (int b = 0; b < na; ++b) {
            if (alg.arrows[a].dst != alg.arrows[b].src) continue;
            for (int c = 0; c < na; ++c) {
                if (alg.arrows[b].dst != alg.arrows[c].src) continue;
                Mat abc = mat_mul(alg.arrows[c].rep, mat_mul(alg.arrows[b].rep, alg.arrows[a].rep));
                auto direct = reduce(alg.arrows[a].src, alg.arrows[c].dst, abc);
                // reduce (c o b) o a through the table
                std::vector<u64> via(direct.size(), 0);
                auto cb = alg.mult[b][c];
                int t = 0;
                for (int k = 0; k < na; ++k) {
                    if (!(alg.arrows[k].src == alg.arrows[b].src && alg.arrows[k].dst == alg.arrows[c].dst)) continue;
                    (void)t;
                }
                // associativity is verified through the matrices themselves:
                // reduce(c o (b o a)) must match reduce((c o b) o a); both equal
                // the reduction of the product matrix, so check bilinearity of
                // the table instead: reconstruct (b o a) from table and compose
                std::vector<u64> ba = alg.mult[a][b];
                Mat recomposed(alg.F, alg.verts[alg.arrows[a].src].dim,
                               alg.verts[alg.arrows[a].src].dim);
                (void)recomposed;
                Mat acc(alg.F, alg.verts[alg.arrows[c].dst].dim, alg.verts[alg.arrows[a].src].dim);
                for (int k = 0; k < na; ++k) {
                    if (ba[k] == 0) continue;
                    acc = mat_add(acc, mat_scale(mat_mul(alg.arrows[c].rep, alg.arrows[k].rep), ba[k]));
                }
                auto via2 = reduce(alg.arrows[a].src, alg.arrows[c].dst, acc);
                check_internal(via2 == direct, "basic_algebra: associativity failed");
            }
        }
    // identities survive in the quotient
    for (int i = 0; i < nv; ++i) {
        auto c = quot_coords(alg.qh[i][i], Mat::identity(alg.F, alg.verts[i].dim));
        bool nonzero = false;
        for (u64 x : c) nonzero |= (x != 0);
        check_internal(nonzero, "basic_algebra: identity dies in the quotient");
    }
    return alg;
}

BModule to_bmodule(const ERep& m, const BasicAlgebra& alg) {
    BModule b;
    b.alg = &alg;
    int nv = alg.vert_count();
    for (int i = 0; i < nv; ++i) {
        QuotHomData q = quot_hom_data(alg.verts[i], m, alg.lv);
        b.vdims.push_back(q.quotient_dim);
        std::vector<Mat> reps;
        for (int t : q.rep_indices) reps.push_back(q.full.basis[t]);
        b.model.push_back(std::move(q));
        b.vertex_reps.push_back(std::move(reps));
    }
    // arrow h: s -> d acts X_d -> X_s by precomposition
    for (auto& ar : alg.arrows) {
        Mat act(m.F, b.vdims[ar.src], b.vdims[ar.dst]);
        for (int t = 0; t < b.vdims[ar.dst]; ++t) {
            Mat comp = mat_mul(b.vertex_reps[ar.dst][t], ar.rep);
            auto coords = quot_coords(b.model[ar.src], comp);
            for (int r = 0; r < b.vdims[ar.src]; ++r) act.at(r, t) = coords[r];
        }
        b.arrow_actions.push_back(std::move(act));
    }
    return b;
}

BModuleMap bmodule_map(const BModule& a, const BModule& b, const Mat& g) {
    check_internal(a.alg == b.alg, "bmodule_map: different algebras");
    BModuleMap f;
    int nv = a.alg->vert_count();
    for (int i = 0; i < nv; ++i) {
        Mat vm(g.F, b.vdims[i], a.vdims[i]);
        for (int t = 0; t < a.vdims[i]; ++t) {
            Mat comp = mat_mul(g, a.vertex_reps[i][t]);
            auto coords = quot_coords(b.model[i], comp);
            for (int r = 0; r < b.vdims[i]; ++r) vm.at(r, t) = coords[r];
        }
        f.vertex_maps.push_back(std::move(vm));
    }
    return f;
}

BCoker bmodule_coker(const BModule& b, const BModuleMap& f_into_b) {
    BCoker out;
    out.mod.alg = b.alg;
    FieldPtr F = b.alg->F;
    int nv = b.alg->vert_count();
    for (int i = 0; i < nv; ++i) {
        Mat img = column_space(f_into_b.vertex_maps[i]);
        Mat comp = pivot_complement(img, b.vdims[i]);
        // projection onto the complement coordinates
        Mat full = hstack(img, comp);
        Mat proj(F, comp.cols, b.vdims[i]);
        if (b.vdims[i] > 0) {
            auto fi = inverse(full);
            check_internal(fi.has_value(), "bmodule_coker: basis assembly failed");
            for (int r = 0; r < comp.cols; ++r)
                for (int c = 0; c < b.vdims[i]; ++c) proj.at(r, c) = fi->at(img.cols + r, c);
        }
        out.mod.vdims.push_back(comp.cols);
        out.proj.push_back(std::move(proj));
        out.section.push_back(std::move(comp));
    }
    for (size_t k = 0; k < b.alg->arrows.size(); ++k) {
        auto& ar = b.alg->arrows[k];
        Mat induced = mat_mul(out.proj[ar.src], mat_mul(b.arrow_actions[k], out.section[ar.dst]));
        out.mod.arrow_actions.push_back(std::move(induced));
    }
    return out;
}

std::string ver_multiset_str(const VerMultiset& ms) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto& [l, c] : ms) {
        if (!first) os << ", ";
        os << l << ":" << c;
        first = false;
    }
    os << "}";
    return os.str();
}

VerMultiset classify_bmodule(const BModule& b, u64 seed) {
    VerMultiset out;
    const BasicAlgebra& alg = *b.alg;
    FieldPtr F = alg.F;
    int N = b.total_dim();
    if (N == 0) return out;
    int nv = alg.vert_count();
    std::vector<int> offset(nv + 1, 0);
    for (int i = 0; i < nv; ++i) offset[i + 1] = offset[i] + b.vdims[i];
    // total operator module: vertex projections + arrow actions
    OperatorModule om;
    om.F = F;
    om.dim = N;
    for (int i = 0; i < nv; ++i) {
        Mat e(F, N, N);
        for (int t = offset[i]; t < offset[i + 1]; ++t) e.at(t, t) = 1;
        om.ops.push_back(std::move(e));
    }
    for (size_t k = 0; k < alg.arrows.size(); ++k) {
        auto& ar = alg.arrows[k];
        Mat big(F, N, N);
        const Mat& act = b.arrow_actions[k];
        for (int r = 0; r < act.rows; ++r)
            for (int c = 0; c < act.cols; ++c)
                big.at(offset[ar.src] + r, offset[ar.dst] + c) = act.at(r, c);
        om.ops.push_back(std::move(big));
    }
    Decomposition dec = decompose(om, seed);
    bool ver4 = (alg.p == 2 && alg.n == 2);
    for (auto& cls : dec.classes) {
        // vertex dims of the part from the projections restricted to it
        const Mat& emb = cls.embeds[0];
        std::vector<int> vd(nv);
        for (int i = 0; i < nv; ++i) vd[i] = rank_of(mat_mul(om.ops[i], emb));
        std::string name;
        if (ver4 && vd[0] == 1 && vd[1] == 0 && cls.rep.dim == 1) {
            name = "V";
        } else if (ver4 && vd[0] == 0 && vd[1] == 1 && cls.rep.dim == 1) {
            name = "1";
        } else if (ver4 && vd[0] == 0 && vd[1] == 2 && cls.rep.dim == 2) {
            // split unit pairs never form one indecomposable; rank check on the
            // nilpotent loop distinguishes the projective cover
            int loop_rank = 0;
            for (size_t k = 0; k < alg.arrows.size(); ++k) {
                auto& ar = alg.arrows[k];
                if (ar.src == 1 && ar.dst == 1) {
                    Mat act = mat_mul(om.ops[nv + k], emb);
                    loop_rank = std::max(loop_rank, rank_of(act));
                }
            }
            name = loop_rank > 0 ? "P(1)" : "1+1";
        } else {
            std::ostringstream os;
            os << "X[";
            for (int i = 0; i < nv; ++i) {
                if (i) os << ",";
                os << vd[i];
            }
            os << "]";
            name = os.str();
        }
        out[name] += cls.mult;
    }
    return out;
}

} // namespace vl
