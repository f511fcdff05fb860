#include "sl2tilt.hpp"

#include <algorithm>

namespace vl {

u64 binom_mod_p(u64 a, u64 b, u32 p) {
    // Lucas
    u64 r = 1;
    while (b) {
        u64 ad = a % p, bd = b % p;
        if (bd > ad) return 0;
        // small binomial mod p
        u64 num = 1, den = 1;
        for (u64 i = 0; i < bd; ++i) {
            num = num * ((ad - i) % p) % p;
            den = den * ((i + 1) % p) % p;
        }
        // den invertible mod p
        u64 dinv = 1;
        for (u64 e = p - 2, base = den; e; e >>= 1) {
            if (e & 1) dinv = dinv * base % p;
            base = base * base % p;
        }
        r = r * (num * dinv % p) % p;
        a /= p;
        b /= p;
    }
    return r;
}

std::map<int, int> HyperMod::character() const {
    std::map<int, int> c;
    for (int w : weights) c[w]++;
    return c;
}

int HyperMod::highest_weight() const {
    int h = 0;
    for (int w : weights) h = std::max(h, w);
    return h;
}

namespace {

// sort basis by weight ascending, conjugating all operators
HyperMod canonicalize(HyperMod h) {
    std::vector<int> order(h.dim);
    for (int i = 0; i < h.dim; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return h.weights[a] < h.weights[b]; });
    bool sorted = true;
    for (int i = 0; i + 1 < h.dim; ++i)
        if (h.weights[order[i]] != h.weights[i]) sorted = false;
    if (std::is_sorted(h.weights.begin(), h.weights.end())) return h;
    (void)sorted;
    Mat P(h.F, h.dim, h.dim); // columns = new basis vectors
    for (int j = 0; j < h.dim; ++j) P.at(order[j], j) = 1;
    auto Pi = inverse(P);
    check_internal(Pi.has_value(), "canonicalize: permutation not invertible");
    HyperMod out = h;
    out.weights.clear();
    for (int j = 0; j < h.dim; ++j) out.weights.push_back(h.weights[order[j]]);
    for (auto& e : out.eops) e = mat_mul(*Pi, mat_mul(e, P));
    for (auto& f : out.fops) f = mat_mul(*Pi, mat_mul(f, P));
    return out;
}

void validate_grading(const HyperMod& h) {
    for (int r = 1; r <= h.rmax; ++r) {
        const Mat& e = h.eops[r - 1];
        const Mat& f = h.fops[r - 1];
        for (int i = 0; i < h.dim; ++i)
            for (int j = 0; j < h.dim; ++j) {
                if (e.at(i, j)) check_internal(h.weights[i] == h.weights[j] + 2 * r,
                                               "raising operator breaks the grading");
                if (f.at(i, j)) check_internal(h.weights[i] == h.weights[j] - 2 * r,
                                               "lowering operator breaks the grading");
            }
    }
}

} // namespace

HyperMod make_hyper(FieldPtr F, std::vector<int> weights, std::vector<Mat> eops,
                    std::vector<Mat> fops) {
    require(eops.size() == fops.size(), "make_hyper: mismatched operator lists");
    HyperMod h;
    h.F = F;
    h.dim = static_cast<int>(weights.size());
    h.rmax = static_cast<int>(eops.size());
    h.weights = std::move(weights);
    h.eops = std::move(eops);
    h.fops = std::move(fops);
    h = canonicalize(std::move(h));
    validate_grading(h);
    return h;
}

HyperMod trivial_hyper(FieldPtr F) {
    return make_hyper(F, {0}, {}, {});
}

HyperMod natural_rep(FieldPtr F) {
    Mat e(F, 2, 2), f(F, 2, 2);
    // basis sorted by weight: index 0 has weight -1, index 1 weight +1
    e.at(1, 0) = 1;
    f.at(0, 1) = 1;
    return make_hyper(F, {-1, 1}, {e}, {f});
}

HyperMod tensor_hyper(const HyperMod& a, const HyperMod& b) {
    require(a.F == b.F, "tensor_hyper: field mismatch");
    FieldPtr F = a.F;
    int rmax = a.rmax + b.rmax;
    int dim = a.dim * b.dim;
    std::vector<int> weights(dim);
    for (int i = 0; i < a.dim; ++i)
        for (int j = 0; j < b.dim; ++j) weights[i * b.dim + j] = a.weights[i] + b.weights[j];
    auto part = [&](const std::vector<Mat>& xa, const std::vector<Mat>& xb) {
        std::vector<Mat> out;
        Mat Ia = Mat::identity(F, a.dim), Ib = Mat::identity(F, b.dim);
        for (int r = 1; r <= rmax; ++r) {
            Mat acc(F, dim, dim);
            for (int s = 0; s <= r; ++s) {
                int t = r - s;
                if (s > a.rmax || t > b.rmax) continue;
                const Mat& ma = s == 0 ? Ia : xa[s - 1];
                const Mat& mb = t == 0 ? Ib : xb[t - 1];
                acc = mat_add(acc, kron(ma, mb));
            }
            out.push_back(std::move(acc));
        }
        return out;
    };
    return make_hyper(F, std::move(weights), part(a.eops, b.eops), part(a.fops, b.fops));
}

HyperMod tensor_power_hyper(int m, FieldPtr F) {
    require(m >= 0, "tensor_power_hyper: negative power");
    HyperMod acc = trivial_hyper(F);
    HyperMod v = natural_rep(F);
    for (int i = 0; i < m; ++i) acc = tensor_hyper(acc, v);
    return acc;
}

HyperMod weyl_module(int i, FieldPtr F) {
    require(i >= 0, "weyl_module: negative index");
    int dim = i + 1;
    std::vector<int> weights(dim);
    // basis x^{i-j} y^j, weight i - 2j
    for (int j = 0; j <= i; ++j) weights[j] = i - 2 * j;
    std::vector<Mat> eops, fops;
    for (int r = 1; r <= i; ++r) {
        Mat e(F, dim, dim), f(F, dim, dim);
        for (int j = 0; j <= i; ++j) {
            int a = i - j, b = j;
            // f^(r): x^a y^b -> C(a, r) x^{a-r} y^{b+r}
            if (a >= r) {
                u64 c = binom_mod_p(a, r, F->p);
                if (c) f.at(j + r, j) = c;
            }
            // e^(r): x^a y^b -> C(b, r) x^{a+r} y^{b-r}
            if (b >= r) {
                u64 c = binom_mod_p(b, r, F->p);
                if (c) e.at(j - r, j) = c;
            }
        }
        eops.push_back(std::move(e));
        fops.push_back(std::move(f));
    }
    return make_hyper(F, std::move(weights), std::move(eops), std::move(fops));
}

OperatorModule to_operator_module(const HyperMod& h) {
    OperatorModule om;
    om.F = h.F;
    om.dim = h.dim;
    om.weights = h.weights;
    for (auto& e : h.eops) om.ops.push_back(e);
    for (auto& f : h.fops) om.ops.push_back(f);
    return om;
}

HyperMod sub_hyper(const HyperMod& h, const Mat& basis) {
    HyperMod s;
    s.F = h.F;
    s.dim = basis.cols;
    s.rmax = h.rmax;
    // weights from the homogeneous supports
    s.weights.resize(basis.cols);
    for (int j = 0; j < basis.cols; ++j) {
        bool found = false;
        for (int i = 0; i < basis.rows; ++i)
            if (basis.at(i, j)) {
                check_internal(!found || s.weights[j] == h.weights[i],
                               "sub_hyper: basis vector mixes weights");
                s.weights[j] = h.weights[i];
                found = true;
            }
    }
    auto restrict_ops = [&](const std::vector<Mat>& ops) {
        std::vector<Mat> out;
        for (auto& op : ops) {
            auto r = solve(basis, mat_mul(op, basis));
            check_internal(r.has_value(), "sub_hyper: subspace not invariant");
            out.push_back(*r);
        }
        return out;
    };
    s.eops = restrict_ops(h.eops);
    s.fops = restrict_ops(h.fops);
    return canonicalize(std::move(s));
}

int invariant_dim(const HyperMod& h) {
    if (h.dim == 0) return 0;
    Mat basis = Mat::identity(h.F, h.dim);
    auto cut = [&](const Mat& op) {
        if (basis.cols == 0) return;
        basis = mat_mul(basis, kernel(mat_mul(op, basis)));
    };
    for (auto& e : h.eops) cut(e);
    for (auto& f : h.fops) cut(f);
    return basis.cols;
}

ERep restrict_hyper(const HyperMod& h, const LambdaVec& lv) {
    FieldPtr F = h.F;
    require(lv.F == F, "restrict_hyper: field mismatch");
    std::vector<Mat> gens;
    for (int j = 0; j < lv.n; ++j) {
        Mat g = Mat::identity(F, h.dim);
        u64 lp = 1;
        for (int r = 1; r <= h.rmax; ++r) {
            lp = F->mul(lp, lv.entries[j]);
            if (lp) g = mat_add(g, mat_scale(h.fops[r - 1], lp));
        }
        gens.push_back(std::move(g));
    }
    return make_erep(F, F->p, lv.n, std::move(gens));
}

int hom_u_invariants(const HyperMod& h, const LambdaVec& lv, const ERep& source) {
    ERep target = restrict_hyper(h, lv);
    return hom_dim(source, target);
}

int nabla_length(const std::map<int, int>& character) {
    std::map<int, int> c = character;
    int len = 0;
    while (!c.empty()) {
        auto it = std::prev(c.end());
        int w = it->first;
        check_internal(w >= 0, "nabla_length: negative highest weight");
        check_internal(it->second > 0, "nabla_length: negative multiplicity");
        // subtract the character of the degree-w Weyl module
        for (int t = w; t >= -w; t -= 2) {
            auto jt = c.find(t);
            check_internal(jt != c.end() && jt->second > 0,
                           "nabla_length: greedy subtraction went negative");
            if (--jt->second == 0) c.erase(jt);
        }
        ++len;
    }
    return len;
}

std::vector<TiltEntry> tilting_catalog(u32 p, FieldPtr F, int imax, u64 seed) {
    require(F->p == p, "tilting_catalog: field characteristic mismatch");
    std::vector<TiltEntry> catalog;
    {
        TiltEntry t0;
        t0.index = 0;
        t0.hyper = trivial_hyper(F);
        t0.character = t0.hyper.character();
        t0.nabla_len = 1;
        t0.sl2_inv_dim = 1;
        catalog.push_back(std::move(t0));
    }
    HyperMod V = natural_rep(F);
    for (int m = 1; m <= imax; ++m) {
        HyperMod W = tensor_hyper(V, catalog[m - 1].hyper);
        Decomposition dec = decompose(to_operator_module(W), seed + m);
        // the summand of highest weight m (with that weight space 1-dim) is T_m
        int found = -1;
        for (size_t c = 0; c < dec.classes.size(); ++c) {
            const auto& cls = dec.classes[c];
            // character of the class representative via one of its embeddings
            HyperMod sub = sub_hyper(W, cls.embeds[0]);
            if (sub.highest_weight() == m) {
                check_internal(found < 0, "tilting_catalog: highest weight appears in two classes");
                check_internal(cls.mult == 1, "tilting_catalog: top summand has multiplicity > 1");
                auto ch = sub.character();
                check_internal(ch[m] == 1, "tilting_catalog: top weight space not one-dimensional");
                found = static_cast<int>(c);
            }
        }
        check_internal(found >= 0, "tilting_catalog: no summand of top weight");
        HyperMod tm = sub_hyper(W, dec.classes[found].embeds[0]);
        TiltEntry e;
        e.index = m;
        e.hyper = tm;
        e.character = tm.character();
        e.nabla_len = nabla_length(e.character);
        e.sl2_inv_dim = invariant_dim(tm);
        catalog.push_back(std::move(e));
        // sanity: remaining summands must match known tilting characters
        for (size_t c = 0; c < dec.classes.size(); ++c) {
            if (static_cast<int>(c) == found) continue;
            HyperMod sub = sub_hyper(W, dec.classes[c].embeds[0]);
            auto ch = sub.character();
            bool matched = false;
            for (auto& known : catalog)
                if (known.character == ch) { matched = true; break; }
            check_internal(matched, "tilting_catalog: stray summand in V (x) T");
        }
    }
    return catalog;
}

std::map<int, int> tilt_char_decompose(std::map<int, int> character,
                                       const std::vector<TiltEntry>& catalog) {
    std::map<int, int> mult;
    while (!character.empty()) {
        auto it = std::prev(character.end());
        int w = it->first;
        int c = it->second;
        check_internal(c > 0, "tilt_char_decompose: negative coefficient");
        check_internal(w >= 0 && w < static_cast<int>(catalog.size()),
                       "tilt_char_decompose: weight outside catalog");
        mult[w] += c;
        for (auto& [ww, mm] : catalog[w].character) {
            auto jt = character.find(ww);
            check_internal(jt != character.end() && jt->second >= mm * c,
                           "tilt_char_decompose: subtraction went negative");
            jt->second -= mm * c;
            if (jt->second == 0) character.erase(jt);
        }
    }
    return mult;
}

} // namespace vl
