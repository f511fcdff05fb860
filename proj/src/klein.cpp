#include "klein.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>

namespace vl {

// ---- labels ---------------------------------------------------------------------

KleinLabel KleinLabel::proj() {
    KleinLabel l;
    l.kind = Kind::Proj;
    return l;
}

KleinLabel KleinLabel::omega(int i) {
    KleinLabel l;
    l.kind = Kind::Omega;
    l.omega_index = i;
    return l;
}

KleinLabel KleinLabel::a(int m, const PP1& lam) {
    KleinLabel l;
    l.kind = Kind::A;
    l.a_size = m;
    if (lam.infinite) {
        l.lam_infinite = true;
        return l;
    }
    // canonicalize: minimal polynomial over GF(2) and root index in GF(2^e)
    FieldPtr F = lam.value.F;
    u64 v = lam.value.v;
    std::vector<u64> conj;
    u64 c = v;
    do {
        conj.push_back(c);
        c = F->frob(c, 1);
    } while (c != v);
    int e = static_cast<int>(conj.size());
    FqPoly mp = FqPoly::constant(F, 1);
    for (u64 r : conj) {
        FqPoly lin = FqPoly::from(F, {F->neg(r), 1});
        mp = poly_mul(mp, lin);
    }
    l.lam_minpoly.resize(e + 1);
    for (int i = 0; i <= e; ++i) {
        u64 ci = i < static_cast<int>(mp.c.size()) ? mp.c[i] : 0;
        check_internal(ci <= 1, "minimal polynomial not over the prime field");
        l.lam_minpoly[i] = static_cast<u32>(ci);
    }
    // deterministic root index relative to the canonical small field
    FieldPtr home = make_field(2, static_cast<u32>(e));
    FqPoly mp_home{home, {}};
    mp_home.c.assign(l.lam_minpoly.begin(), l.lam_minpoly.end());
    mp_home.normalize();
    auto roots = poly_roots(mp_home, 0);
    check_internal(static_cast<int>(roots.size()) == e, "minimal polynomial does not split in home field");
    int idx = -1;
    for (size_t i = 0; i < roots.size(); ++i)
        if (embed_value(home, roots[i], F) == v) { idx = static_cast<int>(i); break; }
    check_internal(idx >= 0, "parameter does not match any canonical root");
    l.lam_root_index = idx;
    return l;
}

PP1 KleinLabel::lam_in(FieldPtr F) const {
    check_internal(kind == Kind::A, "lam_in: not an A label");
    if (lam_infinite) return PP1::inf();
    int e = static_cast<int>(lam_minpoly.size()) - 1;
    FieldPtr home = make_field(2, static_cast<u32>(e));
    FqPoly mp{home, {}};
    mp.c.assign(lam_minpoly.begin(), lam_minpoly.end());
    mp.normalize();
    auto roots = poly_roots(mp, 0);
    u64 r = roots.at(lam_root_index);
    return PP1::finite(Fq{F, embed_value(home, r, F)});
}

int KleinLabel::dim() const {
    switch (kind) {
        case Kind::Proj: return 4;
        case Kind::Omega: return 2 * std::abs(omega_index) + 1;
        case Kind::A: return 2 * a_size;
    }
    return 0;
}

std::string KleinLabel::str() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Proj: os << "Proj"; break;
        case Kind::Omega: os << "Omega(" << omega_index << ")"; break;
        case Kind::A: {
            os << "A(" << a_size << ",";
            if (lam_infinite) {
                os << "inf";
            } else if (lam_minpoly.size() == 2) {
                os << (lam_minpoly[0] ? "1" : "0");
            } else {
                os << "[";
                for (size_t i = 0; i < lam_minpoly.size(); ++i) {
                    if (i) os << ",";
                    os << lam_minpoly[i];
                }
                os << "]:" << lam_root_index;
            }
            os << ")";
            break;
        }
    }
    return os.str();
}

bool KleinLabel::operator<(const KleinLabel& o) const {
    auto key = [](const KleinLabel& l) {
        return std::make_tuple(static_cast<int>(l.kind), l.omega_index, l.a_size,
                               l.lam_infinite ? 1 : 0, l.lam_minpoly, l.lam_root_index);
    };
    return key(*this) < key(o);
}

bool KleinLabel::operator==(const KleinLabel& o) const { return !(*this < o) && !(o < *this); }

std::string multiset_str(const KleinMultiset& ms) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (auto& [l, c] : ms) {
        if (!first) os << ", ";
        os << l.str() << ":" << c;
        first = false;
    }
    os << "}";
    return os.str();
}

int multiset_dim(const KleinMultiset& ms) {
    int d = 0;
    for (auto& [l, c] : ms) d += l.dim() * c;
    return d;
}

// ---- omega shape table -------------------------------------------------------------

namespace {
struct OmegaTable {
    std::mutex mutex;
    std::map<int, OmegaShape> shapes;
    static OmegaTable& instance() {
        static OmegaTable t;
        return t;
    }
};
} // namespace

OmegaShape omega_shape(int i) {
    auto& tab = OmegaTable::instance();
    std::lock_guard<std::mutex> lock(tab.mutex);
    auto it = tab.shapes.find(i);
    if (it != tab.shapes.end()) return it->second;
    FieldPtr F2 = make_field(2, 1);
    ERep w = omega(trivial_rep(F2, 2, 2), i);
    OmegaShape s{w.dim, top_dim(w), socle_space(w).cols};
    tab.shapes.emplace(i, s);
    return s;
}

// ---- classification ------------------------------------------------------------------

namespace {

// determinant of theta*X + Y as a polynomial, by expansion over permutations
FqPoly pencil_det(const Mat& X, const Mat& Y) {
    FieldPtr F = X.F;
    int n = X.rows;
    require(n <= 9, "pencil_det: block too large");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    FqPoly acc = FqPoly::zero(F);
    do {
        // product of linear entries theta*X[i][perm[i]] + Y[i][perm[i]]
        FqPoly term = FqPoly::constant(F, 1);
        bool zero = false;
        for (int i = 0; i < n && !zero; ++i) {
            u64 a = X.at(i, perm[i]), b = Y.at(i, perm[i]);
            if (!a && !b) { zero = true; break; }
            term = poly_mul(term, FqPoly::from(F, {b, a}));
        }
        if (!zero) acc = poly_add(acc, term); // char 2: all signs are +
    } while (std::next_permutation(perm.begin(), perm.end()));
    return acc;
}

// name one indecomposable non-projective part
void classify_part(const ERep& part, KleinMultiset& out) {
    FieldPtr F = part.F;
    int d = part.dim;
    if (d % 2 == 1) {
        int j = (d - 1) / 2;
        int t = top_dim(part), s = socle_space(part).cols;
        if (j == 0) {
            out[KleinLabel::omega(0)]++;
            return;
        }
        OmegaShape plus = omega_shape(j), minus = omega_shape(-j);
        if (t == plus.top && s == plus.soc) {
            out[KleinLabel::omega(j)]++;
            return;
        }
        if (t == minus.top && s == minus.soc) {
            out[KleinLabel::omega(-j)]++;
            return;
        }
        throw VlInternal("classify: odd part matches no Heller shift shape");
    }
    int m = d / 2;
    Mat rad = radical_space(part);
    Mat soc = socle_space(part);
    check_internal(rad.cols == m && soc.cols == m, "classify: even part has unexpected layers");
    check_internal(subspace_contains(soc, rad) && subspace_contains(rad, soc),
                   "classify: radical and socle differ on an even part");
    Mat tops = pivot_complement(rad, d);
    // maps top -> socle induced by the two generators
    auto layer_map = [&](int gi) {
        Mat img = mat_mul(part.gen_minus_one(gi), tops);
        auto c = solve(soc, img);
        check_internal(c.has_value(), "classify: generator image not in socle");
        return *c;
    };
    Mat X = layer_map(0), Y = layer_map(1);
    FqPoly D = pencil_det(X, Y);
    check_internal(!D.is_zero(), "classify: degenerate pencil on an even indecomposable");
    if (D.deg() == 0) {
        out[KleinLabel::a(m, PP1::inf())]++;
        return;
    }
    check_internal(D.deg() == m, "classify: pencil determinant has intermediate degree");
    auto facs = factor_univariate(D, 1);
    check_internal(facs.size() == 1, "classify: pencil determinant has several irreducible factors");
    const FqPoly& g = facs[0].first;
    int e = g.deg();
    int mult = facs[0].second;
    check_internal(e * mult == m, "classify: pencil factor degrees inconsistent");
    if (e == 1) {
        u64 lam = F->neg(g.c[0]);
        out[KleinLabel::a(mult, PP1::finite(Fq{F, lam}))]++;
        return;
    }
    // parameter lives in an extension: report all Galois conjugates
    FieldPtr big = make_field(2, F->k * static_cast<u32>(e));
    FqPoly gbig{big, {}};
    gbig.c.resize(g.c.size());
    for (size_t i = 0; i < g.c.size(); ++i) gbig.c[i] = embed_value(F, g.c[i], big);
    gbig.normalize();
    auto roots = poly_roots(gbig, 1);
    check_internal(static_cast<int>(roots.size()) == e, "classify: extension did not split the pencil");
    for (u64 r : roots) out[KleinLabel::a(mult, PP1::finite(Fq{big, r}))]++;
}

} // namespace

KleinMultiset classify(const ERep& m, u64 seed) {
    require(m.p == 2 && m.n == 2, "classify: module is not over the Klein four-group");
    KleinMultiset out;
    if (m.dim == 0) return out;
    FreeSplit fs = split_free(m);
    if (fs.free_rank > 0) out[KleinLabel::proj()] = fs.free_rank;
    if (fs.residue.dim == 0) return out;
    Decomposition dec = decompose(from_erep(fs.residue), seed);
    for (auto& cls : dec.classes) {
        ERep part = make_erep(m.F, 2, 2, cls.rep.ops);
        KleinMultiset piece;
        classify_part(part, piece);
        for (auto& [l, c] : piece) out[l] += c * cls.mult;
    }
    check_internal(multiset_dim(out) == m.dim, "classify: dimensions do not add up");
    return out;
}

// ---- fusion oracle -------------------------------------------------------------------

FuseResult fuse_oracle(const KleinLabel& a, const KleinLabel& b) {
    using K = KleinLabel::Kind;
    FuseResult r;
    int da = a.dim(), db = b.dim();
    auto fill_proj = [&](const KleinMultiset& stable) {
        int sd = multiset_dim(stable);
        int rest = da * db - sd;
        check_internal(rest >= 0 && rest % 4 == 0, "fuse_oracle: dimension bookkeeping failed");
        r.stable = stable;
        r.proj_rank = rest / 4;
    };
    if (a.kind == K::Proj || b.kind == K::Proj) {
        fill_proj({});
        return r;
    }
    if (a.kind == K::Omega && b.kind == K::Omega) {
        fill_proj({{KleinLabel::omega(a.omega_index + b.omega_index), 1}});
        return r;
    }
    if (a.kind == K::Omega && b.kind == K::A) {
        fill_proj({{b, 1}});
        return r;
    }
    if (a.kind == K::A && b.kind == K::Omega) {
        fill_proj({{a, 1}});
        return r;
    }
    // both A
    bool same_lam = (a.lam_infinite && b.lam_infinite) ||
                    (!a.lam_infinite && !b.lam_infinite && a.lam_minpoly == b.lam_minpoly &&
                     a.lam_root_index == b.lam_root_index);
    if (!same_lam) {
        fill_proj({});
        return r;
    }
    int m = a.a_size, n = b.a_size;
    if (m == 1 && n == 1) {
        bool rational = a.lam_infinite || a.lam_minpoly.size() == 2; // 0, 1 or infinity
        if (rational) {
            KleinMultiset s;
            s[a] = 2;
            fill_proj(s);
        } else {
            KleinMultiset s;
            KleinLabel l2 = a;
            l2.a_size = 2;
            s[l2] = 1;
            fill_proj(s);
        }
        return r;
    }
    KleinLabel lmin = a;
    lmin.a_size = std::min(m, n);
    KleinMultiset s;
    s[lmin] = 2;
    fill_proj(s);
    return r;
}

FuseResult fuse_oracle_ms(const KleinMultiset& a, const KleinMultiset& b) {
    FuseResult out;
    for (auto& [la, ca] : a)
        for (auto& [lb, cb] : b) {
            FuseResult f = fuse_oracle(la, lb);
            for (auto& [l, c] : f.stable) out.stable[l] += c * ca * cb;
            out.proj_rank += f.proj_rank * ca * cb;
        }
    return out;
}

std::vector<std::pair<std::string, KleinMultiset>> induced_from_subgroups(FieldPtr F) {
    std::vector<std::pair<std::string, KleinMultiset>> out;
    // cosets and generator action for each subgroup of C_2 x C_2
    // k[E/H] as a permutation module on coset representatives
    auto add = [&](const std::string& name, const std::vector<std::vector<int>>& perms) {
        ERep rep = perm_rep(F, 2, 2, perms, "Ind(" + name + ")");
        out.emplace_back(name, classify(rep, 0));
    };
    add("E", {{0}, {0}});
    add("<g1>", {{0, 1}, {1, 0}});       // cosets {H, g2 H}; g1 fixes, g2 swaps
    add("<g2>", {{1, 0}, {0, 1}});       // cosets {H, g1 H}; g1 swaps, g2 fixes
    add("<g1g2>", {{1, 0}, {1, 0}});     // cosets {H, g1 H}; both generators swap
    add("1", {{1, 0, 3, 2}, {2, 3, 0, 1}}); // regular module
    return out;
}

ERep construct_label(const KleinLabel& l, FieldPtr F) {
    switch (l.kind) {
        case KleinLabel::Kind::Proj: return regular_rep(F, 2, 2);
        case KleinLabel::Kind::Omega: return omega(trivial_rep(F, 2, 2), l.omega_index);
        case KleinLabel::Kind::A: return make_A(l.a_size, l.lam_in(F), F);
    }
    throw VlError("construct_label: bad label");
}

} // namespace vl
