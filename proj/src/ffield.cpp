#include "ffield.hpp"

#include <algorithm>
#include <mutex>
#include <map>

namespace vl {

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// ---- raw polynomial arithmetic over GF(p) used during field construction ---

namespace {

// dense coefficient vectors over GF(p), ascending degree
using PVec = std::vector<u32>;

void pnorm(PVec& a) { while (!a.empty() && a.back() == 0) a.pop_back(); }

PVec pmulmod(const PVec& a, const PVec& b, const PVec& mod, u32 p) {
    if (a.empty() || b.empty()) return {};
    PVec r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + static_cast<u64>(a[i]) * b[j]) % p;
    }
    // reduce by monic mod
    size_t k = mod.size() - 1;
    for (size_t i = r.size(); i-- > k;) {
        u32 c = r[i];
        if (!c) continue;
        r[i] = 0;
        for (size_t j = 0; j < k; ++j) {
            u64 t = static_cast<u64>(c) * mod[j] % p;
            r[i - k + j] = static_cast<u32>((r[i - k + j] + p - t) % p);
        }
    }
    r.resize(k);
    return r;
}

bool irreducible_over_prime(const PVec& f, u32 p) {
    // Rabin test: x^(p^k) == x mod f, and x^(p^(k/t)) != x for prime t | k.
    size_t k = f.size() - 1;
    if (k == 0) return false;
    if (k == 1) return true;
    auto xq = [&](size_t e) {
        // x^(p^e) mod f via repeated Frobenius of x
        PVec cur = {0, 1};
        cur = pmulmod(cur, {1}, f, p); // normalize length
        for (size_t i = 0; i < e; ++i) {
            // raise to p-th power: repeated squaring on exponent p
            PVec acc = {1};
            PVec base = cur;
            u32 ee = p;
            while (ee) {
                if (ee & 1) acc = pmulmod(acc, base, f, p);
                base = pmulmod(base, base, f, p);
                ee >>= 1;
            }
            cur = acc;
        }
        return cur;
    };
    PVec xpk = xq(k);
    PVec x = {0, 1};
    x.resize(k, 0);
    PVec xr = xpk;
    xr.resize(k, 0);
    if (xr != x) return false;
    for (u64 t = 2; t <= k; ++t) {
        if (k % t == 0 && is_prime_u64(t)) {
            PVec xe = xq(k / t);
            xe.resize(k, 0);
            if (xe == x) return false;
        }
    }
    return true;
}

struct FieldKey {
    u32 p, k;
    bool operator<(const FieldKey& o) const { return p < o.p || (p == o.p && k < o.k); }
};

} // namespace

struct FieldRegistry {
    std::mutex mutex;
    std::map<FieldKey, std::unique_ptr<FqField>> fields;

    static FieldRegistry& instance() {
        static FieldRegistry reg;
        return reg;
    }
};

FqField::FqField(u32 p_, u32 k_) : p(p_), k(k_) {
    require(is_prime_u64(p), "make_field: p must be prime");
    require(k >= 1, "make_field: k must be >= 1");
    long double bound = 1;
    for (u32 i = 0; i < k; ++i) {
        bound *= p;
        require(bound <= 281474976710656.0L, "make_field: p^k exceeds 2^48");
    }
    q = 1;
    for (u32 i = 0; i < k; ++i) q *= p;

    if (k == 1) {
        modulus = {0, 1}; // the polynomial x: prime-field convention
    } else {
        // canonical modulus: monic irreducible of degree k with least packed
        // value of its lower coefficients
        bool found = false;
        for (u64 code = 0; code < q && !found; ++code) {
            PVec f(k + 1, 0);
            u64 c = code;
            for (u32 i = 0; i < k; ++i) { f[i] = static_cast<u32>(c % p); c /= p; }
            f[k] = 1;
            if (irreducible_over_prime(f, p)) {
                modulus.assign(f.begin(), f.end());
                found = true;
            }
        }
        check_internal(found, "no irreducible modulus found");
    }
    build_tables();
}

std::vector<u32> FqField::digits(u64 a) const {
    std::vector<u32> d(k);
    for (u32 i = 0; i < k; ++i) { d[i] = static_cast<u32>(a % p); a /= p; }
    return d;
}

u64 FqField::from_digits(const std::vector<u32>& d) const {
    require(d.size() == k, "element digit vector has wrong length");
    u64 a = 0;
    for (u32 i = k; i-- > 0;) {
        require(d[i] < p, "element digit out of range");
        a = a * p + d[i];
    }
    return a;
}

u64 FqField::add(u64 a, u64 b) const {
    if (p == 2) return a ^ b;
    u64 r = 0, mult = 1;
    for (u32 i = 0; i < k; ++i) {
        r += mult * ((a % p + b % p) % p);
        a /= p; b /= p; mult *= p;
    }
    return r;
}

u64 FqField::neg(u64 a) const {
    if (p == 2) return a;
    u64 r = 0, mult = 1;
    for (u32 i = 0; i < k; ++i) {
        u64 d = a % p;
        r += mult * (d ? p - d : 0);
        a /= p; mult *= p;
    }
    return r;
}

u64 FqField::sub(u64 a, u64 b) const { return add(a, neg(b)); }

u64 FqField::mul(u64 a, u64 b) const {
    if (a == 0 || b == 0) return 0;
    if (has_tables_)
        return exp_[(static_cast<u64>(log_[a]) + log_[b]) % (q - 1)];
    // generic path: schoolbook polynomial multiply with modulus reduction
    std::vector<u32> da = digits(a), db = digits(b);
    std::vector<u32> r(2 * k - 1, 0);
    for (u32 i = 0; i < k; ++i) {
        if (!da[i]) continue;
        for (u32 j = 0; j < k; ++j)
            r[i + j] = static_cast<u32>((r[i + j] + static_cast<u64>(da[i]) * db[j]) % p);
    }
    for (size_t i = r.size(); i-- > k;) {
        u32 c = r[i];
        if (!c) continue;
        r[i] = 0;
        for (u32 j = 0; j < k; ++j) {
            u64 t = static_cast<u64>(c) * modulus[j] % p;
            r[i - k + j] = static_cast<u32>((r[i - k + j] + p - t) % p);
        }
    }
    r.resize(k);
    return from_digits(r);
}

u64 FqField::pow(u64 a, u64 e) const {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

u64 FqField::inv(u64 a) const {
    require(a != 0, "division by zero in GF(p^k)");
    if (has_tables_) return exp_[(q - 1 - log_[a]) % (q - 1)];
    return pow(a, q - 2);
}

u64 FqField::frob(u64 a, i64 i) const {
    i64 e = ((i % static_cast<i64>(k)) + k) % k; // Galois group is cyclic of order k
    u64 r = a;
    for (i64 j = 0; j < e; ++j) r = pow(r, p);
    return r;
}

void FqField::build_tables() {
    if (q > (1ULL << 20)) return; // generic arithmetic above the table limit
    // find a primitive element by testing orders against prime factors of q-1
    std::vector<u64> prime_factors;
    u64 m = q - 1;
    for (u64 d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            prime_factors.push_back(d);
            while (m % d == 0) m /= d;
        }
    if (m > 1) prime_factors.push_back(m);

    u64 g = 0;
    for (u64 cand = 1; cand < q; ++cand) {
        if (cand == 0) continue;
        bool ok = true;
        for (u64 f : prime_factors)
            if (pow(cand, (q - 1) / f) == 1) { ok = false; break; }
        if (ok) { g = cand; break; }
    }
    check_internal(g != 0, "no primitive element found");
    primitive_root_ = g;
    exp_.assign(q - 1, 0);
    log_.assign(q, 0);
    u64 cur = 1;
    for (u64 i = 0; i < q - 1; ++i) {
        exp_[i] = static_cast<u32>(cur);
        log_[cur] = static_cast<u32>(i);
        cur = mul(cur, g);
    }
    check_internal(cur == 1, "primitive element order wrong");
    has_tables_ = true;
}

FieldPtr FqField::get(u32 p, u32 k) {
    auto& reg = FieldRegistry::instance();
    std::lock_guard<std::mutex> lock(reg.mutex);
    FieldKey key{p, k};
    auto it = reg.fields.find(key);
    if (it == reg.fields.end())
        it = reg.fields.emplace(key, std::unique_ptr<FqField>(new FqField(p, k))).first;
    return it->second.get();
}

FieldPtr make_field(u32 p, u32 k) { return FqField::get(p, k); }

// ---- embeddings -------------------------------------------------------------

namespace {
struct EmbedCache {
    std::mutex mutex;
    std::map<std::pair<FieldPtr, FieldPtr>, u64> gen_image; // image of source x
    static EmbedCache& instance() {
        static EmbedCache c;
        return c;
    }
};
} // namespace

u64 embed_value(FieldPtr src, u64 v, FieldPtr target) {
    if (src == target) return v;
    require(src->p == target->p, "embed: different characteristic");
    require(target->k % src->k == 0, "embed: source degree does not divide target degree");
    u64 img;
    {
        auto& cache = EmbedCache::instance();
        std::lock_guard<std::mutex> lock(cache.mutex);
        auto key = std::make_pair(src, target);
        auto it = cache.gen_image.find(key);
        if (it == cache.gen_image.end()) {
            // least root of the source modulus in the target field
            FqPoly f{target, {}};
            f.c.resize(src->modulus.size());
            for (size_t i = 0; i < src->modulus.size(); ++i) f.c[i] = src->modulus[i];
            f.normalize();
            auto roots = poly_roots(f, /*seed=*/0x5eedULL);
            check_internal(!roots.empty(), "embed: modulus has no root in target");
            it = cache.gen_image.emplace(key, roots.front()).first;
        }
        img = it->second;
    }
    // evaluate the coefficient vector of v at the image of x
    auto d = src->digits(v);
    u64 acc = 0;
    for (u32 i = src->k; i-- > 0;) acc = target->add(target->mul(acc, img), d[i]);
    return acc;
}

Fq embed(const Fq& e, FieldPtr target) {
    return Fq{target, embed_value(e.F, e.v, target)};
}

// ---- polynomial arithmetic --------------------------------------------------

u64 FqPoly::eval(u64 a) const {
    u64 acc = 0;
    for (size_t i = c.size(); i-- > 0;) acc = F->add(F->mul(acc, a), c[i]);
    return acc;
}

FqPoly poly_add(const FqPoly& a, const FqPoly& b) {
    require(a.F == b.F, "poly field mismatch");
    FqPoly r{a.F, {}};
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) {
        u64 x = i < a.c.size() ? a.c[i] : 0;
        u64 y = i < b.c.size() ? b.c[i] : 0;
        r.c[i] = a.F->add(x, y);
    }
    r.normalize();
    return r;
}

FqPoly poly_sub(const FqPoly& a, const FqPoly& b) {
    require(a.F == b.F, "poly field mismatch");
    FqPoly r{a.F, {}};
    r.c.resize(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < r.c.size(); ++i) {
        u64 x = i < a.c.size() ? a.c[i] : 0;
        u64 y = i < b.c.size() ? b.c[i] : 0;
        r.c[i] = a.F->sub(x, y);
    }
    r.normalize();
    return r;
}

FqPoly poly_mul(const FqPoly& a, const FqPoly& b) {
    require(a.F == b.F, "poly field mismatch");
    if (a.is_zero() || b.is_zero()) return FqPoly::zero(a.F);
    FqPoly r{a.F, std::vector<u64>(a.c.size() + b.c.size() - 1, 0)};
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (!a.c[i]) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = a.F->add(r.c[i + j], a.F->mul(a.c[i], b.c[j]));
    }
    r.normalize();
    return r;
}

FqPoly poly_scale(const FqPoly& a, u64 s) {
    FqPoly r = a;
    for (auto& x : r.c) x = a.F->mul(x, s);
    r.normalize();
    return r;
}

std::pair<FqPoly, FqPoly> poly_divmod(const FqPoly& a, const FqPoly& b) {
    require(a.F == b.F, "poly field mismatch");
    require(!b.is_zero(), "polynomial division by zero");
    FqPoly rem = a;
    if (a.deg() < b.deg()) return {FqPoly::zero(a.F), rem};
    FqPoly quo{a.F, std::vector<u64>(a.deg() - b.deg() + 1, 0)};
    u64 binv = a.F->inv(b.lead());
    for (int i = rem.deg(); i >= b.deg(); --i) {
        if (static_cast<size_t>(i) >= rem.c.size() || rem.c[i] == 0) continue;
        u64 f = a.F->mul(rem.c[i], binv);
        quo.c[i - b.deg()] = f;
        for (int j = 0; j <= b.deg(); ++j)
            rem.c[i - b.deg() + j] = a.F->sub(rem.c[i - b.deg() + j], a.F->mul(f, b.c[j]));
    }
    rem.normalize();
    quo.normalize();
    return {quo, rem};
}

FqPoly poly_mod(const FqPoly& a, const FqPoly& b) { return poly_divmod(a, b).second; }

FqPoly poly_monic(const FqPoly& a) {
    if (a.is_zero()) return a;
    return poly_scale(a, a.F->inv(a.lead()));
}

FqPoly poly_gcd(FqPoly a, FqPoly b) {
    while (!b.is_zero()) {
        FqPoly r = poly_mod(a, b);
        a = b;
        b = r;
    }
    return poly_monic(a);
}

FqPoly poly_derivative(const FqPoly& a) {
    FqPoly r{a.F, {}};
    if (a.deg() <= 0) return r;
    r.c.resize(a.c.size() - 1);
    for (size_t i = 1; i < a.c.size(); ++i) {
        u64 m = i % a.F->p;
        u64 s = 0;
        for (u64 t = 0; t < m; ++t) s = a.F->add(s, a.c[i]);
        r.c[i - 1] = s;
    }
    r.normalize();
    return r;
}

FqPoly poly_powmod(const FqPoly& base, u64 e, const FqPoly& mod) {
    FqPoly acc = FqPoly::constant(base.F, 1);
    FqPoly b = poly_mod(base, mod);
    while (e) {
        if (e & 1) acc = poly_mod(poly_mul(acc, b), mod);
        b = poly_mod(poly_mul(b, b), mod);
        e >>= 1;
    }
    return acc;
}

bool poly_equal(const FqPoly& a, const FqPoly& b) { return a.F == b.F && a.c == b.c; }

namespace {

// canonical factor order: by degree, then coefficient tuple from the top
bool poly_less(const FqPoly& a, const FqPoly& b) {
    if (a.deg() != b.deg()) return a.deg() < b.deg();
    for (int i = a.deg(); i >= 0; --i)
        if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    return false;
}

// p-th root of an element: Frobenius is a bijection of order k
u64 pth_root(FieldPtr F, u64 a) { return F->frob(a, -1); }

// equal-degree splitting, Cantor-Zassenhaus; f squarefree, all factors deg d
void equal_degree(const FqPoly& f, int d, Rng& rng, std::vector<FqPoly>& out) {
    if (f.deg() == d) {
        out.push_back(poly_monic(f));
        return;
    }
    FieldPtr F = f.F;
    u64 q = F->q;
    for (;;) {
        // random polynomial of degree < deg f
        FqPoly r{F, std::vector<u64>(static_cast<size_t>(f.deg()), 0)};
        for (auto& x : r.c) x = rng.below(q);
        r.normalize();
        if (r.deg() < 1) continue;
        FqPoly g = poly_gcd(r, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            equal_degree(g, d, rng, out);
            equal_degree(poly_divmod(f, g).first, d, rng, out);
            return;
        }
        FqPoly h;
        if (F->p == 2) {
            // trace map over GF(2): T(r) = r + r^2 + r^4 + ... (k*d terms)
            FqPoly acc = FqPoly::zero(F);
            FqPoly cur = poly_mod(r, f);
            u64 steps = static_cast<u64>(F->k) * d;
            for (u64 i = 0; i < steps; ++i) {
                acc = poly_add(acc, cur);
                cur = poly_powmod(cur, 2, f);
            }
            h = acc;
        } else {
            u64 e = 1;
            for (int i = 0; i < d; ++i) e *= q; // q^d
            h = poly_powmod(r, (e - 1) / 2, f);
            h = poly_sub(h, FqPoly::constant(F, 1));
        }
        g = poly_gcd(h, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            equal_degree(g, d, rng, out);
            equal_degree(poly_divmod(f, g).first, d, rng, out);
            return;
        }
    }
}

// factor a squarefree monic polynomial
std::vector<FqPoly> factor_squarefree(const FqPoly& f, Rng& rng) {
    std::vector<FqPoly> out;
    FieldPtr F = f.F;
    FqPoly rest = f;
    FqPoly xq = poly_powmod(FqPoly::x(F), F->q, rest); // x^q mod rest
    FqPoly frob_iter = xq;
    int d = 1;
    while (rest.deg() >= 2 * d) {
        FqPoly diff = poly_sub(frob_iter, FqPoly::x(F));
        FqPoly g = poly_gcd(diff, rest);
        if (g.deg() > 0) {
            equal_degree(g, d, rng, out);
            rest = poly_divmod(rest, g).first;
        }
        ++d;
        if (rest.deg() < 2 * d) break;
        frob_iter = poly_powmod(frob_iter, F->q, rest);
        frob_iter = poly_mod(frob_iter, rest);
    }
    if (rest.deg() > 0) out.push_back(poly_monic(rest));
    return out;
}

} // namespace

std::vector<std::pair<FqPoly, int>> factor_univariate(const FqPoly& f_in, u64 seed) {
    require(!f_in.is_zero(), "factor_univariate: zero polynomial");
    FieldPtr F = f_in.F;
    Rng rng(seed ^ 0xfac70e11ULL);
    std::vector<std::pair<FqPoly, int>> result;
    FqPoly f = poly_monic(f_in);
    if (f.deg() == 0) return result;

    // squarefree decomposition in characteristic p
    std::map<int, FqPoly> sf; // multiplicity -> product of factors with that multiplicity
    std::function<void(FqPoly, int)> split_sf = [&](FqPoly g, int mult) {
        if (g.deg() <= 0) return;
        FqPoly d = poly_derivative(g);
        if (d.is_zero()) {
            // g = h(x^p); take p-th root of coefficients
            FqPoly h{F, {}};
            h.c.resize(g.c.size() / F->p + 1, 0);
            for (size_t i = 0; i < g.c.size(); i += F->p)
                h.c[i / F->p] = pth_root(F, g.c[i]);
            h.normalize();
            split_sf(h, mult * static_cast<int>(F->p));
            return;
        }
        FqPoly c = poly_gcd(g, d);
        FqPoly w = poly_divmod(g, c).first; // product of squarefree part
        int i = 1;
        while (w.deg() > 0) {
            FqPoly y = poly_gcd(w, c);
            FqPoly fac = poly_divmod(w, y).first; // factors of multiplicity exactly i
            if (fac.deg() > 0) {
                auto it = sf.find(mult * i);
                if (it == sf.end()) sf.emplace(mult * i, fac);
                else it->second = poly_mul(it->second, fac);
            }
            w = y;
            c = poly_divmod(c, y).first;
            ++i;
        }
        if (c.deg() > 0) split_sf(c, mult); // c = remaining part, all multiplicities >= i, p | structure
    };
    split_sf(f, 1);

    for (auto& [mult, g] : sf) {
        auto irr = factor_squarefree(poly_monic(g), rng);
        for (auto& h : irr) result.emplace_back(h, mult);
    }
    std::sort(result.begin(), result.end(), [](const auto& a, const auto& b) {
        return poly_less(a.first, b.first) ||
               (poly_equal(a.first, b.first) && a.second < b.second);
    });
    return result;
}

std::vector<u64> poly_roots(const FqPoly& f, u64 seed) {
    auto facs = factor_univariate(f, seed);
    std::vector<u64> roots;
    for (auto& [g, mult] : facs) {
        if (g.deg() == 1) {
            // monic x + c: root is -c
            roots.push_back(f.F->neg(g.c[0]));
        }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    return roots;
}

bool is_irreducible(const FqPoly& f) {
    if (f.deg() <= 0) return false;
    auto facs = factor_univariate(f, 0);
    return facs.size() == 1 && facs[0].second == 1;
}

} // namespace vl
