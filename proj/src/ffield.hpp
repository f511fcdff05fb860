#pragma once

#include "basics.hpp"

#include <memory>
#include <optional>
#include <map>

namespace vl {

class FqField;
using FieldPtr = const FqField*;

// Element of GF(p^k), packed as sum c_i p^i with digits c_i the coordinates
// in the polynomial basis 1, x, ..., x^{k-1}.
struct Fq {
    FieldPtr F = nullptr;
    u64 v = 0;

    bool is_zero() const { return v == 0; }
    bool operator==(const Fq& o) const { return F == o.F && v == o.v; }
    bool operator!=(const Fq& o) const { return !(*this == o); }
};

// Immutable descriptor of GF(p^k). Instances are canonical per (p,k): obtain
// them through make_field so that field identity is pointer identity.
class FqField {
public:
    u32 p;
    u32 k;
    u64 q;                     // p^k
    std::vector<u32> modulus;  // monic, degree k, coefficients ascending; x itself for k=1

    static FieldPtr get(u32 p, u32 k); // canonical instance

    // element arithmetic on packed values
    u64 add(u64 a, u64 b) const;
    u64 sub(u64 a, u64 b) const;
    u64 neg(u64 a) const;
    u64 mul(u64 a, u64 b) const;
    u64 inv(u64 a) const;
    u64 pow(u64 a, u64 e) const;
    u64 frob(u64 a, i64 i) const; // a^(p^i), i may be negative

    u64 from_int(u64 c) const { return c % p; } // prime-field constant
    u64 gen() const { return k == 1 ? 1 : p; }  // class of x for k>1

    std::vector<u32> digits(u64 a) const;       // length k
    u64 from_digits(const std::vector<u32>& d) const;

    // all elements in canonical order 0,1,...,q-1 (packed values)
    u64 size() const { return q; }

    Fq el(u64 v) const { return Fq{this, v}; }
    Fq zero() const { return el(0); }
    Fq one() const { return el(1); }

private:
    friend struct FieldRegistry;
    FqField(u32 p, u32 k);
    void build_tables();

    bool has_tables_ = false;
    std::vector<u32> log_, exp_; // discrete log tables when q fits
    u64 primitive_root_ = 1;
    std::vector<u64> frob_pow_;  // cache x^(p^i) not needed; frob computed by pow
};

FieldPtr make_field(u32 p, u32 k);

inline Fq operator+(const Fq& a, const Fq& b) {
    require(a.F == b.F, "mixed-field addition");
    return Fq{a.F, a.F->add(a.v, b.v)};
}
inline Fq operator-(const Fq& a, const Fq& b) {
    require(a.F == b.F, "mixed-field subtraction");
    return Fq{a.F, a.F->sub(a.v, b.v)};
}
inline Fq operator*(const Fq& a, const Fq& b) {
    require(a.F == b.F, "mixed-field multiplication");
    return Fq{a.F, a.F->mul(a.v, b.v)};
}
inline Fq inv(const Fq& a) { return Fq{a.F, a.F->inv(a.v)}; }
inline Fq frobenius(const Fq& a, i64 i) { return Fq{a.F, a.F->frob(a.v, i)}; }

// Fixed embedding GF(p^j) -> GF(p^k) for j | k; computed once per field pair
// (image of the source generator is the least root of the source modulus in
// the target) and cached behind a lock.
Fq embed(const Fq& e, FieldPtr target);
u64 embed_value(FieldPtr src, u64 v, FieldPtr target);

// Point of the projective line P^1.
struct PP1 {
    bool infinite = false;
    Fq value; // meaningful when finite

    static PP1 inf() { PP1 x; x.infinite = true; return x; }
    static PP1 finite(Fq v) { PP1 x; x.value = v; return x; }
    bool operator==(const PP1& o) const {
        if (infinite != o.infinite) return false;
        return infinite || value == o.value;
    }
};

// ---- univariate polynomials over a field ----------------------------------

struct FqPoly {
    FieldPtr F = nullptr;
    std::vector<u64> c; // ascending, normalized (no leading zeros)

    int deg() const { return static_cast<int>(c.size()) - 1; } // -1 for zero
    bool is_zero() const { return c.empty(); }
    u64 lead() const { return c.back(); }

    static FqPoly zero(FieldPtr F) { return FqPoly{F, {}}; }
    static FqPoly constant(FieldPtr F, u64 a) { FqPoly f{F, {a}}; f.normalize(); return f; }
    static FqPoly x(FieldPtr F) { return FqPoly{F, {0, 1}}; }
    static FqPoly from(FieldPtr F, std::vector<u64> cs) { FqPoly f{F, std::move(cs)}; f.normalize(); return f; }
    void normalize() { while (!c.empty() && c.back() == 0) c.pop_back(); }

    u64 eval(u64 a) const;
};

FqPoly poly_add(const FqPoly& a, const FqPoly& b);
FqPoly poly_sub(const FqPoly& a, const FqPoly& b);
FqPoly poly_mul(const FqPoly& a, const FqPoly& b);
FqPoly poly_scale(const FqPoly& a, u64 s);
std::pair<FqPoly, FqPoly> poly_divmod(const FqPoly& a, const FqPoly& b);
FqPoly poly_mod(const FqPoly& a, const FqPoly& b);
FqPoly poly_gcd(FqPoly a, FqPoly b); // monic
FqPoly poly_derivative(const FqPoly& a);
FqPoly poly_monic(const FqPoly& a);
FqPoly poly_powmod(const FqPoly& base, u64 e, const FqPoly& mod);
bool poly_equal(const FqPoly& a, const FqPoly& b);

bool is_irreducible(const FqPoly& f);

// Square-free + distinct-degree + equal-degree splitting. Deterministic for a
// fixed seed; factors monic and sorted by (degree, coefficient tuple).
std::vector<std::pair<FqPoly, int>> factor_univariate(const FqPoly& f, u64 seed);

// Roots of f in its own field (with multiplicity collapsed), sorted.
std::vector<u64> poly_roots(const FqPoly& f, u64 seed);

bool is_prime_u64(u64 n);

} // namespace vl
