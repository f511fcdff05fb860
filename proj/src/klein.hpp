#pragma once

#include "krull.hpp"

#include <map>

namespace vl {

// Canonical name for an indecomposable over the Klein four-group in
// characteristic 2. The A-family parameter is stored in its minimal field
// (minimal polynomial + deterministic root choice), so labels computed over
// different working fields agree.
struct KleinLabel {
    enum class Kind { Proj, Omega, A };
    Kind kind = Kind::Proj;
    int omega_index = 0;              // for Omega
    int a_size = 0;                   // for A
    bool lam_infinite = false;        // for A
    std::vector<u32> lam_minpoly;     // minimal polynomial over GF(2), ascending
    int lam_root_index = 0;           // index among sorted roots in the minimal field

    static KleinLabel proj();
    static KleinLabel omega(int i);
    static KleinLabel a(int m, const PP1& lam); // canonicalizes lam

    int dim() const;
    std::string str() const;
    bool operator<(const KleinLabel& o) const;
    bool operator==(const KleinLabel& o) const;

    // the parameter as an element of a field containing its minimal field
    PP1 lam_in(FieldPtr F) const;
};

using KleinMultiset = std::map<KleinLabel, int>;

std::string multiset_str(const KleinMultiset& ms);
int multiset_dim(const KleinMultiset& ms);

// Name every indecomposable summand of a C_2^2-module. Parameters outside the
// working field appear as their Galois conjugates over the splitting field.
KleinMultiset classify(const ERep& m, u64 seed);

// Closed-form tensor products in the stable category plus the projective rank
// recovered by dimension count.
struct FuseResult {
    KleinMultiset stable;
    int proj_rank = 0;
};
FuseResult fuse_oracle(const KleinLabel& a, const KleinLabel& b);

// product of full multisets through the oracle
FuseResult fuse_oracle_ms(const KleinMultiset& a, const KleinMultiset& b);

// permutation modules k[E/H] for all subgroups H of C_2^2, classified
std::vector<std::pair<std::string, KleinMultiset>> induced_from_subgroups(FieldPtr F);

// build a module realizing the label over the given field
ERep construct_label(const KleinLabel& l, FieldPtr F);

// top/socle dimensions of the Heller shifts, generated once from the syzygy
// machinery and cached
struct OmegaShape {
    int dim, top, soc;
};
OmegaShape omega_shape(int i);

} // namespace vl
