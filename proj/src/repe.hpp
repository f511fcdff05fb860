#pragma once

#include "la.hpp"

#include <string>

namespace vl {

// Injective group morphism C_p^n -> k^+ given by the images of the generators.
struct LambdaVec {
    FieldPtr F = nullptr;
    u32 p = 2;
    int n = 0;
    std::vector<u64> entries;

    static LambdaVec make(FieldPtr F, std::vector<u64> entries);
    bool faithful() const; // entries linearly independent over the prime field
};

// Representation of E = C_p^n: n commuting generator matrices of order p.
struct ERep {
    FieldPtr F = nullptr;
    u32 p = 2;
    int n = 0;
    int dim = 0;
    std::vector<Mat> gens;
    std::string label;

    Mat gen_minus_one(int i) const;
    // action of the group element with digit vector e (g = prod g_i^{e_i})
    Mat group_element(const std::vector<u32>& e) const;
};

// Constructors. All validate the group relations.
ERep make_erep(FieldPtr F, u32 p, int n, std::vector<Mat> gens, std::string label = "");
ERep trivial_rep(FieldPtr F, u32 p, int n);
ERep zero_rep(FieldPtr F, u32 p, int n);
ERep regular_rep(FieldPtr F, u32 p, int n);
ERep perm_rep(FieldPtr F, u32 p, int n, const std::vector<std::vector<int>>& perms,
              std::string label = "");

// 2m-dimensional indecomposable for p=2, n=2 with Jordan parameter lam.
ERep make_A(int m, const PP1& lam, FieldPtr F);

// two-dimensional module with g_i lower-unitriangular with entry lambda_i
ERep make_V(const LambdaVec& lv);

ERep tensor(const ERep& a, const ERep& b);
ERep dual(const ERep& a);
ERep dsum(const ERep& a, const ERep& b);

// identity-check helper: explicit iso M (x) 1 ~ M
Mat unit_iso(const ERep& a);

// ---- subspace machinery -----------------------------------------------------

// invariants = socle: intersection of kernels of g_i - 1
Mat invariants(const ERep& m);
Mat radical_space(const ERep& m);   // sum of images of g_i - 1
Mat socle_space(const ERep& m);
int top_dim(const ERep& m);

// restriction of the action to a subspace (columns must span a submodule)
ERep sub_rep(const ERep& m, const Mat& basis, std::string label = "");

// quotient by a submodule; returns the quotient and the projection matrix
struct QuotientRep {
    ERep rep;
    Mat projection; // dim(quotient) x dim(m)
    Mat section;    // dim(m) x dim(quotient), projection * section = id
};
QuotientRep quotient_rep(const ERep& m, const Mat& sub_basis, std::string label = "");

// ---- Hom spaces ---------------------------------------------------------------

struct HomSpace {
    const ERep* source = nullptr;
    const ERep* target = nullptr;
    std::vector<Mat> basis;  // intertwiners target.dim x source.dim
    Mat coords;              // (dim_t * dim_s) x r, columns = vec(basis[i])

    int dim() const { return static_cast<int>(basis.size()); }
};

HomSpace hom_space(const ERep& a, const ERep& b);
int hom_dim(const ERep& a, const ERep& b);

// span of f(socle vector of V_lv) over all f: V_lv -> m; subspace of invariants
Mat h_lambda(const ERep& m, const LambdaVec& lv);

// K(x,y): intertwiners x -> y of the form g o (u (x) id_x) with u: 1 -> V_lv
// hitting the socle. Returned as vec-coordinates (columns) in hom coordinates.
Mat k_ideal_vecs(const ERep& x, const ERep& y, const LambdaVec& lv);

// dimension of Hom(x,y)/K(x,y) together with the pieces
struct QuotHomData {
    HomSpace full;
    Mat ideal_vecs;       // vec-coordinate columns, subspace of span(full.coords)
    int quotient_dim = 0;
    std::vector<int> rep_indices; // indices of full.basis forming a quotient basis
};
QuotHomData quot_hom_data(const ERep& x, const ERep& y, const LambdaVec& lv);

// trace pairing test: f negligible iff tr(f o g) = 0 for all g: N -> M
bool negligible(const Mat& f, const ERep& m, const ERep& n);

// ---- Heller shifts ------------------------------------------------------------

// kernel of minimal projective cover (i>0), dual shift (i<0), or the
// projective-free part (i=0)
ERep omega(const ERep& a, int i);

// ---- free summand splitting ---------------------------------------------------

// Splits off the largest free direct summand with explicit certificates.
struct FreeSplit {
    int free_rank = 0;
    Mat free_embed;      // dim x (|E| * free_rank), columns = group-translates of generators
    ERep residue;        // complement submodule (contains no free summand)
    Mat residue_embed;   // dim x residue.dim
    Mat residue_proj;    // residue.dim x dim, projection along the free part
};
FreeSplit split_free(const ERep& m);

// ---- sampling -----------------------------------------------------------------

// cokernel of a seeded random map between free modules, deterministic per seed
ERep random_module(u32 p, int n, FieldPtr F, int budget, u64 seed);

// all group digit-vectors in canonical order
std::vector<std::vector<u32>> group_elements(u32 p, int n);

} // namespace vl
