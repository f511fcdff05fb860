#pragma once

#include "klein.hpp"

namespace vl {

// Module over the divided-power operators e^(r), f^(r) with an integer weight
// grading. Basis is always kept sorted by weight (ascending).
struct HyperMod {
    FieldPtr F = nullptr;
    int dim = 0;
    int rmax = 0;
    std::vector<int> weights;
    std::vector<Mat> eops, fops; // index r-1 holds e^(r) / f^(r)

    std::map<int, int> character() const;
    int highest_weight() const;
};

HyperMod make_hyper(FieldPtr F, std::vector<int> weights, std::vector<Mat> eops,
                    std::vector<Mat> fops);
HyperMod trivial_hyper(FieldPtr F);
HyperMod natural_rep(FieldPtr F); // two-dimensional, weights -1 and 1

HyperMod tensor_hyper(const HyperMod& a, const HyperMod& b);
HyperMod tensor_power_hyper(int m, FieldPtr F);

// degree-i part of the polynomial algebra in two variables, with the
// substitution action of the unipotent subgroup encoded by divided powers
HyperMod weyl_module(int i, FieldPtr F);

OperatorModule to_operator_module(const HyperMod& h);
HyperMod sub_hyper(const HyperMod& h, const Mat& basis);

// joint kernel of all raising and lowering operators
int invariant_dim(const HyperMod& h);

// restriction along lv: generator j acts by sum_r lambda_j^r f^(r)
ERep restrict_hyper(const HyperMod& h, const LambdaVec& lv);

int hom_u_invariants(const HyperMod& h, const LambdaVec& lv, const ERep& source);

// number of Weyl factors in a good filtration, by greedy character subtraction
int nabla_length(const std::map<int, int>& character);

struct TiltEntry {
    int index = 0;
    HyperMod hyper;
    std::map<int, int> character;
    int nabla_len = 0;
    int sl2_inv_dim = 0;
};

// Indecomposable tilting modules T_0..T_imax obtained by peeling the products
// V (x) T_{m-1}; every decomposition runs through the graded Krull-Schmidt
// machinery.
std::vector<TiltEntry> tilting_catalog(u32 p, FieldPtr F, int imax, u64 seed);

// multiplicities of the indecomposable tilting characters inside an arbitrary
// tilting character, top-down
std::map<int, int> tilt_char_decompose(std::map<int, int> character,
                                       const std::vector<TiltEntry>& catalog);

u64 binom_mod_p(u64 a, u64 b, u32 p);

} // namespace vl
