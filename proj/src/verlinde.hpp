#pragma once

#include "sl2tilt.hpp"

namespace vl {

// coordinates of an intertwiner in the chosen quotient basis of a QuotHomData
std::vector<u64> quot_coords(const QuotHomData& q, const Mat& f);

// Endomorphism algebra of the direct sum of the distinguished projective
// objects, presented by quotient Hom spaces between the restricted tilting
// modules in the window p^{n-1}-1 <= i <= p^n-2.
struct BasicAlgebra {
    u32 p = 2;
    int n = 2;
    FieldPtr F = nullptr;
    LambdaVec lv;
    std::vector<int> proj_indices;
    std::vector<ERep> verts;                       // restricted tilting modules
    std::vector<std::vector<QuotHomData>> qh;      // qh[i][j]: vert_i -> vert_j
    struct Arrow {
        int src, dst;  // vertex positions
        Mat rep;       // intertwiner vert_src -> vert_dst
    };
    std::vector<Arrow> arrows;
    // mult[a][b]: coefficients of arrow_b o arrow_a in the arrow basis (empty
    // when the sources/targets do not compose)
    std::vector<std::vector<std::vector<u64>>> mult;

    int vert_count() const { return static_cast<int>(verts.size()); }
    int hom_dim_between(int i, int j) const { return qh[i][j].quotient_dim; }
};

BasicAlgebra basic_algebra(u32 p, int n, const LambdaVec& lv, u64 seed);

// Module over the basic algebra: one space per vertex plus the action of
// every arrow (contravariantly: an arrow s -> d acts X_d -> X_s).
struct BModule {
    const BasicAlgebra* alg = nullptr;
    std::vector<int> vdims;
    std::vector<Mat> arrow_actions;
    // model data for modules arising from a group representation
    std::vector<QuotHomData> model;              // per vertex: Hom(vert_i, m)/K
    std::vector<std::vector<Mat>> vertex_reps;   // chosen quotient representatives

    int total_dim() const {
        int t = 0;
        for (int d : vdims) t += d;
        return t;
    }
};

BModule to_bmodule(const ERep& m, const BasicAlgebra& alg);

// induced map on vertex spaces from a module map g: a_model -> b_model
struct BModuleMap {
    std::vector<Mat> vertex_maps; // vdims_b[i] x vdims_a[i]
};
BModuleMap bmodule_map(const BModule& a, const BModule& b, const Mat& g);

// vertex-wise cokernel with the induced arrow actions; projections and
// sections are kept so maps can be pushed to the quotient
struct BCoker {
    BModule mod;
    std::vector<Mat> proj;    // coker_i x vdims_b[i]
    std::vector<Mat> section; // vdims_b[i] x coker_i
};
BCoker bmodule_coker(const BModule& b, const BModuleMap& f_into_b);

using VerMultiset = std::map<std::string, int>;
std::string ver_multiset_str(const VerMultiset& ms);

// Decompose a module over the basic algebra and name the summands; for
// p^n = 4 the names are "1", "V" and "P(1)", otherwise generic shape tags.
VerMultiset classify_bmodule(const BModule& b, u64 seed);

} // namespace vl
