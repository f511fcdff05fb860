#pragma once

#include "repe.hpp"

#include <optional>

namespace vl {

// Module presented by an arbitrary finite list of operators (the algebra they
// generate is implicit). An optional integer grading restricts endomorphisms
// to grade-preserving ones; when set, the basis must be sorted by grade.
struct OperatorModule {
    FieldPtr F = nullptr;
    int dim = 0;
    std::vector<Mat> ops;
    std::vector<int> weights; // empty = ungraded
    std::string label;

    bool graded() const { return !weights.empty(); }
};

OperatorModule from_erep(const ERep& m);

OperatorModule sub_module(const OperatorModule& m, const Mat& basis);

// characteristic polynomial, ascending coefficients, monic of degree m.rows
FqPoly charpoly(const Mat& m);
// evaluate a polynomial at a square matrix
Mat poly_at(const FqPoly& f, const Mat& m);
// minimal polynomial via Krylov orbits
FqPoly minpoly(const Mat& m);

// Jordan basis of a nilpotent matrix: columns grouped into chains
// v, Nv, N^2 v, ...; block sizes returned alongside.
struct JordanBasis {
    Mat S;                       // change of basis, nilpotent becomes shift blocks
    std::vector<int> block_sizes;
};
JordanBasis nilpotent_jordan(const Mat& nilp);

// Basis of the algebra of matrices commuting with every operator.
std::vector<Mat> commutant(const OperatorModule& m);

// Jacobson radical of the algebra spanned by `basis` (must be closed under
// multiplication up to span and contain the identity), acting on a faithful
// module of dimension nat_dim. Characteristic-p descent on characteristic
// polynomial coefficients; the result is certified nilpotent and an ideal.
std::vector<Mat> algebra_radical(const std::vector<Mat>& basis);

struct SplitOutcome {
    bool split = false;
    Mat part_a, part_b;       // column bases of complementary invariant summands
    bool certified_local = false; // when !split: End/rad is a field
};

// Las Vegas Fitting splits with a deterministic radical-based fallback.
SplitOutcome split_once(const OperatorModule& m, u64 seed);

struct DecompClass {
    OperatorModule rep;        // representative summand
    std::vector<Mat> embeds;   // one embedding per copy (columns in ambient coords)
    int mult = 0;
};

struct Decomposition {
    std::vector<DecompClass> classes;
    Mat certificate;           // ambient change of basis block-diagonalizing all ops
    std::vector<int> block_sizes;
};

Decomposition decompose(const OperatorModule& m, u64 seed);

// Explicit isomorphism or a certified absence verdict (for indecomposables).
std::optional<Mat> iso_test(const OperatorModule& a, const OperatorModule& b, u64 seed);

// Full direct-sum decomposition of a group representation with embeddings and
// projections for every part; the free part is split off first.
struct FullSplit {
    struct Part {
        ERep rep;
        Mat embed;   // ambient x dim
        Mat project; // dim x ambient
        bool free = false;
    };
    std::vector<Part> parts;
};
FullSplit full_split(const ERep& m, u64 seed);

// hom space between operator modules (dense path)
std::vector<Mat> op_hom_space(const OperatorModule& a, const OperatorModule& b);

} // namespace vl
