#pragma once

#include "diracwb/poly.hpp"

#include <optional>
#include <vector>

namespace diracwb {

// Exact linear algebra over the fraction field Q(x1..xn). Subspaces are
// represented by polynomial generator matrices (column span over the
// fraction field; scaling columns by polynomials does not change the span),
// and the elimination core is fraction-free Bareiss so no multivariate gcd
// is ever needed.
using PolyMat = std::vector<std::vector<Poly>>;
using RatVec = std::vector<RatFunc>;
using RatMat = std::vector<std::vector<RatFunc>>;

inline std::size_t rows(const PolyMat& m) { return m.size(); }
inline std::size_t cols(const PolyMat& m) { return m.empty() ? 0 : m[0].size(); }

PolyMat identity_mat(int n);
PolyMat zero_mat(int r, int c);
PolyMat transpose(const PolyMat& m);
PolyMat mat_mul(const PolyMat& a, const PolyMat& b);
PolyMat hcat(const PolyMat& a, const PolyMat& b);
PolyMat vcat(const PolyMat& a, const PolyMat& b);
std::vector<Poly> mat_apply(const PolyMat& m, const std::vector<Poly>& v);
PolyMat from_rat_rows(const std::vector<std::vector<Rat>>& entries);
PolyMat column(const std::vector<Poly>& v);

struct Echelon {
  PolyMat mat;                  // row echelon form (fraction-free)
  std::vector<int> pivot_cols;  // ascending
  int rank = 0;
  // Non-constant pivot polynomials encountered: points where they vanish are
  // candidate rank-drop loci of the generically computed result.
  std::vector<Poly> nonconst_pivots;
};

Echelon bareiss_echelon(PolyMat a);
int rank(const PolyMat& a);
Poly det(const PolyMat& a);

// Basis of {v | a v = 0}; polynomial columns, content/sign-normalized,
// free columns taken in ascending order (deterministic).
PolyMat nullspace(const PolyMat& a);

// One solution of a x = b over Q(x); nullopt when inconsistent.
std::optional<RatVec> solve(const PolyMat& a, const std::vector<Poly>& b);

bool in_column_span(const PolyMat& gens, const std::vector<Poly>& v);
bool column_span_equal(const PolyMat& a, const PolyMat& b);
bool column_span_contains(const PolyMat& outer, const PolyMat& inner);

// Canonical generator matrix of a column span: reduced column echelon form,
// denominators cleared, columns primitive with positive leading pivot.
// Two matrices have the same column span iff their canonical forms are equal.
PolyMat reduced_column_echelon(const PolyMat& a);

// Intersection of column spans inside the common ambient space.
PolyMat span_intersection(const PolyMat& a, const PolyMat& b);
// Annihilator of a column span in the dual space (frame pairing).
PolyMat annihilator(const PolyMat& gens, int ambient_dim);

// Rational-function matrices (used for endomorphisms such as pi' o pi^-1).
RatMat rat_identity(int n);
RatMat rat_mat_mul(const RatMat& a, const RatMat& b);
RatVec rat_apply(const RatMat& m, const RatVec& v);
RatMat rat_transpose(const RatMat& m);
RatMat to_rat(const PolyMat& m);
RatFunc dot(const RatVec& a, const RatVec& b);
// Clears denominators of a vector: returns polynomial vector equal to v up to
// a nonzero scalar multiple (content/sign-normalized).
std::vector<Poly> clear_denominators(const RatVec& v);
// Inverse of a square rational matrix; throws std::domain_error when singular.
RatMat rat_inverse(const RatMat& m);
Poly rat_mat_det_num(const RatMat& m);  // determinant numerator (den cleared)

}  // namespace diracwb
