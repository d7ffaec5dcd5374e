#pragma once

// Independent serial reference implementations used as test oracles and as
// the baseline in the benchmark. Nothing here is allowed to call the code
// path it checks: the bracket oracle differentiates term-by-term instead of
// recursing over factors, the linear-algebra oracle does naive rational
// elimination instead of fraction-free Bareiss, and the geometric oracles
// work on coefficient arrays instead of superfunctions.

#include "diracwb/geometry.hpp"
#include "diracwb/linalg.hpp"
#include "diracwb/superfun.hpp"

#include <vector>

namespace diracwb::reference {

// Big bracket as the canonical bidifferential operator
//   {F,G} = dF/dx_i dG/dp_i - dF/dp_i dG/dx_i
//           - (-1)^{s(F)} (dF/dxi_a dG/dth_a + dF/dth_a dG/dxi_a)
// with left derivatives on the odd generators.
Superfunction big_bracket_oracle(const Superfunction& f, const Superfunction& g);

// Even partial derivatives and odd left derivatives of superfunctions.
Superfunction d_even(const Superfunction& f, bool momentum, int idx);
Superfunction d_odd_left(const Superfunction& f, bool theta, int idx);

// Rank of a constant rational matrix by naive Gaussian elimination.
int rank_oracle(std::vector<std::vector<Rat>> m);

// Classical multivector-calculus oracles on the tangent algebroid of R^n:
// vector fields as coefficient vectors of polynomials.
std::vector<Poly> vf_bracket_oracle(const std::vector<Poly>& x, const std::vector<Poly>& y);

// Chevalley-Eilenberg differential of a dual basis element:
// d xi^c = -1/2 c^c_ab xi^a xi^b for a Lie algebra over a point.
Superfunction ce_differential_oracle(const AlgebroidStructure& alg, int c);

// Jacobiator J(a,b,c)^d of structure constants; zero iff Jacobi holds.
std::vector<Rat> jacobiator_oracle(const AlgebroidStructure& alg, int a, int b, int c);

// Schouten bracket [pi,pi'] of two bivectors on the tangent algebroid of R^n,
// returned as the full antisymmetric component array t[i][j][k].
std::vector<std::vector<std::vector<Poly>>> schouten_bivectors_oracle(const PolyMat& pi,
                                                                      const PolyMat& pip);

}  // namespace diracwb::reference
