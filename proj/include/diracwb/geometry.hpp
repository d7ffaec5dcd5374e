#pragma once

#include "diracwb/linalg.hpp"
#include "diracwb/poly.hpp"
#include "diracwb/report.hpp"
#include "diracwb/superfun.hpp"

#include <functional>
#include <string>
#include <vector>

namespace diracwb {

class BidegreeError : public std::runtime_error {
 public:
  explicit BidegreeError(const std::string& what) : std::runtime_error(what) {}
};

// Lie algebroid structure: base dimension n, fiber rank r, and the structure
// element mu of bidegree (1,2). A validated structure satisfies {mu,mu} = 0.
// The anchor rho^i_a and structure functions c^c_ab embed into mu as
//   mu = -(rho^i_a xi^a p_i) - 1/2 c^c_ab xi^a xi^b theta_c,
// the sign fixed so that d = {mu,.} is the de Rham/Chevalley-Eilenberg
// differential and [X,Y] = {{X,mu},Y} the geometric bracket.
struct AlgebroidStructure {
  int base_dim = 0;
  int fiber_rank = 0;
  Superfunction mu;

  static AlgebroidStructure tangent(int n);
  // Point base: a Lie algebra with structure constants c[c][a][b] = c^c_ab.
  static AlgebroidStructure lie_algebra(int r,
                                        const std::function<Rat(int, int, int)>& c);
  static AlgebroidStructure from_anchor_constants(
      int n, int r, const PolyMat& rho,
      const std::function<Poly(int, int, int)>& c);
  static AlgebroidStructure so3();
  static AlgebroidStructure sl2();
  static AlgebroidStructure heisenberg3();

  // Coefficient views (round-trip the constructor data).
  Poly anchor_coeff(int i, int a) const;     // rho^i_a(x)
  Poly structure_coeff(int c, int a, int b) const;  // c^c_ab(x)

  // Section bracket in frame coordinates (coordinate formula; agrees with
  // {{X,mu},Y} on polynomial sections, proved in tests).
  RatVec bracket_sections(const RatVec& x, const RatVec& y) const;
};

// Sections of A are (1,0)-elements X = X^a theta_a; covectors (0,1).
Superfunction section_to_sf(const std::vector<Poly>& v);
Superfunction covector_to_sf(const std::vector<Poly>& v);
std::vector<Poly> sf_to_section(const Superfunction& f, int r);
std::vector<Poly> sf_to_covector(const Superfunction& f, int r);

// {mu,mu} = 0 test; FAIL report carries the residual.
CheckReport check_lie_algebroid(const AlgebroidStructure& alg);

// Schouten-Nijenhuis bracket [X,Y] = {{X,mu},Y}.
Superfunction schouten(const AlgebroidStructure& alg, const Superfunction& x,
                       const Superfunction& y);
// rho(X)f = {{X,mu},f}.
Superfunction anchor_apply(const AlgebroidStructure& alg, const Superfunction& x,
                           const Superfunction& f);
// d = {mu,.}.
Superfunction differential(const AlgebroidStructure& alg, const Superfunction& form);
// i_X = {X,.} for a section X.
Superfunction interior(const Superfunction& x, const Superfunction& form);
// L_X = [i_X, d].
Superfunction lie_derivative(const AlgebroidStructure& alg, const Superfunction& x,
                             const Superfunction& form);

// Endomorphism of A as its coefficient matrix N^a_b (rational-function
// entries so that pi' o pi^-1 is representable); the bidegree-(1,1) element
// N^a_b xi^b theta_a is the one-way embedding used by i_N.
struct Endo {
  int r = 0;
  RatMat m;  // m[a][b] = N^a_b

  static Endo from_poly(const PolyMat& pm);
  static Endo identity(int r);
  bool is_polynomial() const;
  Superfunction to_sf() const;  // throws when entries are not polynomial
  RatVec apply(const RatVec& v) const;
  Endo compose(const Endo& o) const;  // this o o
  Endo power(int k) const;
  bool operator==(const Endo& o) const;
  std::string render(const Names* names = nullptr) const;
};

// i_N = {N,.} and d_N = [i_N, d].
Superfunction i_endo(const Endo& n, const Superfunction& form);
Superfunction d_endo(const AlgebroidStructure& alg, const Endo& n, const Superfunction& form);

// Nijenhuis torsion TN(u,v) = [Nu,Nv] - N[Nu,v] - N[u,Nv] + N^2[u,v]
// evaluated on frame pairs; tensorial, so vanishing on the frame decides.
struct TorsionTable {
  int r = 0;
  std::vector<std::vector<RatVec>> val;  // val[a][b], a<b, else empty
  bool vanishes = true;
  std::string witness;  // first nonzero entry, rendered
};
TorsionTable nijenhuis_torsion(const AlgebroidStructure& alg, const Endo& n);
RatVec nijenhuis_torsion_value(const AlgebroidStructure& alg, const Endo& n,
                               const RatVec& u, const RatVec& v);

// Maps of bivectors and 2-forms: pi xi = i_xi pi, omega x = -i_x omega.
Superfunction map_of_bivector(const Superfunction& pi, const Superfunction& xi_cov);
Superfunction map_of_form(const Superfunction& omega, const Superfunction& x_sec);
PolyMat bivector_matrix(const Superfunction& pi, int r);
PolyMat twoform_matrix(const Superfunction& omega, int r);
Superfunction bivector_from_matrix(const PolyMat& m);
Superfunction twoform_from_matrix(const PolyMat& m);

// Partial evaluation W(xi1, xi2) = {xi2, {xi1, W}} by successive interior
// products (for bivectors this is pi(xi1,xi2) = <xi2, pi xi1>; the trivector
// case is pinned by the exact bivector-bracket identity test).
Superfunction eval2(const Superfunction& w, const Superfunction& a1, const Superfunction& a2);

// [xi1,xi2]_pi = L_{pi xi1} xi2 - L_{pi xi2} xi1 - d(pi(xi1,xi2)).
Superfunction bracket_pi(const AlgebroidStructure& alg, const Superfunction& pi,
                         const Superfunction& xi1, const Superfunction& xi2);

}  // namespace diracwb
