#pragma once

#include "diracwb/geometry.hpp"
#include "diracwb/linalg.hpp"
#include "diracwb/report.hpp"

#include <cstdint>

namespace diracwb {

class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& w) : std::runtime_error(w) {}
};

struct ClosureOptions {
  int samples = 6;     // random polynomial multiples per closure check
  int max_degree = 2;  // degree bound of the multipliers
  uint64_t seed = 1;
};

// Proto-bialgebroid structure element Theta = phi + gamma + mu + psi with
// components of bidegrees (3,0), (2,1), (1,2), (0,3). Validated iff
// {Theta,Theta} = 0.
struct ProtoStructure {
  int base_dim = 0;
  int fiber_rank = 0;
  Superfunction phi, gamma, mu, psi;

  static ProtoStructure trivial(const AlgebroidStructure& alg);
  static ProtoStructure make(int n, int r, const Superfunction& phi,
                             const Superfunction& gamma, const Superfunction& mu,
                             const Superfunction& psi);

  Superfunction theta() const { return phi + gamma + mu + psi; }
  AlgebroidStructure algebroid() const;  // the (A, mu) part

  bool is_lie_bialgebroid() const { return phi.is_zero() && psi.is_zero(); }
  bool is_quasi_lie_bialgebroid() const { return phi.is_zero(); }   // (mu,gamma,psi)
  bool is_lie_quasi_bialgebroid() const { return psi.is_zero(); }   // (mu,gamma,phi)
};

// {Theta,Theta} = 0; the FAIL report resolves the residual by bidegree.
CheckReport check_proto(const ProtoStructure& th);

// Dorfman bracket [u,v] = {{u,Theta},v} on sections of A + A*.
Superfunction dorfman(const ProtoStructure& th, const Superfunction& u,
                      const Superfunction& v);

// Subbundle of A + A* given by a 2r x k polynomial generator matrix
// (A-part rows first, then A*-part).
struct DoubleSubbundle {
  int r = 0;
  PolyMat gens;

  static DoubleSubbundle from_generators(int r, const PolyMat& g);
  // L_pi = {(pi xi, xi)}: the (overline) graph of a bivector in A x A*.
  static DoubleSubbundle graph_of_bivector(const Superfunction& pi, int r);
  // L_omega = {(x, omega x)}.
  static DoubleSubbundle graph_of_twoform(const Superfunction& omega, int r);

  int gen_count() const { return static_cast<int>(cols(gens)); }
  Superfunction section_sf(int k) const;  // generator as X + xi superfunction
  bool is_isotropic() const;
  bool is_maximal() const;
};

// Splits a mixed (1,0)+(0,1) superfunction into its 2r coefficient vector.
std::vector<Poly> double_section_coeffs(const Superfunction& s, int r);

// Isotropy + maximality + Dorfman closure on generators (closure on
// generators suffices for isotropic L; random polynomial multiples are
// sampled as well in the polynomial regime).
CheckReport is_dirac(const ProtoStructure& th, const DoubleSubbundle& l,
                     const ClosureOptions& opt = {});

// Twists by bivectors and 2-forms (canonical-transformation formulas).
ProtoStructure twist_by_bivector(const ProtoStructure& th, const Superfunction& pi);
ProtoStructure twist_by_form(const ProtoStructure& th, const Superfunction& omega);

// phi_pi = 0 (resp. psi_omega = 0), cross-validated against the direct
// Dirac check of the graph; the two verdicts must agree.
CheckReport is_poisson_function(const ProtoStructure& th, const Superfunction& pi,
                                const ClosureOptions& opt = {});
CheckReport is_presymplectic_function(const ProtoStructure& th, const Superfunction& omega,
                                      const ClosureOptions& opt = {});

// Membership of the twisted components in exterior powers of subbundles:
// phi_pi in Wedge^3 D and psi_pi in Wedge^3 (D-perp)  (resp. the dual).
CheckReport poisson_function_mod(const ProtoStructure& th, const Superfunction& pi,
                                 const PolyMat& d_gens);
CheckReport presymplectic_function_mod(const ProtoStructure& th, const Superfunction& omega,
                                       const PolyMat& f_gens);

struct CharacteristicPair {
  bool dual = false;       // false: (pi, D in A); true: (omega, F in A*)
  Superfunction tensor;    // bivector or 2-form
  PolyMat subbundle;       // generators of D (in A) or F (in A*)
};

// Builds L from the pair and verifies the closure-condition triple of the
// relevant theorem AND the direct Dorfman-closure route; both verdicts are
// reported and must agree.
CheckReport characteristic_pair_dirac(const ProtoStructure& th, const CharacteristicPair& pair,
                                      const ClosureOptions& opt = {});
DoubleSubbundle characteristic_pair_subbundle(const CharacteristicPair& pair, int r);

// Experimental: recovers a characteristic pair (pi, D) from a maximally
// isotropic L with D = L n A, for constant-coefficient generators only
// (throws PreconditionError otherwise). The recovered pair reproduces L:
// characteristic_pair_subbundle(extract..., r) has the same span.
CharacteristicPair extract_characteristic_pair(const DoubleSubbundle& l);

}  // namespace diracwb
