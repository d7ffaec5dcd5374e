#pragma once

#include "diracwb/geometry.hpp"
#include "diracwb/proto.hpp"
#include "diracwb/relations.hpp"
#include "diracwb/report.hpp"

namespace diracwb {

struct PairOptions {
  NijenhuisOptions nij;
  ClosureOptions closure;
};

// A bivector pair with its derived caches: the relation N(pi,pi'), the
// subspace K = pi^-1(Im pi') n pi'^-1(Im pi), its annihilator K-perp, and
// the map matrices. Caches fill on first use.
class PairContext {
 public:
  PairContext(const AlgebroidStructure& alg, Superfunction first, Superfunction second);

  const AlgebroidStructure& algebroid() const { return alg_; }
  const Superfunction& first() const { return first_; }
  const Superfunction& second() const { return second_; }
  const PolyMat& first_matrix() const { return m_first_; }
  const PolyMat& second_matrix() const { return m_second_; }
  const LinearRelation& relation();  // N(pi, pi')
  const PolyMat& k();                // K in A*
  const PolyMat& k_perp();           // annihilator of K in A

 private:
  AlgebroidStructure alg_;
  Superfunction first_, second_;
  PolyMat m_first_, m_second_;
  std::optional<LinearRelation> relation_;
  std::optional<PolyMat> k_, k_perp_;
};

// [pi,pi] = 0.
CheckReport is_poisson(const AlgebroidStructure& alg, const Superfunction& pi);

// [pi,pi'] = 0 for two Poisson structures; equivalently pi + pi' Poisson
// (both routes computed). Non-Poisson inputs raise PreconditionError.
CheckReport is_hamiltonian_pair(const AlgebroidStructure& alg, const Superfunction& pi,
                                const Superfunction& pip);

// The exact torsion identity for N(pi,pi'): on every admissible chain
//   2 T = <xi,[pi,pi](xi1,xi2)> + <xi'',[pi',pi'](xi1,xi2)> - 2<xi',[pi,pi'](xi1,xi2)>.
// Bivectors need not be Poisson. Reports VACUOUS when no chains exist.
CheckReport torsion_identity_check(const AlgebroidStructure& alg, const Superfunction& pi,
                                   const Superfunction& pip);

// N(pi,pi') is a Nijenhuis relation (inputs must be Poisson).
CheckReport is_poisson_pair(const AlgebroidStructure& alg, const Superfunction& pi,
                            const Superfunction& pip, const PairOptions& opt = {});

// K = pi^-1(Im pi') n pi'^-1(Im pi) and the annihilator diagnostic:
// all values [pi,pi'](xi1,xi2) annihilate K.
PolyMat k_subspace(const PolyMat& m_pi, const PolyMat& m_pip);
CheckReport values_annihilate_k(const AlgebroidStructure& alg, const Superfunction& pi,
                                const Superfunction& pip);

// N = pi' o pi^-1 (pi non-degenerate over Q(x)) plus its torsion verdict.
struct NijenhuisFromPair {
  Endo n;
  CheckReport report;
};
NijenhuisFromPair nijenhuis_from_pair(const AlgebroidStructure& alg, const Superfunction& pi,
                                      const Superfunction& pip);

// Dirac pair: N_{L,L'} = overline(L) * L' is a Nijenhuis relation in A.
// Inputs are validated as Dirac structures first (PreconditionError).
CheckReport dirac_pair_check(const ProtoStructure& th, const DoubleSubbundle& l,
                             const DoubleSubbundle& lp, const PairOptions& opt = {});
LinearRelation relation_of_dirac_pair(const DoubleSubbundle& l, const DoubleSubbundle& lp);

// Closed 2-forms whose graphs form a Dirac pair; symplectic adds
// non-degeneracy and cross-checks against the Poisson pair of the inverses.
CheckReport presymplectic_pair_check(const AlgebroidStructure& alg, const Superfunction& om,
                                     const Superfunction& omp, const PairOptions& opt = {});
CheckReport symplectic_pair_check(const AlgebroidStructure& alg, const Superfunction& om,
                                  const Superfunction& omp, const PairOptions& opt = {});

// P-Omega: pi Poisson, d omega = 0, d_N omega = 0 with N = pi o omega;
// on PASS also asserts TN = 0 and the Dirac-pair verdict of the graphs.
CheckReport pomega_check(const AlgebroidStructure& alg, const Superfunction& pi,
                         const Superfunction& om, const PairOptions& opt = {});

// Omega-N: omega o N = N* o omega (precondition), TN = 0, d omega = 0,
// d omega_N = 0. Weak variant replaces TN = 0 by omega(TN(.,.)) = 0.
CheckReport omegan_check(const AlgebroidStructure& alg, const Superfunction& om, const Endo& n,
                         const PairOptions& opt = {});
CheckReport weak_omegan_check(const AlgebroidStructure& alg, const Superfunction& om,
                              const Endo& n);
CheckReport nplus_equals_nstar(const AlgebroidStructure& alg, const Superfunction& om,
                               const Endo& n);

// omega o N^k closed for k <= p_max (under the chain preconditions).
std::vector<CheckReport> lenard_chain(const AlgebroidStructure& alg, const Superfunction& om,
                                      const Endo& n, int p_max);

// The built-in T*R^2 example suite: wedge identities, pair verdicts,
// torsion of pi_Omega o omega_P, Pfaffian normalizations.
CheckReport monge_ampere_suite(const PairOptions& opt = {});

// The built-in T*R^2 context (frame order q1, q2, p1, p2).
struct MongeAmpereContext {
  AlgebroidStructure alg;        // tangent algebroid of R^4
  Superfunction omega_big;       // canonical symplectic form
  Superfunction omega_h, omega_e, omega_p;
  Superfunction pi_omega;        // inverse bivector of omega_big
};
MongeAmpereContext monge_ampere_context();

}  // namespace diracwb
