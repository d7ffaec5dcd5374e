#pragma once

#include "diracwb/geometry.hpp"
#include "diracwb/linalg.hpp"
#include "diracwb/report.hpp"

#include <string>

namespace diracwb {

// A linear relation R in V x W: the column span of a polynomial generator
// matrix over Q(x), stored in reduced column echelon form so that equality
// of relations is equality of matrices. dom/cod are the dimensions of V, W.
struct LinearRelation {
  int dom = 0;
  int cod = 0;
  PolyMat gens;  // (dom+cod) x k, canonical
  std::string provenance;

  static LinearRelation from_generators(int dom, int cod, const PolyMat& g,
                                        std::string prov = "");
  // graph of a linear map M: {(u, M u)}.
  static LinearRelation graph_of(const PolyMat& map_matrix, std::string prov = "graph");
  static LinearRelation identity(int n);

  int gen_count() const { return static_cast<int>(cols(gens)); }
  std::vector<Poly> gen_dom(int k) const;  // V-part of generator k
  std::vector<Poly> gen_cod(int k) const;  // W-part

  // Equality of relations is equality of column spans over Q(x).
  bool operator==(const LinearRelation& o) const {
    return dom == o.dom && cod == o.cod && column_span_equal(gens, o.gens);
  }
};

// R' * R (apply R first, then R'); cod(R) must equal dom(R').
LinearRelation compose(const LinearRelation& r, const LinearRelation& rp,
                       std::vector<std::string>* warnings = nullptr);
// overline R: swap the two factors.
LinearRelation inverse(const LinearRelation& r);
// R* in W* x V*: pairs (beta, alpha) with <alpha,u> = <beta,v> for all (u,v).
LinearRelation dual(const LinearRelation& r);

// R' <> R: triples (u,v,w) with (u,v) in R, (v,w) in R'.
struct TripleRelation {
  int du = 0, dv = 0, dw = 0;
  PolyMat gens;  // (du+dv+dw) x k
};
TripleRelation diamond(const LinearRelation& r, const LinearRelation& rp);
TripleRelation square(const LinearRelation& r);
LinearRelation projection_uw(const TripleRelation& t);

// N(pi,pi') = {(pi' xi, pi xi)} = graph pi * overline(graph pi').
LinearRelation relation_from_map_pair(const PolyMat& m_pi, const PolyMat& m_pi_prime);

// Chains (alpha, alpha', alpha'') with (alpha,alpha') and (alpha',alpha'')
// in N*, as columns of a 3r x k matrix. Also reports rank-drop pivots.
PolyMat torsion_chain_space(const LinearRelation& n, std::vector<std::string>* warnings = nullptr);

struct TorsionTuple {
  RatVec u1, v1, u2, v2;          // (u1,v1), (u2,v2) in N
  RatVec alpha, alphap, alphapp;  // chain in N*
};

class MembershipError : public std::runtime_error {
 public:
  explicit MembershipError(const std::string& w) : std::runtime_error(w) {}
};

// T(N)(u1,v1,u2,v2,a,a',a'') = <a,[v1,v2]> - <a',[v1,u2]+[u1,v2]> + <a'',[u1,u2]>.
// Throws MembershipError when the tuple violates its constraints.
RatFunc torsion_eval(const AlgebroidStructure& alg, const LinearRelation& n,
                     const TorsionTuple& t, bool check_membership = true);

struct NijenhuisOptions {
  int samples = 8;      // random polynomial-multiple tuples in regime (b)
  int max_degree = 2;   // degree bound of sampled multipliers
  uint64_t seed = 1;
};

// PASS iff the torsion vanishes on all generator-pair x chain-basis tuples
// (a proof by multilinearity/tensoriality over the constraint subspaces),
// supplemented by random polynomial multiples when coefficients are
// non-constant. Empty chain space reports VACUOUS.
CheckReport is_nijenhuis_relation(const AlgebroidStructure& alg, const LinearRelation& n,
                                  const NijenhuisOptions& opt = {});

}  // namespace diracwb
