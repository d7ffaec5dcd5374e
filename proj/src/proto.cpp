#include "diracwb/proto.hpp"

#include "diracwb/rng.hpp"

#include <sstream>

namespace diracwb {

namespace {

void require_component(const Superfunction& f, Bidegree d, const char* name) {
  if (!f.is_homogeneous_of(d))
    throw BidegreeError(std::string(name) + " must be homogeneous of bidegree (" +
                        std::to_string(d.p) + "," + std::to_string(d.q) + "): " + f.render());
}

}  // namespace

ProtoStructure ProtoStructure::trivial(const AlgebroidStructure& alg) {
  ProtoStructure th;
  th.base_dim = alg.base_dim;
  th.fiber_rank = alg.fiber_rank;
  th.mu = alg.mu;
  return th;
}

ProtoStructure ProtoStructure::make(int n, int r, const Superfunction& phi,
                                    const Superfunction& gamma, const Superfunction& mu,
                                    const Superfunction& psi) {
  require_component(phi, {3, 0}, "phi");
  require_component(gamma, {2, 1}, "gamma");
  require_component(mu, {1, 2}, "mu");
  require_component(psi, {0, 3}, "psi");
  ProtoStructure th;
  th.base_dim = n;
  th.fiber_rank = r;
  th.phi = phi;
  th.gamma = gamma;
  th.mu = mu;
  th.psi = psi;
  return th;
}

AlgebroidStructure ProtoStructure::algebroid() const {
  AlgebroidStructure alg;
  alg.base_dim = base_dim;
  alg.fiber_rank = fiber_rank;
  alg.mu = mu;
  return alg;
}

CheckReport check_proto(const ProtoStructure& th) {
  require_component(th.phi, {3, 0}, "phi");
  require_component(th.gamma, {2, 1}, "gamma");
  require_component(th.mu, {1, 2}, "mu");
  require_component(th.psi, {0, 3}, "psi");
  CheckReport rep = make_report("proto-bialgebroid");
  Superfunction res = big_bracket(th.theta(), th.theta());
  if (!res.is_zero()) {
    for (const auto& [d, part] : res.bidegree_components()) {
      std::ostringstream os;
      os << "residual bidegree (" << d.p << "," << d.q << "): " << part.render();
      rep.fail(os.str());
    }
  }
  if (th.is_lie_bialgebroid())
    rep.note("component shape: Lie bialgebroid (phi = psi = 0)");
  else if (th.is_quasi_lie_bialgebroid())
    rep.note("component shape: quasi-Lie bialgebroid (phi = 0)");
  else if (th.is_lie_quasi_bialgebroid())
    rep.note("component shape: Lie-quasi bialgebroid (psi = 0)");
  return rep;
}

Superfunction dorfman(const ProtoStructure& th, const Superfunction& u,
                      const Superfunction& v) {
  return big_bracket(big_bracket(u, th.theta()), v);
}

DoubleSubbundle DoubleSubbundle::from_generators(int r, const PolyMat& g) {
  if (!g.empty() && static_cast<int>(rows(g)) != 2 * r)
    throw DimensionMismatch("double subbundle generators must have 2r rows");
  DoubleSubbundle l;
  l.r = r;
  l.gens = reduced_column_echelon(g);
  return l;
}

DoubleSubbundle DoubleSubbundle::graph_of_bivector(const Superfunction& pi, int r) {
  PolyMat m = bivector_matrix(pi, r);
  return from_generators(r, vcat(m, identity_mat(r)));
}

DoubleSubbundle DoubleSubbundle::graph_of_twoform(const Superfunction& omega, int r) {
  PolyMat m = twoform_matrix(omega, r);
  return from_generators(r, vcat(identity_mat(r), m));
}

Superfunction DoubleSubbundle::section_sf(int k) const {
  std::vector<Poly> vec(r), cov(r);
  for (int i = 0; i < r; ++i) {
    vec[i] = gens[i][k];
    cov[i] = gens[r + i][k];
  }
  return section_to_sf(vec) + covector_to_sf(cov);
}

bool DoubleSubbundle::is_isotropic() const {
  for (int i = 0; i < gen_count(); ++i)
    for (int j = i; j < gen_count(); ++j) {
      Poly pairing;
      for (int a = 0; a < r; ++a)
        pairing += gens[r + a][i] * gens[a][j] + gens[r + a][j] * gens[a][i];
      if (!pairing.is_zero()) return false;
    }
  return true;
}

bool DoubleSubbundle::is_maximal() const { return rank(gens) == r; }

std::vector<Poly> double_section_coeffs(const Superfunction& s, int r) {
  std::vector<Poly> out(2 * r);
  Superfunction vec_part, cov_part;
  for (const auto& [m, c] : s.terms()) {
    Bidegree d = m.bidegree();
    if (d == Bidegree{1, 0})
      vec_part += Superfunction::monomial(m, c);
    else if (d == Bidegree{0, 1})
      cov_part += Superfunction::monomial(m, c);
    else
      throw BidegreeError("not a section of A + A*: " + s.render());
  }
  std::vector<Poly> vec = sf_to_section(vec_part, r);
  std::vector<Poly> cov = sf_to_covector(cov_part, r);
  for (int i = 0; i < r; ++i) {
    out[i] = vec[i];
    out[r + i] = cov[i];
  }
  return out;
}

CheckReport is_dirac(const ProtoStructure& th, const DoubleSubbundle& l,
                     const ClosureOptions& opt) {
  CheckReport rep = make_report("dirac-structure");
  const int r = l.r;
  if (!l.is_isotropic()) rep.fail("subbundle is not isotropic for the canonical pairing");
  if (!l.is_maximal())
    rep.fail("subbundle is not maximally isotropic: rank " + std::to_string(rank(l.gens)) +
             " != " + std::to_string(r));
  if (!rep.passed()) return rep;

  bool constant_ctx = th.base_dim == 0;
  if (!constant_ctx) {
    constant_ctx = true;
    for (const auto& row : l.gens)
      for (const auto& p : row) constant_ctx = constant_ctx && p.is_constant();
    // a polynomial mu still makes the context polynomial
    const Superfunction theta = th.theta();
    for (const auto& [m, c] : theta.terms()) constant_ctx = constant_ctx && m.xdeg() == 0;
  }
  rep.regime = constant_ctx ? Regime::ExactBasis : Regime::SampledPolynomial;

  const int g = l.gen_count();
  for (int i = 0; i < g; ++i)
    for (int j = 0; j < g; ++j) {
      Superfunction d = dorfman(th, l.section_sf(i), l.section_sf(j));
      if (!in_column_span(l.gens, double_section_coeffs(d, r)))
        rep.fail("dorfman(gen" + std::to_string(i + 1) + ", gen" + std::to_string(j + 1) +
                 ") leaves the subbundle: " + d.render());
    }
  rep.note("dorfman closure checked on " + std::to_string(g * g) + " generator pairs");

  if (!constant_ctx) {
    Rng rng(opt.seed);
    for (int s = 0; s < opt.samples && g > 0; ++s) {
      int i = static_cast<int>(rng.below(g)), j = static_cast<int>(rng.below(g));
      Superfunction f = rng.poly(std::max(th.base_dim, 1), opt.max_degree).to_superfunction();
      Superfunction d = dorfman(th, l.section_sf(i), f * l.section_sf(j));
      if (!in_column_span(l.gens, double_section_coeffs(d, r)))
        rep.fail("dorfman closure fails on a sampled multiple of gen" + std::to_string(j + 1));
    }
    rep.note("sampled " + std::to_string(opt.samples) + " polynomial multiples, degree <= " +
             std::to_string(opt.max_degree));
  }
  return rep;
}

ProtoStructure twist_by_bivector(const ProtoStructure& th, const Superfunction& pi) {
  require_component(pi, {2, 0}, "bivector");
  const Rat half(1, 2), sixth(1, 6);
  Superfunction gp = big_bracket(th.gamma, pi);
  Superfunction mp = big_bracket(th.mu, pi);
  Superfunction pp = big_bracket(th.psi, pi);
  ProtoStructure out;
  out.base_dim = th.base_dim;
  out.fiber_rank = th.fiber_rank;
  out.phi = th.phi - gp + half * big_bracket(mp, pi) -
            sixth * big_bracket(big_bracket(pp, pi), pi);
  out.gamma = th.gamma - mp + half * big_bracket(pp, pi);
  out.mu = th.mu - pp;
  out.psi = th.psi;
  return out;
}

ProtoStructure twist_by_form(const ProtoStructure& th, const Superfunction& omega) {
  require_component(omega, {0, 2}, "2-form");
  const Rat half(1, 2), sixth(1, 6);
  Superfunction po = big_bracket(th.phi, omega);
  Superfunction go = big_bracket(th.gamma, omega);
  Superfunction mo = big_bracket(th.mu, omega);
  ProtoStructure out;
  out.base_dim = th.base_dim;
  out.fiber_rank = th.fiber_rank;
  out.phi = th.phi;
  out.gamma = th.gamma - po;
  out.mu = th.mu - go + half * big_bracket(po, omega);
  out.psi = th.psi - mo + half * big_bracket(go, omega) -
            sixth * big_bracket(big_bracket(po, omega), omega);
  return out;
}

namespace {

CheckReport function_check(const ProtoStructure& th, const Superfunction& tensor, bool dual_case,
                           const ClosureOptions& opt) {
  CheckReport rep = make_report(dual_case ? "presymplectic-function" : "poisson-function");
  ProtoStructure twisted = dual_case ? twist_by_form(th, tensor) : twist_by_bivector(th, tensor);
  const Superfunction& component = dual_case ? twisted.psi : twisted.phi;
  if (!component.is_zero())
    rep.fail(std::string(dual_case ? "psi_omega" : "phi_pi") + " = " + component.render());
  // The twisted-component verdict must agree with the direct Dirac verdict
  // of the graph.
  DoubleSubbundle graph = dual_case
                              ? DoubleSubbundle::graph_of_twoform(tensor, th.fiber_rank)
                              : DoubleSubbundle::graph_of_bivector(tensor, th.fiber_rank);
  CheckReport direct = is_dirac(th, graph, opt);
  rep.regime = direct.regime;
  if (direct.passed() != rep.passed()) {
    rep.verdict = Verdict::Fail;
    rep.witnesses.push_back("cross-validation mismatch: twisted-component verdict " +
                            std::string(rep.passed() ? "PASS" : "FAIL") +
                            " but direct Dirac verdict " +
                            std::string(direct.passed() ? "PASS" : "FAIL"));
  } else {
    rep.note("direct Dirac-closure route agrees");
  }
  return rep;
}

// Membership of a 3-vector (or 3-form) in the wedge ideal span ^ Wedge^2:
// W lies in D ^ Wedge^2 A iff its triple contraction with the annihilator of
// D vanishes. (This is the containment the closure conditions force: for a
// rank-1 D the cube Wedge^3 D is zero while the ideal is not, and a direct
// Dorfman-closure counterexample rules the cube reading out.)
bool in_wedge_ideal(const Superfunction& w, const PolyMat& span_gens, int ambient_rank,
                    bool span_in_dual) {
  PolyMat ann = annihilator(span_gens, ambient_rank);
  const int k = ann.empty() ? 0 : static_cast<int>(cols(ann));
  if (k < 3) return true;  // fewer than three independent contractions
  auto contractor = [&](int c) {
    std::vector<Poly> v(ambient_rank);
    for (int i = 0; i < ambient_rank; ++i) v[i] = ann[i][c];
    // the annihilator of a subspace of A lives in A*, and vice versa
    return span_in_dual ? section_to_sf(v) : covector_to_sf(v);
  };
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int l = j + 1; l < k; ++l) {
        Superfunction c3 = big_bracket(
            contractor(l), big_bracket(contractor(j), big_bracket(contractor(i), w)));
        if (!c3.is_zero()) return false;
      }
  return true;
}

}  // namespace

CheckReport is_poisson_function(const ProtoStructure& th, const Superfunction& pi,
                                const ClosureOptions& opt) {
  require_component(pi, {2, 0}, "bivector");
  return function_check(th, pi, false, opt);
}

CheckReport is_presymplectic_function(const ProtoStructure& th, const Superfunction& omega,
                                      const ClosureOptions& opt) {
  require_component(omega, {0, 2}, "2-form");
  return function_check(th, omega, true, opt);
}

CheckReport poisson_function_mod(const ProtoStructure& th, const Superfunction& pi,
                                 const PolyMat& d_gens) {
  require_component(pi, {2, 0}, "bivector");
  CheckReport rep = make_report("poisson-function-mod");
  ProtoStructure tw = twist_by_bivector(th, pi);
  if (!in_wedge_ideal(tw.phi, d_gens, th.fiber_rank, false))
    rep.fail("phi_pi is not in the wedge ideal of D: " + tw.phi.render());
  PolyMat dperp = annihilator(d_gens, th.fiber_rank);
  if (!in_wedge_ideal(tw.psi, dperp, th.fiber_rank, true))
    rep.fail("psi_pi is not in the wedge ideal of D-perp: " + tw.psi.render());
  return rep;
}

CheckReport presymplectic_function_mod(const ProtoStructure& th, const Superfunction& omega,
                                       const PolyMat& f_gens) {
  require_component(omega, {0, 2}, "2-form");
  CheckReport rep = make_report("presymplectic-function-mod");
  ProtoStructure tw = twist_by_form(th, omega);
  if (!in_wedge_ideal(tw.psi, f_gens, th.fiber_rank, true))
    rep.fail("psi_omega is not in the wedge ideal of F: " + tw.psi.render());
  PolyMat fperp = annihilator(f_gens, th.fiber_rank);
  if (!in_wedge_ideal(tw.phi, fperp, th.fiber_rank, false))
    rep.fail("phi_omega is not in the wedge ideal of F-perp: " + tw.phi.render());
  return rep;
}

DoubleSubbundle characteristic_pair_subbundle(const CharacteristicPair& pair, int r) {
  if (!pair.dual) {
    // L = {(X + pi xi, xi) | X in D, xi in D-perp}
    PolyMat mpi = bivector_matrix(pair.tensor, r);
    PolyMat dperp = annihilator(pair.subbundle, r);
    const int kd = pair.subbundle.empty() ? 0 : static_cast<int>(cols(pair.subbundle));
    const int kp = dperp.empty() ? 0 : static_cast<int>(cols(dperp));
    PolyMat g = zero_mat(2 * r, kd + kp);
    for (int c = 0; c < kd; ++c)
      for (int i = 0; i < r; ++i) g[i][c] = pair.subbundle[i][c];
    for (int c = 0; c < kp; ++c) {
      std::vector<Poly> xi(r);
      for (int i = 0; i < r; ++i) xi[i] = dperp[i][c];
      std::vector<Poly> pix = mat_apply(mpi, xi);
      for (int i = 0; i < r; ++i) {
        g[i][kd + c] = pix[i];
        g[r + i][kd + c] = xi[i];
      }
    }
    return DoubleSubbundle::from_generators(r, g);
  }
  // dual: L = {(X, xi + omega X) | X in F-perp, xi in F}
  PolyMat mom = twoform_matrix(pair.tensor, r);
  PolyMat fperp = annihilator(pair.subbundle, r);
  const int kf = pair.subbundle.empty() ? 0 : static_cast<int>(cols(pair.subbundle));
  const int kp = fperp.empty() ? 0 : static_cast<int>(cols(fperp));
  PolyMat g = zero_mat(2 * r, kf + kp);
  for (int c = 0; c < kf; ++c)
    for (int i = 0; i < r; ++i) g[r + i][c] = pair.subbundle[i][c];
  for (int c = 0; c < kp; ++c) {
    std::vector<Poly> x(r);
    for (int i = 0; i < r; ++i) x[i] = fperp[i][c];
    std::vector<Poly> ox = mat_apply(mom, x);
    for (int i = 0; i < r; ++i) {
      g[i][kf + c] = x[i];
      g[r + i][kf + c] = ox[i];
    }
  }
  return DoubleSubbundle::from_generators(r, g);
}

CharacteristicPair extract_characteristic_pair(const DoubleSubbundle& l) {
  const int r = l.r;
  for (const auto& row : l.gens)
    for (const auto& p : row)
      if (!p.is_constant())
        throw PreconditionError(
            "extract_characteristic_pair: only constant-coefficient subbundles are supported");
  // D = L n A: combinations with vanishing covector part.
  const int k = l.gen_count();
  PolyMat cov = zero_mat(r, k), vec = zero_mat(r, k);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < k; ++j) {
      vec[i][j] = l.gens[i][j];
      cov[i][j] = l.gens[r + i][j];
    }
  PolyMat ker = nullspace(cov);
  PolyMat d = (ker.empty() || cols(ker) == 0) ? PolyMat{}
                                              : reduced_column_echelon(mat_mul(vec, ker));
  PolyMat dperp = annihilator(d, r);
  const int np = dperp.empty() ? 0 : static_cast<int>(cols(dperp));
  // For each D-perp basis covector find a partner vector in L, then solve for
  // an antisymmetric map matrix M with M xi_j = v_j mod D (tested against
  // D-perp, which kills the D-ambiguity).
  const int nunk = r * (r - 1) / 2;
  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) slots.emplace_back(a, b);
  PolyMat sys;
  std::vector<Poly> rhs;
  for (int j = 0; j < np; ++j) {
    std::vector<Poly> xi(r);
    for (int i = 0; i < r; ++i) xi[i] = dperp[i][j];
    auto sol = solve(cov, xi);
    if (!sol) throw PreconditionError("extract_characteristic_pair: L projects badly to A*");
    std::vector<Poly> vj(r);
    for (int i = 0; i < r; ++i) {
      RatFunc acc = RatFunc(Poly{});
      for (int c = 0; c < k; ++c) acc += RatFunc(vec[i][c]) * (*sol)[c];
      vj[i] = acc.as_polynomial();
    }
    for (int c = 0; c < np; ++c) {
      std::vector<Poly> row(nunk);
      Poly b;
      for (int i = 0; i < r; ++i) b += dperp[i][c] * vj[i];
      for (int s = 0; s < nunk; ++s) {
        auto [a2, b2] = slots[s];
        // (M xi)_i = sum_c M[i][c] xi_c with M[a][b] = m_s, M[b][a] = -m_s
        row[s] = dperp[a2][c] * xi[b2] - dperp[b2][c] * xi[a2];
      }
      sys.push_back(std::move(row));
      rhs.push_back(std::move(b));
    }
  }
  PolyMat m_map = zero_mat(r, r);
  if (!sys.empty()) {
    auto msol = solve(sys, rhs);
    if (!msol)
      throw PreconditionError("extract_characteristic_pair: no skew map reproduces L");
    for (int s = 0; s < nunk; ++s) {
      auto [a2, b2] = slots[s];
      Poly entry = (*msol)[s].as_polynomial();
      m_map[a2][b2] = entry;
      m_map[b2][a2] = -entry;
    }
  }
  CharacteristicPair pair;
  pair.dual = false;
  pair.tensor = bivector_from_matrix(m_map);
  pair.subbundle = d;
  return pair;
}

namespace {

// [s_i, s_j] under the bracket defined by one structure component stays in
// the span of the generators.
bool span_closed_under(const Superfunction& bracket_element, const PolyMat& gens,
                       int ambient_rank, bool dual_side) {
  if (gens.empty() || cols(gens) == 0) return true;
  auto section_of = [&](std::size_t c) {
    std::vector<Poly> v(ambient_rank);
    for (int i = 0; i < ambient_rank; ++i) v[i] = gens[i][c];
    return dual_side ? covector_to_sf(v) : section_to_sf(v);
  };
  for (std::size_t i = 0; i < cols(gens); ++i)
    for (std::size_t j = 0; j < cols(gens); ++j) {
      Superfunction b =
          big_bracket(big_bracket(section_of(i), bracket_element), section_of(j));
      std::vector<Poly> coeffs =
          dual_side ? sf_to_covector(b, ambient_rank) : sf_to_section(b, ambient_rank);
      if (!in_column_span(gens, coeffs)) return false;
    }
  return true;
}

}  // namespace

CheckReport characteristic_pair_dirac(const ProtoStructure& th, const CharacteristicPair& pair,
                                      const ClosureOptions& opt) {
  CheckReport rep = make_report(pair.dual ? "characteristic-pair-dual" : "characteristic-pair");
  const int r = th.fiber_rank;
  ProtoStructure tw = pair.dual ? twist_by_form(th, pair.tensor)
                                : twist_by_bivector(th, pair.tensor);
  bool cond_triple = true;
  if (!pair.dual) {
    // Gamma(D) closed under mu_pi, Gamma(D-perp) closed under gamma_pi,
    // pi a Poisson function mod D.
    PolyMat dperp = annihilator(pair.subbundle, r);
    bool c1 = span_closed_under(tw.mu, pair.subbundle, r, false);
    bool c2 = span_closed_under(tw.gamma, dperp, r, true);
    CheckReport c3 = poisson_function_mod(th, pair.tensor, pair.subbundle);
    if (!c1) rep.note("condition: Gamma(D) not closed under mu_pi");
    if (!c2) rep.note("condition: Gamma(D-perp) not closed under gamma_pi");
    if (!c3.passed()) rep.note("condition: not a Poisson function mod D");
    cond_triple = c1 && c2 && c3.passed();
  } else {
    PolyMat fperp = annihilator(pair.subbundle, r);
    bool c1 = span_closed_under(tw.gamma, pair.subbundle, r, true);
    bool c2 = span_closed_under(tw.mu, fperp, r, false);
    CheckReport c3 = presymplectic_function_mod(th, pair.tensor, pair.subbundle);
    if (!c1) rep.note("condition: Gamma(F) not closed under gamma_omega");
    if (!c2) rep.note("condition: Gamma(F-perp) not closed under mu_omega");
    if (!c3.passed()) rep.note("condition: not a presymplectic function mod F");
    cond_triple = c1 && c2 && c3.passed();
  }
  DoubleSubbundle l = characteristic_pair_subbundle(pair, r);
  CheckReport direct = is_dirac(th, l, opt);
  rep.regime = direct.regime;
  if (cond_triple != direct.passed()) {
    rep.fail("cross-validation mismatch: condition triple " +
             std::string(cond_triple ? "PASS" : "FAIL") + " but direct Dirac verdict " +
             std::string(direct.passed() ? "PASS" : "FAIL"));
    return rep;
  }
  if (!cond_triple) {
    rep.fail("characteristic-pair conditions fail (direct Dirac route agrees)");
    for (const auto& w : direct.witnesses) rep.witnesses.push_back(w);
  } else {
    rep.note("condition triple and direct Dirac-closure route agree");
  }
  return rep;
}

}  // namespace diracwb
