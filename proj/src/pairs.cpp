#include "diracwb/pairs.hpp"

#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diracwb {

namespace {

void require_bivector(const Superfunction& pi, const char* name) {
  if (!pi.is_homogeneous_of({2, 0}))
    throw BidegreeError(std::string(name) + " must be a bivector (bidegree (2,0)): " +
                        pi.render());
}

void require_twoform(const Superfunction& om, const char* name) {
  if (!om.is_homogeneous_of({0, 2}))
    throw BidegreeError(std::string(name) + " must be a 2-form (bidegree (0,2)): " +
                        om.render());
}

Superfunction pair_cov_sec(const Superfunction& cov, const Superfunction& sec) {
  return big_bracket(sec, cov);  // <cov, sec>, a (0,0) element
}

bool constant_coefficients(const AlgebroidStructure& alg, const Superfunction& a,
                           const Superfunction& b) {
  if (alg.base_dim == 0) return true;
  for (const Superfunction* f : {&alg.mu, &a, &b})
    for (const auto& [m, c] : f->terms())
      if (m.xdeg() != 0) return false;
  return true;
}

}  // namespace

PairContext::PairContext(const AlgebroidStructure& alg, Superfunction first,
                         Superfunction second)
    : alg_(alg), first_(std::move(first)), second_(std::move(second)) {
  require_bivector(first_, "PairContext: first");
  require_bivector(second_, "PairContext: second");
  m_first_ = bivector_matrix(first_, alg.fiber_rank);
  m_second_ = bivector_matrix(second_, alg.fiber_rank);
}

const LinearRelation& PairContext::relation() {
  if (!relation_) relation_ = relation_from_map_pair(m_first_, m_second_);
  return *relation_;
}

const PolyMat& PairContext::k() {
  if (!k_) k_ = k_subspace(m_first_, m_second_);
  return *k_;
}

const PolyMat& PairContext::k_perp() {
  if (!k_perp_) k_perp_ = annihilator(k(), alg_.fiber_rank);
  return *k_perp_;
}

CheckReport is_poisson(const AlgebroidStructure& alg, const Superfunction& pi) {
  require_bivector(pi, "is_poisson: pi");
  CheckReport rep = make_report("poisson");
  Superfunction res = schouten(alg, pi, pi);
  if (!res.is_zero()) rep.fail("[pi,pi] = " + res.render());
  return rep;
}

CheckReport is_hamiltonian_pair(const AlgebroidStructure& alg, const Superfunction& pi,
                                const Superfunction& pip) {
  if (!is_poisson(alg, pi).passed())
    throw PreconditionError("is_hamiltonian_pair: first bivector is not Poisson");
  if (!is_poisson(alg, pip).passed())
    throw PreconditionError("is_hamiltonian_pair: second bivector is not Poisson");
  CheckReport rep = make_report("hamiltonian-pair");
  Superfunction mixed = schouten(alg, pi, pip);
  bool route1 = mixed.is_zero();
  bool route2 = schouten(alg, pi + pip, pi + pip).is_zero();
  if (route1 != route2)
    rep.fail("internal inconsistency: [pi,pi'] = 0 disagrees with [pi+pi',pi+pi'] = 0");
  else if (!route1)
    rep.fail("[pi,pi'] = " + mixed.render());
  else
    rep.note("both routes agree: [pi,pi'] = 0 and pi+pi' is Poisson");
  return rep;
}

CheckReport torsion_identity_check(const AlgebroidStructure& alg, const Superfunction& pi,
                                   const Superfunction& pip) {
  require_bivector(pi, "torsion_identity_check: pi");
  require_bivector(pip, "torsion_identity_check: pi'");
  CheckReport rep = make_report("torsion-identity");
  const int r = alg.fiber_rank;
  PolyMat m_pi = bivector_matrix(pi, r);
  PolyMat m_pip = bivector_matrix(pip, r);
  rep.regime = constant_coefficients(alg, pi, pip) ? Regime::ExactBasis
                                                   : Regime::SampledPolynomial;

  // chains (xi, xi', xi'') with pi xi = pi' xi' and pi xi' = pi' xi''
  PolyMat sys = zero_mat(2 * r, 3 * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      sys[i][j] = m_pi[i][j];
      sys[i][r + j] = -m_pip[i][j];
      sys[r + i][r + j] = m_pi[i][j];
      sys[r + i][2 * r + j] = -m_pip[i][j];
    }
  PolyMat chains = nullspace(sys);
  const int nchains = chains.empty() ? 0 : static_cast<int>(cols(chains));
  if (nchains == 0) {
    rep.verdict = Verdict::Vacuous;
    rep.note("no admissible chains (xi, xi', xi'')");
    return rep;
  }

  LinearRelation n = relation_from_map_pair(m_pi, m_pip);
  int checked = 0;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) {
      Superfunction xi1 = Superfunction::xi(a), xi2 = Superfunction::xi(b);
      Superfunction w_pi = schouten(alg, pi, pi);
      Superfunction w_pip = schouten(alg, pip, pip);
      Superfunction w_mix = schouten(alg, pi, pip);
      Superfunction v_pi = eval2(w_pi, xi1, xi2);
      Superfunction v_pip = eval2(w_pip, xi1, xi2);
      Superfunction v_mix = eval2(w_mix, xi1, xi2);
      for (int c = 0; c < nchains; ++c) {
        std::vector<Poly> xv(r), xpv(r), xppv(r);
        for (int i = 0; i < r; ++i) {
          xv[i] = chains[i][c];
          xpv[i] = chains[r + i][c];
          xppv[i] = chains[2 * r + i][c];
        }
        // left side: 2 T(N(pi,pi')) on the mapped tuple
        TorsionTuple t;
        auto apply = [&](const PolyMat& m, int basis) {
          RatVec out;
          for (int i = 0; i < r; ++i) out.emplace_back(m[i][basis]);
          return out;
        };
        t.u1 = apply(m_pip, a);
        t.v1 = apply(m_pi, a);
        t.u2 = apply(m_pip, b);
        t.v2 = apply(m_pi, b);
        for (int i = 0; i < r; ++i) {
          t.alpha.emplace_back(xv[i]);
          t.alphap.emplace_back(xpv[i]);
          t.alphapp.emplace_back(xppv[i]);
        }
        RatFunc lhs = RatFunc(Poly(2)) * torsion_eval(alg, n, t, false);
        Superfunction rhs_sf = pair_cov_sec(covector_to_sf(xv), v_pi) +
                               pair_cov_sec(covector_to_sf(xppv), v_pip) -
                               Rat(2) * pair_cov_sec(covector_to_sf(xpv), v_mix);
        RatFunc rhs(Poly::from_superfunction(rhs_sf));
        if (!(lhs - rhs).is_zero()) {
          std::ostringstream os;
          os << "torsion identity fails at (xi" << a + 1 << ", xi" << b + 1 << ", chain" << c + 1
             << "): lhs = " << lhs.render() << ", rhs = " << rhs.render();
          rep.fail(os.str());
        }
        ++checked;
      }
    }
  rep.note("verified on " + std::to_string(checked) + " chain tuples");
  return rep;
}

CheckReport is_poisson_pair(const AlgebroidStructure& alg, const Superfunction& pi,
                            const Superfunction& pip, const PairOptions& opt) {
  if (!is_poisson(alg, pi).passed())
    throw PreconditionError("is_poisson_pair: first bivector is not Poisson");
  if (!is_poisson(alg, pip).passed())
    throw PreconditionError("is_poisson_pair: second bivector is not Poisson");
  const int r = alg.fiber_rank;
  LinearRelation n = relation_from_map_pair(bivector_matrix(pi, r), bivector_matrix(pip, r));
  CheckReport rep = is_nijenhuis_relation(alg, n, opt.nij);
  rep.check = "poisson-pair";
  return rep;
}

PolyMat k_subspace(const PolyMat& m_pi, const PolyMat& m_pip) {
  const int r = static_cast<int>(rows(m_pi));
  // pi^-1(Im pi'): xi-parts of the nullspace of [m_pi | -m_pip]
  auto preimage = [&](const PolyMat& m, const PolyMat& im_of) {
    PolyMat sys = zero_mat(r, r + static_cast<int>(cols(im_of)));
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) sys[i][j] = m[i][j];
      for (std::size_t j = 0; j < cols(im_of); ++j) sys[i][r + j] = -im_of[i][j];
    }
    PolyMat ns = nullspace(sys);
    if (ns.empty() || cols(ns) == 0) return PolyMat{};
    PolyMat out = zero_mat(r, static_cast<int>(cols(ns)));
    for (int i = 0; i < r; ++i)
      for (std::size_t j = 0; j < cols(ns); ++j) out[i][j] = ns[i][j];
    return reduced_column_echelon(out);
  };
  PolyMat a = preimage(m_pi, m_pip);
  PolyMat b = preimage(m_pip, m_pi);
  return span_intersection(a, b);
}

CheckReport values_annihilate_k(const AlgebroidStructure& alg, const Superfunction& pi,
                                const Superfunction& pip) {
  CheckReport rep = make_report("k-annihilator");
  const int r = alg.fiber_rank;
  PolyMat k = k_subspace(bivector_matrix(pi, r), bivector_matrix(pip, r));
  const int kdim = k.empty() ? 0 : static_cast<int>(cols(k));
  rep.note("dim K = " + std::to_string(kdim));
  if (kdim == 0) return rep;
  Superfunction mixed = schouten(alg, pi, pip);
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) {
      Superfunction val = eval2(mixed, Superfunction::xi(a), Superfunction::xi(b));
      for (int c = 0; c < kdim; ++c) {
        std::vector<Poly> kappa(r);
        for (int i = 0; i < r; ++i) kappa[i] = k[i][c];
        Superfunction pairing = pair_cov_sec(covector_to_sf(kappa), val);
        if (!pairing.is_zero())
          rep.fail("[pi,pi'](xi" + std::to_string(a + 1) + ",xi" + std::to_string(b + 1) +
                   ") does not annihilate K: " + pairing.render());
      }
    }
  return rep;
}

NijenhuisFromPair nijenhuis_from_pair(const AlgebroidStructure& alg, const Superfunction& pi,
                                      const Superfunction& pip) {
  require_bivector(pi, "nijenhuis_from_pair: pi");
  require_bivector(pip, "nijenhuis_from_pair: pi'");
  const int r = alg.fiber_rank;
  PolyMat m_pi = bivector_matrix(pi, r);
  Poly d = det(m_pi);
  if (d.is_zero())
    throw PreconditionError("nijenhuis_from_pair: pi is degenerate (det = 0)");
  NijenhuisFromPair out;
  out.n.r = r;
  out.n.m = rat_mat_mul(to_rat(bivector_matrix(pip, r)), rat_inverse(to_rat(m_pi)));
  TorsionTable tab = nijenhuis_torsion(alg, out.n);
  out.report = make_report("nijenhuis-from-pair");
  if (!tab.vanishes) out.report.fail(tab.witness);
  if (d.total_degree() > 0)
    out.report.warn("pi degenerates on the locus " + d.primitive_part().render() + " = 0");
  return out;
}

LinearRelation relation_of_dirac_pair(const DoubleSubbundle& l, const DoubleSubbundle& lp) {
  // N_{L,L'} = overline(L) * L' with L, L' viewed as relations A -> A*.
  LinearRelation rl = LinearRelation::from_generators(l.r, l.r, l.gens, "dirac-structure");
  LinearRelation rlp = LinearRelation::from_generators(lp.r, lp.r, lp.gens, "dirac-structure");
  return compose(rlp, inverse(rl));
}

CheckReport dirac_pair_check(const ProtoStructure& th, const DoubleSubbundle& l,
                             const DoubleSubbundle& lp, const PairOptions& opt) {
  CheckReport dl = is_dirac(th, l, opt.closure);
  if (!dl.passed())
    throw PreconditionError("dirac_pair_check: first subbundle is not a Dirac structure: " +
                            (dl.witnesses.empty() ? std::string("") : dl.witnesses.front()));
  CheckReport dlp = is_dirac(th, lp, opt.closure);
  if (!dlp.passed())
    throw PreconditionError("dirac_pair_check: second subbundle is not a Dirac structure: " +
                            (dlp.witnesses.empty() ? std::string("") : dlp.witnesses.front()));
  AlgebroidStructure alg = th.algebroid();
  LinearRelation n = relation_of_dirac_pair(l, lp);
  CheckReport rep = is_nijenhuis_relation(alg, n, opt.nij);
  rep.check = "dirac-pair";
  // N_{L',L} is the inverse relation
  if (!(relation_of_dirac_pair(lp, l) == inverse(n)))
    rep.fail("internal inconsistency: N_{L',L} != overline(N_{L,L'})");
  return rep;
}

CheckReport presymplectic_pair_check(const AlgebroidStructure& alg, const Superfunction& om,
                                     const Superfunction& omp, const PairOptions& opt) {
  require_twoform(om, "presymplectic_pair_check: omega");
  require_twoform(omp, "presymplectic_pair_check: omega'");
  if (!differential(alg, om).is_zero())
    throw PreconditionError("presymplectic_pair_check: omega is not closed");
  if (!differential(alg, omp).is_zero())
    throw PreconditionError("presymplectic_pair_check: omega' is not closed");
  ProtoStructure th = ProtoStructure::trivial(alg);
  CheckReport rep = dirac_pair_check(th, DoubleSubbundle::graph_of_twoform(om, alg.fiber_rank),
                                     DoubleSubbundle::graph_of_twoform(omp, alg.fiber_rank), opt);
  rep.check = "presymplectic-pair";
  return rep;
}

CheckReport symplectic_pair_check(const AlgebroidStructure& alg, const Superfunction& om,
                                  const Superfunction& omp, const PairOptions& opt) {
  const int r = alg.fiber_rank;
  PolyMat m_om = twoform_matrix(om, r);
  PolyMat m_omp = twoform_matrix(omp, r);
  if (det(m_om).is_zero() || det(m_omp).is_zero())
    throw PreconditionError("symplectic_pair_check: a 2-form is degenerate");
  CheckReport rep = presymplectic_pair_check(alg, om, omp, opt);
  rep.check = "symplectic-pair";
  // Cross-check against the Poisson pair of the inverse bivectors (when the
  // inverses are polynomial).
  RatMat inv1 = rat_inverse(to_rat(m_om));
  RatMat inv2 = rat_inverse(to_rat(m_omp));
  bool polynomial = true;
  for (const auto& row : inv1)
    for (const auto& f : row) polynomial = polynomial && f.is_polynomial();
  for (const auto& row : inv2)
    for (const auto& f : row) polynomial = polynomial && f.is_polynomial();
  if (polynomial) {
    auto to_poly = [&](const RatMat& m) {
      PolyMat p = zero_mat(r, r);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) p[i][j] = m[i][j].as_polynomial();
      return p;
    };
    Superfunction pi = bivector_from_matrix(to_poly(inv1));
    Superfunction pip = bivector_from_matrix(to_poly(inv2));
    CheckReport pp = is_poisson_pair(alg, pi, pip, opt);
    if (pp.passed() != rep.passed())
      rep.fail("inverse-bivector cross-check disagrees with the Poisson-pair verdict");
    else
      rep.note("inverse-bivector cross-check: Poisson-pair verdict agrees");
    // and N_{L,L'} = graph(omega^-1 o omega') = N(pi,pi') as subspaces
    LinearRelation n_ll =
        relation_of_dirac_pair(DoubleSubbundle::graph_of_twoform(om, r),
                               DoubleSubbundle::graph_of_twoform(omp, r));
    PolyMat comp = zero_mat(r, r);
    RatMat comp_rat = rat_mat_mul(inv1, to_rat(m_omp));
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) comp[i][j] = comp_rat[i][j].as_polynomial();
    if (!(n_ll == LinearRelation::graph_of(comp)))
      rep.fail("N_{L,L'} != graph(omega^-1 o omega')");
    if (!(n_ll == relation_from_map_pair(to_poly(inv1), to_poly(inv2))))
      rep.fail("N_{L,L'} != N(pi,pi') as subspaces");
  } else {
    rep.note("inverse-bivector cross-check skipped: inverse is not polynomial");
  }
  return rep;
}

CheckReport pomega_check(const AlgebroidStructure& alg, const Superfunction& pi,
                         const Superfunction& om, const PairOptions& opt) {
  require_bivector(pi, "pomega_check: pi");
  require_twoform(om, "pomega_check: omega");
  CheckReport rep = make_report("pomega-structure");
  const int r = alg.fiber_rank;
  Superfunction sp = schouten(alg, pi, pi);
  if (!sp.is_zero()) rep.fail("pi is not Poisson: [pi,pi] = " + sp.render());
  Superfunction dom = differential(alg, om);
  if (!dom.is_zero()) rep.fail("omega is not closed: d omega = " + dom.render());
  Endo n = Endo::from_poly(mat_mul(bivector_matrix(pi, r), twoform_matrix(om, r)));
  Superfunction dn_om = d_endo(alg, n, om);
  if (!dn_om.is_zero()) {
    rep.fail("d_N omega = " + dn_om.render());
    // Converse route: with pi an invertible Poisson bivector and omega
    // closed, the graphs must then fail to be a Dirac pair.
    if (sp.is_zero() && dom.is_zero() && !det(bivector_matrix(pi, r)).is_zero()) {
      CheckReport dp = dirac_pair_check(ProtoStructure::trivial(alg),
                                        DoubleSubbundle::graph_of_bivector(pi, r),
                                        DoubleSubbundle::graph_of_twoform(om, r), opt);
      if (dp.passed())
        rep.fail("internal inconsistency: graphs form a Dirac pair although "
                 "d_N omega != 0 with pi invertible");
      else
        rep.note("converse route: graphs indeed fail to be a Dirac pair");
    }
  }
  if (rep.passed()) {
    // On a P-Omega structure, N = pi o omega is a Nijenhuis tensor and the
    // graphs form a Dirac pair.
    TorsionTable tab = nijenhuis_torsion(alg, n);
    if (!tab.vanishes)
      rep.fail("internal inconsistency: TN != 0 on a P-Omega structure: " +
               tab.witness);
    ProtoStructure th = ProtoStructure::trivial(alg);
    CheckReport dp = dirac_pair_check(th, DoubleSubbundle::graph_of_bivector(pi, r),
                                      DoubleSubbundle::graph_of_twoform(om, r), opt);
    if (!dp.passed())
      rep.fail("internal inconsistency: P-Omega holds but the graphs are not a Dirac pair");
    else
      rep.note("TN = 0 and the graphs form a Dirac pair");
  }
  return rep;
}

namespace {

bool skew_compatible(const AlgebroidStructure& alg, const PolyMat& m_om, const Endo& n) {
  // omega o N = N* o omega as matrices over Q(x)
  RatMat lhs = rat_mat_mul(to_rat(m_om), n.m);
  RatMat rhs = rat_mat_mul(rat_transpose(n.m), to_rat(m_om));
  for (int i = 0; i < alg.fiber_rank; ++i)
    for (int j = 0; j < alg.fiber_rank; ++j)
      if (!(lhs[i][j] == rhs[i][j])) return false;
  return true;
}

Superfunction omega_n_form(const AlgebroidStructure& alg, const Superfunction& om,
                           const Endo& n, int power = 1) {
  RatMat m = rat_mat_mul(to_rat(twoform_matrix(om, alg.fiber_rank)), n.power(power).m);
  PolyMat p = zero_mat(alg.fiber_rank, alg.fiber_rank);
  for (int i = 0; i < alg.fiber_rank; ++i)
    for (int j = 0; j < alg.fiber_rank; ++j) p[i][j] = m[i][j].as_polynomial();
  return twoform_from_matrix(p);
}

}  // namespace

CheckReport omegan_check(const AlgebroidStructure& alg, const Superfunction& om, const Endo& n,
                         const PairOptions& opt) {
  require_twoform(om, "omegan_check: omega");
  const int r = alg.fiber_rank;
  PolyMat m_om = twoform_matrix(om, r);
  if (!skew_compatible(alg, m_om, n))
    throw PreconditionError("omegan_check: omega_N is not a 2-form (omega o N != N* o omega)");
  CheckReport rep = make_report("omegan-structure");
  TorsionTable tab = nijenhuis_torsion(alg, n);
  if (!tab.vanishes) rep.fail("N is not Nijenhuis: " + tab.witness);
  Superfunction dom = differential(alg, om);
  if (!dom.is_zero()) rep.fail("omega is not closed: " + dom.render());
  Superfunction om_n = omega_n_form(alg, om, n);
  Superfunction dn = differential(alg, om_n);
  if (!dn.is_zero()) rep.fail("omega_N is not closed: d(omega o N) = " + dn.render());
  if (rep.passed()) {
    CheckReport ns = nplus_equals_nstar(alg, om, n);
    if (ns.passed()) {
      // with N+ = N* the graphs must form a Dirac pair.
      ProtoStructure th = ProtoStructure::trivial(alg);
      CheckReport dp = dirac_pair_check(th, DoubleSubbundle::graph_of_twoform(om, r),
                                        DoubleSubbundle::graph_of_twoform(om_n, r), opt);
      if (!dp.passed())
        rep.fail("internal inconsistency: N+ = N* and the conditions hold but the "
                 "graphs are not a Dirac pair");
      else
        rep.note("N+ = N*, and the graphs of omega, omega_N form a Dirac pair");
    } else {
      rep.note("N+ != N* (graph-pair conclusion not applicable)");
    }
  }
  return rep;
}

CheckReport weak_omegan_check(const AlgebroidStructure& alg, const Superfunction& om,
                              const Endo& n) {
  require_twoform(om, "weak_omegan_check: omega");
  const int r = alg.fiber_rank;
  PolyMat m_om = twoform_matrix(om, r);
  if (!skew_compatible(alg, m_om, n))
    throw PreconditionError("weak_omegan_check: omega o N != N* o omega");
  CheckReport rep = make_report("weak-omegan-structure");
  Superfunction dom = differential(alg, om);
  if (!dom.is_zero()) rep.fail("omega is not closed: " + dom.render());
  Superfunction dn = differential(alg, omega_n_form(alg, om, n));
  if (!dn.is_zero()) rep.fail("omega_N is not closed: " + dn.render());
  // omega(TN(x1,x2)) = 0 on frame pairs
  TorsionTable tab = nijenhuis_torsion(alg, n);
  RatMat m_om_rat = to_rat(m_om);
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b) {
      if (tab.val[a][b].empty()) continue;
      RatVec image = rat_apply(m_om_rat, tab.val[a][b]);
      for (const auto& f : image)
        if (!f.is_zero()) {
          rep.fail("omega(TN(e" + std::to_string(a + 1) + ",e" + std::to_string(b + 1) +
                   ")) != 0");
          break;
        }
    }
  if (!tab.vanishes) rep.note("TN != 0 but takes values in ker(omega)" );
  return rep;
}

CheckReport nplus_equals_nstar(const AlgebroidStructure& alg, const Superfunction& om,
                               const Endo& n) {
  const int r = alg.fiber_rank;
  CheckReport rep = make_report("nplus-equals-nstar");
  PolyMat m_om = twoform_matrix(om, r);
  Superfunction om_n = omega_n_form(alg, om, n);
  PolyMat m_omn = twoform_matrix(om_n, r);
  // N+ = {(omega x, omega_N x)}
  PolyMat nplus = vcat(m_om, m_omn);
  // N = {(x,y) | omega_N x = omega y}: nullspace of [m_omn | -m_om]
  PolyMat sys = zero_mat(r, 2 * r);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j) {
      sys[i][j] = m_omn[i][j];
      sys[i][r + j] = -m_om[i][j];
    }
  PolyMat n_gens = nullspace(sys);
  LinearRelation n_rel = LinearRelation::from_generators(r, r, n_gens, "omega-pair");
  LinearRelation n_star = dual(n_rel);
  if (!column_span_contains(n_star.gens, nplus)) {
    rep.fail("internal inconsistency: N+ is not contained in N*");
    return rep;
  }
  if (!column_span_contains(nplus, n_star.gens))
    rep.fail("N+ is a proper subspace of N*: dim N+ = " + std::to_string(rank(nplus)) +
             ", dim N* = " + std::to_string(rank(n_star.gens)));
  return rep;
}

std::vector<CheckReport> lenard_chain(const AlgebroidStructure& alg, const Superfunction& om,
                                      const Endo& n, int p_max) {
  std::vector<CheckReport> out;
  CheckReport pre = make_report("lenard-chain-preconditions");
  if (!differential(alg, om).is_zero()) pre.fail("omega is not closed");
  Superfunction om_n = omega_n_form(alg, om, n);
  if (!differential(alg, om_n).is_zero()) pre.fail("omega o N is not closed");
  TorsionTable tab = nijenhuis_torsion(alg, n);
  if (!tab.vanishes) pre.fail("N is not Nijenhuis: " + tab.witness);
  out.push_back(pre);
  if (!pre.passed()) return out;
  for (int k = 2; k <= p_max; ++k) {
    CheckReport rep = make_report("lenard-chain-power-" + std::to_string(k));
    Superfunction form = omega_n_form(alg, om, n, k);
    Superfunction d = differential(alg, form);
    if (!d.is_zero()) rep.fail("omega o N^" + std::to_string(k) + " is not closed");
    rep.note("omega o N^" + std::to_string(k) + " = " + form.render());
    out.push_back(rep);
  }
  return out;
}

MongeAmpereContext monge_ampere_context() {
  MongeAmpereContext ctx;
  ctx.alg = AlgebroidStructure::tangent(4);
  auto xi = [](int a) { return Superfunction::xi(a); };
  auto th = [](int a) { return Superfunction::theta(a); };
  ctx.omega_big = xi(0) * xi(2) + xi(1) * xi(3);
  ctx.omega_h = xi(0) * xi(2) - xi(1) * xi(3);
  ctx.omega_e = xi(0) * xi(3) - xi(1) * xi(2);
  ctx.omega_p = xi(0) * xi(3);
  ctx.pi_omega = th(0) * th(2) + th(1) * th(3);
  return ctx;
}

CheckReport monge_ampere_suite(const PairOptions& opt) {
  MongeAmpereContext ctx = monge_ampere_context();
  CheckReport rep = make_report("monge-ampere-suite");
  const Superfunction om2 = ctx.omega_big * ctx.omega_big;

  auto expect_zero = [&](const Superfunction& f, const std::string& what) {
    if (!f.is_zero()) rep.fail(what + " != 0: " + f.render());
  };
  expect_zero(ctx.omega_h * ctx.omega_big, "omega_H ^ Omega");
  expect_zero(ctx.omega_e * ctx.omega_big, "omega_E ^ Omega");
  expect_zero(ctx.omega_h * ctx.omega_h + om2, "omega_H ^ omega_H + Omega ^ Omega");
  expect_zero(ctx.omega_e * ctx.omega_e - om2, "omega_E ^ omega_E - Omega ^ Omega");
  expect_zero(ctx.omega_p * ctx.omega_p, "omega_P ^ omega_P");
  rep.note("effectiveness and normalization wedge identities hold");

  // Pfaffians relative to Omega^Omega: omega_H: -1, omega_E: +1, omega_P: 0.
  auto pfaffian = [&](const Superfunction& w) -> Rat {
    Superfunction sq = w * w;
    if (sq.is_zero()) return Rat(0);
    Rat num = sq.terms().begin()->second;
    Rat den = om2.terms().begin()->second;
    return Rat(num / den);
  };
  if (pfaffian(ctx.omega_h) != Rat(-1)) rep.fail("Pf(omega_H) != -1");
  if (pfaffian(ctx.omega_e) != Rat(1)) rep.fail("Pf(omega_E) != 1");
  if (pfaffian(ctx.omega_p) != Rat(0)) rep.fail("Pf(omega_P) != 0");
  rep.note("omega_E is normalized with Pfaffian 1 (conformal symplectic couple)");

  // torsion of pi_Omega o omega_P vanishes
  Endo n_p = Endo::from_poly(
      mat_mul(bivector_matrix(ctx.pi_omega, 4), twoform_matrix(ctx.omega_p, 4)));
  TorsionTable tab = nijenhuis_torsion(ctx.alg, n_p);
  if (!tab.vanishes) rep.fail("torsion of pi_Omega o omega_P: " + tab.witness);

  rep.absorb(symplectic_pair_check(ctx.alg, ctx.omega_big, ctx.omega_h, opt));
  rep.absorb(symplectic_pair_check(ctx.alg, ctx.omega_big, ctx.omega_e, opt));
  rep.absorb(presymplectic_pair_check(ctx.alg, ctx.omega_big, ctx.omega_p, opt));
  return rep;
}

}  // namespace diracwb
