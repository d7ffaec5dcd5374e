#include "diracwb/relations.hpp"

#include "diracwb/rng.hpp"

#include <algorithm>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace diracwb {

namespace {

std::string render_vec(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].render();
  return s + ")";
}

RatVec to_ratvec(const std::vector<Poly>& v) {
  RatVec r;
  r.reserve(v.size());
  for (const auto& p : v) r.emplace_back(p);
  return r;
}

}  // namespace

LinearRelation LinearRelation::from_generators(int dom, int cod, const PolyMat& g,
                                               std::string prov) {
  if (!g.empty() && static_cast<int>(rows(g)) != dom + cod)
    throw DimensionMismatch("relation generators must have dom+cod rows");
  LinearRelation r;
  r.dom = dom;
  r.cod = cod;
  r.gens = reduced_column_echelon(g);
  r.provenance = std::move(prov);
  return r;
}

LinearRelation LinearRelation::graph_of(const PolyMat& m, std::string prov) {
  const int dom = static_cast<int>(cols(m)), cod = static_cast<int>(rows(m));
  return from_generators(dom, cod, vcat(identity_mat(dom), m), std::move(prov));
}

LinearRelation LinearRelation::identity(int n) {
  return graph_of(identity_mat(n), "identity");
}

std::vector<Poly> LinearRelation::gen_dom(int k) const {
  std::vector<Poly> v(dom);
  for (int i = 0; i < dom; ++i) v[i] = gens[i][k];
  return v;
}

std::vector<Poly> LinearRelation::gen_cod(int k) const {
  std::vector<Poly> v(cod);
  for (int i = 0; i < cod; ++i) v[i] = gens[dom + i][k];
  return v;
}

LinearRelation compose(const LinearRelation& r, const LinearRelation& rp,
                       std::vector<std::string>* warnings) {
  if (r.cod != rp.dom)
    throw DimensionMismatch("compose: cod(R) = " + std::to_string(r.cod) +
                            " but dom(R') = " + std::to_string(rp.dom));
  // fiber: G_v s = H_v t
  const int g = r.gen_count(), h = rp.gen_count();
  PolyMat sys = zero_mat(r.cod, g + h);
  for (int i = 0; i < r.cod; ++i) {
    for (int k = 0; k < g; ++k) sys[i][k] = r.gens[r.dom + i][k];
    for (int k = 0; k < h; ++k) sys[i][g + k] = -rp.gens[i][k];
  }
  if (warnings) {
    Echelon e = bareiss_echelon(sys);
    for (const auto& p : e.nonconst_pivots)
      warnings->push_back("rank drop possible where " + p.render() + " = 0");
  }
  PolyMat ns = nullspace(sys);
  PolyMat out = zero_mat(r.dom + rp.cod, ns.empty() ? 0 : cols(ns));
  for (std::size_t c = 0; c < (ns.empty() ? 0 : cols(ns)); ++c) {
    for (int i = 0; i < r.dom; ++i) {
      Poly acc;
      for (int k = 0; k < g; ++k) acc += r.gens[i][k] * ns[k][c];
      out[i][c] = acc;
    }
    for (int i = 0; i < rp.cod; ++i) {
      Poly acc;
      for (int k = 0; k < h; ++k) acc += rp.gens[rp.dom + i][k] * ns[g + k][c];
      out[r.dom + i][c] = acc;
    }
  }
  return LinearRelation::from_generators(r.dom, rp.cod, out, "composition");
}

LinearRelation inverse(const LinearRelation& r) {
  PolyMat g = zero_mat(r.dom + r.cod, r.gen_count());
  for (int k = 0; k < r.gen_count(); ++k) {
    for (int i = 0; i < r.cod; ++i) g[i][k] = r.gens[r.dom + i][k];
    for (int i = 0; i < r.dom; ++i) g[r.cod + i][k] = r.gens[i][k];
  }
  return LinearRelation::from_generators(r.cod, r.dom, g, "inverse");
}

LinearRelation dual(const LinearRelation& r) {
  // unknowns (beta, alpha) in W* x V*; constraints <alpha,u_k> - <beta,v_k> = 0
  const int g = r.gen_count();
  PolyMat sys = zero_mat(g, r.cod + r.dom);
  for (int k = 0; k < g; ++k) {
    for (int i = 0; i < r.cod; ++i) sys[k][i] = -r.gens[r.dom + i][k];
    for (int i = 0; i < r.dom; ++i) sys[k][r.cod + i] = r.gens[i][k];
  }
  PolyMat ns = (g == 0) ? identity_mat(r.cod + r.dom) : nullspace(sys);
  return LinearRelation::from_generators(r.cod, r.dom, ns, "dual");
}

TripleRelation diamond(const LinearRelation& r, const LinearRelation& rp) {
  if (r.cod != rp.dom) throw DimensionMismatch("diamond: cod(R) != dom(R')");
  const int g = r.gen_count(), h = rp.gen_count();
  PolyMat sys = zero_mat(r.cod, g + h);
  for (int i = 0; i < r.cod; ++i) {
    for (int k = 0; k < g; ++k) sys[i][k] = r.gens[r.dom + i][k];
    for (int k = 0; k < h; ++k) sys[i][g + k] = -rp.gens[i][k];
  }
  PolyMat ns = nullspace(sys);
  TripleRelation t;
  t.du = r.dom;
  t.dv = r.cod;
  t.dw = rp.cod;
  t.gens = zero_mat(t.du + t.dv + t.dw, ns.empty() ? 0 : cols(ns));
  for (std::size_t c = 0; c < (ns.empty() ? 0 : cols(ns)); ++c) {
    for (int i = 0; i < t.du; ++i) {
      Poly acc;
      for (int k = 0; k < g; ++k) acc += r.gens[i][k] * ns[k][c];
      t.gens[i][c] = acc;
    }
    for (int i = 0; i < t.dv; ++i) {
      Poly acc;
      for (int k = 0; k < g; ++k) acc += r.gens[r.dom + i][k] * ns[k][c];
      t.gens[t.du + i][c] = acc;
    }
    for (int i = 0; i < t.dw; ++i) {
      Poly acc;
      for (int k = 0; k < h; ++k) acc += rp.gens[rp.dom + i][k] * ns[g + k][c];
      t.gens[t.du + t.dv + i][c] = acc;
    }
  }
  return t;
}

TripleRelation square(const LinearRelation& r) {
  if (r.dom != r.cod) throw DimensionMismatch("square: relation must be in U x U");
  return diamond(r, r);
}

LinearRelation projection_uw(const TripleRelation& t) {
  PolyMat g = zero_mat(t.du + t.dw, t.gens.empty() ? 0 : cols(t.gens));
  for (std::size_t c = 0; c < (t.gens.empty() ? 0 : cols(t.gens)); ++c) {
    for (int i = 0; i < t.du; ++i) g[i][c] = t.gens[i][c];
    for (int i = 0; i < t.dw; ++i) g[t.du + i][c] = t.gens[t.du + t.dv + i][c];
  }
  return LinearRelation::from_generators(t.du, t.dw, g, "diamond projection");
}

LinearRelation relation_from_map_pair(const PolyMat& m_pi, const PolyMat& m_pi_prime) {
  const int r = static_cast<int>(rows(m_pi));
  if (rows(m_pi_prime) != static_cast<std::size_t>(r) || cols(m_pi) != cols(m_pi_prime))
    throw DimensionMismatch("relation_from_map_pair: matrix shapes disagree");
  return LinearRelation::from_generators(r, r, vcat(m_pi_prime, m_pi), "map-pair");
}

PolyMat torsion_chain_space(const LinearRelation& n, std::vector<std::string>* warnings) {
  if (n.dom != n.cod) throw DimensionMismatch("torsion: relation must be in A x A");
  const int r = n.dom, g = n.gen_count();
  // unknowns (alpha, alpha', alpha'') in (A*)^3;
  // (alpha,alpha') in N*:  <alpha',u_k> = <alpha,v_k>
  // (alpha',alpha'') in N*: <alpha'',u_k> = <alpha',v_k>
  PolyMat sys = zero_mat(2 * g, 3 * r);
  for (int k = 0; k < g; ++k) {
    for (int i = 0; i < r; ++i) {
      sys[k][i] = -n.gens[r + i][k];          // -v_k on alpha
      sys[k][r + i] = n.gens[i][k];           // +u_k on alpha'
      sys[g + k][r + i] = -n.gens[r + i][k];  // -v_k on alpha'
      sys[g + k][2 * r + i] = n.gens[i][k];   // +u_k on alpha''
    }
  }
  if (warnings) {
    Echelon e = bareiss_echelon(sys);
    for (const auto& p : e.nonconst_pivots)
      warnings->push_back("chain-space rank drop possible where " + p.render() + " = 0");
  }
  if (g == 0) return identity_mat(3 * r);
  return nullspace(sys);
}

RatFunc torsion_eval(const AlgebroidStructure& alg, const LinearRelation& n,
                     const TorsionTuple& t, bool check_membership) {
  if (check_membership) {
    auto member = [&](const RatVec& u, const RatVec& v) {
      RatVec stacked = u;
      stacked.insert(stacked.end(), v.begin(), v.end());
      if (!in_column_span(n.gens, clear_denominators(stacked)))
        throw MembershipError("tuple pair not in the relation: " + render_vec(stacked));
    };
    member(t.u1, t.v1);
    member(t.u2, t.v2);
    auto dual_member = [&](const RatVec& b, const RatVec& a) {
      for (int k = 0; k < n.gen_count(); ++k) {
        RatFunc lhs = dot(a, to_ratvec(n.gen_dom(k)));
        RatFunc rhs = dot(b, to_ratvec(n.gen_cod(k)));
        if (!((lhs - rhs).is_zero()))
          throw MembershipError("chain pair not in the dual relation");
      }
    };
    dual_member(t.alpha, t.alphap);
    dual_member(t.alphap, t.alphapp);
  }
  RatFunc s = dot(t.alpha, alg.bracket_sections(t.v1, t.v2));
  RatVec mid = alg.bracket_sections(t.v1, t.u2);
  RatVec mid2 = alg.bracket_sections(t.u1, t.v2);
  for (std::size_t i = 0; i < mid.size(); ++i) mid[i] += mid2[i];
  s -= dot(t.alphap, mid);
  s += dot(t.alphapp, alg.bracket_sections(t.u1, t.u2));
  return s;
}

CheckReport is_nijenhuis_relation(const AlgebroidStructure& alg, const LinearRelation& n,
                                  const NijenhuisOptions& opt) {
  CheckReport rep = make_report("nijenhuis-relation");
  std::vector<std::string> warnings;
  PolyMat chains = torsion_chain_space(n, &warnings);
  for (const auto& w : warnings) rep.warn(w);

  const int r = n.dom, g = n.gen_count();
  const int nchains = chains.empty() ? 0 : static_cast<int>(cols(chains));
  if (nchains == 0) {
    rep.verdict = Verdict::Vacuous;
    LinearRelation nd = dual(n);
    rep.note("empty dual chain space; dim N* = " + std::to_string(nd.gen_count()));
    return rep;
  }

  // Constant generators and a constant-coefficient bracket make the
  // basis-tuple enumeration exhaustive (multilinearity plus tensoriality
  // over the membership constraints); otherwise the verdict is flagged as
  // sampled over polynomial sections.
  bool constant_ctx = true;
  for (const auto& row : n.gens)
    for (const auto& p : row) constant_ctx = constant_ctx && p.is_constant();
  for (const auto& [m, c] : alg.mu.terms()) constant_ctx = constant_ctx && m.xdeg() == 0;
  rep.regime = constant_ctx ? Regime::ExactBasis : Regime::SampledPolynomial;

  auto chain_col = [&](int c) {
    TorsionTuple t;
    t.alpha.resize(r, RatFunc(Poly{}));
    t.alphap.resize(r, RatFunc(Poly{}));
    t.alphapp.resize(r, RatFunc(Poly{}));
    for (int i = 0; i < r; ++i) {
      t.alpha[i] = RatFunc(chains[i][c]);
      t.alphap[i] = RatFunc(chains[r + i][c]);
      t.alphapp[i] = RatFunc(chains[2 * r + i][c]);
    }
    return t;
  };

  struct Failure {
    long index;
    std::string witness;
  };
  std::vector<Failure> failures;
  const long total = static_cast<long>(g) * g * nchains;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long idx = 0; idx < total; ++idx) {
    int i = static_cast<int>(idx / (static_cast<long>(g) * nchains));
    int j = static_cast<int>((idx / nchains) % g);
    int c = static_cast<int>(idx % nchains);
    if (j <= i) continue;  // torsion is antisymmetric in the two relation slots
    TorsionTuple t = chain_col(c);
    t.u1 = to_ratvec(n.gen_dom(i));
    t.v1 = to_ratvec(n.gen_cod(i));
    t.u2 = to_ratvec(n.gen_dom(j));
    t.v2 = to_ratvec(n.gen_cod(j));
    RatFunc val = torsion_eval(alg, n, t, false);
    if (!val.is_zero()) {
      std::ostringstream os;
      os << "T(gen" << i + 1 << ", gen" << j + 1 << ", chain" << c + 1
         << ") = " << val.render();
#ifdef _OPENMP
#pragma omp critical
#endif
      failures.push_back({idx, os.str()});
    }
  }
  std::sort(failures.begin(), failures.end(),
            [](const Failure& a, const Failure& b) { return a.index < b.index; });
  for (const auto& f : failures) rep.fail(f.witness);

  long checked = static_cast<long>(g) * (g - 1) / 2 * nchains;
  rep.note("checked " + std::to_string(checked) + " basis tuples over " +
           std::to_string(nchains) + " dual chains");

  if (!constant_ctx) {
    // Sampled supplement: random polynomial multiples of basis tuples.
    Rng rng(opt.seed);
    int bad = 0;
    for (int s = 0; s < opt.samples && g >= 2; ++s) {
      int i = static_cast<int>(rng.below(g)), j = static_cast<int>(rng.below(g));
      if (i == j) j = (j + 1) % g;
      int c = static_cast<int>(rng.below(nchains));
      Poly f1 = rng.poly(std::max(alg.base_dim, 1), opt.max_degree);
      Poly f2 = rng.poly(std::max(alg.base_dim, 1), opt.max_degree);
      Poly f3 = rng.poly(std::max(alg.base_dim, 1), opt.max_degree);
      TorsionTuple t = chain_col(c);
      t.u1 = to_ratvec(n.gen_dom(i));
      t.v1 = to_ratvec(n.gen_cod(i));
      t.u2 = to_ratvec(n.gen_dom(j));
      t.v2 = to_ratvec(n.gen_cod(j));
      for (auto& e : t.u1) e *= RatFunc(f1);
      for (auto& e : t.v1) e *= RatFunc(f1);
      for (auto& e : t.u2) e *= RatFunc(f2);
      for (auto& e : t.v2) e *= RatFunc(f2);
      for (auto& e : t.alpha) e *= RatFunc(f3);
      for (auto& e : t.alphap) e *= RatFunc(f3);
      for (auto& e : t.alphapp) e *= RatFunc(f3);
      RatFunc val = torsion_eval(alg, n, t, false);
      if (!val.is_zero()) {
        ++bad;
        rep.fail("sampled tuple " + std::to_string(s + 1) + ": T = " + val.render());
      }
    }
    rep.note("scope: torsion verified over polynomial sections (" +
             std::to_string(opt.samples) + " sampled multiples, degree <= " +
             std::to_string(opt.max_degree) + ")");
    (void)bad;
  }
  return rep;
}

}  // namespace diracwb
