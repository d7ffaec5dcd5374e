#include "diracwb/geometry.hpp"

#include <bit>
#include <stdexcept>

namespace diracwb {

namespace {

void require_bidegree(const Superfunction& f, Bidegree d, const std::string& what) {
  if (!f.is_homogeneous_of(d))
    throw BidegreeError(what + ": expected bidegree (" + std::to_string(d.p) + "," +
                        std::to_string(d.q) + "), got " + f.render());
}

}  // namespace

AlgebroidStructure AlgebroidStructure::tangent(int n) {
  PolyMat rho = identity_mat(n);
  return from_anchor_constants(n, n, rho, [](int, int, int) { return Poly{}; });
}

AlgebroidStructure AlgebroidStructure::lie_algebra(
    int r, const std::function<Rat(int, int, int)>& c) {
  return from_anchor_constants(0, r, PolyMat{},
                               [&c](int k, int a, int b) { return Poly(c(k, a, b)); });
}

AlgebroidStructure AlgebroidStructure::from_anchor_constants(
    int n, int r, const PolyMat& rho, const std::function<Poly(int, int, int)>& c) {
  AlgebroidStructure alg;
  alg.base_dim = n;
  alg.fiber_rank = r;
  Superfunction mu;
  if (!rho.empty()) {
    if (static_cast<int>(rows(rho)) != n || static_cast<int>(cols(rho)) != r)
      throw DimensionMismatch("anchor matrix must be base_dim x fiber_rank");
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < r; ++a)
        if (!rho[i][a].is_zero())
          mu -= rho[i][a].to_superfunction() * Superfunction::xi(a) * Superfunction::p(i);
  }
  const Rat half(1, 2);
  for (int k = 0; k < r; ++k)
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < r; ++b) {
        Poly cc = c(k, a, b);
        if (!cc.is_zero())
          mu -= half * (cc.to_superfunction() * Superfunction::xi(a) * Superfunction::xi(b) *
                        Superfunction::theta(k));
      }
  alg.mu = mu;
  return alg;
}

AlgebroidStructure AlgebroidStructure::so3() {
  // c^3_12 = 1 cyclically: [e_a, e_b] = eps_abc e_c
  return lie_algebra(3, [](int k, int a, int b) -> Rat {
    if (a == b || a == k || b == k) return 0;
    // permutation sign of (a,b,k) relative to (0,1,2)
    int s = (b - a) * (k - a) * (k - b);
    return (s > 0) ? 1 : -1;
  });
}

AlgebroidStructure AlgebroidStructure::sl2() {
  // basis (h,e,f): [h,e] = 2e, [h,f] = -2f, [e,f] = h
  return lie_algebra(3, [](int k, int a, int b) -> Rat {
    auto c = [](int kk, int aa, int bb) -> Rat {
      if (aa == 0 && bb == 1 && kk == 1) return 2;
      if (aa == 0 && bb == 2 && kk == 2) return -2;
      if (aa == 1 && bb == 2 && kk == 0) return 1;
      return 0;
    };
    return c(k, a, b) - c(k, b, a);
  });
}

AlgebroidStructure AlgebroidStructure::heisenberg3() {
  // [e_1, e_2] = e_3 central
  return lie_algebra(3, [](int k, int a, int b) -> Rat {
    if (k == 2 && a == 0 && b == 1) return 1;
    if (k == 2 && a == 1 && b == 0) return -1;
    return 0;
  });
}

Poly AlgebroidStructure::anchor_coeff(int i, int a) const {
  Poly rho;
  for (const auto& [m, c] : mu.terms()) {
    if (m.th != 0 || m.xi != (1u << a)) continue;
    if (m.pdeg() != 1) continue;
    if (static_cast<std::size_t>(i) >= m.pexp.size() || m.pexp[i] != 1) continue;
    Poly::Exps e = m.xexp;
    Poly t;
    t += Poly(-c);
    for (std::size_t v = 0; v < e.size(); ++v)
      for (int q = 0; q < e[v]; ++q) t = t * Poly::variable(static_cast<int>(v));
    rho += t;
  }
  return rho;
}

Poly AlgebroidStructure::structure_coeff(int c, int a, int b) const {
  if (a == b) return {};
  Poly out;
  const bool flip = a > b;
  const int lo = flip ? b : a, hi = flip ? a : b;
  for (const auto& [m, coef] : mu.terms()) {
    if (m.pdeg() != 0) continue;
    if (m.th != (1u << c)) continue;
    if (m.xi != ((1u << lo) | (1u << hi))) continue;
    Poly t;
    t += Poly(flip ? coef : -coef);
    for (std::size_t v = 0; v < m.xexp.size(); ++v)
      for (int q = 0; q < m.xexp[v]; ++q) t = t * Poly::variable(static_cast<int>(v));
    out += t;
  }
  return out;
}

RatVec AlgebroidStructure::bracket_sections(const RatVec& x, const RatVec& y) const {
  if (static_cast<int>(x.size()) != fiber_rank || static_cast<int>(y.size()) != fiber_rank)
    throw DimensionMismatch("bracket_sections: section dimension mismatch");
  RatVec out(fiber_rank, RatFunc(Poly{}));
  // rho^i_a (x^a d_i y^c - y^a d_i x^c) + c^c_ab x^a y^b
  for (int i = 0; i < base_dim; ++i)
    for (int a = 0; a < fiber_rank; ++a) {
      Poly rho = anchor_coeff(i, a);
      if (rho.is_zero()) continue;
      RatFunc rf(rho);
      for (int c = 0; c < fiber_rank; ++c) {
        out[c] += rf * (x[a] * y[c].derivative(i) - y[a] * x[c].derivative(i));
      }
    }
  for (int c = 0; c < fiber_rank; ++c)
    for (int a = 0; a < fiber_rank; ++a) {
      if (x[a].is_zero()) continue;
      for (int b = 0; b < fiber_rank; ++b) {
        if (y[b].is_zero()) continue;
        Poly cc = structure_coeff(c, a, b);
        if (!cc.is_zero()) out[c] += RatFunc(cc) * x[a] * y[b];
      }
    }
  return out;
}

Superfunction section_to_sf(const std::vector<Poly>& v) {
  Superfunction f;
  for (std::size_t a = 0; a < v.size(); ++a)
    if (!v[a].is_zero()) f += v[a].to_superfunction() * Superfunction::theta(static_cast<int>(a));
  return f;
}

Superfunction covector_to_sf(const std::vector<Poly>& v) {
  Superfunction f;
  for (std::size_t a = 0; a < v.size(); ++a)
    if (!v[a].is_zero()) f += v[a].to_superfunction() * Superfunction::xi(static_cast<int>(a));
  return f;
}

namespace {

std::vector<Poly> extract_linear(const Superfunction& f, int r, bool theta_part) {
  std::vector<Poly> out(r);
  for (const auto& [m, c] : f.terms()) {
    uint32_t mask = theta_part ? m.th : m.xi;
    uint32_t other = theta_part ? m.xi : m.th;
    if (other != 0 || m.pdeg() != 0 || std::popcount(mask) != 1)
      throw std::domain_error("not a pure section/covector: " + f.render());
    int a = std::countr_zero(mask);
    if (a >= r) throw DimensionMismatch("generator index exceeds fiber rank");
    Poly t;
    t += Poly(c);
    for (std::size_t v = 0; v < m.xexp.size(); ++v)
      for (int q = 0; q < m.xexp[v]; ++q) t = t * Poly::variable(static_cast<int>(v));
    out[a] += t;
  }
  return out;
}

}  // namespace

std::vector<Poly> sf_to_section(const Superfunction& f, int r) {
  return extract_linear(f, r, true);
}

std::vector<Poly> sf_to_covector(const Superfunction& f, int r) {
  return extract_linear(f, r, false);
}

CheckReport check_lie_algebroid(const AlgebroidStructure& alg) {
  require_bidegree(alg.mu, {1, 2}, "check_lie_algebroid: mu");
  CheckReport r = make_report("lie-algebroid");
  Superfunction res = big_bracket(alg.mu, alg.mu);
  if (!res.is_zero()) {
    r.fail("{mu,mu} = " + res.render());
    // the failed structure also breaks d o d = 0; report a witness form
    for (int c = 0; c < alg.fiber_rank; ++c) {
      Superfunction dd = big_bracket(alg.mu, big_bracket(alg.mu, Superfunction::xi(c)));
      if (!dd.is_zero()) {
        r.note("d(d(xi" + std::to_string(c + 1) + ")) = " + dd.render());
        break;
      }
    }
  }
  return r;
}

Superfunction schouten(const AlgebroidStructure& alg, const Superfunction& x,
                       const Superfunction& y) {
  return big_bracket(big_bracket(x, alg.mu), y);
}

Superfunction anchor_apply(const AlgebroidStructure& alg, const Superfunction& x,
                           const Superfunction& f) {
  require_bidegree(x, {1, 0}, "anchor_apply: section");
  require_bidegree(f, {0, 0}, "anchor_apply: function");
  return big_bracket(big_bracket(x, alg.mu), f);
}

Superfunction differential(const AlgebroidStructure& alg, const Superfunction& form) {
  return big_bracket(alg.mu, form);
}

Superfunction interior(const Superfunction& x, const Superfunction& form) {
  return big_bracket(x, form);
}

Superfunction lie_derivative(const AlgebroidStructure& alg, const Superfunction& x,
                             const Superfunction& form) {
  return big_bracket(x, big_bracket(alg.mu, form)) +
         big_bracket(alg.mu, big_bracket(x, form));
}

Endo Endo::from_poly(const PolyMat& pm) {
  Endo e;
  e.r = static_cast<int>(rows(pm));
  e.m = to_rat(pm);
  return e;
}

Endo Endo::identity(int r) {
  Endo e;
  e.r = r;
  e.m = rat_identity(r);
  return e;
}

bool Endo::is_polynomial() const {
  for (const auto& row : m)
    for (const auto& f : row)
      if (!f.is_polynomial()) return false;
  return true;
}

Superfunction Endo::to_sf() const {
  Superfunction f;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      if (!m[a][b].is_zero())
        f += m[a][b].as_polynomial().to_superfunction() * Superfunction::xi(b) *
             Superfunction::theta(a);
  return f;
}

RatVec Endo::apply(const RatVec& v) const { return rat_apply(m, v); }

Endo Endo::compose(const Endo& o) const {
  Endo e;
  e.r = r;
  e.m = rat_mat_mul(m, o.m);
  return e;
}

Endo Endo::power(int k) const {
  Endo e = Endo::identity(r);
  for (int i = 0; i < k; ++i) e = e.compose(*this);
  return e;
}

bool Endo::operator==(const Endo& o) const {
  if (r != o.r) return false;
  for (int a = 0; a < r; ++a)
    for (int b = 0; b < r; ++b)
      if (!(m[a][b] == o.m[a][b])) return false;
  return true;
}

std::string Endo::render(const Names* names) const {
  std::string s = "[";
  for (int a = 0; a < r; ++a) {
    s += (a ? ",[" : "[");
    for (int b = 0; b < r; ++b) s += (b ? "," : "") + m[a][b].render(names);
    s += "]";
  }
  return s + "]";
}

Superfunction i_endo(const Endo& n, const Superfunction& form) {
  return big_bracket(n.to_sf(), form);
}

Superfunction d_endo(const AlgebroidStructure& alg, const Endo& n, const Superfunction& form) {
  return i_endo(n, differential(alg, form)) - differential(alg, i_endo(n, form));
}

RatVec nijenhuis_torsion_value(const AlgebroidStructure& alg, const Endo& n,
                               const RatVec& u, const RatVec& v) {
  RatVec nu = n.apply(u), nv = n.apply(v);
  RatVec t = alg.bracket_sections(nu, nv);
  RatVec t2 = n.apply(alg.bracket_sections(nu, v));
  RatVec t3 = n.apply(alg.bracket_sections(u, nv));
  RatVec t4 = n.apply(n.apply(alg.bracket_sections(u, v)));
  for (int c = 0; c < alg.fiber_rank; ++c) t[c] = t[c] - t2[c] - t3[c] + t4[c];
  return t;
}

TorsionTable nijenhuis_torsion(const AlgebroidStructure& alg, const Endo& n) {
  TorsionTable tab;
  tab.r = alg.fiber_rank;
  tab.val.assign(tab.r, std::vector<RatVec>(tab.r));
  for (int a = 0; a < tab.r; ++a) {
    for (int b = a + 1; b < tab.r; ++b) {
      RatVec u(tab.r, RatFunc(Poly{})), v(tab.r, RatFunc(Poly{}));
      u[a] = RatFunc(Poly(1));
      v[b] = RatFunc(Poly(1));
      RatVec t = nijenhuis_torsion_value(alg, n, u, v);
      bool zero = true;
      for (const auto& f : t) zero = zero && f.is_zero();
      if (!zero && tab.vanishes) {
        tab.vanishes = false;
        std::string w = "TN(e" + std::to_string(a + 1) + ",e" + std::to_string(b + 1) + ") = (";
        for (int c = 0; c < tab.r; ++c) w += (c ? ", " : "") + t[c].render();
        tab.witness = w + ")";
      }
      tab.val[a][b] = std::move(t);
    }
  }
  return tab;
}

Superfunction map_of_bivector(const Superfunction& pi, const Superfunction& xi_cov) {
  return big_bracket(xi_cov, pi);
}

Superfunction map_of_form(const Superfunction& omega, const Superfunction& x_sec) {
  return -big_bracket(x_sec, omega);
}

PolyMat bivector_matrix(const Superfunction& pi, int r) {
  PolyMat m = zero_mat(r, r);
  for (int a = 0; a < r; ++a) {
    std::vector<Poly> col = sf_to_section(map_of_bivector(pi, Superfunction::xi(a)), r);
    for (int b = 0; b < r; ++b) m[b][a] = col[b];
  }
  return m;
}

PolyMat twoform_matrix(const Superfunction& omega, int r) {
  PolyMat m = zero_mat(r, r);
  for (int a = 0; a < r; ++a) {
    std::vector<Poly> col = sf_to_covector(map_of_form(omega, Superfunction::theta(a)), r);
    for (int b = 0; b < r; ++b) m[b][a] = col[b];
  }
  return m;
}

Superfunction bivector_from_matrix(const PolyMat& m) {
  const int r = static_cast<int>(rows(m));
  Superfunction pi;
  for (int c = 0; c < r; ++c)
    for (int b = c + 1; b < r; ++b)
      if (!m[b][c].is_zero())
        pi += m[b][c].to_superfunction() * Superfunction::theta(c) * Superfunction::theta(b);
  return pi;
}

Superfunction twoform_from_matrix(const PolyMat& m) {
  const int r = static_cast<int>(rows(m));
  Superfunction w;
  for (int a = 0; a < r; ++a)
    for (int b = a + 1; b < r; ++b)
      if (!m[a][b].is_zero())
        w += m[a][b].to_superfunction() * Superfunction::xi(a) * Superfunction::xi(b);
  return w;
}

Superfunction eval2(const Superfunction& w, const Superfunction& a1, const Superfunction& a2) {
  return big_bracket(a2, big_bracket(a1, w));
}

Superfunction bracket_pi(const AlgebroidStructure& alg, const Superfunction& pi,
                         const Superfunction& xi1, const Superfunction& xi2) {
  Superfunction pix1 = map_of_bivector(pi, xi1);
  Superfunction pix2 = map_of_bivector(pi, xi2);
  return lie_derivative(alg, pix1, xi2) - lie_derivative(alg, pix2, xi1) -
         differential(alg, eval2(pi, xi1, xi2));
}

}  // namespace diracwb
