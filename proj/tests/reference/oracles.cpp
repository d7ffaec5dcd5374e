#include "reference/oracles.hpp"

#include <bit>

namespace diracwb::reference {

Superfunction d_even(const Superfunction& f, bool momentum, int idx) {
  Superfunction r;
  for (const auto& [m, c] : f.terms()) {
    const auto& exps = momentum ? m.pexp : m.xexp;
    if (static_cast<std::size_t>(idx) >= exps.size() || exps[idx] == 0) continue;
    Mono dm = m;
    auto& de = momentum ? dm.pexp : dm.xexp;
    Rat coef = c * exps[idx];
    de[idx]--;
    dm.trim();
    r += Superfunction::monomial(dm, coef);
  }
  return r;
}

Superfunction d_odd_left(const Superfunction& f, bool theta, int idx) {
  Superfunction r;
  const uint32_t bit = 1u << idx;
  for (const auto& [m, c] : f.terms()) {
    uint32_t mask = theta ? m.th : m.xi;
    if (!(mask & bit)) continue;
    int before = theta ? std::popcount(m.xi) + std::popcount(m.th & (bit - 1))
                       : std::popcount(m.xi & (bit - 1));
    Mono dm = m;
    (theta ? dm.th : dm.xi) &= ~bit;
    r += Superfunction::monomial(dm, (before % 2 == 0) ? c : -c);
  }
  return r;
}

namespace {

int max_even_vars(const Superfunction& f, const Superfunction& g, bool momentum) {
  std::size_t n = 0;
  for (const auto& [m, c] : f.terms()) n = std::max(n, (momentum ? m.pexp : m.xexp).size());
  for (const auto& [m, c] : g.terms()) n = std::max(n, (momentum ? m.pexp : m.xexp).size());
  return static_cast<int>(n);
}

int max_odd_vars(const Superfunction& f, const Superfunction& g, bool theta) {
  uint32_t mask = 0;
  for (const auto& [m, c] : f.terms()) mask |= theta ? m.th : m.xi;
  for (const auto& [m, c] : g.terms()) mask |= theta ? m.th : m.xi;
  return 32 - std::countl_zero(mask | 1u);
}

Superfunction parity_part(const Superfunction& f, int parity) {
  Superfunction r;
  for (const auto& [m, c] : f.terms())
    if (m.parity() == parity) r += Superfunction::monomial(m, c);
  return r;
}

}  // namespace

Superfunction big_bracket_oracle(const Superfunction& f, const Superfunction& g) {
  Superfunction out;
  const int nx = std::max(max_even_vars(f, g, false), max_even_vars(f, g, true));
  const int nodd = std::max(max_odd_vars(f, g, false), max_odd_vars(f, g, true));
  for (int sigma = 0; sigma <= 1; ++sigma) {
    Superfunction fs = parity_part(f, sigma);
    if (fs.is_zero()) continue;
    for (int i = 0; i < nx; ++i) {
      out += d_even(fs, false, i) * d_even(g, true, i);
      out -= d_even(fs, true, i) * d_even(g, false, i);
    }
    Superfunction odd;
    for (int a = 0; a < nodd; ++a) {
      odd += d_odd_left(fs, false, a) * d_odd_left(g, true, a);
      odd += d_odd_left(fs, true, a) * d_odd_left(g, false, a);
    }
    out += (sigma == 0) ? -odd : odd;
  }
  return out;
}

int rank_oracle(std::vector<std::vector<Rat>> m) {
  if (m.empty() || m[0].empty()) return 0;
  const std::size_t nr = m.size(), nc = m[0].size();
  std::size_t row = 0;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t piv = row;
    while (piv < nr && sgn(m[piv][col]) == 0) ++piv;
    if (piv == nr) continue;
    std::swap(m[piv], m[row]);
    for (std::size_t i = row + 1; i < nr; ++i) {
      if (sgn(m[i][col]) == 0) continue;
      Rat f = m[i][col] / m[row][col];
      for (std::size_t j = col; j < nc; ++j) m[i][j] -= f * m[row][j];
    }
    ++row;
  }
  return static_cast<int>(row);
}

std::vector<Poly> vf_bracket_oracle(const std::vector<Poly>& x, const std::vector<Poly>& y) {
  const int n = static_cast<int>(x.size());
  std::vector<Poly> out(n);
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      out[c] += x[a] * y[c].derivative(a) - y[a] * x[c].derivative(a);
  return out;
}

Superfunction ce_differential_oracle(const AlgebroidStructure& alg, int c) {
  Superfunction d;
  const Rat half(1, 2);
  for (int a = 0; a < alg.fiber_rank; ++a)
    for (int b = 0; b < alg.fiber_rank; ++b) {
      Poly cc = alg.structure_coeff(c, a, b);
      if (!cc.is_zero())
        d -= half * (cc.to_superfunction() * Superfunction::xi(a) * Superfunction::xi(b));
    }
  return d;
}

std::vector<Rat> jacobiator_oracle(const AlgebroidStructure& alg, int a, int b, int c) {
  const int r = alg.fiber_rank;
  std::vector<Rat> j(r, 0);
  auto cc = [&](int k, int u, int v) { return alg.structure_coeff(k, u, v).as_constant(); };
  for (int d = 0; d < r; ++d)
    for (int e = 0; e < r; ++e)
      j[d] += cc(e, a, b) * cc(d, e, c) + cc(e, b, c) * cc(d, e, a) + cc(e, c, a) * cc(d, e, b);
  return j;
}

std::vector<std::vector<std::vector<Poly>>> schouten_bivectors_oracle(const PolyMat& pi,
                                                                      const PolyMat& pip) {
  const int n = static_cast<int>(rows(pi));
  std::vector<std::vector<std::vector<Poly>>> t(
      n, std::vector<std::vector<Poly>>(n, std::vector<Poly>(n)));
  // mixed cyclic sum: vanishes iff [pi,pi'] = 0 (tangent algebroid of R^n)
  auto P = [&](const PolyMat& m, int i, int j) { return m[i][j]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Poly s;
        for (int m = 0; m < n; ++m) {
          s += P(pi, m, i) * P(pip, j, k).derivative(m) + P(pip, m, i) * P(pi, j, k).derivative(m);
          s += P(pi, m, j) * P(pip, k, i).derivative(m) + P(pip, m, j) * P(pi, k, i).derivative(m);
          s += P(pi, m, k) * P(pip, i, j).derivative(m) + P(pip, m, k) * P(pi, i, j).derivative(m);
        }
        t[i][j][k] = s;
      }
  return t;
}

}  // namespace diracwb::reference
