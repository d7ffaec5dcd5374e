#include "diracwb/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace diracwb {

PolyMat identity_mat(int n) {
  PolyMat m(n, std::vector<Poly>(n));
  for (int i = 0; i < n; ++i) m[i][i] = Poly(1);
  return m;
}

PolyMat zero_mat(int r, int c) { return PolyMat(r, std::vector<Poly>(c)); }

PolyMat transpose(const PolyMat& m) {
  PolyMat t(cols(m), std::vector<Poly>(rows(m)));
  for (std::size_t i = 0; i < rows(m); ++i)
    for (std::size_t j = 0; j < cols(m); ++j) t[j][i] = m[i][j];
  return t;
}

PolyMat mat_mul(const PolyMat& a, const PolyMat& b) {
  if (cols(a) != rows(b)) throw DimensionMismatch("mat_mul: inner dimensions disagree");
  PolyMat r(rows(a), std::vector<Poly>(cols(b)));
  for (std::size_t i = 0; i < rows(a); ++i)
    for (std::size_t k = 0; k < cols(a); ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < cols(b); ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

PolyMat hcat(const PolyMat& a, const PolyMat& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (rows(a) != rows(b)) throw DimensionMismatch("hcat: row counts disagree");
  PolyMat r = a;
  for (std::size_t i = 0; i < rows(a); ++i)
    r[i].insert(r[i].end(), b[i].begin(), b[i].end());
  return r;
}

PolyMat vcat(const PolyMat& a, const PolyMat& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (cols(a) != cols(b)) throw DimensionMismatch("vcat: column counts disagree");
  PolyMat r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

std::vector<Poly> mat_apply(const PolyMat& m, const std::vector<Poly>& v) {
  if (cols(m) != v.size()) throw DimensionMismatch("mat_apply: dimension mismatch");
  std::vector<Poly> r(rows(m));
  for (std::size_t i = 0; i < rows(m); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
  return r;
}

PolyMat from_rat_rows(const std::vector<std::vector<Rat>>& entries) {
  PolyMat m(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (const auto& c : entries[i]) m[i].push_back(Poly(c));
  return m;
}

PolyMat column(const std::vector<Poly>& v) {
  PolyMat m(v.size(), std::vector<Poly>(1));
  for (std::size_t i = 0; i < v.size(); ++i) m[i][0] = v[i];
  return m;
}

Echelon bareiss_echelon(PolyMat a) {
  Echelon e;
  const std::size_t nr = rows(a), nc = cols(a);
  Poly prev = Poly(1);
  std::size_t row = 0;
  for (std::size_t col = 0; col < nc && row < nr; ++col) {
    std::size_t piv = row;
    while (piv < nr && a[piv][col].is_zero()) ++piv;
    if (piv == nr) continue;
    if (piv != row) std::swap(a[piv], a[row]);
    const Poly& pivot = a[row][col];
    for (std::size_t r2 = row + 1; r2 < nr; ++r2) {
      for (std::size_t j = col + 1; j < nc; ++j)
        a[r2][j] = Poly::exact_div(pivot * a[r2][j] - a[r2][col] * a[row][j], prev);
      a[r2][col] = Poly{};
    }
    if (pivot.total_degree() > 0) e.nonconst_pivots.push_back(pivot.primitive_part());
    prev = pivot;
    e.pivot_cols.push_back(static_cast<int>(col));
    ++row;
  }
  e.rank = static_cast<int>(row);
  e.mat = std::move(a);
  return e;
}

int rank(const PolyMat& a) {
  if (a.empty() || cols(a) == 0) return 0;
  return bareiss_echelon(a).rank;
}

Poly det(const PolyMat& a) {
  const std::size_t n = rows(a);
  if (n != cols(a)) throw DimensionMismatch("det: matrix not square");
  if (n == 0) return Poly(1);
  PolyMat m = a;
  Poly prev = Poly(1);
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t piv = k;
    while (piv < n && m[piv][k].is_zero()) ++piv;
    if (piv == n) return Poly{};
    if (piv != k) {
      std::swap(m[piv], m[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        m[i][j] = Poly::exact_div(m[k][k] * m[i][j] - m[i][k] * m[k][j], prev);
    prev = m[k][k];
  }
  return sign < 0 ? -m[n - 1][n - 1] : m[n - 1][n - 1];
}

namespace {

std::vector<Poly> normalize_poly_vector(const RatVec& v) {
  Poly denprod = Poly(1);
  for (const auto& f : v)
    if (!f.is_polynomial()) denprod = denprod * f.den();
  std::vector<Poly> out;
  out.reserve(v.size());
  for (const auto& f : v) {
    RatFunc scaled = f * RatFunc(denprod);
    out.push_back(scaled.as_polynomial());
  }
  // content/sign normalization across the whole vector
  Rat c = 0;
  const Poly* leadp = nullptr;
  for (const auto& p : out)
    if (!p.is_zero() && !leadp) leadp = &p;
  if (!leadp) return out;
  Int g = 0, l = 1;
  for (const auto& p : out)
    for (const auto& [e, coef] : p.terms()) {
      g = gcd(g, coef.get_num());
      l = lcm(l, coef.get_den());
    }
  c = Rat(g, l);
  c.canonicalize();
  if (sgn(leadp->terms().rbegin()->second) < 0) c = -c;
  Rat inv = Rat(1) / c;
  for (auto& p : out) p = inv * p;
  return out;
}

// Fraction-free back substitution against a Bareiss echelon: completes a
// polynomial solution of E v = 0 from given free-column values, rescaling
// the whole vector by the pivot instead of dividing (degree growth stays
// linear in the rank; no rational-function arithmetic).
std::vector<Poly> back_substitute_free(const Echelon& e, std::vector<Poly> v) {
  for (int k = e.rank - 1; k >= 0; --k) {
    int pc = e.pivot_cols[k];
    Poly s;
    for (std::size_t j = pc + 1; j < cols(e.mat); ++j)
      if (!e.mat[k][j].is_zero() && !v[j].is_zero()) s += e.mat[k][j] * v[j];
    if (s.is_zero()) {
      v[pc] = Poly{};
      continue;
    }
    const Poly& pivot = e.mat[k][pc];
    for (std::size_t j = 0; j < v.size(); ++j)
      if (static_cast<int>(j) != pc && !v[j].is_zero()) v[j] = v[j] * pivot;
    v[pc] = -s;
  }
  return v;
}

std::vector<Poly> content_normalize(std::vector<Poly> v) {
  RatVec rv;
  rv.reserve(v.size());
  for (auto& p : v) rv.emplace_back(std::move(p));
  return normalize_poly_vector(rv);
}

}  // namespace

PolyMat nullspace(const PolyMat& a) {
  const std::size_t nc = cols(a);
  if (a.empty() || nc == 0) return {};
  Echelon e = bareiss_echelon(a);
  std::vector<bool> is_pivot(nc, false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  PolyMat basis(nc);
  for (std::size_t f = 0; f < nc; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Poly> v(nc);
    v[f] = Poly(1);
    std::vector<Poly> col = content_normalize(back_substitute_free(e, std::move(v)));
    for (std::size_t i = 0; i < nc; ++i) basis[i].push_back(col[i]);
  }
  return basis;
}

std::optional<RatVec> solve(const PolyMat& a, const std::vector<Poly>& b) {
  if (rows(a) != b.size()) throw DimensionMismatch("solve: rhs dimension mismatch");
  PolyMat aug = hcat(a, column(b));
  Echelon e = bareiss_echelon(aug);
  const int bcol = static_cast<int>(cols(a));
  for (int pc : e.pivot_cols)
    if (pc == bcol) return std::nullopt;  // inconsistent
  // free variables set to zero; x = v / (-v[bcol]) after the free solve
  std::vector<Poly> v(cols(aug));
  v[bcol] = Poly(1);
  v = back_substitute_free(e, std::move(v));
  RatFunc scale = -RatFunc(Poly(1)) / RatFunc(v[bcol]);
  RatVec x(cols(a), RatFunc(Poly{}));
  for (std::size_t j = 0; j < cols(a); ++j)
    if (!v[j].is_zero()) x[j] = RatFunc(v[j]) * scale;
  return x;
}

bool in_column_span(const PolyMat& gens, const std::vector<Poly>& v) {
  bool all_zero = true;
  for (const auto& p : v) all_zero = all_zero && p.is_zero();
  if (all_zero) return true;
  if (gens.empty() || cols(gens) == 0) return false;
  return rank(gens) == rank(hcat(gens, column(v)));
}

bool column_span_contains(const PolyMat& outer, const PolyMat& inner) {
  if (inner.empty() || cols(inner) == 0) return true;
  if (outer.empty() || cols(outer) == 0) {
    for (const auto& row : inner)
      for (const auto& p : row)
        if (!p.is_zero()) return false;
    return true;
  }
  return rank(outer) == rank(hcat(outer, inner));
}

bool column_span_equal(const PolyMat& a, const PolyMat& b) {
  return column_span_contains(a, b) && column_span_contains(b, a);
}

PolyMat reduced_column_echelon(const PolyMat& a) {
  if (a.empty() || cols(a) == 0) return {};
  PolyMat at = transpose(a);
  Echelon e = bareiss_echelon(at);
  if (e.rank == 0) return {};
  // Backward elimination kept fraction-free (cross-multiplication with a
  // content strip per row; row scalings do not change the row space).
  PolyMat rr(e.rank);
  for (int i = 0; i < e.rank; ++i) rr[i] = e.mat[i];
  for (int k = e.rank - 1; k >= 0; --k) {
    int pc = e.pivot_cols[k];
    for (int i = 0; i < k; ++i) {
      if (rr[i][pc].is_zero()) continue;
      const Poly pk = rr[k][pc];
      const Poly fi = rr[i][pc];
      for (std::size_t j = 0; j < rr[i].size(); ++j) rr[i][j] = pk * rr[i][j] - fi * rr[k][j];
      rr[i] = content_normalize(std::move(rr[i]));
    }
  }
  PolyMat out(rows(a), std::vector<Poly>(e.rank));
  for (int i = 0; i < e.rank; ++i) {
    std::vector<Poly> col = content_normalize(rr[i]);
    for (std::size_t r2 = 0; r2 < rows(a); ++r2) out[r2][i] = col[r2];
  }
  return out;
}

PolyMat span_intersection(const PolyMat& a, const PolyMat& b) {
  if (a.empty() || b.empty() || cols(a) == 0 || cols(b) == 0) return {};
  if (rows(a) != rows(b)) throw DimensionMismatch("span_intersection: ambient dims disagree");
  PolyMat neg_b = b;
  for (auto& row : neg_b)
    for (auto& p : row) p = -p;
  PolyMat ns = nullspace(hcat(a, neg_b));
  if (ns.empty() || cols(ns) == 0) return {};
  PolyMat s(cols(a), std::vector<Poly>(cols(ns)));
  for (std::size_t i = 0; i < cols(a); ++i)
    for (std::size_t j = 0; j < cols(ns); ++j) s[i][j] = ns[i][j];
  return reduced_column_echelon(mat_mul(a, s));
}

PolyMat annihilator(const PolyMat& gens, int ambient_dim) {
  if (gens.empty() || cols(gens) == 0) return identity_mat(ambient_dim);
  return nullspace(transpose(gens));
}

RatMat rat_identity(int n) {
  RatMat m(n, RatVec(n, RatFunc(Poly{})));
  for (int i = 0; i < n; ++i) m[i][i] = RatFunc(Poly(1));
  return m;
}

RatMat rat_mat_mul(const RatMat& a, const RatMat& b) {
  if (a.empty() || b.empty()) return {};
  RatMat r(a.size(), RatVec(b[0].size(), RatFunc(Poly{})));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) {
      if (a[i][k].is_zero()) continue;
      for (std::size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

RatVec rat_apply(const RatMat& m, const RatVec& v) {
  RatVec r(m.size(), RatFunc(Poly{}));
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != v.size()) throw DimensionMismatch("rat_apply: dimension mismatch");
    for (std::size_t j = 0; j < v.size(); ++j) r[i] += m[i][j] * v[j];
  }
  return r;
}

RatMat rat_transpose(const RatMat& m) {
  if (m.empty()) return {};
  RatMat t(m[0].size(), RatVec(m.size(), RatFunc(Poly{})));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

RatMat to_rat(const PolyMat& m) {
  RatMat r(rows(m));
  for (std::size_t i = 0; i < rows(m); ++i)
    for (const auto& p : m[i]) r[i].push_back(RatFunc(p));
  return r;
}

RatFunc dot(const RatVec& a, const RatVec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: dimension mismatch");
  RatFunc s = RatFunc(Poly{});
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<Poly> clear_denominators(const RatVec& v) { return normalize_poly_vector(v); }

RatMat rat_inverse(const RatMat& m) {
  const std::size_t n = m.size();
  RatMat a = m;
  RatMat inv = rat_identity(static_cast<int>(n));
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && a[piv][k].is_zero()) ++piv;
    if (piv == n) throw std::domain_error("rat_inverse: singular matrix");
    std::swap(a[piv], a[k]);
    std::swap(inv[piv], inv[k]);
    RatFunc d = a[k][k];
    for (std::size_t j = 0; j < n; ++j) {
      a[k][j] = a[k][j] / d;
      inv[k][j] = inv[k][j] / d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a[i][k].is_zero()) continue;
      RatFunc f = a[i][k];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] = a[i][j] - f * a[k][j];
        inv[i][j] = inv[i][j] - f * inv[k][j];
      }
    }
  }
  return inv;
}

Poly rat_mat_det_num(const RatMat& m) {
  const std::size_t n = m.size();
  Poly denprod = Poly(1);
  for (const auto& row : m)
    for (const auto& f : row)
      if (!f.is_polynomial()) denprod = denprod * f.den();
  PolyMat cleared(n, std::vector<Poly>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      cleared[i][j] = (m[i][j] * RatFunc(denprod)).as_polynomial();
  return det(cleared);
}

}  // namespace diracwb
