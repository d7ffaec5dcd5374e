#include "diracwb/superfun.hpp"

#include <bit>
#include <sstream>

namespace diracwb {

namespace {

uint32_t bits_up_to(int b) {  // bits 0..b inclusive
  return (b >= 31) ? 0xFFFFFFFFu : ((2u << b) - 1u);
}

// Number of pairs (a in A, b in B) with a > b.
int cross_inversions(uint32_t A, uint32_t B) {
  int inv = 0;
  while (B) {
    int b = std::countr_zero(B);
    B &= B - 1;
    inv += std::popcount(A & ~bits_up_to(b));
  }
  return inv;
}

}  // namespace

void Mono::trim() {
  while (!xexp.empty() && xexp.back() == 0) xexp.pop_back();
  while (!pexp.empty() && pexp.back() == 0) pexp.pop_back();
}

int Mono::pdeg() const {
  int d = 0;
  for (auto e : pexp) d += e;
  return d;
}

int Mono::xdeg() const {
  int d = 0;
  for (auto e : xexp) d += e;
  return d;
}

Bidegree Mono::bidegree() const {
  int pd = pdeg();
  return {pd + std::popcount(th), pd + std::popcount(xi)};
}

int mono_mul(const Mono& a, const Mono& b, Mono& out) {
  if ((a.xi & b.xi) != 0 || (a.th & b.th) != 0) return 0;
  out.xexp = a.xexp;
  if (out.xexp.size() < b.xexp.size()) out.xexp.resize(b.xexp.size(), 0);
  for (std::size_t i = 0; i < b.xexp.size(); ++i) out.xexp[i] += b.xexp[i];
  out.pexp = a.pexp;
  if (out.pexp.size() < b.pexp.size()) out.pexp.resize(b.pexp.size(), 0);
  for (std::size_t i = 0; i < b.pexp.size(); ++i) out.pexp[i] += b.pexp[i];
  out.xi = a.xi | b.xi;
  out.th = a.th | b.th;
  out.trim();
  // Reorder theta(a)-block past xi(b)-block, then merge within each block.
  int swaps = std::popcount(a.th) * std::popcount(b.xi);
  swaps += cross_inversions(a.xi, b.xi);
  swaps += cross_inversions(a.th, b.th);
  return (swaps % 2 == 0) ? 1 : -1;
}

Superfunction Superfunction::constant(const Rat& c) {
  Superfunction f;
  f.add_term(Mono{}, c);
  return f;
}

Superfunction Superfunction::x(int i, int exponent) {
  Mono m;
  m.xexp.resize(i + 1, 0);
  m.xexp[i] = static_cast<uint16_t>(exponent);
  m.trim();
  return monomial(m, 1);
}

Superfunction Superfunction::p(int i, int exponent) {
  Mono m;
  m.pexp.resize(i + 1, 0);
  m.pexp[i] = static_cast<uint16_t>(exponent);
  m.trim();
  return monomial(m, 1);
}

Superfunction Superfunction::xi(int a) {
  Mono m;
  m.xi = 1u << a;
  return monomial(m, 1);
}

Superfunction Superfunction::theta(int a) {
  Mono m;
  m.th = 1u << a;
  return monomial(m, 1);
}

Superfunction Superfunction::monomial(const Mono& m, const Rat& c) {
  Superfunction f;
  Mono mm = m;
  mm.trim();
  f.add_term(mm, c);
  return f;
}

void Superfunction::add_term(const Mono& m, const Rat& c) {
  if (diracwb::is_zero(c)) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (diracwb::is_zero(it->second)) terms_.erase(it);
  }
}

Superfunction& Superfunction::operator+=(const Superfunction& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Superfunction& Superfunction::operator-=(const Superfunction& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Superfunction Superfunction::operator-() const {
  Superfunction r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Superfunction operator*(const Superfunction& a, const Superfunction& b) {
  Superfunction r;
  Mono prod;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      int sign = mono_mul(ma, mb, prod);
      if (sign == 0) continue;
      Rat c = ca * cb;
      if (sign < 0) c = -c;
      r.add_term(prod, c);
    }
  }
  return r;
}

Superfunction operator*(const Rat& c, Superfunction a) {
  if (diracwb::is_zero(c)) return Superfunction{};
  for (auto& [m, coef] : a.terms_) coef *= c;
  return a;
}

std::optional<Bidegree> Superfunction::bidegree() const {
  if (terms_.empty()) return std::nullopt;
  Bidegree d = terms_.begin()->first.bidegree();
  for (const auto& [m, c] : terms_)
    if (m.bidegree() != d) return std::nullopt;
  return d;
}

bool Superfunction::is_homogeneous_of(const Bidegree& d) const {
  for (const auto& [m, c] : terms_)
    if (m.bidegree() != d) return false;
  return true;
}

Superfunction Superfunction::homogeneous_part(const Bidegree& d) const {
  Superfunction r;
  for (const auto& [m, c] : terms_)
    if (m.bidegree() == d) r.terms_.emplace(m, c);
  return r;
}

std::map<Bidegree, Superfunction> Superfunction::bidegree_components() const {
  std::map<Bidegree, Superfunction> parts;
  for (const auto& [m, c] : terms_) parts[m.bidegree()].terms_.emplace(m, c);
  return parts;
}

Superfunction Superfunction::evaluate(const std::vector<Rat>& base_point) const {
  Superfunction r;
  for (const auto& [m, c] : terms_) {
    if (m.xexp.size() > base_point.size())
      throw DimensionMismatch("evaluate: point has dimension " +
                              std::to_string(base_point.size()) + ", monomial uses x" +
                              std::to_string(m.xexp.size()));
    Rat v = c;
    for (std::size_t i = 0; i < m.xexp.size(); ++i)
      for (int e = 0; e < m.xexp[i]; ++e) v *= base_point[i];
    Mono mm = m;
    mm.xexp.clear();
    r.add_term(mm, v);
  }
  return r;
}

Rat Superfunction::coefficient(const Mono& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Rat(0) : it->second;
}

// ---------------------------------------------------------------------------
// Big bracket. The recursion peels generator factors off the canonical form:
//   {g r, w} = g {r, w} + (-1)^{s(r) s(w)} {g, w} r
//   {g, h w} = {g, h} w + (-1)^{s(g) s(h)} h {g, w}
// with s the total-degree parity and the generator table
//   {x^i, p_j} = d^i_j   {p_j, x^i} = -d^i_j   {xi^a, theta_b} = {theta_b, xi^a} = d^a_b.

namespace {

enum class Gen : uint8_t { X, P, Xi, Th };

struct Factor {
  Gen kind;
  int idx;
};

int factor_parity(const Factor& f) { return (f.kind == Gen::Xi || f.kind == Gen::Th) ? 1 : 0; }

int list_parity(const Factor* f, std::size_t n) {
  int s = 0;
  for (std::size_t i = 0; i < n; ++i) s ^= factor_parity(f[i]);
  return s;
}

Rat gen_table(const Factor& g, const Factor& h) {
  if (g.kind == Gen::X && h.kind == Gen::P && g.idx == h.idx) return 1;
  if (g.kind == Gen::P && h.kind == Gen::X && g.idx == h.idx) return -1;
  if (g.kind == Gen::Xi && h.kind == Gen::Th && g.idx == h.idx) return 1;
  if (g.kind == Gen::Th && h.kind == Gen::Xi && g.idx == h.idx) return 1;
  return 0;
}

std::vector<Factor> factor_list(const Mono& m) {
  std::vector<Factor> fs;
  for (std::size_t i = 0; i < m.xexp.size(); ++i)
    for (int e = 0; e < m.xexp[i]; ++e) fs.push_back({Gen::X, static_cast<int>(i)});
  for (std::size_t i = 0; i < m.pexp.size(); ++i)
    for (int e = 0; e < m.pexp[i]; ++e) fs.push_back({Gen::P, static_cast<int>(i)});
  for (uint32_t b = m.xi; b;) {
    int a = std::countr_zero(b);
    b &= b - 1;
    fs.push_back({Gen::Xi, a});
  }
  for (uint32_t b = m.th; b;) {
    int a = std::countr_zero(b);
    b &= b - 1;
    fs.push_back({Gen::Th, a});
  }
  return fs;
}

// Rebuilds the (canonically ordered) suffix as a monomial; no sign arises
// because suffixes of the canonical order are already canonical.
Superfunction mono_of(const Factor* f, std::size_t n) {
  Mono m;
  for (std::size_t i = 0; i < n; ++i) {
    switch (f[i].kind) {
      case Gen::X:
        if (m.xexp.size() <= static_cast<std::size_t>(f[i].idx)) m.xexp.resize(f[i].idx + 1, 0);
        m.xexp[f[i].idx]++;
        break;
      case Gen::P:
        if (m.pexp.size() <= static_cast<std::size_t>(f[i].idx)) m.pexp.resize(f[i].idx + 1, 0);
        m.pexp[f[i].idx]++;
        break;
      case Gen::Xi:
        m.xi |= 1u << f[i].idx;
        break;
      case Gen::Th:
        m.th |= 1u << f[i].idx;
        break;
    }
  }
  return Superfunction::monomial(m, 1);
}

Superfunction gen_of(const Factor& f) { return mono_of(&f, 1); }

Superfunction bracket_gen(const Factor& g, const Factor* v, std::size_t nv) {
  if (nv == 0) return {};
  if (nv == 1) return Superfunction::constant(gen_table(g, v[0]));
  Superfunction r;
  Rat gb = gen_table(g, v[0]);
  if (!is_zero(gb)) r += gb * mono_of(v + 1, nv - 1);
  Superfunction inner = bracket_gen(g, v + 1, nv - 1);
  if (!inner.is_zero()) {
    Superfunction t = gen_of(v[0]) * inner;
    if (factor_parity(g) && factor_parity(v[0])) t = -t;
    r += t;
  }
  return r;
}

Superfunction bracket_factors(const Factor* u, std::size_t nu, const Factor* v, std::size_t nv) {
  if (nu == 0 || nv == 0) return {};
  if (nu == 1) return bracket_gen(u[0], v, nv);
  Superfunction r = gen_of(u[0]) * bracket_factors(u + 1, nu - 1, v, nv);
  Superfunction t = bracket_gen(u[0], v, nv) * mono_of(u + 1, nu - 1);
  if (list_parity(u + 1, nu - 1) && list_parity(v, nv)) t = -t;
  return r + t;
}

}  // namespace

Superfunction big_bracket(const Superfunction& u, const Superfunction& v) {
  Superfunction r;
  for (const auto& [mu, cu] : u.terms()) {
    std::vector<Factor> fu = factor_list(mu);
    for (const auto& [mv, cv] : v.terms()) {
      std::vector<Factor> fv = factor_list(mv);
      Superfunction b = bracket_factors(fu.data(), fu.size(), fv.data(), fv.size());
      if (!b.is_zero()) r += (cu * cv) * b;
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Rendering.

namespace {

std::string gen_name(const std::vector<std::string>* given, const char* prefix, int i) {
  if (given && static_cast<std::size_t>(i) < given->size()) return (*given)[i];
  return prefix + std::to_string(i + 1);
}

}  // namespace

std::string mono_to_string(const Mono& m, const Names* names) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < m.xexp.size(); ++i) {
    if (m.xexp[i] == 0) continue;
    std::string s = gen_name(names ? &names->base : nullptr, "x", static_cast<int>(i));
    if (m.xexp[i] > 1) s += "^" + std::to_string(m.xexp[i]);
    parts.push_back(s);
  }
  for (std::size_t i = 0; i < m.pexp.size(); ++i) {
    if (m.pexp[i] == 0) continue;
    std::string s = gen_name(names ? &names->momenta : nullptr, "P", static_cast<int>(i));
    if (m.pexp[i] > 1) s += "^" + std::to_string(m.pexp[i]);
    parts.push_back(s);
  }
  for (uint32_t b = m.xi; b;) {
    int a = std::countr_zero(b);
    b &= b - 1;
    parts.push_back(gen_name(names ? &names->coframe : nullptr, "xi", a));
  }
  for (uint32_t b = m.th; b;) {
    int a = std::countr_zero(b);
    b &= b - 1;
    parts.push_back(gen_name(names ? &names->frame : nullptr, "th", a));
  }
  if (parts.empty()) return "1";
  std::string s = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) s += "*" + parts[i];
  return s;
}

std::string Superfunction::render(const Names* names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    Rat a = c;
    bool neg = sgn(a) < 0;
    if (neg) a = -a;
    if (first) {
      if (neg) os << "-";
      first = false;
    } else {
      os << (neg ? " - " : " + ");
    }
    std::string ms = mono_to_string(m, names);
    if (a == 1 && ms != "1") {
      os << ms;
    } else if (ms == "1") {
      os << rat_to_string(a);
    } else {
      os << rat_to_string(a) << "*" << ms;
    }
  }
  return os.str();
}

}  // namespace diracwb
