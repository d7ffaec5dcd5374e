#include "diracwb/poly.hpp"

#include <sstream>
#include <stdexcept>

namespace diracwb {

namespace {

void trim(Poly::Exps& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

bool divides(const Poly::Exps& a, const Poly::Exps& b) {  // a | b monomial-wise
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Poly::Exps exps_sub(const Poly::Exps& b, const Poly::Exps& a) {
  Poly::Exps r = b;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = static_cast<uint16_t>(r[i] - a[i]);
  trim(r);
  return r;
}

}  // namespace

Poly Poly::constant(const Rat& c) {
  Poly p;
  p.add_term({}, c);
  return p;
}

Poly Poly::variable(int i, int exponent) {
  Poly p;
  Exps e(i + 1, 0);
  e[i] = static_cast<uint16_t>(exponent);
  trim(e);
  p.add_term(e, 1);
  return p;
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

Rat Poly::as_constant() const {
  if (terms_.empty()) return 0;
  if (!is_constant()) throw std::domain_error("polynomial is not constant: " + render());
  return terms_.begin()->second;
}

int Poly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (auto x : e) t += x;
    if (t > d) d = t;
  }
  return d;
}

void Poly::add_term(const Exps& e, const Rat& c) {
  if (diracwb::is_zero(c)) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (diracwb::is_zero(it->second)) terms_.erase(it);
  }
}

Poly& Poly::operator+=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Poly Poly::operator-() const {
  Poly r;
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly r;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Poly::Exps e = ea;
      if (e.size() < eb.size()) e.resize(eb.size(), 0);
      for (std::size_t i = 0; i < eb.size(); ++i) e[i] = static_cast<uint16_t>(e[i] + eb[i]);
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Poly operator*(const Rat& c, Poly a) {
  if (diracwb::is_zero(c)) return Poly{};
  for (auto& [e, coef] : a.terms_) coef *= c;
  return a;
}

Poly Poly::derivative(int i) const {
  Poly r;
  for (const auto& [e, c] : terms_) {
    if (static_cast<std::size_t>(i) >= e.size() || e[i] == 0) continue;
    Exps de = e;
    de[i]--;
    trim(de);
    r.add_term(de, c * e[i]);
  }
  return r;
}

Rat Poly::evaluate(const std::vector<Rat>& point) const {
  Rat v = 0;
  for (const auto& [e, c] : terms_) {
    if (e.size() > point.size())
      throw DimensionMismatch("evaluate: point dimension " + std::to_string(point.size()) +
                              " < variable count " + std::to_string(e.size()));
    Rat t = c;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) t *= point[i];
    v += t;
  }
  return v;
}

Poly Poly::exact_div(const Poly& dividend, const Poly& divisor) {
  if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
  Poly q;
  Poly r = dividend;
  const auto& dl = *divisor.terms_.rbegin();  // leading term (lex-max)
  while (!r.is_zero()) {
    const auto& rl = *r.terms_.rbegin();
    if (!divides(dl.first, rl.first))
      throw std::domain_error("polynomial division is not exact");
    Poly t;
    t.add_term(exps_sub(rl.first, dl.first), rl.second / dl.second);
    q += t;
    r -= t * divisor;
  }
  return q;
}

Rat Poly::content() const {
  if (terms_.empty()) return 1;
  Int g = 0, l = 1;
  for (const auto& [e, c] : terms_) {
    g = gcd(g, c.get_num());
    l = lcm(l, c.get_den());
  }
  Rat r(g, l);
  r.canonicalize();
  if (sgn(terms_.rbegin()->second) < 0) r = -r;
  return r;
}

Poly Poly::primitive_part() const {
  if (terms_.empty()) return {};
  return (Rat(1) / content()) * (*this);
}

Superfunction Poly::to_superfunction() const {
  Superfunction f;
  for (const auto& [e, c] : terms_) {
    Mono m;
    m.xexp = e;
    f += Superfunction::monomial(m, c);
  }
  return f;
}

Poly Poly::from_superfunction(const Superfunction& f) {
  Poly p;
  for (const auto& [m, c] : f.terms()) {
    if (!m.pexp.empty() || m.xi != 0 || m.th != 0)
      throw std::domain_error("superfunction is not a base polynomial: " + f.render());
    p.add_term(m.xexp, c);
  }
  return p;
}

std::string Poly::render(const Names* names) const {
  Superfunction f = to_superfunction();
  return f.render(names);
}

// ---------------------------------------------------------------------------

RatFunc::RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = Poly::constant(1);
    return;
  }
  if (den_.is_constant()) {
    num_ = (Rat(1) / den_.as_constant()) * num_;
    den_ = Poly::constant(1);
    return;
  }
  try {
    Poly q = Poly::exact_div(num_, den_);
    num_ = std::move(q);
    den_ = Poly::constant(1);
    return;
  } catch (const std::domain_error&) {
    // leave as a genuine fraction
  }
  Rat c = den_.content();
  den_ = (Rat(1) / c) * den_;
  num_ = (Rat(1) / c) * num_;
}

Poly RatFunc::as_polynomial() const {
  if (!is_polynomial())
    throw std::domain_error("rational function is not polynomial: " + render());
  return num_;
}

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
  if (a.den_ == b.den_) return RatFunc(a.num_ + b.num_, a.den_);
  return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFunc operator-(const RatFunc& a, const RatFunc& b) { return a + (-b); }

RatFunc operator*(const RatFunc& a, const RatFunc& b) {
  return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
}

RatFunc operator/(const RatFunc& a, const RatFunc& b) {
  if (b.is_zero()) throw std::domain_error("division by zero rational function");
  return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
}

bool RatFunc::operator==(const RatFunc& o) const {
  return (num_ * o.den_ - o.num_ * den_).is_zero();
}

RatFunc RatFunc::derivative(int i) const {
  if (is_polynomial()) return RatFunc(num_.derivative(i));
  return RatFunc(num_.derivative(i) * den_ - num_ * den_.derivative(i), den_ * den_);
}

std::string RatFunc::render(const Names* names) const {
  if (is_polynomial()) return num_.render(names);
  return "(" + num_.render(names) + ")/(" + den_.render(names) + ")";
}

}  // namespace diracwb
