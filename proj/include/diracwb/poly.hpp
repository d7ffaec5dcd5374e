#pragma once

#include "diracwb/rational.hpp"
#include "diracwb/superfun.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace diracwb {

// Sparse multivariate polynomial in the base coordinates over Rat.
// Keys are exponent vectors with trailing zeros trimmed, ordered
// lexicographically; the map order is the monomial order used throughout
// (leading term = last map entry).
class Poly {
 public:
  using Exps = std::vector<uint16_t>;
  using TermMap = std::map<Exps, Rat>;

  Poly() = default;
  Poly(long c) { *this = constant(Rat(c)); }  // NOLINT: implicit by design
  Poly(const Rat& c) { *this = constant(c); }

  static Poly constant(const Rat& c);
  static Poly variable(int i, int exponent = 1);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Value when constant; throws otherwise.
  Rat as_constant() const;
  int total_degree() const;  // -1 for the zero polynomial
  const TermMap& terms() const { return terms_; }

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const;
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Rat& c, Poly a);
  friend Poly operator*(Poly a, const Rat& c) { return c * std::move(a); }
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  Poly derivative(int i) const;
  Rat evaluate(const std::vector<Rat>& point) const;

  // Quotient of an exact division; throws std::domain_error when not exact.
  static Poly exact_div(const Poly& dividend, const Poly& divisor);

  // Largest rational c with (*this)/c integer-coefficient and primitive;
  // sign chosen so the result's leading coefficient is positive.
  Rat content() const;
  Poly primitive_part() const;

  Superfunction to_superfunction() const;
  // Requires a (0,0)-element depending on x only.
  static Poly from_superfunction(const Superfunction& f);

  std::string render(const Names* names = nullptr) const;

 private:
  void add_term(const Exps& e, const Rat& c);
  TermMap terms_;
};

// Rational function num/den over the base coordinates. Kept normalized:
// den nonzero, den primitive with positive leading coefficient, den == 1
// whenever the division is exact. No multivariate gcd is attempted beyond
// exact-division simplification; equality is tested by cross-multiplication.
class RatFunc {
 public:
  RatFunc() : num_(), den_(Poly::constant(1)) {}
  RatFunc(long c) : RatFunc(Poly(c)) {}  // NOLINT: implicit by design
  RatFunc(const Rat& c) : RatFunc(Poly(c)) {}
  RatFunc(Poly num) : num_(std::move(num)), den_(Poly::constant(1)) {}  // NOLINT
  RatFunc(Poly num, Poly den);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  Poly as_polynomial() const;  // throws when the denominator is nontrivial

  RatFunc operator-() const;
  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

  bool operator==(const RatFunc& o) const;

  RatFunc derivative(int i) const;

  std::string render(const Names* names = nullptr) const;

 private:
  void normalize();
  Poly num_, den_;
};

}  // namespace diracwb
