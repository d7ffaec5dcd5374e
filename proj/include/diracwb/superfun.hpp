#pragma once

#include "diracwb/rational.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace diracwb {

// Bidegree of an element of the bigraded algebra on coordinates
// x^i (0,0), xi^a (0,1), p_i (1,1), theta_a (1,0).
struct Bidegree {
  int p = 0;
  int q = 0;

  int total() const { return p + q; }
  int parity() const { return ((p + q) % 2 + 2) % 2; }

  Bidegree operator+(const Bidegree& o) const { return {p + o.p, q + o.q}; }
  Bidegree operator-(const Bidegree& o) const { return {p - o.p, q - o.q}; }
  auto operator<=>(const Bidegree&) const = default;
};

// One monomial. Canonical factor order: x block, p block, xi block, theta
// block, indices ascending within each block; odd generators appear at most
// once. Reordering signs are absorbed into coefficients at construction.
struct Mono {
  std::vector<uint16_t> xexp;  // exponents of x^i, trailing zeros trimmed
  std::vector<uint16_t> pexp;  // exponents of p_i
  uint32_t xi = 0;             // bitmask of xi^a factors
  uint32_t th = 0;             // bitmask of theta_a factors

  void trim();
  bool is_constant() const { return xexp.empty() && pexp.empty() && xi == 0 && th == 0; }
  int pdeg() const;  // sum of p exponents
  int xdeg() const;
  Bidegree bidegree() const;
  int parity() const { return bidegree().parity(); }

  auto operator<=>(const Mono&) const = default;
};

// Multiplies monomials; returns the Koszul sign (+1/-1) or 0 when an odd
// generator repeats.
int mono_mul(const Mono& a, const Mono& b, Mono& out);

// Names used by the deterministic plain-text rendering.
struct Names {
  std::vector<std::string> base;     // x^i
  std::vector<std::string> momenta;  // p_i
  std::vector<std::string> coframe;  // xi^a
  std::vector<std::string> frame;    // theta_a
};

class DimensionMismatch : public std::runtime_error {
 public:
  explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

// Element of the bigraded supercommutative algebra with exact rational
// coefficients; coefficients in the base coordinates are polynomials folded
// into the term keys. Immutable value semantics: every operation returns a
// normalized element, zero terms are pruned, equality is term-map equality.
class Superfunction {
 public:
  using TermMap = std::map<Mono, Rat>;

  Superfunction() = default;

  static Superfunction constant(const Rat& c);
  static Superfunction x(int i, int exponent = 1);
  static Superfunction p(int i, int exponent = 1);
  static Superfunction xi(int a);
  static Superfunction theta(int a);
  static Superfunction monomial(const Mono& m, const Rat& c);

  bool is_zero() const { return terms_.empty(); }
  const TermMap& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  Superfunction& operator+=(const Superfunction& o);
  Superfunction& operator-=(const Superfunction& o);
  friend Superfunction operator+(Superfunction a, const Superfunction& b) { return a += b; }
  friend Superfunction operator-(Superfunction a, const Superfunction& b) { return a -= b; }
  Superfunction operator-() const;

  friend Superfunction operator*(const Superfunction& a, const Superfunction& b);
  friend Superfunction operator*(const Rat& c, Superfunction a);
  friend Superfunction operator*(Superfunction a, const Rat& c) { return c * std::move(a); }

  bool operator==(const Superfunction& o) const { return terms_ == o.terms_; }

  // Common bidegree of all terms; nullopt when zero or inhomogeneous.
  std::optional<Bidegree> bidegree() const;
  // True when every term has bidegree d (so in particular for zero).
  bool is_homogeneous_of(const Bidegree& d) const;

  Superfunction homogeneous_part(const Bidegree& d) const;
  std::map<Bidegree, Superfunction> bidegree_components() const;

  // Substitutes rational values for the base coordinates x^i.
  Superfunction evaluate(const std::vector<Rat>& base_point) const;

  // Rational coefficient of an exact monomial key.
  Rat coefficient(const Mono& m) const;

  std::string render(const Names* names = nullptr) const;

 private:
  void add_term(const Mono& m, const Rat& c);
  TermMap terms_;
};

// The canonical even Poisson bracket of bidegree (-1,-1): {x^i,p_j} = d^i_j,
// {xi^a,theta_b} = d^a_b, extended as a graded biderivation with Koszul signs
// taken from total-degree parity.
Superfunction big_bracket(const Superfunction& u, const Superfunction& v);

std::string mono_to_string(const Mono& m, const Names* names = nullptr);

}  // namespace diracwb
