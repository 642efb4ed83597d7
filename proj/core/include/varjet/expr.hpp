#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "varjet/signature.hpp"

namespace varjet {

using Rational = boost::multiprecision::cpp_rational;

Rational rational_pow(const Rational& q, int n);

struct eval_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Func { Sin, Cos, Exp, Log };
const char* func_name(Func f);

/// Jet coordinate u^a_I: field index into the signature plus a multi-index.
struct JetCoordinate {
  int field = 0;
  MultiIndex index;

  friend bool operator==(const JetCoordinate& x, const JetCoordinate& y) {
    return x.field == y.field && x.index == y.index;
  }
};

class Expr;

/// Irreducible factor of a monomial. Indices refer to the owning signature.
struct Atom {
  enum class Kind { Base, Param, Jet, Func, Pow };
  Kind kind = Kind::Base;

  int base = 0;               // Kind::Base
  std::string param;          // Kind::Param
  JetCoordinate jet;          // Kind::Jet
  Func fn = Func::Sin;        // Kind::Func
  std::shared_ptr<const Expr> sub;  // Func argument / Pow base (a true sum)
  int pow_exp = 0;            // Kind::Pow; < 0 or > 4 by canonical form

  static Atom base_coord(int i);
  static Atom parameter(std::string name);
  static Atom jet_coord(int field, MultiIndex I);
  static Atom func(Func f, const Expr& arg);
  static Atom opaque_pow(const Expr& b, int exp);
};

int compare(const Atom& a, const Atom& b);

struct Factor {
  Atom atom;
  int exp = 1;  // nonzero; may be negative
};

/// Product of atom powers, sorted by atom order; the constant monomial is
/// the empty factor list.
struct Monomial {
  std::vector<Factor> factors;
  int degree() const;
};

int compare(const Monomial& a, const Monomial& b);

/// Coordinate/parameter values for numeric evaluation.
struct Valuation {
  std::vector<double> base;                               // by base index
  std::map<int, std::map<std::vector<int>, double>> jets; // field -> counts -> value
  std::map<std::string, double> params;

  double jet_value(const JetCoordinate& c) const;
};

/// Immutable symbolic expression in canonical normal form: a sum of ordered
/// monomials with collected nonzero rational coefficients. Polynomial
/// expressions that are equal as functions share one representation; integer
/// powers of sums are expanded up to exponent 4 and kept opaque beyond.
class Expr {
 public:
  Expr();  // zero

  static Expr zero();
  static Expr one();
  static Expr constant(Rational q);
  static Expr integer(long long n) { return constant(Rational(n)); }
  static Expr base_coord(int i);
  static Expr parameter(std::string name);
  static Expr jet(int field, MultiIndex I);
  static Expr jet(const JetCoordinate& c) { return jet(c.field, c.index); }
  static Expr apply(Func f, const Expr& arg);
  static Expr from_atom(Atom a);

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// defined only when is_constant()
  Rational constant_value() const;

  struct Term {
    Rational coeff;
    Monomial mono;
  };
  const std::vector<Term>& terms() const { return terms_; }

  Expr operator-() const;
  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr& operator+=(const Expr& o) { return *this = *this + o; }
  Expr& operator-=(const Expr& o) { return *this = *this - o; }
  Expr& operator*=(const Expr& o) { return *this = *this * o; }
  friend Expr operator*(const Rational& q, const Expr& e) {
    return Expr::constant(q) * e;
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    return compare_expr(a, b) == 0;
  }
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }
  friend bool operator<(const Expr& a, const Expr& b) {
    return compare_expr(a, b) < 0;
  }
  static int compare_expr(const Expr& a, const Expr& b);

  /// Integer power with canonical expansion policy (sums expanded for
  /// 0 <= n <= 4, opaque otherwise).
  friend Expr pow(const Expr& e, int n);

  /// Formal partial derivative w.r.t. a base or jet coordinate; all jet
  /// coordinates are treated as independent.
  Expr partial(const Atom& coordinate) const;
  Expr partial_base(int mu) const;
  Expr partial_jet(const JetCoordinate& c) const;

  /// Maximum |I| over all jet coordinates occurring anywhere in the tree.
  int order() const;
  int degree() const;

  /// All jet coordinates occurring in the expression (recursively).
  std::vector<JetCoordinate> jet_coordinates() const;
  /// True if no jet coordinate and no base coordinate occurs.
  bool is_coordinate_free() const;
  bool depends_on(const Atom& coordinate) const;

  double evaluate(const Valuation& v) const;

  /// Atom-wise substitution; atoms mapped to std::nullopt are kept. The
  /// substitution recurses into function arguments and opaque-power bases,
  /// and the result is renormalized.
  using AtomMap = std::function<std::optional<Expr>(const Atom&)>;
  Expr substitute(const AtomMap& m) const;
  /// Replace every base coordinate i by images[i].
  Expr substitute_base(const std::vector<Expr>& images) const;

  std::string str(const BundleSignature& sig) const;
  std::string latex(const BundleSignature& sig) const;

  /// Canonicalizes a raw term list (sort, collect, drop zeros). The terms
  /// themselves must already be canonical monomials.
  static Expr from_terms(std::vector<Term> t);

 private:
  std::vector<Term> terms_;
};

/// Identity on the canonical representation; exposed for idempotence tests.
inline Expr normalize(const Expr& e) { return e; }


}  // namespace varjet
