#pragma once

#include <map>

#include "varjet/jet.hpp"

namespace varjet {

// ---------------------------------------------------------------------------
// Ordinary exterior forms over a finite coordinate chart. Generators are the
// coordinate differentials dz_i; monomial keys are strictly increasing index
// lists with the sorting sign absorbed into the coefficient.

class ExteriorForm {
 public:
  ExteriorForm() = default;
  explicit ExteriorForm(int dim, int degree) : dim_(dim), degree_(degree) {}

  static ExteriorForm scalar(int dim, const Expr& e);
  static ExteriorForm d_coord(int dim, int i);  // the 1-form dz_i

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<std::vector<int>, Expr>& terms() const { return terms_; }

  void add_term(std::vector<int> gens, const Expr& coeff);  // gens unsorted ok

  friend ExteriorForm operator+(const ExteriorForm& a, const ExteriorForm& b);
  ExteriorForm& operator+=(const ExteriorForm& o) { return *this = *this + o; }
  ExteriorForm operator*(const Expr& c) const;

  friend ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b);

  /// exterior derivative; coefficients differentiated in the chart coords
  ExteriorForm d() const;

  /// Pullback along the map whose i-th component (an expression in the
  /// source chart of dimension source_dim) is images[i].
  ExteriorForm pullback(const std::vector<Expr>& images, int source_dim) const;

  friend bool operator==(const ExteriorForm& a, const ExteriorForm& b) {
    return a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

 private:
  int dim_ = 0;
  int degree_ = 0;
  std::map<std::vector<int>, Expr> terms_;
};

// ---------------------------------------------------------------------------
// The variational bicomplex: forms on the infinite jet bundle in the basis
// {dx^mu, theta^a_I}, theta^a_I = du^a_I - u^a_{I+mu} dx^mu.

struct ContactGenerator {
  int field = 0;
  MultiIndex index;

  friend bool operator==(const ContactGenerator& a, const ContactGenerator& b) {
    return a.field == b.field && a.index.counts == b.index.counts;
  }
};
int compare(const ContactGenerator& a, const ContactGenerator& b);

struct FormMonomial {
  std::vector<int> dx;                   // strictly increasing
  std::vector<ContactGenerator> theta;   // strictly increasing

  friend bool operator==(const FormMonomial& a, const FormMonomial& b) {
    return a.dx == b.dx && a.theta == b.theta;
  }
};
int compare(const FormMonomial& a, const FormMonomial& b);
struct FormMonomialLess {
  bool operator()(const FormMonomial& a, const FormMonomial& b) const {
    return compare(a, b) < 0;
  }
};

/// Element of Omega^{s,r}: s = contact (vertical) degree, r = horizontal
/// degree. Monomials are stored dx-block then theta-block; forms with
/// r > base_dim collapse to zero at construction.
class BigradedForm {
 public:
  BigradedForm() = default;
  BigradedForm(const BundleSignature& sig, int s, int r);

  static BigradedForm scalar(const BundleSignature& sig, const Expr& e);
  static BigradedForm dx(const BundleSignature& sig, int mu);
  static BigradedForm theta(const BundleSignature& sig, int field,
                            const MultiIndex& I);
  /// horizontal volume form dx^1 ^ ... ^ dx^m
  static BigradedForm volume(const BundleSignature& sig);

  std::pair<int, int> bidegree() const { return {s_, r_}; }
  int total_degree() const { return s_ + r_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<FormMonomial, Expr, FormMonomialLess>& terms() const {
    return terms_;
  }
  const BundleSignature& signature() const;

  void add_term(const FormMonomial& m, const Expr& coeff, int sign = 1);

  friend BigradedForm operator+(const BigradedForm& a, const BigradedForm& b);
  BigradedForm& operator+=(const BigradedForm& o) { return *this = *this + o; }
  BigradedForm operator-() const;
  BigradedForm operator*(const Expr& c) const;

  friend bool operator==(const BigradedForm& a, const BigradedForm& b);

 private:
  const BundleSignature* sig_ = nullptr;
  int s_ = 0, r_ = 0;
  std::map<FormMonomial, Expr, FormMonomialLess> terms_;
};

BigradedForm wedge(const BigradedForm& a, const BigradedForm& b);

/// d_H: (s,r) -> (s,r+1). On coefficients D_mu f dx^mu, on generators
/// d_H dx = 0, d_H theta^a_I = dx^mu ^ theta^a_{I+mu}.
BigradedForm d_horizontal(const BigradedForm& w);

/// d_V: (s,r) -> (s+1,r). d_V f = df/du^a_I theta^a_I, d_V dx = d_V theta = 0.
BigradedForm d_vertical(const BigradedForm& w);

/// Family of sections polynomial in p parameters: component a is an
/// expression over the chart (eps_1..eps_p, x^1..x^m), parameters first.
struct SectionFamily {
  int params = 0;
  std::vector<Expr> components;  // indexed by field, over the family chart
};

/// Pullback along ev_infty of the family: u^a_I -> d_I phi^a,
/// dx^mu -> dx^mu, theta^a_I -> d(d_I phi^a)/d eps_j  d eps_j. The result
/// lives on the (p+m)-dimensional family chart, generators eps-first.
ExteriorForm ev_pullback(const BigradedForm& w, const SectionFamily& family);

/// ev_infty pullback of a scalar expression (coefficient substitution only).
Expr ev_pullback_scalar(const Expr& e, const SectionFamily& family,
                        const BundleSignature& sig);

std::string to_latex(const BigradedForm& w);

}  // namespace varjet
