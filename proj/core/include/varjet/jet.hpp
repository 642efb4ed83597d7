#pragma once

#include <map>

#include "varjet/expr.hpp"

namespace varjet {

/// Section of the trivial bundle: one expression per field, in base
/// coordinates only.
struct Section {
  std::vector<Expr> components;  // indexed by field

  /// throws if a component mentions a jet coordinate
  static Section make(const BundleSignature& sig, std::vector<Expr> comps);

  /// symbolic iterated partial of component a
  Expr derivative(int field, const MultiIndex& I) const;
};

/// Point of a finite-order jet space: base position plus every jet
/// coordinate with |I| <= order, all exact rationals.
struct JetPoint {
  std::vector<Rational> base;
  std::map<std::pair<int, std::vector<int>>, Rational> coords;
  int order = 0;

  friend bool operator==(const JetPoint& a, const JetPoint& b) {
    return a.base == b.base && a.coords == b.coords && a.order == b.order;
  }
};

/// Vertical (evolutionary) vector field with characteristics Q^a; prolongs
/// to pr Q = sum_{a,I} (D_I Q^a) d/du^a_I.
struct EvolutionaryField {
  std::vector<Expr> characteristics;  // indexed by field

  static EvolutionaryField zero(const BundleSignature& sig) {
    return {std::vector<Expr>(static_cast<size_t>(sig.field_count()))};
  }
};

/// D_mu f = df/dx^mu + sum_{a,I in f} u^a_{I+mu} df/du^a_I
Expr total_derivative(const Expr& e, int mu, const BundleSignature& sig);
Expr iterated_total_derivative(const Expr& e, const MultiIndex& I,
                               const BundleSignature& sig);
/// divergence sum_mu D_mu P^mu of a current
Expr total_divergence(const std::vector<Expr>& current,
                      const BundleSignature& sig);

/// pr Q applied to e; only the jet coordinates occurring in e contribute.
Expr apply_prolonged(const EvolutionaryField& q, const Expr& e,
                     const BundleSignature& sig);

/// Substitutes u^a_I -> d_I phi^a and evaluates at the base point.
double evaluate_on_section(const Expr& e, const Section& phi,
                           const std::vector<double>& x,
                           const BundleSignature& sig,
                           const std::map<std::string, double>& params = {});

/// Symbolic pullback along a section: u^a_I -> d_I phi^a as an expression
/// in base coordinates.
Expr pull_back_to_base(const Expr& e, const Section& phi,
                       const BundleSignature& sig);

/// Discards jet coordinates of order above l.
JetPoint tower_project(const JetPoint& p, int l);

/// Exact prolongation of a polynomial section at a rational base point.
JetPoint jet_prolong_section(const Section& phi, const std::vector<Rational>& x,
                             int order, const BundleSignature& sig);

/// Exact evaluation of a polynomial expression in base coordinates.
Rational evaluate_rational(const Expr& e, const std::vector<Rational>& base);

}  // namespace varjet
