#include "varjet/jet.hpp"

namespace varjet {

Section Section::make(const BundleSignature& sig, std::vector<Expr> comps) {
  sig.require_fields();
  if (comps.size() != static_cast<size_t>(sig.field_count()))
    throw signature_error("section: wrong component count");
  for (const auto& c : comps)
    if (!c.jet_coordinates().empty())
      throw signature_error("section component mentions a jet coordinate");
  return Section{std::move(comps)};
}

Expr Section::derivative(int field, const MultiIndex& I) const {
  Expr e = components.at(static_cast<size_t>(field));
  for (int d = 0; d < I.dim(); ++d)
    for (int k = 0; k < I.counts[size_t(d)]; ++k) e = e.partial_base(d);
  return e;
}

Expr total_derivative(const Expr& e, int mu, const BundleSignature& sig) {
  if (mu < 0 || mu >= sig.base_dim())
    throw signature_error("total_derivative: base index out of range");
  Expr r = e.partial_base(mu);
  for (const auto& c : e.jet_coordinates()) {
    Expr df = e.partial_jet(c);
    if (df.is_zero()) continue;
    r += Expr::jet(c.field, c.index.bumped(mu)) * df;
  }
  return r;
}

Expr iterated_total_derivative(const Expr& e, const MultiIndex& I,
                               const BundleSignature& sig) {
  Expr r = e;
  for (int d = 0; d < I.dim(); ++d)
    for (int k = 0; k < I.counts[size_t(d)]; ++k)
      r = total_derivative(r, d, sig);
  return r;
}

Expr total_divergence(const std::vector<Expr>& current,
                      const BundleSignature& sig) {
  if (current.size() != static_cast<size_t>(sig.base_dim()))
    throw signature_error("current: wrong component count");
  Expr r;
  for (int mu = 0; mu < sig.base_dim(); ++mu)
    r += total_derivative(current[size_t(mu)], mu, sig);
  return r;
}

Expr apply_prolonged(const EvolutionaryField& q, const Expr& e,
                     const BundleSignature& sig) {
  if (q.characteristics.size() != static_cast<size_t>(sig.field_count()))
    throw signature_error("evolutionary field: wrong component count");
  Expr r;
  for (const auto& c : e.jet_coordinates()) {
    Expr df = e.partial_jet(c);
    if (df.is_zero()) continue;
    r += iterated_total_derivative(q.characteristics[size_t(c.field)], c.index,
                                   sig) *
         df;
  }
  return r;
}

Expr pull_back_to_base(const Expr& e, const Section& phi,
                       const BundleSignature& sig) {
  return e.substitute([&](const Atom& a) -> std::optional<Expr> {
    if (a.kind != Atom::Kind::Jet) return std::nullopt;
    return phi.derivative(a.jet.field, a.jet.index);
  });
}

double evaluate_on_section(const Expr& e, const Section& phi,
                           const std::vector<double>& x,
                           const BundleSignature& sig,
                           const std::map<std::string, double>& params) {
  Valuation v;
  v.base = x;
  v.params = params;
  return pull_back_to_base(e, phi, sig).evaluate(v);
}

JetPoint tower_project(const JetPoint& p, int l) {
  if (l > p.order || l < 0)
    throw signature_error("tower_project: target order out of range");
  JetPoint r;
  r.base = p.base;
  r.order = l;
  for (const auto& [key, val] : p.coords) {
    int o = 0;
    for (int k : key.second) o += k;
    if (o <= l) r.coords.emplace(key, val);
  }
  return r;
}

Rational evaluate_rational(const Expr& e, const std::vector<Rational>& base) {
  Rational acc(0);
  for (const auto& t : e.terms()) {
    Rational m = t.coeff;
    for (const auto& f : t.mono.factors) {
      if (f.atom.kind != Atom::Kind::Base)
        throw eval_error("evaluate_rational: non-polynomial atom");
      if (f.atom.base < 0 || static_cast<size_t>(f.atom.base) >= base.size())
        throw eval_error("evaluate_rational: missing base value");
      m *= rational_pow(base[static_cast<size_t>(f.atom.base)], f.exp);
    }
    acc += m;
  }
  return acc;
}

namespace {
void enumerate_indices(int dim, int max_order,
                       std::vector<MultiIndex>& out) {
  // all multi-indices with |I| <= max_order, graded order
  std::vector<int> counts(static_cast<size_t>(dim), 0);
  std::function<void(int, int)> rec = [&](int d, int remaining) {
    if (d == dim) {
      out.push_back(MultiIndex(counts));
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      counts[size_t(d)] = k;
      rec(d + 1, remaining - k);
      counts[size_t(d)] = 0;
    }
  };
  rec(0, max_order);
}
}  // namespace

JetPoint jet_prolong_section(const Section& phi, const std::vector<Rational>& x,
                             int order, const BundleSignature& sig) {
  if (order < 0) throw signature_error("jet_prolong_section: negative order");
  JetPoint p;
  p.base = x;
  p.order = order;
  std::vector<MultiIndex> indices;
  enumerate_indices(sig.base_dim(), order, indices);
  for (int a = 0; a < sig.field_count(); ++a)
    for (const auto& I : indices)
      p.coords[{a, I.counts}] = evaluate_rational(phi.derivative(a, I), x);
  return p;
}

}  // namespace varjet
