#include "varjet/variational.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace varjet {

SourceForm euler_lagrange(const Lagrangian& L, const BundleSignature& sig) {
  sig.require_fields();
  SourceForm out;
  out.components.resize(static_cast<size_t>(sig.field_count()));
  for (const auto& c : L.density.jet_coordinates()) {
    Expr dL = L.density.partial_jet(c);
    if (dL.is_zero()) continue;
    Expr term = iterated_total_derivative(dL, c.index, sig);
    if (c.index.order() % 2 == 1) term = -term;
    out.components[size_t(c.field)] += term;
  }
  return out;
}

FirstVariation first_variation_decompose(const Lagrangian& L,
                                         const EvolutionaryField& Q,
                                         const BundleSignature& sig) {
  sig.require_fields();
  FirstVariation fv;
  fv.boundary = Current::zero(sig);
  std::vector<Expr> interior_weight(static_cast<size_t>(sig.field_count()));

  struct Item {
    int field;
    MultiIndex index;
    Expr weight;
  };
  std::deque<Item> work;
  for (const auto& c : L.density.jet_coordinates()) {
    Expr dL = L.density.partial_jet(c);
    if (!dL.is_zero()) work.push_back({c.field, c.index, dL});
  }
  // peel one total derivative off D_I Q^a at a time:
  //   D_I Q . W = D_mu(D_{I-mu} Q . W) - D_{I-mu} Q . D_mu W
  while (!work.empty()) {
    Item it = std::move(work.front());
    work.pop_front();
    if (it.index.is_zero()) {
      interior_weight[size_t(it.field)] += it.weight;
      continue;
    }
    int mu = 0;
    while (it.index.counts[size_t(mu)] == 0) ++mu;
    MultiIndex lower = it.index.lowered(mu);
    Expr dq = iterated_total_derivative(Q.characteristics[size_t(it.field)],
                                        lower, sig);
    fv.boundary.components[size_t(mu)] += dq * it.weight;
    work.push_back(
        {it.field, lower, -total_derivative(it.weight, mu, sig)});
  }
  for (int a = 0; a < sig.field_count(); ++a)
    fv.interior += Q.characteristics[size_t(a)] * interior_weight[size_t(a)];
  return fv;
}

// ---------------------------------------------------------------------------
// exact divergence inversion on the star-shaped chart

namespace {

bool is_polynomial(const Expr& e) {
  for (const auto& t : e.terms())
    for (const auto& f : t.mono.factors)
      if (f.atom.kind == Atom::Kind::Func || f.atom.kind == Atom::Kind::Pow ||
          f.exp < 0)
        return false;
  return true;
}

// splits off the parameter sub-monomial of each term, returning a map
// param-monomial (as Expr) -> parameter-free part
std::map<Expr, Expr> split_by_params(const Expr& e) {
  std::map<Expr, Expr> out;
  for (const auto& t : e.terms()) {
    std::vector<Factor> pm, rest;
    for (const auto& f : t.mono.factors)
      (f.atom.kind == Atom::Kind::Param ? pm : rest).push_back(f);
    std::vector<Expr::Term> key_t, val_t;
    key_t.push_back(Expr::Term{Rational(1), Monomial{pm}});
    val_t.push_back(Expr::Term{t.coeff, Monomial{rest}});
    out[Expr::from_terms(std::move(key_t))] += Expr::from_terms(std::move(val_t));
  }
  return out;
}

void jet_degrees(const Expr& e, int& jet_deg, int& base_deg) {
  jet_deg = 0;
  base_deg = 0;
  for (const auto& t : e.terms()) {
    int jd = 0, bd = 0;
    for (const auto& f : t.mono.factors) {
      if (f.atom.kind == Atom::Kind::Jet) jd += f.exp;
      if (f.atom.kind == Atom::Kind::Base) bd += f.exp;
    }
    jet_deg = std::max(jet_deg, jd);
    base_deg = std::max(base_deg, bd);
  }
}

void enumerate_multiindices(int dim, int max_order, std::vector<MultiIndex>& out) {
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

// all monomials with jet-degree <= jd over variables of order <= max_order
// and base-degree <= bd
std::vector<Expr> ansatz_monomials(const BundleSignature& sig, int max_order,
                                   int jd, int bd) {
  std::vector<Expr> vars;
  std::vector<MultiIndex> idx;
  enumerate_multiindices(sig.base_dim(), max_order, idx);
  for (int a = 0; a < sig.field_count(); ++a)
    for (const auto& I : idx) vars.push_back(Expr::jet(a, I));
  std::vector<Expr> base_vars;
  for (int mu = 0; mu < sig.base_dim(); ++mu)
    base_vars.push_back(Expr::base_coord(mu));

  std::vector<Expr> jet_part{Expr::one()};
  std::function<void(size_t, int, Expr)> rec_jet = [&](size_t i, int left,
                                                       Expr acc) {
    if (i == vars.size()) return;
    rec_jet(i + 1, left, acc);
    for (int k = 1; k <= left; ++k) {
      acc = acc * vars[i];
      jet_part.push_back(acc);
      rec_jet(i + 1, left - k, acc);
    }
  };
  rec_jet(0, jd, Expr::one());

  std::vector<Expr> base_part{Expr::one()};
  std::function<void(size_t, int, Expr)> rec_base = [&](size_t i, int left,
                                                        Expr acc) {
    if (i == base_vars.size()) return;
    rec_base(i + 1, left, acc);
    for (int k = 1; k <= left; ++k) {
      acc = acc * base_vars[i];
      base_part.push_back(acc);
      rec_base(i + 1, left - k, acc);
    }
  };
  rec_base(0, bd, Expr::one());

  std::vector<Expr> out;
  for (const auto& j : jet_part)
    for (const auto& b : base_part) out.push_back(j * b);
  return out;
}

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return compare(a, b) < 0;
  }
};

// solves sum_mu D_mu K^mu = f over the given monomial ansatz; exact Gaussian
// elimination over the rationals
std::optional<Current> solve_divergence(const Expr& f,
                                        const BundleSignature& sig,
                                        const std::vector<Expr>& ansatz) {
  const int m = sig.base_dim();
  struct Column {
    int mu;
    size_t mono;
    std::map<Monomial, Rational, MonoLess> entries;
  };
  std::vector<Column> cols;
  std::map<Monomial, int, MonoLess> rows;
  auto row_of = [&](const Monomial& mo) {
    auto [it, fresh] = rows.emplace(mo, static_cast<int>(rows.size()));
    return it->second;
  };
  for (int mu = 0; mu < m; ++mu)
    for (size_t i = 0; i < ansatz.size(); ++i) {
      Expr d = total_derivative(ansatz[i], mu, sig);
      if (d.is_zero()) continue;
      Column c{mu, i, {}};
      for (const auto& t : d.terms()) {
        c.entries[t.mono] = t.coeff;
        row_of(t.mono);
      }
      cols.push_back(std::move(c));
    }
  for (const auto& t : f.terms()) row_of(t.mono);

  const size_t nr = rows.size(), nc = cols.size();
  std::vector<std::vector<Rational>> A(nr, std::vector<Rational>(nc + 1));
  for (size_t j = 0; j < nc; ++j)
    for (const auto& [mo, v] : cols[j].entries)
      A[size_t(rows.at(mo))][j] = v;
  for (const auto& t : f.terms()) A[size_t(rows.at(t.mono))][nc] = t.coeff;

  std::vector<int> pivot_col(nr, -1);
  size_t rank = 0;
  for (size_t j = 0; j < nc && rank < nr; ++j) {
    size_t p = rank;
    while (p < nr && A[p][j] == 0) ++p;
    if (p == nr) continue;
    std::swap(A[p], A[rank]);
    Rational inv = Rational(1) / A[rank][j];
    for (size_t k = j; k <= nc; ++k) A[rank][k] *= inv;
    for (size_t i = 0; i < nr; ++i) {
      if (i == rank || A[i][j] == 0) continue;
      Rational factor = A[i][j];
      for (size_t k = j; k <= nc; ++k) A[i][k] -= factor * A[rank][k];
    }
    pivot_col[rank] = static_cast<int>(j);
    ++rank;
  }
  for (size_t i = rank; i < nr; ++i)
    if (A[i][nc] != 0) return std::nullopt;  // inconsistent

  Current K = Current::zero(sig);
  for (size_t i = 0; i < rank; ++i) {
    int j = pivot_col[i];
    if (j < 0 || A[i][size_t(nc)] == 0) continue;
    const Column& c = cols[size_t(j)];
    K.components[size_t(c.mu)] +=
        Expr::constant(A[i][size_t(nc)]) * ansatz[c.mono];
  }
  return K;
}

}  // namespace

std::optional<Current> invert_total_divergence(const Expr& f,
                                               const BundleSignature& sig) {
  if (f.is_zero()) return Current::zero(sig);
  if (!is_polynomial(f))
    throw eval_error("invert_total_divergence: polynomial input required");
  Current K = Current::zero(sig);
  for (const auto& [pm, part] : split_by_params(f)) {
    int jd = 0, bd = 0;
    jet_degrees(part, jd, bd);
    std::optional<Current> piece;
    for (int k = std::max(part.order() - 1, 0); k <= part.order() && !piece;
         ++k) {
      auto ansatz = ansatz_monomials(sig, k, jd, bd + 1);
      piece = solve_divergence(part, sig, ansatz);
    }
    if (!piece) return std::nullopt;
    for (int mu = 0; mu < sig.base_dim(); ++mu)
      K.components[size_t(mu)] += pm * piece->components[size_t(mu)];
  }
  // defensive exactness check of the solver output
  if (total_divergence(K.components, sig) != f)
    return std::nullopt;
  return K;
}

SymmetryVerdict is_divergence_symmetry(const Lagrangian& L,
                                       const EvolutionaryField& Q,
                                       const BundleSignature& sig) {
  SymmetryVerdict v;
  Expr f = apply_prolonged(Q, L.density, sig);
  SourceForm e = euler_lagrange(Lagrangian{f}, sig);
  for (const auto& comp : e.components)
    if (!comp.is_zero()) v.failures.push_back(comp);
  v.is_symmetry = v.failures.empty();
  if (v.is_symmetry) {
    auto K = invert_total_divergence(f, sig);
    if (!K)
      throw eval_error(
          "is_divergence_symmetry: divergence inversion failed on a "
          "variationally trivial expression");
    v.witness = *K;
  }
  return v;
}

Current noether_current(const Lagrangian& L, const EvolutionaryField& Q,
                        const BundleSignature& sig) {
  SymmetryVerdict v = is_divergence_symmetry(L, Q, sig);
  if (!v.is_symmetry)
    throw not_a_symmetry("noether_current: Q is not a divergence symmetry");
  FirstVariation fv = first_variation_decompose(L, Q, sig);
  Current J = Current::zero(sig);
  for (int mu = 0; mu < sig.base_dim(); ++mu)
    J.components[size_t(mu)] = fv.boundary.components[size_t(mu)] -
                               v.witness.components[size_t(mu)];
  // conserved on shell: D_mu J^mu = -sum_a Q^a E_a(L)
  if (total_divergence(J.components, sig) != -fv.interior)
    throw eval_error("noether_current: conservation identity failed");
  return J;
}

// ---------------------------------------------------------------------------
// Helmholtz self-adjointness

namespace {
Rational multi_binomial(const MultiIndex& I, const MultiIndex& J) {
  Rational r(1);
  for (int d = 0; d < I.dim(); ++d) {
    int n = I.counts[size_t(d)], k = J.counts[size_t(d)];
    Rational b(1);
    for (int i = 0; i < k; ++i) b = b * Rational(n - i) / Rational(i + 1);
    r *= b;
  }
  return r;
}
}  // namespace

HelmholtzReport helmholtz_check(const SourceForm& delta,
                                const BundleSignature& sig) {
  sig.require_fields();
  const int nf = sig.field_count();
  if (delta.components.size() != static_cast<size_t>(nf))
    throw signature_error("helmholtz_check: component count mismatch");

  // linearization coefficients A[a][b][I] = d Delta_a / d u^b_I
  std::vector<std::vector<std::map<std::vector<int>, Expr>>> A(
      static_cast<size_t>(nf),
      std::vector<std::map<std::vector<int>, Expr>>(static_cast<size_t>(nf)));
  int max_order = 0;
  for (int a = 0; a < nf; ++a)
    for (const auto& c : delta.components[size_t(a)].jet_coordinates()) {
      Expr d = delta.components[size_t(a)].partial_jet(c);
      if (d.is_zero()) continue;
      A[size_t(a)][size_t(c.field)][c.index.counts] = d;
      max_order = std::max(max_order, c.index.order());
    }

  std::vector<MultiIndex> all_J;
  enumerate_multiindices(sig.base_dim(), max_order, all_J);

  HelmholtzReport report;
  for (int a = 0; a < nf; ++a)
    for (int b = 0; b < nf; ++b)
      for (const auto& J : all_J) {
        // adjoint coefficient: sum_{I >= J} (-1)^{|I|} binom(I,J) D_{I-J} A[b][a][I]
        Expr adj;
        for (const auto& [counts, coeff] : A[size_t(b)][size_t(a)]) {
          MultiIndex I(counts);
          if (!I.contains(J)) continue;
          Expr t = Expr::constant(multi_binomial(I, J)) *
                   iterated_total_derivative(coeff, I.minus(J), sig);
          if (I.order() % 2 == 1) t = -t;
          adj += t;
        }
        Expr direct;
        auto it = A[size_t(a)][size_t(b)].find(J.counts);
        if (it != A[size_t(a)][size_t(b)].end()) direct = it->second;
        Expr diff = direct - adj;
        if (!diff.is_zero()) {
          report.variational = false;
          report.failures.push_back(HelmholtzFailure{a, b, J, diff});
        }
      }
  return report;
}

BigradedForm source_form_as_bicomplex(const SourceForm& delta,
                                      const BundleSignature& sig) {
  BigradedForm out(sig, 1, sig.base_dim());
  BigradedForm vol = BigradedForm::volume(sig);
  for (int a = 0; a < sig.field_count(); ++a) {
    const Expr& d = delta.components[size_t(a)];
    if (d.is_zero()) continue;
    out += wedge(BigradedForm::theta(sig, a, MultiIndex(sig.base_dim())) * d,
                 vol);
  }
  return out;
}

}  // namespace varjet
