#include "varjet/bicomplex.hpp"

#include <algorithm>

namespace varjet {

namespace {

// Sorts a generator list given by an arbitrary sequence, returning the
// permutation sign, or 0 if a generator repeats.
template <typename T, typename Cmp>
int sort_sign(std::vector<T>& v, Cmp cmp) {
  int sign = 1;
  for (size_t i = 1; i < v.size(); ++i)
    for (size_t j = i; j > 0 && cmp(v[j], v[j - 1]) < 0; --j) {
      std::swap(v[j], v[j - 1]);
      sign = -sign;
    }
  for (size_t i = 1; i < v.size(); ++i)
    if (cmp(v[i - 1], v[i]) == 0) return 0;
  return sign;
}

int int_cmp(int a, int b) { return a < b ? -1 : (a > b ? 1 : 0); }

// Sign of merging two strictly sorted lists (inversions mod 2); 0 on overlap.
template <typename T, typename Cmp>
int merge_sorted(const std::vector<T>& a, const std::vector<T>& b,
                 std::vector<T>& out, Cmp cmp) {
  out.clear();
  size_t i = 0, j = 0;
  int sign = 1;
  while (i < a.size() || j < b.size()) {
    if (j >= b.size() || (i < a.size() && cmp(a[i], b[j]) < 0)) {
      out.push_back(a[i++]);
    } else if (i >= a.size() || cmp(b[j], a[i]) < 0) {
      // b[j] jumps over the remaining elements of a
      if ((a.size() - i) % 2 == 1) sign = -sign;
      out.push_back(b[j++]);
    } else {
      return 0;  // repeated generator
    }
  }
  return sign;
}

}  // namespace

// ---------------------------------------------------------------------------
// ExteriorForm

ExteriorForm ExteriorForm::scalar(int dim, const Expr& e) {
  ExteriorForm f(dim, 0);
  if (!e.is_zero()) f.terms_[{}] = e;
  return f;
}

ExteriorForm ExteriorForm::d_coord(int dim, int i) {
  ExteriorForm f(dim, 1);
  f.terms_[{i}] = Expr::one();
  return f;
}

void ExteriorForm::add_term(std::vector<int> gens, const Expr& coeff) {
  if (coeff.is_zero()) return;
  int sign = sort_sign(gens, int_cmp);
  if (sign == 0) return;
  if (static_cast<int>(gens.size()) != degree_)
    throw signature_error("exterior form: degree mismatch");
  Expr c = sign < 0 ? -coeff : coeff;
  auto it = terms_.find(gens);
  if (it == terms_.end()) {
    terms_.emplace(std::move(gens), c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ExteriorForm operator+(const ExteriorForm& a, const ExteriorForm& b) {
  if (a.degree_ != b.degree_)
    throw signature_error("exterior form: degree mismatch in sum");
  ExteriorForm r = a;
  for (const auto& [g, c] : b.terms_) r.add_term(g, c);
  return r;
}

ExteriorForm ExteriorForm::operator*(const Expr& c) const {
  ExteriorForm r(dim_, degree_);
  for (const auto& [g, coeff] : terms_) r.add_term(g, coeff * c);
  return r;
}

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b) {
  ExteriorForm r(a.dim_, a.degree_ + b.degree_);
  for (const auto& [ga, ca] : a.terms_)
    for (const auto& [gb, cb] : b.terms_) {
      std::vector<int> merged;
      int sign = merge_sorted(ga, gb, merged, int_cmp);
      if (sign == 0) continue;
      Expr c = ca * cb;
      if (sign < 0) c = -c;
      r.add_term(std::move(merged), c);
    }
  return r;
}

ExteriorForm ExteriorForm::d() const {
  ExteriorForm r(dim_, degree_ + 1);
  for (const auto& [g, c] : terms_)
    for (int i = 0; i < dim_; ++i) {
      Expr dc = c.partial_base(i);
      if (dc.is_zero()) continue;
      std::vector<int> gens;
      gens.push_back(i);
      gens.insert(gens.end(), g.begin(), g.end());
      r.add_term(std::move(gens), dc);
    }
  return r;
}

ExteriorForm ExteriorForm::pullback(const std::vector<Expr>& images,
                                    int source_dim) const {
  if (static_cast<int>(images.size()) != dim_)
    throw signature_error("pullback: component count mismatch");
  ExteriorForm r = ExteriorForm::scalar(source_dim, Expr::zero());
  r = ExteriorForm(source_dim, degree_);
  for (const auto& [g, c] : terms_) {
    ExteriorForm part =
        ExteriorForm::scalar(source_dim, c.substitute_base(images));
    for (int i : g) {
      ExteriorForm dimg(source_dim, 1);
      for (int j = 0; j < source_dim; ++j) {
        Expr dj = images[size_t(i)].partial_base(j);
        if (!dj.is_zero()) dimg.add_term({j}, dj);
      }
      part = wedge(part, dimg);
    }
    r += part;
  }
  return r;
}

// ---------------------------------------------------------------------------
// BigradedForm

int compare(const ContactGenerator& a, const ContactGenerator& b) {
  if (a.field != b.field) return a.field < b.field ? -1 : 1;
  return compare(a.index, b.index);
}

int compare(const FormMonomial& a, const FormMonomial& b) {
  if (a.dx != b.dx) return a.dx < b.dx ? -1 : 1;
  size_t n = std::min(a.theta.size(), b.theta.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(a.theta[i], b.theta[i]);
    if (c != 0) return c;
  }
  if (a.theta.size() != b.theta.size())
    return a.theta.size() < b.theta.size() ? -1 : 1;
  return 0;
}

BigradedForm::BigradedForm(const BundleSignature& sig, int s, int r)
    : sig_(&sig), s_(s), r_(r) {
  if (s < 0 || r < 0) throw signature_error("bigraded form: negative degree");
}

const BundleSignature& BigradedForm::signature() const {
  if (!sig_) throw signature_error("bigraded form: no signature");
  return *sig_;
}

BigradedForm BigradedForm::scalar(const BundleSignature& sig, const Expr& e) {
  BigradedForm f(sig, 0, 0);
  if (!e.is_zero()) f.terms_[FormMonomial{}] = e;
  return f;
}

BigradedForm BigradedForm::dx(const BundleSignature& sig, int mu) {
  if (mu < 0 || mu >= sig.base_dim())
    throw signature_error("dx: base index out of range");
  BigradedForm f(sig, 0, 1);
  f.terms_[FormMonomial{{mu}, {}}] = Expr::one();
  return f;
}

BigradedForm BigradedForm::theta(const BundleSignature& sig, int field,
                                 const MultiIndex& I) {
  if (field < 0 || field >= sig.field_count())
    throw signature_error("theta: field index out of range");
  BigradedForm f(sig, 1, 0);
  f.terms_[FormMonomial{{}, {ContactGenerator{field, I}}}] = Expr::one();
  return f;
}

BigradedForm BigradedForm::volume(const BundleSignature& sig) {
  BigradedForm f(sig, 0, sig.base_dim());
  FormMonomial m;
  for (int mu = 0; mu < sig.base_dim(); ++mu) m.dx.push_back(mu);
  f.terms_[m] = Expr::one();
  return f;
}

void BigradedForm::add_term(const FormMonomial& m, const Expr& coeff,
                            int sign) {
  if (coeff.is_zero() || sign == 0) return;
  if (static_cast<int>(m.theta.size()) != s_ ||
      static_cast<int>(m.dx.size()) != r_)
    throw signature_error("bigraded form: monomial degree mismatch");
  if (sig_ && r_ > sig_->base_dim()) return;  // beyond top horizontal degree
  Expr c = sign < 0 ? -coeff : coeff;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

BigradedForm operator+(const BigradedForm& a, const BigradedForm& b) {
  if (a.sig_ && b.sig_ && !(*a.sig_ == *b.sig_))
    throw signature_error("bigraded form: signature mismatch");
  if (a.s_ != b.s_ || a.r_ != b.r_)
    throw signature_error("bigraded form: bidegree mismatch in sum");
  BigradedForm r = a;
  if (!r.sig_) r.sig_ = b.sig_;
  for (const auto& [m, c] : b.terms_) r.add_term(m, c);
  return r;
}

BigradedForm BigradedForm::operator-() const {
  BigradedForm r = *this;
  for (auto& [m, c] : r.terms_) c = -c;
  return r;
}

BigradedForm BigradedForm::operator*(const Expr& c) const {
  BigradedForm r(*sig_, s_, r_);
  for (const auto& [m, coeff] : terms_) r.add_term(m, coeff * c);
  return r;
}

bool operator==(const BigradedForm& a, const BigradedForm& b) {
  return a.s_ == b.s_ && a.r_ == b.r_ && a.terms_ == b.terms_;
}

BigradedForm wedge(const BigradedForm& a, const BigradedForm& b) {
  const BundleSignature& sig = a.signature();
  if (!(sig == b.signature()))
    throw signature_error("wedge: signature mismatch");
  auto [sa, ra] = a.bidegree();
  auto [sb, rb] = b.bidegree();
  BigradedForm r(sig, sa + sb, ra + rb);
  if (ra + rb > sig.base_dim()) return r;  // zero form of that bidegree
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      // (dxA ^ thA) ^ (dxB ^ thB): move dxB across thA
      int sign = (mb.dx.size() * ma.theta.size()) % 2 == 1 ? -1 : 1;
      FormMonomial m;
      int s1 = merge_sorted(ma.dx, mb.dx, m.dx, int_cmp);
      if (s1 == 0) continue;
      int s2 = merge_sorted(ma.theta, mb.theta, m.theta,
                            [](const ContactGenerator& x,
                               const ContactGenerator& y) { return compare(x, y); });
      if (s2 == 0) continue;
      r.add_term(m, ca * cb, sign * s1 * s2);
    }
  return r;
}

BigradedForm d_horizontal(const BigradedForm& w) {
  const BundleSignature& sig = w.signature();
  auto [s, r] = w.bidegree();
  BigradedForm out(sig, s, r + 1);
  if (r >= sig.base_dim()) return out;  // top horizontal degree
  for (const auto& [m, c] : w.terms()) {
    BigradedForm mono(sig, s, r);
    mono.add_term(m, Expr::one());
    // coefficient part: D_mu c dx^mu ^ m
    for (int mu = 0; mu < sig.base_dim(); ++mu) {
      Expr dc = total_derivative(c, mu, sig);
      if (dc.is_zero()) continue;
      out += wedge(BigradedForm::dx(sig, mu) * dc, mono);
    }
    // generator part: only theta factors have nonzero d_H
    for (size_t k = 0; k < m.theta.size(); ++k) {
      // sign for jumping over the dx block and preceding thetas
      int jump = static_cast<int>(m.dx.size() + k);
      for (int mu = 0; mu < sig.base_dim(); ++mu) {
        FormMonomial rest = m;
        rest.theta.erase(rest.theta.begin() + static_cast<long>(k));
        BigradedForm restf(sig, s - 1, r);
        restf.add_term(rest, c);
        BigradedForm piece =
            wedge(wedge(BigradedForm::dx(sig, mu),
                        BigradedForm::theta(sig, m.theta[k].field,
                                            m.theta[k].index.bumped(mu))),
                  restf);
        // d(theta_k) carries (-1)^jump from the graded Leibniz rule, and the
        // reassembly dx^mu ^ theta' ^ rest realizes prefix ^ d(theta_k) ^ suffix
        // up to moving dx^mu ^ theta' to the front: another (-1)^(2*jump) = +1.
        if (jump % 2 == 1) piece = -piece;
        out += piece;
      }
    }
  }
  return out;
}

BigradedForm d_vertical(const BigradedForm& w) {
  const BundleSignature& sig = w.signature();
  auto [s, r] = w.bidegree();
  BigradedForm out(sig, s + 1, r);
  for (const auto& [m, c] : w.terms()) {
    BigradedForm mono(sig, s, r);
    mono.add_term(m, Expr::one());
    for (const auto& jc : c.jet_coordinates()) {
      Expr dc = c.partial_jet(jc);
      if (dc.is_zero()) continue;
      out += wedge(BigradedForm::theta(sig, jc.field, jc.index) * dc, mono);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// ev_infty pullback

namespace {
Expr family_derivative(const SectionFamily& family, int field,
                       const MultiIndex& I, int params) {
  Expr e = family.components.at(static_cast<size_t>(field));
  for (int d = 0; d < I.dim(); ++d)
    for (int k = 0; k < I.counts[size_t(d)]; ++k)
      e = e.partial_base(params + d);
  return e;
}
}  // namespace

Expr ev_pullback_scalar(const Expr& e, const SectionFamily& family,
                        const BundleSignature& sig) {
  const int p = family.params;
  return e.substitute([&](const Atom& a) -> std::optional<Expr> {
    if (a.kind == Atom::Kind::Base)
      return Expr::base_coord(p + a.base);
    if (a.kind == Atom::Kind::Jet)
      return family_derivative(family, a.jet.field, a.jet.index, p);
    return std::nullopt;
  });
}

ExteriorForm ev_pullback(const BigradedForm& w, const SectionFamily& family) {
  const BundleSignature& sig = w.signature();
  const int p = family.params;
  const int n = p + sig.base_dim();
  if (family.components.size() != static_cast<size_t>(sig.field_count()))
    throw signature_error("ev_pullback: family component count mismatch");
  ExteriorForm out(n, w.total_degree());
  for (const auto& [m, c] : w.terms()) {
    ExteriorForm part = ExteriorForm::scalar(n, ev_pullback_scalar(c, family, sig));
    for (int mu : m.dx) part = wedge(part, ExteriorForm::d_coord(n, p + mu));
    for (const auto& th : m.theta) {
      Expr dIphi = family_derivative(family, th.field, th.index, p);
      ExteriorForm img(n, 1);
      for (int j = 0; j < p; ++j) {
        Expr dj = dIphi.partial_base(j);
        if (!dj.is_zero()) img.add_term({j}, dj);
      }
      part = wedge(part, img);
    }
    out += part;
  }
  return out;
}

std::string to_latex(const BigradedForm& w) {
  const BundleSignature& sig = w.signature();
  if (w.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : w.terms()) {
    if (!first) out += " + ";
    first = false;
    out += "\\left(" + c.latex(sig) + "\\right)";
    for (int mu : m.dx) out += " \\wedge \\mathrm{d}" + sig.base_name(mu);
    for (const auto& th : m.theta) {
      out += " \\wedge \\theta^{" + sig.field_name(th.field) + "}";
      if (!th.index.is_zero()) out += "_{" + sig.subscript(th.index) + "}";
    }
  }
  return out;
}

}  // namespace varjet
