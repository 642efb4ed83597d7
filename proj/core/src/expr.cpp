#include "varjet/expr.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace varjet {

Rational rational_pow(const Rational& q, int n) {
  if (n == 0) return Rational(1);
  if (n < 0) {
    if (q == 0) throw eval_error("rational_pow: division by zero");
    return Rational(1) / rational_pow(q, -n);
  }
  Rational r(1);
  for (int i = 0; i < n; ++i) r *= q;
  return r;
}

const char* func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// atoms

Atom Atom::base_coord(int i) {
  Atom a;
  a.kind = Kind::Base;
  a.base = i;
  return a;
}
Atom Atom::parameter(std::string name) {
  Atom a;
  a.kind = Kind::Param;
  a.param = std::move(name);
  return a;
}
Atom Atom::jet_coord(int field, MultiIndex I) {
  Atom a;
  a.kind = Kind::Jet;
  a.jet = JetCoordinate{field, std::move(I)};
  return a;
}
Atom Atom::func(Func f, const Expr& arg) {
  Atom a;
  a.kind = Kind::Func;
  a.fn = f;
  a.sub = std::make_shared<const Expr>(arg);
  return a;
}
Atom Atom::opaque_pow(const Expr& b, int exp) {
  Atom a;
  a.kind = Kind::Pow;
  a.sub = std::make_shared<const Expr>(b);
  a.pow_exp = exp;
  return a;
}

int compare(const Atom& a, const Atom& b) {
  if (a.kind != b.kind)
    return static_cast<int>(a.kind) < static_cast<int>(b.kind) ? -1 : 1;
  switch (a.kind) {
    case Atom::Kind::Base:
      if (a.base != b.base) return a.base < b.base ? -1 : 1;
      return 0;
    case Atom::Kind::Param:
      if (a.param != b.param) return a.param < b.param ? -1 : 1;
      return 0;
    case Atom::Kind::Jet: {
      if (a.jet.field != b.jet.field) return a.jet.field < b.jet.field ? -1 : 1;
      return compare(a.jet.index, b.jet.index);
    }
    case Atom::Kind::Func: {
      if (a.fn != b.fn) return static_cast<int>(a.fn) < static_cast<int>(b.fn) ? -1 : 1;
      return Expr::compare_expr(*a.sub, *b.sub);
    }
    case Atom::Kind::Pow: {
      int c = Expr::compare_expr(*a.sub, *b.sub);
      if (c != 0) return c;
      if (a.pow_exp != b.pow_exp) return a.pow_exp < b.pow_exp ? -1 : 1;
      return 0;
    }
  }
  return 0;
}

int Monomial::degree() const {
  int d = 0;
  for (const auto& f : factors) d += std::abs(f.exp);
  return d;
}

int compare(const Monomial& a, const Monomial& b) {
  size_t n = std::min(a.factors.size(), b.factors.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(a.factors[i].atom, b.factors[i].atom);
    if (c != 0) return c;
    if (a.factors[i].exp != b.factors[i].exp)
      return a.factors[i].exp < b.factors[i].exp ? -1 : 1;
  }
  if (a.factors.size() != b.factors.size())
    return a.factors.size() < b.factors.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// construction / canonicalization

Expr::Expr() = default;

Expr Expr::from_terms(std::vector<Term> t) {
  std::sort(t.begin(), t.end(), [](const Term& x, const Term& y) {
    return compare(x.mono, y.mono) < 0;
  });
  std::vector<Term> out;
  for (auto& term : t) {
    if (term.coeff == 0) continue;
    if (!out.empty() && compare(out.back().mono, term.mono) == 0) {
      out.back().coeff += term.coeff;
      if (out.back().coeff == 0) out.pop_back();
    } else {
      out.push_back(std::move(term));
    }
  }
  Expr e;
  e.terms_ = std::move(out);
  return e;
}

Expr Expr::zero() { return Expr(); }
Expr Expr::one() { return constant(Rational(1)); }

Expr Expr::constant(Rational q) {
  Expr e;
  if (q != 0) e.terms_.push_back(Term{std::move(q), Monomial{}});
  return e;
}

Expr Expr::from_atom(Atom a) {
  Expr e;
  e.terms_.push_back(Term{Rational(1), Monomial{{Factor{std::move(a), 1}}}});
  return e;
}

Expr Expr::base_coord(int i) { return from_atom(Atom::base_coord(i)); }
Expr Expr::parameter(std::string name) {
  return from_atom(Atom::parameter(std::move(name)));
}
Expr Expr::jet(int field, MultiIndex I) {
  return from_atom(Atom::jet_coord(field, std::move(I)));
}

Expr Expr::apply(Func f, const Expr& arg) {
  if (arg.is_zero()) {
    switch (f) {
      case Func::Sin: return zero();
      case Func::Cos: return one();
      case Func::Exp: return one();
      case Func::Log: throw eval_error("log(0) is undefined");
    }
  }
  if (f == Func::Log && arg == one()) return zero();
  return from_atom(Atom::func(f, arg));
}

bool Expr::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 && terms_[0].mono.factors.empty());
}

Rational Expr::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw eval_error("constant_value on non-constant");
  return terms_[0].coeff;
}

int Expr::compare_expr(const Expr& a, const Expr& b) {
  size_t n = std::min(a.terms_.size(), b.terms_.size());
  for (size_t i = 0; i < n; ++i) {
    int c = compare(a.terms_[i].mono, b.terms_[i].mono);
    if (c != 0) return c;
    if (a.terms_[i].coeff != b.terms_[i].coeff)
      return a.terms_[i].coeff < b.terms_[i].coeff ? -1 : 1;
  }
  if (a.terms_.size() != b.terms_.size())
    return a.terms_.size() < b.terms_.size() ? -1 : 1;
  return 0;
}

// ---------------------------------------------------------------------------
// arithmetic

Expr Expr::operator-() const {
  std::vector<Term> t = terms_;
  for (auto& term : t) term.coeff = -term.coeff;
  Expr e;
  e.terms_ = std::move(t);
  return e;
}

Expr operator+(const Expr& a, const Expr& b) {
  std::vector<Expr::Term> t = a.terms_;
  t.insert(t.end(), b.terms_.begin(), b.terms_.end());
  return Expr::from_terms(std::move(t));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

namespace {

// Rebuilds a single term as an Expr, routing every factor through the smart
// power constructor so opaque powers re-expand when their exponent lands in
// the expandable range.
Expr term_to_expr(const Rational& coeff, const std::vector<Factor>& factors) {
  Expr r = Expr::constant(coeff);
  for (const auto& f : factors) {
    Expr base;
    if (f.atom.kind == Atom::Kind::Pow)
      base = pow(*f.atom.sub, f.atom.pow_exp);
    else
      base = Expr::from_atom(f.atom);
    r = r * pow(base, f.exp);
  }
  return r;
}

// Product of two canonical terms. Merging may produce an opaque power whose
// exponent became expandable; those factors are split off and re-expanded.
Expr mul_terms(const Expr::Term& x, const Expr::Term& y) {
  std::vector<Factor> merged;
  std::vector<Expr> expanded;
  size_t i = 0, j = 0;
  const auto& fa = x.mono.factors;
  const auto& fb = y.mono.factors;
  auto push = [&](Atom atom, int exp) {
    if (exp == 0) return;
    if (atom.kind == Atom::Kind::Pow) {
      // factor is (S^k)^exp; normalize the combined exponent
      long long total = static_cast<long long>(atom.pow_exp) * exp;
      if (total == 0) return;
      if (total >= 0 && total <= 4) {
        expanded.push_back(pow(*atom.sub, static_cast<int>(total)));
        return;
      }
      merged.push_back(Factor{Atom::opaque_pow(*atom.sub, static_cast<int>(total)), 1});
      return;
    }
    merged.push_back(Factor{std::move(atom), exp});
  };
  while (i < fa.size() || j < fb.size()) {
    if (j >= fb.size()) {
      push(fa[i].atom, fa[i].exp);
      ++i;
    } else if (i >= fa.size()) {
      push(fb[j].atom, fb[j].exp);
      ++j;
    } else {
      // compare ignoring the stored exponent of opaque powers so equal bases merge
      int c;
      if (fa[i].atom.kind == Atom::Kind::Pow && fb[j].atom.kind == Atom::Kind::Pow)
        c = Expr::compare_expr(*fa[i].atom.sub, *fb[j].atom.sub);
      else
        c = compare(fa[i].atom, fb[j].atom);
      if (c < 0) {
        push(fa[i].atom, fa[i].exp);
        ++i;
      } else if (c > 0) {
        push(fb[j].atom, fb[j].exp);
        ++j;
      } else {
        if (fa[i].atom.kind == Atom::Kind::Pow) {
          long long total =
              static_cast<long long>(fa[i].atom.pow_exp) * fa[i].exp +
              static_cast<long long>(fb[j].atom.pow_exp) * fb[j].exp;
          if (total != 0) {
            if (total >= 0 && total <= 4)
              expanded.push_back(pow(*fa[i].atom.sub, static_cast<int>(total)));
            else
              merged.push_back(
                  Factor{Atom::opaque_pow(*fa[i].atom.sub, static_cast<int>(total)), 1});
          }
        } else {
          int exp = fa[i].exp + fb[j].exp;
          if (exp != 0) merged.push_back(Factor{fa[i].atom, exp});
        }
        ++i;
        ++j;
      }
    }
  }
  std::vector<Expr::Term> t;
  t.push_back(Expr::Term{x.coeff * y.coeff, Monomial{std::move(merged)}});
  Expr r = Expr::from_terms(std::move(t));
  for (const auto& part : expanded) r = r * part;
  return r;
}

}  // namespace

Expr operator*(const Expr& a, const Expr& b) {
  Expr acc;
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms()) acc += mul_terms(ta, tb);
  return acc;
}

Expr pow(const Expr& e, int n) {
  if (n == 0) return Expr::one();
  if (n == 1) return e;
  if (e.is_zero()) {
    if (n < 0) throw eval_error("division by zero expression");
    return Expr::zero();
  }
  if (e.is_constant()) return Expr::constant(rational_pow(e.constant_value(), n));
  if (e.terms().size() == 1) {
    const auto& t = e.terms()[0];
    Expr r = Expr::constant(rational_pow(t.coeff, n));
    for (const auto& f : t.mono.factors) {
      long long exp = static_cast<long long>(f.exp) * n;
      if (f.atom.kind == Atom::Kind::Pow) {
        r = r * pow(*f.atom.sub,
                    static_cast<int>(static_cast<long long>(f.atom.pow_exp) * exp));
      } else {
        std::vector<Expr::Term> tt;
        tt.push_back(Expr::Term{Rational(1),
                                Monomial{{Factor{f.atom, static_cast<int>(exp)}}}});
        r = r * Expr::from_terms(std::move(tt));
      }
    }
    return r;
  }
  if (n >= 2 && n <= 4) {
    Expr r = e;
    for (int i = 1; i < n; ++i) r = r * e;
    return r;
  }
  // opaque power of a true sum; factor out the leading coefficient so equal
  // expressions up to scale share one base
  Rational lead = e.terms()[0].coeff;
  Expr unit = Expr::constant(Rational(1) / lead) * e;
  return Expr::constant(rational_pow(lead, n)) *
         Expr::from_atom(Atom::opaque_pow(unit, n));
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_zero()) throw eval_error("division by zero expression");
  if (b.is_constant()) return Expr::constant(Rational(1) / b.constant_value()) * a;
  return a * pow(b, -1);
}

// ---------------------------------------------------------------------------
// calculus

namespace {

Expr atom_derivative(const Atom& a, const Atom& coordinate) {
  switch (a.kind) {
    case Atom::Kind::Base:
    case Atom::Kind::Jet:
      return compare(a, coordinate) == 0 ? Expr::one() : Expr::zero();
    case Atom::Kind::Param:
      return Expr::zero();
    case Atom::Kind::Func: {
      Expr inner = a.sub->partial(coordinate);
      if (inner.is_zero()) return Expr::zero();
      switch (a.fn) {
        case Func::Sin: return Expr::apply(Func::Cos, *a.sub) * inner;
        case Func::Cos: return -(Expr::apply(Func::Sin, *a.sub) * inner);
        case Func::Exp: return Expr::apply(Func::Exp, *a.sub) * inner;
        case Func::Log: return inner / *a.sub;
      }
      return Expr::zero();
    }
    case Atom::Kind::Pow: {
      Expr inner = a.sub->partial(coordinate);
      if (inner.is_zero()) return Expr::zero();
      return Expr::integer(a.pow_exp) * pow(*a.sub, a.pow_exp - 1) * inner;
    }
  }
  return Expr::zero();
}

}  // namespace

Expr Expr::partial(const Atom& coordinate) const {
  if (coordinate.kind != Atom::Kind::Base && coordinate.kind != Atom::Kind::Jet)
    throw eval_error("partial: not a coordinate");
  Expr acc;
  for (const auto& term : terms_) {
    for (size_t i = 0; i < term.mono.factors.size(); ++i) {
      const Factor& f = term.mono.factors[i];
      Expr da = atom_derivative(f.atom, coordinate);
      if (da.is_zero()) continue;
      std::vector<Factor> rest;
      for (size_t j = 0; j < term.mono.factors.size(); ++j)
        if (j != i) rest.push_back(term.mono.factors[j]);
      Expr piece = term_to_expr(term.coeff * f.exp, rest);
      Expr self = term_to_expr(Rational(1), {Factor{f.atom, f.exp - 1}});
      acc += piece * self * da;
    }
  }
  return acc;
}

Expr Expr::partial_base(int mu) const { return partial(Atom::base_coord(mu)); }
Expr Expr::partial_jet(const JetCoordinate& c) const {
  return partial(Atom::jet_coord(c.field, c.index));
}

namespace {
int atom_order(const Atom& a);
int mono_order(const Monomial& m) {
  int r = 0;
  for (const auto& f : m.factors) r = std::max(r, atom_order(f.atom));
  return r;
}
int atom_order(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Jet: return a.jet.index.order();
    case Atom::Kind::Func:
    case Atom::Kind::Pow: return a.sub->order();
    default: return 0;
  }
}

void collect_jets(const Atom& a, std::set<std::pair<int, std::vector<int>>>& out);
void collect_jets(const Expr& e, std::set<std::pair<int, std::vector<int>>>& out) {
  for (const auto& t : e.terms())
    for (const auto& f : t.mono.factors) collect_jets(f.atom, out);
}
void collect_jets(const Atom& a, std::set<std::pair<int, std::vector<int>>>& out) {
  switch (a.kind) {
    case Atom::Kind::Jet:
      out.insert({a.jet.field, a.jet.index.counts});
      break;
    case Atom::Kind::Func:
    case Atom::Kind::Pow:
      collect_jets(*a.sub, out);
      break;
    default:
      break;
  }
}

bool atom_has_base(const Atom& a);
bool expr_has_base(const Expr& e) {
  for (const auto& t : e.terms())
    for (const auto& f : t.mono.factors)
      if (atom_has_base(f.atom)) return true;
  return false;
}
bool atom_has_base(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Base: return true;
    case Atom::Kind::Func:
    case Atom::Kind::Pow: return expr_has_base(*a.sub);
    default: return false;
  }
}
}  // namespace

int Expr::order() const {
  int r = 0;
  for (const auto& t : terms_) r = std::max(r, mono_order(t.mono));
  return r;
}

int Expr::degree() const {
  int r = 0;
  for (const auto& t : terms_) r = std::max(r, t.mono.degree());
  return r;
}

std::vector<JetCoordinate> Expr::jet_coordinates() const {
  std::set<std::pair<int, std::vector<int>>> s;
  collect_jets(*this, s);
  std::vector<JetCoordinate> out;
  for (const auto& [field, counts] : s)
    out.push_back(JetCoordinate{field, MultiIndex(counts)});
  return out;
}

bool Expr::is_coordinate_free() const {
  return jet_coordinates().empty() && !expr_has_base(*this);
}

bool Expr::depends_on(const Atom& coordinate) const {
  return !partial(coordinate).is_zero();
}

// ---------------------------------------------------------------------------
// evaluation

double Valuation::jet_value(const JetCoordinate& c) const {
  auto it = jets.find(c.field);
  if (it == jets.end()) throw eval_error("valuation: missing field");
  auto jt = it->second.find(c.index.counts);
  if (jt == it->second.end()) throw eval_error("valuation: missing jet coordinate");
  return jt->second;
}

namespace {
double atom_value(const Atom& a, const Valuation& v) {
  switch (a.kind) {
    case Atom::Kind::Base:
      if (a.base < 0 || static_cast<size_t>(a.base) >= v.base.size())
        throw eval_error("valuation: missing base coordinate");
      return v.base[static_cast<size_t>(a.base)];
    case Atom::Kind::Param: {
      auto it = v.params.find(a.param);
      if (it == v.params.end())
        throw eval_error("valuation: missing parameter " + a.param);
      return it->second;
    }
    case Atom::Kind::Jet:
      return v.jet_value(a.jet);
    case Atom::Kind::Func: {
      double x = a.sub->evaluate(v);
      switch (a.fn) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Exp: return std::exp(x);
        case Func::Log:
          if (x <= 0) throw eval_error("log of non-positive value");
          return std::log(x);
      }
      return 0;
    }
    case Atom::Kind::Pow: {
      double x = a.sub->evaluate(v);
      if (x == 0 && a.pow_exp < 0) throw eval_error("division by zero");
      return std::pow(x, a.pow_exp);
    }
  }
  return 0;
}
}  // namespace

double Expr::evaluate(const Valuation& v) const {
  double acc = 0;
  for (const auto& t : terms_) {
    double m = static_cast<double>(t.coeff);
    for (const auto& f : t.mono.factors) {
      double x = atom_value(f.atom, v);
      if (x == 0 && f.exp < 0) throw eval_error("division by zero");
      m *= std::pow(x, f.exp);
    }
    acc += m;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// substitution

Expr Expr::substitute(const AtomMap& m) const {
  Expr acc;
  for (const auto& term : terms_) {
    Expr prod = Expr::constant(term.coeff);
    for (const auto& f : term.mono.factors) {
      Expr image;
      if (auto mapped = m(f.atom)) {
        image = *mapped;
      } else {
        switch (f.atom.kind) {
          case Atom::Kind::Func:
            image = Expr::apply(f.atom.fn, f.atom.sub->substitute(m));
            break;
          case Atom::Kind::Pow:
            image = pow(f.atom.sub->substitute(m), f.atom.pow_exp);
            break;
          default:
            image = Expr::from_atom(f.atom);
            break;
        }
      }
      prod = prod * pow(image, f.exp);
    }
    acc += prod;
  }
  return acc;
}

Expr Expr::substitute_base(const std::vector<Expr>& images) const {
  return substitute([&](const Atom& a) -> std::optional<Expr> {
    if (a.kind != Atom::Kind::Base) return std::nullopt;
    if (a.base < 0 || static_cast<size_t>(a.base) >= images.size())
      throw eval_error("substitute_base: missing image");
    return images[static_cast<size_t>(a.base)];
  });
}

// ---------------------------------------------------------------------------
// printing

namespace {

std::string rational_str(const Rational& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

std::string atom_str(const Atom& a, const BundleSignature& sig, bool latex);

std::string factor_str(const Factor& f, const BundleSignature& sig, bool latex) {
  // an opaque power carries its own exponent; combine with the factor's
  long long exp = f.exp;
  std::string body;
  if (f.atom.kind == Atom::Kind::Pow) {
    exp *= f.atom.pow_exp;
    body = "(" + (latex ? f.atom.sub->latex(sig) : f.atom.sub->str(sig)) + ")";
  } else {
    body = atom_str(f.atom, sig, latex);
  }
  if (exp == 1) return body;
  if (latex) return body + "^{" + std::to_string(exp) + "}";
  if (exp < 0) return body + "^(" + std::to_string(exp) + ")";
  return body + "^" + std::to_string(exp);
}

std::string atom_str(const Atom& a, const BundleSignature& sig, bool latex) {
  switch (a.kind) {
    case Atom::Kind::Base: return sig.base_name(a.base);
    case Atom::Kind::Param: return a.param;
    case Atom::Kind::Jet: {
      const std::string& f = sig.field_name(a.jet.field);
      if (a.jet.index.is_zero()) return f;
      std::string sub = sig.subscript(a.jet.index);
      if (latex) return f + "_{" + sub + "}";
      return f + "_" + sub;
    }
    case Atom::Kind::Func: {
      std::string arg = latex ? a.sub->latex(sig) : a.sub->str(sig);
      if (latex) return std::string("\\") + func_name(a.fn) + "\\left(" + arg + "\\right)";
      return std::string(func_name(a.fn)) + "(" + arg + ")";
    }
    case Atom::Kind::Pow:
      return "(" + (latex ? a.sub->latex(sig) : a.sub->str(sig)) + ")";
  }
  return "?";
}

std::string print(const Expr& e, const BundleSignature& sig, bool latex) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : e.terms()) {
    Rational c = t.coeff;
    bool neg = c < 0;
    if (neg) c = -c;
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (const auto& f : t.mono.factors) {
      if (!mono.empty()) mono += latex ? " " : "*";
      mono += factor_str(f, sig, latex);
    }
    if (mono.empty()) {
      out += latex && boost::multiprecision::denominator(c) != 1
                 ? "\\frac{" + boost::multiprecision::numerator(c).str() + "}{" +
                       boost::multiprecision::denominator(c).str() + "}"
                 : rational_str(c);
    } else if (c == 1) {
      out += mono;
    } else {
      if (latex && boost::multiprecision::denominator(c) != 1)
        out += "\\frac{" + boost::multiprecision::numerator(c).str() + "}{" +
               boost::multiprecision::denominator(c).str() + "} " + mono;
      else
        out += rational_str(c) + (latex ? " " : "*") + mono;
    }
  }
  return out;
}

}  // namespace

std::string Expr::str(const BundleSignature& sig) const {
  return print(*this, sig, false);
}

std::string Expr::latex(const BundleSignature& sig) const {
  return print(*this, sig, true);
}

}  // namespace varjet
