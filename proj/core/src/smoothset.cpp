#include "varjet/smoothset.hpp"

#include <sstream>

namespace varjet {

// ---------------------------------------------------------------------------
// domains and maps

bool Box::contains(const std::vector<Rational>& x) const {
  if (x.size() != intervals.size()) return false;
  for (size_t i = 0; i < intervals.size(); ++i)
    if (!(intervals[i].first < x[i] && x[i] < intervals[i].second))
      return false;
  return true;
}

std::optional<Box> Box::intersect(const Box& o) const {
  if (o.intervals.size() != intervals.size()) return std::nullopt;
  Box r;
  for (size_t i = 0; i < intervals.size(); ++i) {
    Rational lo = std::max(intervals[i].first, o.intervals[i].first);
    Rational hi = std::min(intervals[i].second, o.intervals[i].second);
    if (!(lo < hi)) return std::nullopt;
    r.intervals.push_back({lo, hi});
  }
  return r;
}

std::vector<Rational> Box::center() const {
  std::vector<Rational> c;
  for (const auto& [lo, hi] : intervals) c.push_back((lo + hi) / 2);
  return c;
}

PlotDomain PlotDomain::box(std::vector<std::pair<Rational, Rational>> iv) {
  for (const auto& [lo, hi] : iv)
    if (!(lo < hi)) throw signature_error("box with non-positive side");
  PlotDomain d;
  d.dim = static_cast<int>(iv.size());
  d.boxes.push_back(Box{std::move(iv)});
  return d;
}

bool PlotDomain::contains(const std::vector<Rational>& x) const {
  if (empty || static_cast<int>(x.size()) != dim) return false;
  if (is_whole()) return true;
  for (const auto& b : boxes)
    if (b.contains(x)) return true;
  return false;
}

std::vector<Rational> PlotDomain::sample() const {
  if (empty) throw plot_error("sample: empty domain");
  if (is_whole()) return std::vector<Rational>(static_cast<size_t>(dim), 0);
  return boxes.front().center();
}

bool operator==(const PlotDomain& a, const PlotDomain& b) {
  if (a.dim != b.dim || a.empty != b.empty ||
      a.boxes.size() != b.boxes.size())
    return false;
  for (size_t i = 0; i < a.boxes.size(); ++i)
    if (a.boxes[i].intervals != b.boxes[i].intervals) return false;
  return true;
}

PlotDomain intersect(const PlotDomain& a, const PlotDomain& b) {
  if (a.dim != b.dim) throw signature_error("intersect: dimension mismatch");
  if (a.is_whole()) return b;
  if (b.is_whole()) return a;
  PlotDomain r;
  r.dim = a.dim;
  if (a.empty || b.empty) {
    r.empty = true;
    return r;
  }
  for (const auto& ba : a.boxes)
    for (const auto& bb : b.boxes)
      if (auto c = ba.intersect(bb)) r.boxes.push_back(*c);
  r.empty = r.boxes.empty();
  return r;
}

SmoothMap SmoothMap::identity(const PlotDomain& d) {
  SmoothMap m{d, d, {}};
  for (int i = 0; i < d.dim; ++i) m.components.push_back(Expr::base_coord(i));
  return m;
}

std::vector<double> SmoothMap::operator()(const std::vector<double>& x) const {
  Valuation v;
  v.base = x;
  std::vector<double> out;
  for (const auto& c : components) out.push_back(c.evaluate(v));
  return out;
}

bool SmoothMap::maps_into_target(int samples_per_box) const {
  if (target.is_whole()) return true;
  auto probe = [&](const std::vector<double>& x) {
    std::vector<double> y = (*this)(x);
    if (target.is_whole()) return true;
    for (const auto& b : target.boxes) {
      bool in = true;
      for (size_t i = 0; i < y.size(); ++i) {
        double lo = static_cast<double>(b.intervals[i].first);
        double hi = static_cast<double>(b.intervals[i].second);
        if (!(lo < y[i] && y[i] < hi)) {
          in = false;
          break;
        }
      }
      if (in) return true;
    }
    return false;
  };
  if (source.is_whole()) {
    // unbounded source: probe a fixed lattice around the origin
    std::vector<double> x(static_cast<size_t>(source.dim), 0.0);
    return probe(x);
  }
  for (const auto& b : source.boxes) {
    // low-discrepancy-ish lattice in the box
    for (int s = 0; s < samples_per_box; ++s) {
      std::vector<double> x;
      for (size_t i = 0; i < b.intervals.size(); ++i) {
        double lo = static_cast<double>(b.intervals[i].first);
        double hi = static_cast<double>(b.intervals[i].second);
        double t = std::fmod(0.5 + (s + 1) * (0.381966 + 0.154508 * double(i)), 1.0);
        x.push_back(lo + t * (hi - lo));
      }
      if (!probe(x)) return false;
    }
  }
  return true;
}

SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner) {
  if (inner.target.dim != outer.source.dim)
    throw signature_error("compose: domain mismatch");
  SmoothMap r{inner.source, outer.target, {}};
  for (const auto& c : outer.components)
    r.components.push_back(c.substitute_base(inner.components));
  return r;
}

// ---------------------------------------------------------------------------
// witnesses

PlotWitness PlotWitness::pair(PlotWitness a, PlotWitness b) {
  PlotWitness w;
  w.data = PairWitness{std::make_shared<PlotWitness>(std::move(a)),
                       std::make_shared<PlotWitness>(std::move(b))};
  return w;
}
PlotWitness PlotWitness::tower(std::vector<PlotWitness> levels) {
  PlotWitness w;
  w.data = TowerWitness{std::move(levels)};
  return w;
}
PlotWitness PlotWitness::quotient_lift(PlotWitness lift) {
  PlotWitness w;
  w.data = QuotientWitness{std::make_shared<PlotWitness>(std::move(lift))};
  return w;
}

namespace {

bool witness_match(const PlotWitness& a, const PlotWitness& b,
                   bool compare_domains) {
  if (a.data.index() != b.data.index()) return false;
  if (const auto* m = std::get_if<SmoothMap>(&a.data)) {
    const auto& n = std::get<SmoothMap>(b.data);
    if (compare_domains && !(m->source == n.source)) return false;
    return m->target.dim == n.target.dim && m->components == n.components;
  }
  if (const auto* p = std::get_if<PairWitness>(&a.data)) {
    const auto& q = std::get<PairWitness>(b.data);
    return witness_match(*p->first, *q.first, compare_domains) &&
           witness_match(*p->second, *q.second, compare_domains);
  }
  if (const auto* f = std::get_if<ExteriorForm>(&a.data))
    return *f == std::get<ExteriorForm>(b.data);
  if (const auto* t = std::get_if<TowerWitness>(&a.data)) {
    const auto& u = std::get<TowerWitness>(b.data);
    if (t->levels.size() != u.levels.size()) return false;
    for (size_t i = 0; i < t->levels.size(); ++i)
      if (!witness_match(t->levels[i], u.levels[i], compare_domains))
        return false;
    return true;
  }
  const auto& qa = std::get<QuotientWitness>(a.data);
  const auto& qb = std::get<QuotientWitness>(b.data);
  return witness_match(*qa.lift, *qb.lift, compare_domains);
}

}  // namespace

bool witness_equal(const PlotWitness& a, const PlotWitness& b) {
  return witness_match(a, b, true);
}

bool witness_compatible(const PlotWitness& a, const PlotWitness& b) {
  return witness_match(a, b, false);
}

// ---------------------------------------------------------------------------
// combinators

namespace {

class Representable final : public SmoothSet {
 public:
  explicit Representable(int n) : n_(n) {}

  bool is_plot(const PlotDomain& U, const PlotWitness& w) const override {
    const auto* m = std::get_if<SmoothMap>(&w.data);
    if (!m) return false;
    return m->source == U && m->target.dim == n_ &&
           static_cast<int>(m->components.size()) == n_ &&
           m->maps_into_target();
  }
  PlotWitness restrict(const SmoothMap& phi,
                       const PlotWitness& w) const override {
    return PlotWitness(compose(std::get<SmoothMap>(w.data), phi));
  }
  PointsReport points() const override {
    PointsReport r;
    r.concrete = true;
    r.description = "points of R^" + std::to_string(n_) +
                    " (a point-plot is a constant tuple)";
    return r;
  }
  std::string describe() const override {
    return "representable(R^" + std::to_string(n_) + ")";
  }

 private:
  int n_;
};

class ProductSet final : public SmoothSet {
 public:
  ProductSet(SmoothSetPtr x, SmoothSetPtr y)
      : x_(std::move(x)), y_(std::move(y)) {}

  bool is_plot(const PlotDomain& U, const PlotWitness& w) const override {
    const auto* p = std::get_if<PairWitness>(&w.data);
    if (!p) return false;
    return x_->is_plot(U, *p->first) && y_->is_plot(U, *p->second);
  }
  PlotWitness restrict(const SmoothMap& phi,
                       const PlotWitness& w) const override {
    const auto& p = std::get<PairWitness>(w.data);
    return PlotWitness::pair(x_->restrict(phi, *p.first),
                             y_->restrict(phi, *p.second));
  }
  PointsReport points() const override {
    PointsReport a = x_->points(), b = y_->points(), r;
    r.concrete = a.concrete && b.concrete;
    if (a.finite_count && b.finite_count)
      r.finite_count = *a.finite_count * *b.finite_count;
    r.description = "pairs: (" + a.description + ") x (" + b.description + ")";
    if (!r.concrete) {
      if (a.non_concreteness_witness)
        r.non_concreteness_witness = a.non_concreteness_witness;
      else
        r.non_concreteness_witness = b.non_concreteness_witness;
    }
    return r;
  }
  std::string describe() const override {
    return "product(" + x_->describe() + ", " + y_->describe() + ")";
  }

 private:
  SmoothSetPtr x_, y_;
};

// U-plots are smooth maps U x M -> N; restriction precomposes on the U
// factor only.
class Exponential final : public SmoothSet {
 public:
  Exponential(PlotDomain m, PlotDomain n) : m_(std::move(m)), n_(std::move(n)) {}

  bool is_plot(const PlotDomain& U, const PlotWitness& w) const override {
    const auto* f = std::get_if<SmoothMap>(&w.data);
    if (!f) return false;
    return f->source.dim == U.dim + m_.dim && f->target.dim == n_.dim &&
           static_cast<int>(f->components.size()) == n_.dim;
  }
  PlotWitness restrict(const SmoothMap& phi,
                       const PlotWitness& w) const override {
    const auto& f = std::get<SmoothMap>(w.data);
    const int udim = f.source.dim - m_.dim;
    if (phi.target.dim != udim)
      throw plot_error("exponential restrict: domain mismatch");
    const int vdim = phi.source.dim;
    // combined chart (V, M): V coords stay, U coords become phi components,
    // M coords shift from udim+i to vdim+i
    std::vector<Expr> images;
    for (int i = 0; i < udim; ++i)
      images.push_back(phi.components[size_t(i)]);
    for (int i = 0; i < m_.dim; ++i)
      images.push_back(Expr::base_coord(vdim + i));
    SmoothMap g;
    g.source = PlotDomain::whole(vdim + m_.dim);
    g.target = f.target;
    for (const auto& c : f.components)
      g.components.push_back(c.substitute_base(images));
    return PlotWitness(std::move(g));
  }
  PointsReport points() const override {
    PointsReport r;
    r.concrete = true;
    r.description =
        "smooth maps M -> N (a point-plot is a single smooth map)";
    return r;
  }
  std::string describe() const override {
    return "exponential(C^inf(M^" + std::to_string(m_.dim) + ", N^" +
           std::to_string(n_.dim) + "))";
  }

 private:
  PlotDomain m_, n_;
};

class FormsSheaf final : public SmoothSet {
 public:
  explicit FormsSheaf(int p) : p_(p) {}

  bool is_plot(const PlotDomain& U, const PlotWitness& w) const override {
    const auto* f = std::get_if<ExteriorForm>(&w.data);
    if (!f) return false;
    return f->dim() == U.dim && f->degree() == p_;
  }
  PlotWitness restrict(const SmoothMap& phi,
                       const PlotWitness& w) const override {
    const auto& f = std::get<ExteriorForm>(w.data);
    return PlotWitness(f.pullback(phi.components, phi.source.dim));
  }
  PointsReport points() const override {
    PointsReport r;
    if (p_ == 0) {
      r.concrete = true;
      r.description = "0-forms on the point: the reals";
      return r;
    }
    r.concrete = false;
    r.finite_count = 1;
    r.description = "exactly one point (the zero " + std::to_string(p_) +
                    "-form on the one-point domain)";
    // a nonzero plot that the underlying point map cannot see
    ExteriorForm vol(p_, p_);
    std::vector<int> gens;
    for (int i = 0; i < p_; ++i) gens.push_back(i);
    vol.add_term(gens, Expr::one());
    r.non_concreteness_witness = PlotWitness(vol);
    return r;
  }
  std::string describe() const override {
    return "forms_sheaf(Omega^" + std::to_string(p_) + ")";
  }

 private:
  int p_;
};

class TowerLimit final : public SmoothSet {
 public:
  TowerLimit(std::vector<SmoothSetPtr> levels,
             std::vector<std::function<PlotWitness(const PlotWitness&)>> proj)
      : levels_(std::move(levels)), proj_(std::move(proj)) {
    if (levels_.empty() || proj_.size() + 1 != levels_.size())
      throw signature_error("tower_limit: need k levels and k-1 projections");
  }

  bool is_plot(const PlotDomain& U, const PlotWitness& w) const override {
    const auto* t = std::get_if<TowerWitness>(&w.data);
    if (!t || t->levels.size() != levels_.size()) return false;
    for (size_t k = 0; k < levels_.size(); ++k)
      if (!levels_[k]->is_plot(U, t->levels[k])) return false;
    for (size_t k = 0; k + 1 < levels_.size(); ++k)
      if (!witness_equal(proj_[k](t->levels[k + 1]), t->levels[k]))
        return false;
    return true;
  }
  PlotWitness restrict(const SmoothMap& phi,
                       const PlotWitness& w) const override {
    const auto& t = std::get<TowerWitness>(w.data);
    std::vector<PlotWitness> out;
    for (size_t k = 0; k < levels_.size(); ++k)
      out.push_back(levels_[k]->restrict(phi, t.levels[k]));
    return PlotWitness::tower(std::move(out));
  }
  PointsReport points() const override {
    PointsReport r;
    r.concrete = true;
    for (const auto& l : levels_) {
      PointsReport lr = l->points();
      if (!lr.concrete) {
        r.concrete = false;
        r.non_concreteness_witness = lr.non_concreteness_witness;
      }
    }
    r.description = "projection-compatible sequences of level points (depth " +
                    std::to_string(levels_.size()) + ")";
    return r;
  }
  std::string describe() const override {
    return "tower_limit(depth " + std::to_string(levels_.size()) + ")";
  }

 private:
  std::vector<SmoothSetPtr> levels_;
  std::vector<std::function<PlotWitness(const PlotWitness&)>> proj_;
};

class QuotientSet final : public SmoothSet {
 public:
  QuotientSet(SmoothSetPtr cover,
              std::function<bool(const PlotWitness&, const PlotWitness&)> rel)
      : cover_(std::move(cover)), related_(std::move(rel)) {}

  bool is_plot(const PlotDomain& U, const PlotWitness& w) const override {
    const auto* q = std::get_if<QuotientWitness>(&w.data);
    return q && cover_->is_plot(U, *q->lift);
  }
  PlotWitness restrict(const SmoothMap& phi,
                       const PlotWitness& w) const override {
    const auto& q = std::get<QuotientWitness>(w.data);
    return PlotWitness::quotient_lift(cover_->restrict(phi, *q.lift));
  }
  /// equality of quotient plots is decided by the supplied relation oracle
  bool same_plot(const PlotWitness& a, const PlotWitness& b) const {
    const auto& qa = std::get<QuotientWitness>(a.data);
    const auto& qb = std::get<QuotientWitness>(b.data);
    return related_(*qa.lift, *qb.lift);
  }
  PointsReport points() const override {
    PointsReport r = cover_->points();
    r.description = "equivalence classes of: " + r.description;
    return r;
  }
  std::string describe() const override {
    return "quotient(" + cover_->describe() + ")";
  }

 private:
  SmoothSetPtr cover_;
  std::function<bool(const PlotWitness&, const PlotWitness&)> related_;
};

}  // namespace

SmoothSetPtr representable(int n) { return std::make_shared<Representable>(n); }
SmoothSetPtr product(SmoothSetPtr x, SmoothSetPtr y) {
  return std::make_shared<ProductSet>(std::move(x), std::move(y));
}
SmoothSetPtr exponential(const PlotDomain& m, const PlotDomain& n) {
  return std::make_shared<Exponential>(m, n);
}
SmoothSetPtr sections_sheaf(const BundleSignature& sig,
                            const PlotDomain& base_window) {
  sig.require_fields();
  if (base_window.dim != sig.base_dim())
    throw signature_error("sections_sheaf: window dimension mismatch");
  // a family F : U x M -> fiber with pi . F = pr_2 is exactly a U-plot of
  // the exponential C^inf(M, fiber); the identification is definitional here
  return exponential(base_window, PlotDomain::whole(sig.field_count()));
}
SmoothSetPtr forms_sheaf(int p) {
  if (p < 0) throw signature_error("forms_sheaf: negative degree");
  return std::make_shared<FormsSheaf>(p);
}
SmoothSetPtr tower_limit(
    std::vector<SmoothSetPtr> levels,
    std::vector<std::function<PlotWitness(const PlotWitness&)>> projections) {
  return std::make_shared<TowerLimit>(std::move(levels), std::move(projections));
}
SmoothSetPtr quotient(
    SmoothSetPtr cover,
    std::function<bool(const PlotWitness&, const PlotWitness&)> related) {
  return std::make_shared<QuotientSet>(std::move(cover), std::move(related));
}

bool check_functoriality(const SmoothSet& x, const SmoothMap& phi,
                         const SmoothMap& psi, const PlotWitness& w) {
  if (phi.target.dim != psi.source.dim)
    throw plot_error("check_functoriality: maps not composable");
  PlotWitness lhs = x.restrict(compose(psi, phi), w);
  PlotWitness rhs = x.restrict(phi, x.restrict(psi, w));
  return witness_equal(lhs, rhs);
}

PlotWitness glue(const SmoothSet& x, const std::vector<PlotDomain>& cover,
                 const std::vector<PlotWitness>& witnesses) {
  if (cover.empty() || cover.size() != witnesses.size())
    throw plot_error("glue: cover and witness counts differ");
  for (size_t i = 0; i < cover.size(); ++i)
    for (size_t j = i + 1; j < cover.size(); ++j) {
      if (witness_compatible(witnesses[i], witnesses[j])) continue;
      PlotDomain overlap = intersect(cover[i], cover[j]);
      std::vector<Rational> pt = overlap.is_empty() ? std::vector<Rational>{}
                                                    : overlap.sample();
      std::ostringstream os;
      os << "glue: witnesses " << i << " and " << j
         << " differ as normal forms";
      if (!pt.empty()) {
        os << "; sample point in the overlap: (";
        for (size_t k = 0; k < pt.size(); ++k)
          os << (k ? ", " : "") << pt[k];
        os << ")";
      }
      throw glue_error(os.str(), i, j, pt);
    }
  return witnesses.front();
}

}  // namespace varjet
