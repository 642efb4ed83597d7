#pragma once

#include <functional>
#include <memory>
#include <variant>

#include "varjet/bicomplex.hpp"

namespace varjet {

/// Open region in n-space: a finite union of open axis-aligned boxes with
/// rational endpoints. An empty box list with dim > 0 denotes all of R^n;
/// dim == 0 is the one-point domain.
struct Box {
  std::vector<std::pair<Rational, Rational>> intervals;
  bool contains(const std::vector<Rational>& x) const;
  std::optional<Box> intersect(const Box& o) const;
  std::vector<Rational> center() const;
};

struct PlotDomain {
  int dim = 0;
  std::vector<Box> boxes;  // no boxes => whole space unless marked empty
  bool empty = false;

  static PlotDomain whole(int n) { return PlotDomain{n, {}}; }
  static PlotDomain point() { return PlotDomain{0, {}}; }
  static PlotDomain box(std::vector<std::pair<Rational, Rational>> iv);

  bool is_whole() const { return boxes.empty() && !empty; }
  bool is_empty() const { return empty; }
  bool contains(const std::vector<Rational>& x) const;
  /// some interior point, for witness-mismatch reporting
  std::vector<Rational> sample() const;
  /// chart signature with one base coordinate per dimension
  BundleSignature chart() const { return BundleSignature::chart(dim); }

  friend bool operator==(const PlotDomain& a, const PlotDomain& b);
};

/// pointwise intersection region of two domains of equal dimension
PlotDomain intersect(const PlotDomain& a, const PlotDomain& b);

/// Smooth map between plot domains, components as elementary expressions in
/// the canonical source chart coordinates t0, t1, ...
struct SmoothMap {
  PlotDomain source;
  PlotDomain target;
  std::vector<Expr> components;

  static SmoothMap identity(const PlotDomain& d);
  std::vector<double> operator()(const std::vector<double>& x) const;

  /// range containment probe by dense sampling (soundness caveat: sampling,
  /// not proof)
  bool maps_into_target(int samples_per_box = 1000) const;

  friend bool operator==(const SmoothMap& a, const SmoothMap& b) {
    return a.source == b.source && a.target == b.target &&
           a.components == b.components;
  }
};

/// outer after inner
SmoothMap compose(const SmoothMap& outer, const SmoothMap& inner);

struct PlotWitness;
using WitnessPtr = std::shared_ptr<const PlotWitness>;

struct PairWitness {
  WitnessPtr first, second;
};
struct TowerWitness {
  std::vector<PlotWitness> levels;
};
struct QuotientWitness {
  WitnessPtr lift;
};

/// Explicit symbolic carrier of a plot; shape must match the owning
/// combinator (maps for representables/exponentials/sections, forms for the
/// forms sheaf, sequences for tower limits, lifts for quotients).
struct PlotWitness {
  std::variant<SmoothMap, PairWitness, ExteriorForm, TowerWitness,
               QuotientWitness>
      data;

  PlotWitness() = default;
  PlotWitness(SmoothMap m) : data(std::move(m)) {}
  PlotWitness(ExteriorForm f) : data(std::move(f)) {}
  static PlotWitness pair(PlotWitness a, PlotWitness b);
  static PlotWitness tower(std::vector<PlotWitness> levels);
  static PlotWitness quotient_lift(PlotWitness lift);
};

bool witness_equal(const PlotWitness& a, const PlotWitness& b);

/// Equality of the defining formulas, ignoring the recorded source domains;
/// this is the agreement notion used when gluing plots over a cover (the
/// witnesses in scope are globally elementary, so agreement on an open
/// overlap forces equality of normal forms).
bool witness_compatible(const PlotWitness& a, const PlotWitness& b);

struct PointsReport {
  bool concrete = true;
  std::optional<size_t> finite_count;  // set when X(point) is finite
  std::string description;
  /// for a non-concrete verdict: a plot invisible to the underlying points
  std::optional<PlotWitness> non_concreteness_witness;
};

struct plot_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class SmoothSet;
using SmoothSetPtr = std::shared_ptr<const SmoothSet>;

/// A plot system: witness-checking membership, contravariant restriction
/// along smooth maps, and unique gluing. is_plot never searches; it checks
/// the supplied witness.
class SmoothSet {
 public:
  virtual ~SmoothSet() = default;
  virtual bool is_plot(const PlotDomain& U, const PlotWitness& w) const = 0;
  /// phi : V -> U, w a U-plot; returns the V-plot X(phi)(w)
  virtual PlotWitness restrict(const SmoothMap& phi,
                               const PlotWitness& w) const = 0;
  virtual PointsReport points() const = 0;
  virtual std::string describe() const = 0;
};

SmoothSetPtr representable(int n);
SmoothSetPtr product(SmoothSetPtr x, SmoothSetPtr y);
/// plots over U are smooth maps U x M -> N
SmoothSetPtr exponential(const PlotDomain& m, const PlotDomain& n);
/// sections of the trivial bundle over a base window; coincides with
/// exponential(window, R^#fields) and is built as exactly that object
SmoothSetPtr sections_sheaf(const BundleSignature& sig,
                            const PlotDomain& base_window);
/// plots over U are differential p-forms on U
SmoothSetPtr forms_sheaf(int p);
SmoothSetPtr tower_limit(
    std::vector<SmoothSetPtr> levels,
    std::vector<std::function<PlotWitness(const PlotWitness&)>> projections);
SmoothSetPtr quotient(
    SmoothSetPtr cover,
    std::function<bool(const PlotWitness&, const PlotWitness&)> related);

/// X(psi . phi) == X(phi) . X(psi) on the witness w
bool check_functoriality(const SmoothSet& x, const SmoothMap& phi,
                         const SmoothMap& psi, const PlotWitness& w);

struct glue_error : std::runtime_error {
  size_t first_index, second_index;
  std::vector<Rational> sample_point;
  glue_error(std::string msg, size_t i, size_t j, std::vector<Rational> pt)
      : std::runtime_error(std::move(msg)),
        first_index(i),
        second_index(j),
        sample_point(std::move(pt)) {}
};

/// Glues compatible plots over a cover into a plot over the union. For the
/// globally-elementary witnesses in scope, agreement on an open overlap
/// forces normal-form equality, and the common witness is returned.
PlotWitness glue(const SmoothSet& x, const std::vector<PlotDomain>& cover,
                 const std::vector<PlotWitness>& witnesses);

}  // namespace varjet
