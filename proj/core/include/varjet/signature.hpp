#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace varjet {

/// Thrown by constructors and operations on malformed domain data.
struct signature_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Symmetric derivative multi-index: one derivative count per base direction.
/// The representation collapses u_xt and u_tx by construction.
struct MultiIndex {
  std::vector<int> counts;

  MultiIndex() = default;
  explicit MultiIndex(int dim) : counts(static_cast<size_t>(dim), 0) {}
  explicit MultiIndex(std::vector<int> c) : counts(std::move(c)) {
    for (int k : counts)
      if (k < 0) throw signature_error("MultiIndex: negative count");
  }

  int dim() const { return static_cast<int>(counts.size()); }
  int order() const {
    int s = 0;
    for (int k : counts) s += k;
    return s;
  }
  bool is_zero() const { return order() == 0; }

  MultiIndex bumped(int direction) const {
    MultiIndex r(*this);
    r.counts.at(static_cast<size_t>(direction)) += 1;
    return r;
  }
  MultiIndex lowered(int direction) const {
    MultiIndex r(*this);
    if (r.counts.at(static_cast<size_t>(direction)) == 0)
      throw signature_error("MultiIndex: cannot lower zero count");
    r.counts[static_cast<size_t>(direction)] -= 1;
    return r;
  }
  MultiIndex plus(const MultiIndex& o) const {
    if (o.dim() != dim()) throw signature_error("MultiIndex: dim mismatch");
    MultiIndex r(*this);
    for (int d = 0; d < dim(); ++d) r.counts[size_t(d)] += o.counts[size_t(d)];
    return r;
  }
  /// componentwise >=
  bool contains(const MultiIndex& o) const {
    if (o.dim() != dim()) return false;
    for (int d = 0; d < dim(); ++d)
      if (counts[size_t(d)] < o.counts[size_t(d)]) return false;
    return true;
  }
  MultiIndex minus(const MultiIndex& o) const {
    if (!contains(o)) throw signature_error("MultiIndex: not contained");
    MultiIndex r(*this);
    for (int d = 0; d < dim(); ++d) r.counts[size_t(d)] -= o.counts[size_t(d)];
    return r;
  }

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.counts == b.counts;
  }
  friend bool operator!=(const MultiIndex& a, const MultiIndex& b) {
    return !(a == b);
  }
};

/// graded comparison: by |I| first, then lexicographic
int compare(const MultiIndex& a, const MultiIndex& b);

/// Adapted coordinates of a trivial bundle over a coordinate chart:
/// base coordinates x^mu, field components u^a, plus named real parameters
/// that stay symbolic (mass etc.).
class BundleSignature {
 public:
  BundleSignature(std::vector<std::string> base_names,
                  std::vector<std::string> field_names,
                  std::vector<std::string> param_names = {});

  /// Pure-base chart of dimension n with coordinates named t0, t1, ...
  /// (used by the smooth-set layer for plot domains; has no fields).
  static BundleSignature chart(int dim, const std::string& stem = "t");

  int base_dim() const { return static_cast<int>(base_.size()); }
  int field_count() const { return static_cast<int>(fields_.size()); }

  const std::vector<std::string>& base_names() const { return base_; }
  const std::vector<std::string>& field_names() const { return fields_; }
  const std::vector<std::string>& param_names() const { return params_; }

  const std::string& base_name(int i) const { return base_.at(size_t(i)); }
  const std::string& field_name(int a) const { return fields_.at(size_t(a)); }

  std::optional<int> base_index(const std::string& name) const;
  std::optional<int> field_index(const std::string& name) const;
  bool is_param(const std::string& name) const;

  /// Jet-calculus modules require at least one base direction and one field.
  void require_fields() const {
    if (base_.empty() || fields_.empty())
      throw signature_error("signature has no jet structure");
  }

  /// Renders a multi-index as the subscript string of a jet coordinate,
  /// e.g. counts (2,1) over base (x,t) -> "xxt".
  std::string subscript(const MultiIndex& I) const;

  friend bool operator==(const BundleSignature& a, const BundleSignature& b) {
    return a.base_ == b.base_ && a.fields_ == b.fields_ && a.params_ == b.params_;
  }

 private:
  std::vector<std::string> base_;
  std::vector<std::string> fields_;
  std::vector<std::string> params_;
};

}  // namespace varjet
