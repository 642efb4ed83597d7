#include "varjet/signature.hpp"

#include <set>

namespace varjet {

int compare(const MultiIndex& a, const MultiIndex& b) {
  if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
  if (a.counts != b.counts) return a.counts < b.counts ? -1 : 1;
  return 0;
}

BundleSignature::BundleSignature(std::vector<std::string> base_names,
                                 std::vector<std::string> field_names,
                                 std::vector<std::string> param_names)
    : base_(std::move(base_names)),
      fields_(std::move(field_names)),
      params_(std::move(param_names)) {
  std::set<std::string> seen;
  for (const auto& group : {base_, fields_, params_})
    for (const auto& n : group) {
      if (n.empty()) throw signature_error("empty coordinate name");
      if (!seen.insert(n).second)
        throw signature_error("duplicate name in signature: " + n);
    }
}

BundleSignature BundleSignature::chart(int dim, const std::string& stem) {
  std::vector<std::string> names;
  for (int i = 0; i < dim; ++i) names.push_back(stem + std::to_string(i));
  return BundleSignature(std::move(names), {}, {});
}

std::optional<int> BundleSignature::base_index(const std::string& name) const {
  for (size_t i = 0; i < base_.size(); ++i)
    if (base_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> BundleSignature::field_index(const std::string& name) const {
  for (size_t i = 0; i < fields_.size(); ++i)
    if (fields_[i] == name) return static_cast<int>(i);
  return std::nullopt;
}

bool BundleSignature::is_param(const std::string& name) const {
  for (const auto& p : params_)
    if (p == name) return true;
  return false;
}

std::string BundleSignature::subscript(const MultiIndex& I) const {
  if (I.dim() != base_dim())
    throw signature_error("multi-index dimension mismatch");
  std::string s;
  for (int d = 0; d < base_dim(); ++d)
    for (int k = 0; k < I.counts[size_t(d)]; ++k) s += base_[size_t(d)];
  return s;
}

}  // namespace varjet
