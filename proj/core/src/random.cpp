#include "varjet/random.hpp"

#include <algorithm>

namespace varjet {

int RandomSource::uniform_int(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(engine_);
}

double RandomSource::uniform_real(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

Rational RandomSource::small_rational(int max_abs_num, int max_den) {
  int num = 0;
  while (num == 0) num = uniform_int(-max_abs_num, max_abs_num);
  return Rational(num, uniform_int(1, max_den));
}

MultiIndex RandomSource::multi_index(int base_dim, int max_order) {
  MultiIndex I(base_dim);
  int order = uniform_int(0, max_order);
  for (int k = 0; k < order; ++k)
    I = I.bumped(uniform_int(0, base_dim - 1));
  return I;
}

Expr RandomSource::polynomial(const BundleSignature& sig, int max_order,
                              int max_degree, int terms) {
  Expr out;
  for (int t = 0; t < terms; ++t) {
    Expr term = Expr::constant(small_rational());
    int degree = uniform_int(0, max_degree);
    const auto& params = sig.param_names();
    for (int f = 0; f < degree; ++f) {
      int pick = uniform_int(0, params.empty() ? 1 : 2);
      if (pick == 0) {
        term *= Expr::base_coord(uniform_int(0, sig.base_dim() - 1));
      } else if (pick == 1 && sig.field_count() > 0) {
        term *= Expr::jet(
            JetCoordinate{uniform_int(0, sig.field_count() - 1),
                          multi_index(sig.base_dim(), max_order)});
      } else {
        term *= Expr::parameter(
            params[static_cast<size_t>(uniform_int(0, int(params.size()) - 1))]);
      }
    }
    out += term;
  }
  return out;
}

Expr RandomSource::base_polynomial(int dim, int max_degree, int terms) {
  Expr out;
  for (int t = 0; t < terms; ++t) {
    Expr term = Expr::constant(small_rational());
    int degree = uniform_int(0, max_degree);
    for (int f = 0; f < degree; ++f)
      term *= Expr::base_coord(uniform_int(0, dim - 1));
    out += term;
  }
  return out;
}

BigradedForm RandomSource::form(const BundleSignature& sig, int s, int r,
                                int max_order, int terms) {
  const int m = sig.base_dim();
  BigradedForm out(sig, s, r);
  if (r > m) return out;
  for (int t = 0; t < terms; ++t) {
    // strictly increasing dx block
    std::vector<int> all(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) all[static_cast<size_t>(i)] = i;
    std::shuffle(all.begin(), all.end(), engine_);
    std::vector<int> dx(all.begin(), all.begin() + r);
    std::sort(dx.begin(), dx.end());
    // distinct contact generators
    std::vector<ContactGenerator> theta;
    int attempts = 0;
    while (static_cast<int>(theta.size()) < s && attempts++ < 50) {
      ContactGenerator g{uniform_int(0, sig.field_count() - 1),
                         multi_index(m, max_order)};
      bool dup = false;
      for (const auto& h : theta)
        if (compare(g, h) == 0) dup = true;
      if (!dup) theta.push_back(g);
    }
    if (static_cast<int>(theta.size()) < s) continue;
    std::sort(theta.begin(), theta.end(),
              [](const ContactGenerator& a, const ContactGenerator& b) {
                return compare(a, b) < 0;
              });
    out.add_term(FormMonomial{std::move(dx), std::move(theta)},
                 polynomial(sig, max_order, 2, 2));
  }
  return out;
}

ExteriorForm RandomSource::exterior_form(int dim, int degree, int coeff_degree,
                                         int terms) {
  ExteriorForm f(dim, degree);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> all(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) all[static_cast<size_t>(i)] = i;
    std::shuffle(all.begin(), all.end(), engine_);
    std::vector<int> gens(all.begin(), all.begin() + degree);
    f.add_term(gens, base_polynomial(dim, coeff_degree, 2));
  }
  return f;
}

SmoothMap RandomSource::smooth_map(const PlotDomain& source,
                                   const PlotDomain& target, int max_degree) {
  SmoothMap f;
  f.source = source;
  f.target = target;
  for (int i = 0; i < target.dim; ++i)
    f.components.push_back(base_polynomial(std::max(source.dim, 1), max_degree, 3));
  return f;
}

}  // namespace varjet
