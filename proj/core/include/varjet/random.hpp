#pragma once

#include <cstdint>
#include <random>

#include "varjet/bicomplex.hpp"
#include "varjet/smoothset.hpp"

namespace varjet {

/// Deterministic generator for randomized property suites; every draw is a
/// pure function of the seed.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::mt19937_64& engine() { return engine_; }
  int uniform_int(int lo, int hi);
  double uniform_real(double lo, double hi);
  /// nonzero rational with small numerator and denominator
  Rational small_rational(int max_abs_num = 5, int max_den = 4);

  MultiIndex multi_index(int base_dim, int max_order);
  /// polynomial in base coordinates, jet coordinates up to max_order, and
  /// the signature's parameters
  Expr polynomial(const BundleSignature& sig, int max_order, int max_degree,
                  int terms);
  /// polynomial in the base coordinates of a dim-dimensional chart only
  Expr base_polynomial(int dim, int max_degree, int terms);
  /// homogeneous-bidegree form with polynomial coefficients
  BigradedForm form(const BundleSignature& sig, int s, int r, int max_order,
                    int terms);
  SmoothMap smooth_map(const PlotDomain& source, const PlotDomain& target,
                       int max_degree = 2);
  /// degree-p form on a dim-dimensional chart with polynomial coefficients;
  /// keep coeff_degree low when exact pullback-composition identities are
  /// wanted (the normal form expands powers of sums only up to exponent 4)
  ExteriorForm exterior_form(int dim, int degree, int coeff_degree = 1,
                             int terms = 2);

 private:
  std::mt19937_64 engine_;
};

}  // namespace varjet
