#pragma once

#include <Eigen/Dense>
#include <memory>

#include "varjet/expr.hpp"

namespace varjet {

struct holonomy_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Piecewise-elementary path [0,1] -> R^n, closed under concatenation,
/// reversal, and precomposition with scalar reparametrizations. Evaluation
/// and velocity are numeric; elementary pieces are expressions in the single
/// parameter s (base coordinate 0).
class Path {
 public:
  /// components as expressions in s = base coordinate 0
  static Path from_components(std::vector<Expr> components);
  static Path constant(std::vector<double> point);
  /// straight segment from a to b
  static Path line(const std::vector<double>& a, const std::vector<double>& b);

  int dim() const { return dim_; }
  std::vector<double> point(double s) const;
  std::vector<double> velocity(double s) const;
  std::vector<double> start() const { return point(0.0); }
  std::vector<double> end() const { return point(1.0); }

  /// precompose with the quintic smoothstep, so velocity vanishes at both
  /// endpoints (sitting instants; makes concatenations smooth at the joint)
  Path with_sitting_instants() const;
  /// precompose with rho : [0,1] -> [0,1], an expression in s; monotonicity
  /// and endpoint fixing are probed on a grid
  Path precompose(const Expr& rho) const;

  /// first traverse second.operand, then first.operand:
  /// (g . h)(s) = h(2s) on [0,1/2], g(2s-1) on [1/2,1]
  friend Path compose(const Path& g, const Path& h);
  /// reversed orientation: s -> g(1-s)
  friend Path reverse(const Path& g);

 private:
  enum class Kind { Elementary, Concat, Reverse, Reparam };
  Path() = default;

  Kind kind_ = Kind::Elementary;
  int dim_ = 0;
  std::vector<Expr> components_, derivs_;        // Elementary
  std::shared_ptr<const Path> a_, b_;            // children (a_ first-traversed)
  Expr rho_, rho_prime_;                         // Reparam
};

Path compose(const Path& g, const Path& h);
Path reverse(const Path& g);

enum class GroupTag { U1, SU2, GL };

/// Matrix-valued connection 1-form A = A_mu dx^mu over a base window;
/// entries of A_mu are complex, given as (re, im) expression pairs in the
/// base coordinates.
struct ConnectionForm {
  GroupTag group = GroupTag::GL;
  int base_dim = 0;
  int matrix_dim = 1;
  /// components[mu][i][j] = (Re A_mu(i,j), Im A_mu(i,j))
  std::vector<std::vector<std::vector<std::pair<Expr, Expr>>>> components;

  static ConnectionForm zero(GroupTag g, int base_dim, int matrix_dim);

  /// A_mu evaluated at x
  Eigen::MatrixXcd component_at(int mu, const std::vector<double>& x) const;
  /// A(x)(v) = sum_mu v^mu A_mu(x)
  Eigen::MatrixXcd contract(const std::vector<double>& x,
                            const std::vector<double>& v) const;
  /// max Hermitian defect |A + A^dagger| over the sample points
  double anti_hermitian_defect(
      const std::vector<std::vector<double>>& samples) const;
  void validate() const;
};

struct GroupElement {
  GroupTag group = GroupTag::GL;
  Eigen::MatrixXcd matrix;

  static GroupElement identity(GroupTag g, int matrix_dim);
  GroupElement inverse() const;
  double unitary_defect() const;
  friend GroupElement operator*(const GroupElement& a, const GroupElement& b);
};

/// distance in the max-entry norm
double group_distance(const GroupElement& a, const GroupElement& b);

/// P exp int_gamma A: classical fourth-order integration of the
/// parallel-transport equation g' = -A(gamma(s))(gamma'(s)) g, g(0) = id.
/// Convention: holonomy(compose(g,h)) ~ holonomy(g) * holonomy(h).
GroupElement holonomy(const ConnectionForm& A, const Path& gamma, int steps);

struct ThinProbeReport {
  std::vector<double> deviations;  // one per reparametrization
  double max_deviation = 0.0;
};

/// Holonomy invariance under precomposition with monotone endpoint-fixing
/// reparametrizations (expressions in s); throws on a non-monotone rho.
ThinProbeReport thin_invariance_probe(const ConnectionForm& A,
                                      const Path& gamma,
                                      const std::vector<Expr>& reparams,
                                      int steps = 4096);

}  // namespace varjet
