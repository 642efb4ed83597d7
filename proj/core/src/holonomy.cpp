#include "varjet/holonomy.hpp"

#include <cmath>

namespace varjet {

namespace {

double eval_at(const Expr& e, double s) {
  Valuation v;
  v.base = {s};
  return e.evaluate(v);
}

Expr smoothstep_quintic() {
  // 10 s^3 - 15 s^4 + 6 s^5: fixes 0 and 1, first two derivatives vanish
  // at both endpoints
  Expr s = Expr::base_coord(0);
  return Expr::integer(10) * pow(s, 3) - Expr::integer(15) * pow(s, 4) +
         Expr::integer(6) * pow(s, 5);
}

}  // namespace

// ---------------------------------------------------------------------------
// paths

Path Path::from_components(std::vector<Expr> components) {
  if (components.empty())
    throw holonomy_error("path: no components");
  Path p;
  p.kind_ = Kind::Elementary;
  p.dim_ = static_cast<int>(components.size());
  for (const auto& c : components) p.derivs_.push_back(c.partial_base(0));
  p.components_ = std::move(components);
  return p;
}

Path Path::constant(std::vector<double> point) {
  std::vector<Expr> comps;
  for (double x : point) comps.push_back(Expr::constant(Rational(x)));
  return from_components(std::move(comps));
}

Path Path::line(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size())
    throw holonomy_error("line: endpoint dimensions differ");
  std::vector<Expr> comps;
  Expr s = Expr::base_coord(0);
  for (size_t i = 0; i < a.size(); ++i)
    comps.push_back(Expr::constant(Rational(a[i])) +
                    Expr::constant(Rational(b[i] - a[i])) * s);
  return from_components(std::move(comps));
}

std::vector<double> Path::point(double s) const {
  switch (kind_) {
    case Kind::Elementary: {
      std::vector<double> out;
      for (const auto& c : components_) out.push_back(eval_at(c, s));
      return out;
    }
    case Kind::Concat:
      return s <= 0.5 ? a_->point(2 * s) : b_->point(2 * s - 1);
    case Kind::Reverse:
      return a_->point(1 - s);
    case Kind::Reparam:
      return a_->point(eval_at(rho_, s));
  }
  throw holonomy_error("path: corrupt node");
}

std::vector<double> Path::velocity(double s) const {
  switch (kind_) {
    case Kind::Elementary: {
      std::vector<double> out;
      for (const auto& d : derivs_) out.push_back(eval_at(d, s));
      return out;
    }
    case Kind::Concat: {
      std::vector<double> v =
          s <= 0.5 ? a_->velocity(2 * s) : b_->velocity(2 * s - 1);
      for (double& x : v) x *= 2;
      return v;
    }
    case Kind::Reverse: {
      std::vector<double> v = a_->velocity(1 - s);
      for (double& x : v) x = -x;
      return v;
    }
    case Kind::Reparam: {
      std::vector<double> v = a_->velocity(eval_at(rho_, s));
      double dr = eval_at(rho_prime_, s);
      for (double& x : v) x *= dr;
      return v;
    }
  }
  throw holonomy_error("path: corrupt node");
}

Path Path::with_sitting_instants() const { return precompose(smoothstep_quintic()); }

Path Path::precompose(const Expr& rho) const {
  Expr drho = rho.partial_base(0);
  if (std::abs(eval_at(rho, 0.0)) > 1e-9 ||
      std::abs(eval_at(rho, 1.0) - 1.0) > 1e-9)
    throw holonomy_error("reparametrization does not fix the endpoints");
  const int grid = 257;
  for (int i = 0; i <= grid; ++i) {
    double s = double(i) / grid;
    if (eval_at(drho, s) < -1e-9)
      throw holonomy_error("reparametrization is not monotone");
  }
  Path p;
  p.kind_ = Kind::Reparam;
  p.dim_ = dim_;
  p.a_ = std::make_shared<Path>(*this);
  p.rho_ = rho;
  p.rho_prime_ = drho;
  return p;
}

Path compose(const Path& g, const Path& h) {
  if (g.dim() != h.dim())
    throw holonomy_error("compose: path dimensions differ");
  std::vector<double> mid_in = h.end(), mid_out = g.start();
  for (int i = 0; i < g.dim(); ++i)
    if (std::abs(mid_in[size_t(i)] - mid_out[size_t(i)]) > 1e-9)
      throw holonomy_error("compose: endpoint mismatch");
  Path p;
  p.kind_ = Path::Kind::Concat;
  p.dim_ = g.dim();
  p.a_ = std::make_shared<Path>(h);
  p.b_ = std::make_shared<Path>(g);
  return p;
}

Path reverse(const Path& g) {
  Path p;
  p.kind_ = Path::Kind::Reverse;
  p.dim_ = g.dim();
  p.a_ = std::make_shared<Path>(g);
  return p;
}

// ---------------------------------------------------------------------------
// connections and group elements

ConnectionForm ConnectionForm::zero(GroupTag g, int base_dim, int matrix_dim) {
  ConnectionForm a;
  a.group = g;
  a.base_dim = base_dim;
  a.matrix_dim = matrix_dim;
  a.components.assign(
      size_t(base_dim),
      std::vector<std::vector<std::pair<Expr, Expr>>>(
          size_t(matrix_dim),
          std::vector<std::pair<Expr, Expr>>(size_t(matrix_dim))));
  a.validate();
  return a;
}

void ConnectionForm::validate() const {
  if (group == GroupTag::U1 && matrix_dim != 1)
    throw holonomy_error("U(1) connection must be 1x1");
  if (group == GroupTag::SU2 && matrix_dim != 2)
    throw holonomy_error("SU(2) connection must be 2x2");
  if (components.size() != size_t(base_dim))
    throw holonomy_error("connection: one matrix component per base direction");
  for (const auto& m : components) {
    if (m.size() != size_t(matrix_dim))
      throw holonomy_error("connection: matrix shape mismatch");
    for (const auto& row : m)
      if (row.size() != size_t(matrix_dim))
        throw holonomy_error("connection: matrix shape mismatch");
  }
}

Eigen::MatrixXcd ConnectionForm::component_at(
    int mu, const std::vector<double>& x) const {
  Valuation v;
  v.base = x;
  Eigen::MatrixXcd m(matrix_dim, matrix_dim);
  for (int i = 0; i < matrix_dim; ++i)
    for (int j = 0; j < matrix_dim; ++j) {
      const auto& [re, im] = components[size_t(mu)][size_t(i)][size_t(j)];
      m(i, j) = std::complex<double>(re.evaluate(v), im.evaluate(v));
    }
  return m;
}

Eigen::MatrixXcd ConnectionForm::contract(const std::vector<double>& x,
                                          const std::vector<double>& v) const {
  if (x.size() != size_t(base_dim) || v.size() != size_t(base_dim))
    throw holonomy_error("contract: dimension mismatch");
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(matrix_dim, matrix_dim);
  for (int mu = 0; mu < base_dim; ++mu)
    if (v[size_t(mu)] != 0.0) out += v[size_t(mu)] * component_at(mu, x);
  return out;
}

double ConnectionForm::anti_hermitian_defect(
    const std::vector<std::vector<double>>& samples) const {
  double worst = 0.0;
  for (const auto& x : samples)
    for (int mu = 0; mu < base_dim; ++mu) {
      Eigen::MatrixXcd m = component_at(mu, x);
      worst = std::max(worst, (m + m.adjoint()).cwiseAbs().maxCoeff());
    }
  return worst;
}

GroupElement GroupElement::identity(GroupTag g, int matrix_dim) {
  return GroupElement{g, Eigen::MatrixXcd::Identity(matrix_dim, matrix_dim)};
}

GroupElement GroupElement::inverse() const {
  return GroupElement{group, matrix.inverse()};
}

double GroupElement::unitary_defect() const {
  Eigen::MatrixXcd d = matrix.adjoint() * matrix -
                       Eigen::MatrixXcd::Identity(matrix.rows(), matrix.cols());
  return d.cwiseAbs().maxCoeff();
}

GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  return GroupElement{a.group, a.matrix * b.matrix};
}

double group_distance(const GroupElement& a, const GroupElement& b) {
  return (a.matrix - b.matrix).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// parallel transport

GroupElement holonomy(const ConnectionForm& A, const Path& gamma, int steps) {
  A.validate();
  if (steps < 16) throw holonomy_error("holonomy: need at least 16 steps");
  if (gamma.dim() != A.base_dim)
    throw holonomy_error("holonomy: path/connection dimension mismatch");

  auto f = [&](double s, const Eigen::MatrixXcd& g) -> Eigen::MatrixXcd {
    return -A.contract(gamma.point(s), gamma.velocity(s)) * g;
  };
  Eigen::MatrixXcd g =
      Eigen::MatrixXcd::Identity(A.matrix_dim, A.matrix_dim);
  const double h = 1.0 / steps;
  for (int n = 0; n < steps; ++n) {
    double s = n * h;
    Eigen::MatrixXcd k1 = f(s, g);
    Eigen::MatrixXcd k2 = f(s + h / 2, g + (h / 2) * k1);
    Eigen::MatrixXcd k3 = f(s + h / 2, g + (h / 2) * k2);
    Eigen::MatrixXcd k4 = f(s + h, g + h * k3);
    g += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  if (!g.allFinite())
    throw holonomy_error("holonomy: non-finite values in transport");
  return GroupElement{A.group, std::move(g)};
}

ThinProbeReport thin_invariance_probe(const ConnectionForm& A,
                                      const Path& gamma,
                                      const std::vector<Expr>& reparams,
                                      int steps) {
  GroupElement base = holonomy(A, gamma, steps);
  ThinProbeReport report;
  for (const auto& rho : reparams) {
    GroupElement h = holonomy(A, gamma.precompose(rho), steps);
    double d = group_distance(base, h);
    report.deviations.push_back(d);
    report.max_deviation = std::max(report.max_deviation, d);
  }
  return report;
}

}  // namespace varjet
