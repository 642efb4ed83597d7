// Acceptance gate: one line of output per criterion, nonzero exit when any
// criterion fails. argv[1] = cli binary, argv[2] = model data directory.

#include <chrono>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "varjet/holonomy.hpp"
#include "varjet/parse.hpp"
#include "varjet/random.hpp"
#include "varjet/variational.hpp"

using namespace varjet;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::printf("criterion %d: %s — %s\n", criterion, ok ? "PASS" : "FAIL",
              what.c_str());
  if (!ok) ++failures;
}

const BundleSignature& wave_sig() {
  static BundleSignature s({"t", "x"}, {"u"}, {"m"});
  return s;
}

Expr P(const std::string& text) { return parse_expression(text, wave_sig()); }

template <typename F>
double quad2(F f, int n = 128) {
  auto w1 = [n](int i) {
    if (i == 0 || i == n) return 1.0;
    return i % 2 ? 4.0 : 2.0;
  };
  double h = 1.0 / n, total = 0;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      total += w1(i) * w1(j) * f(i * h, j * h);
  return total * h * h / 9.0;
}

// ---- criterion 1: bicomplex identities ------------------------------------

void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  RandomSource rs(101);
  int checked = 0;
  bool ok = true;
  BundleSignature one({"x"}, {"u"});
  for (int c = 0; c < 200 && ok; ++c) {
    const BundleSignature& sig = (c % 4 == 0) ? one : wave_sig();
    BigradedForm w = rs.form(sig, rs.uniform_int(0, 2),
                             rs.uniform_int(0, sig.base_dim()), 2, 2);
    ok = d_horizontal(d_horizontal(w)).is_zero() &&
         d_vertical(d_vertical(w)).is_zero() &&
         (d_horizontal(d_vertical(w)) + d_vertical(d_horizontal(w))).is_zero();
    ++checked;
  }
  double secs = std::chrono::duration<double>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  std::ostringstream os;
  os << "d_H^2 = d_V^2 = d_Hd_V + d_Vd_H = 0 on " << checked
     << " random forms (" << secs << " s)";
  report(1, ok && secs < 30.0, os.str());
}

// ---- criterion 2: ev-pullback splits the exterior derivative --------------

void criterion_2() {
  RandomSource rs(102);
  bool ok = true;
  for (int c = 0; c < 50 && ok; ++c) {
    BigradedForm w = rs.form(wave_sig(), rs.uniform_int(0, 1),
                             rs.uniform_int(0, 1), 1, 2);
    SectionFamily fam{2, {rs.base_polynomial(4, 2, 3)}};
    ok = ev_pullback(w, fam).d() ==
         ev_pullback(d_horizontal(w), fam) + ev_pullback(d_vertical(w), fam);
  }
  report(2, ok, "d(ev* w) = ev*(d_H w) + ev*(d_V w) on 50 two-parameter families");
}

// ---- criterion 3: Euler-Lagrange vs numerical first variation -------------

void criterion_3() {
  const char* densities[] = {"(1/2)*u_x^2", "(1/2)*(u_t^2 - u_x^2)",
                             "(1/2)*(u_t^2 - u_x^2 - m^2*u^2)",
                             "(1/2)*u_xx^2"};
  Section phi = Section::make(wave_sig(), {P("sin(t + 2*x) + t^2*x")});
  Expr bump = P("(t*(1-t)*x*(1-x))^4");
  Section psi = Section::make(wave_sig(), {bump});
  std::map<std::string, double> params = {{"m", 1.0}};
  double worst = 0;
  for (const char* d : densities) {
    Lagrangian L{P(d)};
    // action derivative d/deps S[phi + eps psi] by central difference
    auto action = [&](double eps) {
      Section shifted = Section::make(
          wave_sig(),
          {phi.components[0] + Expr::constant(Rational(eps)) * bump});
      Expr density_on = pull_back_to_base(L.density, shifted, wave_sig());
      return quad2([&](double t, double x) {
        Valuation v;
        v.base = {t, x};
        v.params = params;
        return density_on.evaluate(v);
      });
    };
    const double h = 1.0 / 64;
    double d1 = (action(h) - action(-h)) / (2 * h);
    double d2 = (action(h / 2) - action(-h / 2)) / h;
    double numeric = (4 * d2 - d1) / 3;

    Expr el_on = pull_back_to_base(
        euler_lagrange(L, wave_sig()).components[0] * bump, phi, wave_sig());
    double symbolic = quad2([&](double t, double x) {
      Valuation v;
      v.base = {t, x};
      v.params = params;
      return el_on.evaluate(v);
    });
    worst = std::max(worst, std::abs(numeric - symbolic));
  }
  std::ostringstream os;
  os << "symbolic E matches the quadrature first variation, max gap " << worst;
  report(3, worst < 1e-6, os.str());
}

// ---- criterion 4: divergences and Helmholtz -------------------------------

void criterion_4() {
  RandomSource rs(104);
  bool ok = true;
  for (int c = 0; c < 100 && ok; ++c) {
    std::vector<Expr> current = {rs.polynomial(wave_sig(), 2, 3, 3),
                                 rs.polynomial(wave_sig(), 2, 3, 3)};
    ok = euler_lagrange({total_divergence(current, wave_sig())}, wave_sig())
             .components[0]
             .is_zero();
  }
  for (int c = 0; c < 50 && ok; ++c) {
    Lagrangian L{rs.polynomial(wave_sig(), 2, 3, 3)};
    ok = helmholtz_check(euler_lagrange(L, wave_sig()), wave_sig()).variational;
  }
  ok = ok &&
       !helmholtz_check({{P("u_t - u*u_x")}}, wave_sig()).variational;
  report(4, ok,
         "E annihilates 100 divergences; Helmholtz accepts 50 EL sources and "
         "rejects u_t - u*u_x");
}

// ---- criterion 5: Noether identity ----------------------------------------

void criterion_5() {
  bool ok = true;
  {
    Lagrangian L{P("(1/2)*(u_t^2 - u_x^2)")};
    EvolutionaryField q{{P("u_t")}};
    Current j = noether_current(L, q, wave_sig());
    Expr interior =
        q.characteristics[0] * euler_lagrange(L, wave_sig()).components[0];
    ok = total_divergence(j.components, wave_sig()) == -interior;
  }
  RandomSource rs(105);
  for (int c = 0; c < 20 && ok; ++c) {
    Expr density;
    for (int t = 0; t < 3; ++t) {
      Expr term = Expr::constant(rs.small_rational());
      for (int k = rs.uniform_int(1, 2); k > 0; --k)
        term = term * Expr::jet(0, rs.multi_index(2, 1));
      density += term;
    }
    Lagrangian L{density};
    EvolutionaryField q{{c % 2 ? P("u_t") : P("u_x")}};
    Current j = noether_current(L, q, wave_sig());
    Expr interior =
        q.characteristics[0] * euler_lagrange(L, wave_sig()).components[0];
    ok = total_divergence(j.components, wave_sig()) == -interior;
  }
  report(5, ok,
         "D_mu J^mu + Q E(L) = 0 exactly for the wave case and 20 randomized "
         "symmetric models");
}

// ---- criterion 6: jet semantics -------------------------------------------

void criterion_6() {
  RandomSource rs(106);
  bool ok = true;
  double worst = 0;
  for (int c = 0; c < 100 && ok; ++c) {
    Expr e = rs.polynomial(wave_sig(), 2, 2, 3);
    Section phi = Section::make(wave_sig(), {rs.base_polynomial(2, 2, 3)});
    std::vector<double> x = {rs.uniform_real(-1, 1), rs.uniform_real(-1, 1)};
    int mu = rs.uniform_int(0, 1);
    std::map<std::string, double> params = {{"m", 0.75}};
    double lhs = evaluate_on_section(total_derivative(e, mu, wave_sig()), phi,
                                     x, wave_sig(), params);
    Expr pulled = pull_back_to_base(e, phi, wave_sig()).partial_base(mu);
    Valuation v;
    v.base = x;
    v.params = params;
    double rhs = pulled.evaluate(v);
    worst = std::max(worst, std::abs(lhs - rhs));
    ok = worst < 1e-8;
  }
  for (int c = 0; c < 20 && ok; ++c) {
    Section phi = Section::make(wave_sig(), {rs.base_polynomial(2, 3, 4)});
    std::vector<Rational> x = {rs.small_rational(), rs.small_rational()};
    JetPoint p = jet_prolong_section(phi, x, 4, wave_sig());
    for (int k = 0; k <= 4 && ok; ++k)
      for (int l = 0; l <= k && ok; ++l)
        ok = tower_project(tower_project(p, k), l) == tower_project(p, l);
  }
  std::ostringstream os;
  os << "ev . D_mu = d_mu . ev on 100 triples (max gap " << worst
     << "); tower projections functorial";
  report(6, ok, os.str());
}

// ---- criterion 7: sheaf axioms --------------------------------------------

void criterion_7() {
  RandomSource rs(107);
  bool ok = true;
  for (int c = 0; c < 50 && ok; ++c) {
    PlotDomain V = PlotDomain::whole(rs.uniform_int(1, 2));
    PlotDomain U = PlotDomain::whole(rs.uniform_int(1, 2));
    PlotDomain T = PlotDomain::whole(rs.uniform_int(1, 2));
    SmoothMap phi = rs.smooth_map(V, U);
    SmoothMap psi = rs.smooth_map(U, T);

    {
      int n = rs.uniform_int(1, 2);
      ok = ok && check_functoriality(
                     *representable(n), phi, psi,
                     PlotWitness(rs.smooth_map(T, PlotDomain::whole(n))));
    }
    ok = ok &&
         check_functoriality(
             *product(representable(1), representable(2)), phi, psi,
             PlotWitness::pair(
                 PlotWitness(rs.smooth_map(T, PlotDomain::whole(1))),
                 PlotWitness(rs.smooth_map(T, PlotDomain::whole(2)))));
    ok = ok && check_functoriality(
                   *exponential(PlotDomain::whole(1), PlotDomain::whole(1)),
                   phi, psi,
                   PlotWitness(rs.smooth_map(PlotDomain::whole(T.dim + 1),
                                             PlotDomain::whole(1))));
    {
      BundleSignature sig({"t"}, {"u"});
      ok = ok && check_functoriality(
                     *sections_sheaf(sig, PlotDomain::whole(1)), phi, psi,
                     PlotWitness(rs.smooth_map(PlotDomain::whole(T.dim + 1),
                                               PlotDomain::whole(1))));
    }
    {
      int p = rs.uniform_int(1, T.dim);
      ok = ok && check_functoriality(*forms_sheaf(p), phi, psi,
                                     PlotWitness(rs.exterior_form(T.dim, p)));
    }
    {
      auto drop = [](const PlotWitness& w2) {
        SmoothMap m = std::get<SmoothMap>(w2.data);
        m.components.pop_back();
        m.target = PlotDomain::whole(1);
        return PlotWitness(std::move(m));
      };
      SmoothMap top = rs.smooth_map(T, PlotDomain::whole(2));
      ok = ok && check_functoriality(
                     *tower_limit({representable(1), representable(2)}, {drop}),
                     phi, psi,
                     PlotWitness::tower(
                         {drop(PlotWitness(top)), PlotWitness(top)}));
    }
    ok = ok && check_functoriality(
                   *quotient(representable(1), witness_equal), phi, psi,
                   PlotWitness::quotient_lift(
                       PlotWitness(rs.smooth_map(T, PlotDomain::whole(1)))));
  }

  // glue-restrict round trips
  for (int c = 0; c < 20 && ok; ++c) {
    SmoothSetPtr r1 = representable(1);
    std::vector<PlotDomain> cover = {PlotDomain::box({{-2, 1}}),
                                     PlotDomain::box({{0, 2}})};
    SmoothMap f = rs.smooth_map(PlotDomain::whole(1), PlotDomain::whole(1));
    SmoothMap f0 = f, f1 = f;
    f0.source = cover[0];
    f1.source = cover[1];
    try {
      PlotWitness glued = glue(*r1, cover, {PlotWitness(f0), PlotWitness(f1)});
      SmoothMap inc = SmoothMap::identity(cover[0]);
      inc.target = PlotDomain::whole(1);
      ok = witness_compatible(r1->restrict(inc, glued), PlotWitness(f0));
    } catch (const glue_error&) {
      ok = false;
    }
    SmoothMap g = f1;
    g.components[0] += Expr::one();
    try {
      glue(*r1, cover, {PlotWitness(f0), PlotWitness(g)});
      ok = false;
    } catch (const glue_error&) {
    }
  }

  for (int p = 1; p <= 3 && ok; ++p) {
    PointsReport r = forms_sheaf(p)->points();
    ok = r.finite_count && *r.finite_count == 1 && !r.concrete &&
         r.non_concreteness_witness.has_value();
  }
  report(7, ok,
         "functoriality on 50 cases per combinator; glue-restrict round "
         "trips; forms sheaf has one point and is non-concrete");
}

// ---- criterion 8: holonomy ------------------------------------------------

void criterion_8() {
  bool ok = true;
  {
    // U(1) closed form
    ConnectionForm a = ConnectionForm::zero(GroupTag::U1, 1, 1);
    Expr f = Expr::integer(2) * Expr::base_coord(0) +
             Expr::constant(Rational(1, 2));
    a.components[0][0][0].second = f;
    Path g = Path::line({-1.0}, {1.5});
    double phase = 0;
    {
      int n = 4096;
      double h = 1.0 / n;
      for (int i = 0; i <= n; ++i) {
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        Valuation v;
        v.base = g.point(i * h);
        phase += w * f.evaluate(v) * g.velocity(i * h)[0];
      }
      phase *= h / 3.0;
    }
    GroupElement hol = holonomy(a, g, 4096);
    ok = std::abs(hol.matrix(0, 0) -
                  std::exp(std::complex<double>(0, -phase))) < 1e-8;
  }
  ConnectionForm su2 = ConnectionForm::zero(GroupTag::SU2, 2, 2);
  {
    Expr x0 = Expr::base_coord(0), x1 = Expr::base_coord(1);
    su2.components[0][0][0].second = x1;
    su2.components[0][1][1].second = -x1;
    su2.components[1][0][1].second = x0;
    su2.components[1][1][0].second = x0;
  }
  if (ok) {
    Path g1 = Path::line({0.0, 0.0}, {1.0, 0.5}).with_sitting_instants();
    Path g2 = Path::line({1.0, 0.5}, {0.5, 1.5}).with_sitting_instants();
    GroupElement h1 = holonomy(su2, g1, 4096);
    GroupElement h2 = holonomy(su2, g2, 4096);
    ok = group_distance(holonomy(su2, compose(g2, g1), 4096), h2 * h1) < 1e-7 &&
         group_distance(holonomy(su2, reverse(g1), 4096) * h1,
                        GroupElement::identity(GroupTag::SU2, 2)) < 1e-7;
  }
  if (ok) {
    Path g = Path::line({0.0, 0.0}, {1.0, 0.8}).with_sitting_instants();
    Expr s = Expr::base_coord(0);
    ThinProbeReport r = thin_invariance_probe(su2, g, {s, pow(s, 2)}, 4096);
    ok = r.max_deviation < 1e-7;
  }
  report(8, ok,
         "U(1) closed form within 1e-8; groupoid laws and reparametrization "
         "invariance within 1e-7");
}

// ---- criterion 9: CLI determinism -----------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion_9(const std::string& cli, const std::string& data_dir) {
  bool ok = true;
  std::string model = data_dir + "/wave.model";
  const char* tmp1 = "acceptance_cli_1.json";
  const char* tmp2 = "acceptance_cli_2.json";
  std::vector<std::string> invocations = {
      cli + " el " + model,
      cli + " noether " + model,
      cli + " --seed 7 axioms --suite all --cases 10",
  };
  for (const std::string& cmd : invocations) {
    if (std::system((cmd + " > " + tmp1).c_str()) != 0 ||
        std::system((cmd + " > " + tmp2).c_str()) != 0) {
      ok = false;
      break;
    }
    std::string a = slurp(tmp1), b = slurp(tmp2);
    if (a.empty() || a != b) {
      ok = false;
      break;
    }
  }
  std::remove(tmp1);
  std::remove(tmp2);
  report(9, ok, "fixed seed gives byte-identical JSON across repeated runs");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <cli-binary> <data-dir>\n";
    return 2;
  }
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9(argv[1], argv[2]);
  return failures == 0 ? 0 : 1;
}
