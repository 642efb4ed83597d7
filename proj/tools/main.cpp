#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>
#include <json.hpp>

#include "model.hpp"
#include "varjet/random.hpp"

using nlohmann::json;
using namespace varjet;
using namespace varjet::cli;

namespace {

constexpr std::uint64_t kDefaultSeed = 2026;

std::uint64_t resolve_seed(std::optional<std::uint64_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("VARJET_SEED"))
    return std::strtoull(env, nullptr, 10);
  return kDefaultSeed;
}

struct Renderer {
  const BundleSignature* sig = nullptr;
  bool latex = false;
  std::string operator()(const Expr& e) const {
    return latex ? e.latex(*sig) : e.str(*sig);
  }
};

json form_json(const BigradedForm& w, const Renderer& render) {
  const BundleSignature& sig = *render.sig;
  auto [s, r] = w.bidegree();
  json terms = json::array();
  for (const auto& [m, c] : w.terms()) {
    json theta = json::array();
    for (const auto& g : m.theta)
      theta.push_back({sig.field_name(g.field), g.index.counts});
    terms.push_back(
        {{"dx", m.dx}, {"theta", theta}, {"coeff", render(c)}});
  }
  return {{"bidegree", {s, r}}, {"terms", terms}};
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

void emit(const json& report) { std::cout << report.dump(2) << "\n"; }

// -- randomized suites (also reachable through `axioms`) --------------------

struct SuiteResult {
  int cases = 0, passed = 0;
};

SuiteResult sheaf_suite(RandomSource& rs, int cases_per_combinator) {
  SuiteResult r;
  auto run_case = [&](bool ok) {
    ++r.cases;
    if (ok) ++r.passed;
  };

  for (int c = 0; c < cases_per_combinator; ++c) {
    PlotDomain V = PlotDomain::whole(rs.uniform_int(1, 2));
    PlotDomain U = PlotDomain::whole(rs.uniform_int(1, 2));
    PlotDomain T = PlotDomain::whole(rs.uniform_int(1, 2));
    SmoothMap phi = rs.smooth_map(V, U);
    SmoothMap psi = rs.smooth_map(U, T);

    {  // representable
      int n = rs.uniform_int(1, 2);
      SmoothSetPtr x = representable(n);
      PlotWitness w(rs.smooth_map(T, PlotDomain::whole(n)));
      run_case(check_functoriality(*x, phi, psi, w));
    }
    {  // product of representables
      SmoothSetPtr x = product(representable(1), representable(2));
      PlotWitness w = PlotWitness::pair(
          PlotWitness(rs.smooth_map(T, PlotDomain::whole(1))),
          PlotWitness(rs.smooth_map(T, PlotDomain::whole(2))));
      run_case(check_functoriality(*x, phi, psi, w));
    }
    {  // exponential
      PlotDomain M = PlotDomain::whole(1), N = PlotDomain::whole(1);
      SmoothSetPtr x = exponential(M, N);
      PlotWitness w(rs.smooth_map(PlotDomain::whole(T.dim + M.dim), N));
      run_case(check_functoriality(*x, phi, psi, w));
    }
    {  // sections sheaf over a window
      BundleSignature sig({"t"}, {"u"});
      SmoothSetPtr x = sections_sheaf(sig, PlotDomain::whole(1));
      PlotWitness w(
          rs.smooth_map(PlotDomain::whole(T.dim + 1), PlotDomain::whole(1)));
      run_case(check_functoriality(*x, phi, psi, w));
    }
    {  // forms sheaf
      int p = rs.uniform_int(1, T.dim);
      SmoothSetPtr x = forms_sheaf(p);
      PlotWitness w(rs.exterior_form(T.dim, p));
      run_case(check_functoriality(*x, phi, psi, w));
    }
    {  // two-level tower of representables, projection drops a component
      auto drop = [](const PlotWitness& w2) {
        SmoothMap m = std::get<SmoothMap>(w2.data);
        m.components.pop_back();
        m.target = PlotDomain::whole(1);
        return PlotWitness(std::move(m));
      };
      SmoothSetPtr x = tower_limit({representable(1), representable(2)},
                                   {drop});
      SmoothMap top = rs.smooth_map(T, PlotDomain::whole(2));
      PlotWitness w = PlotWitness::tower(
          {drop(PlotWitness(top)), PlotWitness(top)});
      run_case(check_functoriality(*x, phi, psi, w));
    }
    {  // quotient by witness equality
      SmoothSetPtr x = quotient(representable(1), witness_equal);
      PlotWitness w = PlotWitness::quotient_lift(
          PlotWitness(rs.smooth_map(T, PlotDomain::whole(1))));
      run_case(check_functoriality(*x, phi, psi, w));
    }
  }
  return r;
}

SuiteResult glue_suite(RandomSource& rs, int cases) {
  SuiteResult r;
  for (int c = 0; c < cases; ++c) {
    ++r.cases;
    int n = rs.uniform_int(1, 2);
    SmoothSetPtr x = representable(n);
    std::vector<PlotDomain> cover = {PlotDomain::box({{-2, 1}}),
                                     PlotDomain::box({{-1, 2}})};
    SmoothMap f = rs.smooth_map(PlotDomain::whole(1), PlotDomain::whole(n));
    SmoothMap f0 = f, f1 = f;
    f0.source = cover[0];
    f1.source = cover[1];
    bool ok = true;
    try {
      PlotWitness glued = glue(*x, cover, {PlotWitness(f0), PlotWitness(f1)});
      ok = witness_compatible(glued, PlotWitness(f0));
    } catch (const glue_error&) {
      ok = false;
    }
    // incompatible witnesses must be rejected
    SmoothMap g = f1;
    g.components[0] += Expr::one();
    try {
      glue(*x, cover, {PlotWitness(f0), PlotWitness(g)});
      ok = false;
    } catch (const glue_error&) {
    }
    if (ok) ++r.passed;
  }
  return r;
}

SuiteResult bicomplex_suite(RandomSource& rs, int cases) {
  SuiteResult r;
  BundleSignature sig({"t", "x"}, {"u"});
  for (int c = 0; c < cases; ++c) {
    ++r.cases;
    int s = rs.uniform_int(0, 2), h = rs.uniform_int(0, 2);
    BigradedForm w = rs.form(sig, s, h, 2, 2);
    bool ok = d_horizontal(d_horizontal(w)).is_zero() &&
              d_vertical(d_vertical(w)).is_zero() &&
              (d_horizontal(d_vertical(w)) + d_vertical(d_horizontal(w)))
                  .is_zero();
    if (ok) ++r.passed;
  }
  return r;
}

SuiteResult jet_suite(RandomSource& rs, int cases) {
  SuiteResult r;
  BundleSignature sig({"t", "x"}, {"u"});
  for (int c = 0; c < cases; ++c) {
    ++r.cases;
    Expr e = rs.polynomial(sig, 2, 2, 3);
    Section phi = Section::make(
        sig, {rs.base_polynomial(sig.base_dim(), 2, 3)});
    int mu = rs.uniform_int(0, sig.base_dim() - 1);
    // pulling back D_mu e must equal d/dx^mu of the pulled-back e
    Expr lhs = pull_back_to_base(total_derivative(e, mu, sig), phi, sig);
    Expr rhs = pull_back_to_base(e, phi, sig).partial_base(mu);
    if (lhs == rhs) ++r.passed;
  }
  return r;
}

// -- subcommand bodies ------------------------------------------------------

int cmd_el(const ModelFile& m, const Renderer& render) {
  SourceForm e = euler_lagrange({m.require_density()}, m.signature);
  json out;
  for (int a = 0; a < m.signature.field_count(); ++a)
    out["E"][m.signature.field_name(a)] = render(e.components[size_t(a)]);
  emit(out);
  return 0;
}

int cmd_variation(const ModelFile& m, const Renderer& render) {
  if (m.symmetries.empty())
    throw model_error("variation: model has no [symmetry] block");
  json out;
  for (const auto& [name, q] : m.symmetries) {
    FirstVariation fv =
        first_variation_decompose({m.require_density()}, q, m.signature);
    json entry;
    entry["interior"] = render(fv.interior);
    for (int mu = 0; mu < m.signature.base_dim(); ++mu)
      entry["boundary"][m.signature.base_name(mu)] =
          render(fv.boundary.components[size_t(mu)]);
    out[name] = entry;
  }
  emit(out);
  return 0;
}

int cmd_symmetry(const ModelFile& m, const Renderer& render) {
  if (m.symmetries.empty())
    throw model_error("symmetry: model has no [symmetry] block");
  json out;
  for (const auto& [name, q] : m.symmetries) {
    SymmetryVerdict v =
        is_divergence_symmetry({m.require_density()}, q, m.signature);
    json entry;
    entry["is_symmetry"] = v.is_symmetry;
    if (v.is_symmetry) {
      for (int mu = 0; mu < m.signature.base_dim(); ++mu)
        entry["witness"][m.signature.base_name(mu)] =
            render(v.witness.components[size_t(mu)]);
    } else {
      json fails = json::array();
      for (const auto& f : v.failures) fails.push_back(render(f));
      entry["obstruction"] = fails;
    }
    out[name] = entry;
  }
  emit(out);
  return 0;
}

int cmd_noether(const ModelFile& m, const Renderer& render) {
  if (m.symmetries.empty())
    throw model_error("noether: model has no [symmetry] block");
  json out;
  int rc = 0;
  for (const auto& [name, q] : m.symmetries) {
    try {
      Current j = noether_current({m.require_density()}, q, m.signature);
      for (int mu = 0; mu < m.signature.base_dim(); ++mu)
        out[name]["J"][m.signature.base_name(mu)] =
            render(j.components[size_t(mu)]);
    } catch (const not_a_symmetry& e) {
      out[name]["error"] = e.what();
      rc = 1;
    }
  }
  emit(out);
  return rc;
}

int cmd_helmholtz(const ModelFile& m, const Renderer& render) {
  SourceForm delta = m.source
                         ? *m.source
                         : euler_lagrange({m.require_density()}, m.signature);
  HelmholtzReport rep = helmholtz_check(delta, m.signature);
  json out;
  out["variational"] = rep.variational;
  json fails = json::array();
  for (const auto& f : rep.failures)
    fails.push_back({{"row", m.signature.field_name(f.field_row)},
                     {"col", m.signature.field_name(f.field_col)},
                     {"index", f.index.counts},
                     {"difference", render(f.difference)}});
  out["failures"] = fails;
  emit(out);
  return 0;
}

int cmd_differential(const ModelFile& m, const Renderer& render, bool vertical) {
  BigradedForm l = BigradedForm::scalar(m.signature, m.require_density());
  BigradedForm d = vertical ? d_vertical(l) : d_horizontal(l);
  emit(form_json(d, render));
  return 0;
}

int cmd_order(const ModelFile& m) {
  emit(json{{"order", m.require_density().order()}});
  return 0;
}

int cmd_holonomy(const ModelFile& m, int steps) {
  if (!m.path || !m.connection)
    throw model_error("holonomy: model needs [path] and [connection] blocks");
  GroupElement g = holonomy(*m.connection, *m.path, steps);
  Expr s = Expr::base_coord(0);
  ThinProbeReport probe =
      thin_invariance_probe(*m.connection, *m.path, {s, pow(s, 2)}, steps);
  json out;
  switch (m.connection->group) {
    case GroupTag::U1: out["group"] = "U1"; break;
    case GroupTag::SU2: out["group"] = "SU2"; break;
    case GroupTag::GL: out["group"] = "GL"; break;
  }
  out["steps"] = steps;
  out["matrix"] = matrix_json(g.matrix);
  out["unitary_defect"] = g.unitary_defect();
  out["thin_probe_max_deviation"] = probe.max_deviation;
  emit(out);
  return 0;
}

int cmd_glue_check(std::uint64_t seed, int cases) {
  RandomSource rs(seed);
  SuiteResult r = glue_suite(rs, cases);
  emit(json{{"suite", "glue"},
            {"seed", seed},
            {"cases", r.cases},
            {"passed", r.passed}});
  return r.passed == r.cases ? 0 : 1;
}

int cmd_axioms(std::uint64_t seed, const std::string& suite, int cases) {
  RandomSource rs(seed);
  json suites;
  bool all_passed = true;
  auto record = [&](const std::string& name, SuiteResult r) {
    suites[name] = {{"cases", r.cases}, {"passed", r.passed}};
    all_passed = all_passed && r.cases == r.passed;
  };
  if (suite == "sheaf" || suite == "all")
    record("sheaf", sheaf_suite(rs, cases));
  if (suite == "bicomplex" || suite == "all")
    record("bicomplex", bicomplex_suite(rs, cases));
  if (suite == "jet" || suite == "all")
    record("jet", jet_suite(rs, cases));
  if (suites.empty())
    throw model_error("unknown suite '" + suite +
                      "' (expected sheaf, bicomplex, jet, all)");
  emit(json{{"seed", seed}, {"suites", suites}});
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variational calculus on jet bundles"};
  app.require_subcommand(1);

  std::string model_path;
  std::optional<std::uint64_t> seed_flag;
  bool latex = false;
  std::string suite = "all";
  int steps = 4096;
  int cases = 50;

  app.add_flag("--latex", latex, "render expressions as LaTeX");
  app.add_option("--seed", seed_flag, "seed for randomized suites");

  auto add_model_cmd = [&](const std::string& name, const std::string& desc) {
    CLI::App* c = app.add_subcommand(name, desc);
    c->add_option("model", model_path, "model file")->required();
    return c;
  };
  add_model_cmd("el", "Euler-Lagrange expressions of the density");
  add_model_cmd("variation",
                "first-variation decomposition along each symmetry");
  add_model_cmd("noether", "conserved currents of the symmetry blocks");
  add_model_cmd("symmetry", "divergence-symmetry verdicts");
  add_model_cmd("helmholtz",
                "self-adjointness of [source] (or of the Euler-Lagrange "
                "expressions)");
  add_model_cmd("dh", "horizontal differential of the density");
  add_model_cmd("dv", "vertical differential of the density");
  add_model_cmd("order", "jet order of the density");
  CLI::App* c_hol = add_model_cmd("holonomy", "parallel transport along [path]");
  c_hol->add_option("--steps", steps, "integrator steps");

  CLI::App* c_glue =
      app.add_subcommand("glue-check", "randomized glue/restrict round trips");
  c_glue->add_option("--cases", cases, "cases per suite");
  CLI::App* c_axioms =
      app.add_subcommand("axioms", "randomized sheaf/bicomplex/jet suites");
  c_axioms->add_option("--suite", suite, "sheaf, bicomplex, jet, or all");
  c_axioms->add_option("--cases", cases, "cases per suite");

  CLI11_PARSE(app, argc, argv);
  std::string cmd = app.get_subcommands().front()->get_name();

  try {
    std::uint64_t seed = resolve_seed(seed_flag);
    if (cmd == "glue-check") return cmd_glue_check(seed, cases);
    if (cmd == "axioms") return cmd_axioms(seed, suite, cases);

    ModelFile model = load_model(model_path);
    Renderer render{&model.signature, latex};
    if (cmd == "el") return cmd_el(model, render);
    if (cmd == "variation") return cmd_variation(model, render);
    if (cmd == "noether") return cmd_noether(model, render);
    if (cmd == "symmetry") return cmd_symmetry(model, render);
    if (cmd == "helmholtz") return cmd_helmholtz(model, render);
    if (cmd == "dh") return cmd_differential(model, render, false);
    if (cmd == "dv") return cmd_differential(model, render, true);
    if (cmd == "order") return cmd_order(model);
    if (cmd == "holonomy") return cmd_holonomy(model, steps);
  } catch (const model_error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 2;
  } catch (const signature_error& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
