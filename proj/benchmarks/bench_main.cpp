#include <benchmark/benchmark.h>

#include <varjet/bicomplex.hpp>
#include <varjet/holonomy.hpp>
#include <varjet/parse.hpp>
#include <varjet/random.hpp>
#include <varjet/variational.hpp>

using namespace varjet;

namespace {

BundleSignature wave_sig() { return BundleSignature({"t", "x"}, {"u"}, {}); }

Expr P(const char* s) { return parse_expression(s, wave_sig()); }

void bm_normalize_product(benchmark::State& state) {
  Expr a = P("(u + u_t + u_x + 1)^4");
  Expr b = P("(u - 2*u_tx + t*x)^3");
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(bm_normalize_product);

void bm_parse(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(
        P("(1/2)*(u_t^2 - u_x^2) - (1/6)*u^3 + t*x*u_tx - sin(u)*u_x"));
}
BENCHMARK(bm_parse);

void bm_total_derivative(benchmark::State& state) {
  Expr e = P("(u + u_t*u_x + t^2*x)^4");
  BundleSignature sig = wave_sig();
  for (auto _ : state) benchmark::DoNotOptimize(total_derivative(e, 0, sig));
}
BENCHMARK(bm_total_derivative);

void bm_euler_lagrange(benchmark::State& state) {
  BundleSignature sig = wave_sig();
  Lagrangian L{P("(1/2)*u_xx^2 + (1/2)*(u_t^2 - u_x^2) + u^3*u_x + t*u*u_tx")};
  for (auto _ : state) benchmark::DoNotOptimize(euler_lagrange(L, sig));
}
BENCHMARK(bm_euler_lagrange);

void bm_divergence_inversion(benchmark::State& state) {
  BundleSignature sig = wave_sig();
  std::vector<Expr> current = {P("u*u_t + t*u_x^2"), P("u^2*u_x - x*u_t")};
  Expr f = total_divergence(current, sig);
  for (auto _ : state)
    benchmark::DoNotOptimize(invert_total_divergence(f, sig));
}
BENCHMARK(bm_divergence_inversion);

void bm_bicomplex_dh(benchmark::State& state) {
  BundleSignature sig = wave_sig();
  RandomSource rs(7);
  BigradedForm w = rs.form(sig, 1, 1, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(d_horizontal(w));
}
BENCHMARK(bm_bicomplex_dh);

void bm_wedge(benchmark::State& state) {
  BundleSignature sig = wave_sig();
  RandomSource rs(8);
  BigradedForm a = rs.form(sig, 1, 0, 2, 4);
  BigradedForm b = rs.form(sig, 0, 1, 2, 4);
  for (auto _ : state) benchmark::DoNotOptimize(wedge(a, b));
}
BENCHMARK(bm_wedge);

void bm_holonomy_su2(benchmark::State& state) {
  ConnectionForm a = ConnectionForm::zero(GroupTag::SU2, 2, 2);
  Expr x0 = Expr::base_coord(0), x1 = Expr::base_coord(1);
  a.components[0][0][0].second = x1;
  a.components[0][1][1].second = -x1;
  a.components[1][0][1].second = x0;
  a.components[1][1][0].second = x0;
  Path gamma = compose(Path::line({1.0, 0.0}, {1.0, 1.0}),
                       Path::line({0.0, 0.0}, {1.0, 0.0}));
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(holonomy(a, gamma, steps));
}
BENCHMARK(bm_holonomy_su2)->Arg(256)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
