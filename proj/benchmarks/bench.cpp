#include <benchmark/benchmark.h>

#include "qcl/operators.hpp"
#include "qcl/theorems.hpp"

using namespace qcl;

namespace {
const Point4 kO{};
}

static void BM_HamiltonProduct(benchmark::State& state) {
  const BiQuat a{Complex(1, 0.5), Complex(0.25, -1), Complex(-0.75, 0),
                 Complex(2, 1)};
  const BiQuat b = qconj(a);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a * b);
  }
}
BENCHMARK(BM_HamiltonProduct);

static void BM_KernelClosedForm(benchmark::State& state) {
  const Kernel k = Kernel::alt_axis(1, kO);
  const EvalPoint p = EvalPoint::at(0.3, 0.9, -0.4, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.eval(p));
  }
}
BENCHMARK(BM_KernelClosedForm);

static void BM_KernelSeries(benchmark::State& state) {
  const Kernel k = Kernel::alt_axis(1, kO);
  const EvalPoint p = EvalPoint::at(0.004, 0.9, -0.4, 0.2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(k.series(p, 10));
  }
}
BENCHMARK(BM_KernelSeries);

static void BM_RegularityResidual(benchmark::State& state) {
  const QField f = QField::kernel(Kernel::fueter_h(kO));
  const EvalPoint p = EvalPoint::at(0.8, 1.1, -0.9, 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(regularity_residual(f, p, Regularity::Left));
  }
}
BENCHMARK(BM_RegularityResidual);

static void BM_SphereSandwich(benchmark::State& state) {
  const QField k = QField::kernel(Kernel::fueter_h(kO));
  const Surface s = sphere3(kO, 1.0);
  const QuadRule rule{int(state.range(0)), 1, 0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        integrate_sandwich(k, FormKind::Sq, std::nullopt, s, rule));
  }
}
BENCHMARK(BM_SphereSandwich)->Arg(8)->Arg(16)->Arg(32);

static void BM_PrismTheorem(benchmark::State& state) {
  const QField one = QField::constant(BiQuat::scalar(1.0));
  RunOptions o;
  o.rule = QuadRule{int(state.range(0)), 1, 0};
  o.check_regularity = false;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(TheoremId::Alt48, one, kO, o));
  }
}
BENCHMARK(BM_PrismTheorem)->Arg(8)->Arg(16);

static void BM_DetouredLine(benchmark::State& state) {
  const Contour c = real_line_contour(
      {{-1.0, PoleSpec::Policy::Exclude}, {1.0, PoleSpec::Policy::Include}},
      30.0, 0.25, true);
  const RationalFn f{Poly{1.0}, Poly{1.0, 0.0, -2.0, 0.0, 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(contour_integrate(
        [&](Complex z) { return f.eval(z); }, c, ContourRule{32, 8}));
  }
}
BENCHMARK(BM_DetouredLine);

static void BM_Residue(benchmark::State& state) {
  const RationalFn f{Poly{1.0}, Poly{1.0, 0.0, -2.0, 0.0, 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(residue(f, 1.0, 2));
  }
}
BENCHMARK(BM_Residue);

BENCHMARK_MAIN();
