#include <benchmark/benchmark.h>

#include <numbers>

#include "coilchain/circuit.hpp"
#include "coilchain/em.hpp"
#include "coilchain/raca.hpp"

using namespace coilchain;

namespace
{

constexpr double deg = std::numbers::pi / 180.0;

Exec mode(const benchmark::State &state) { return state.range(0) ? Exec::parallel : Exec::serial; }

ChainConfig chain(std::size_t n)
{
  ChainConfig c;
  c.reader.coil = CoilSpec::square_coil(0.05, 4, 0.0015, 0.25e-3);
  c.reader.inductance = self_inductance(c.reader.coil);
  c.reader.current = 0.05;
  c.tag.coil = CoilSpec::square_coil(0.06, 4, 0.001, 0.1e-3);
  c.tag.inductance = self_inductance(c.tag.coil);
  c.tag.load = 6500.0;
  c.relays.assign(n, RelaySpec{CoilSpec{}, 3.0, std::nullopt});
  c.placements.assign(n + 1, Placement{0, 0.05, 0});
  return c;
}

void filament_sum(benchmark::State &state)
{
  const CoilSpec coil{};
  const Placement p{0.02, 0.04, 20 * deg};
  for (auto _ : state)
    benchmark::DoNotOptimize(mutual_inductance_filament(coil, coil, p, static_cast<int>(state.range(1)), mode(state)));
}
BENCHMARK(filament_sum)->ArgsProduct({{0, 1}, {32, 128}})->ArgNames({"parallel", "segments"})->Unit(benchmark::kMicrosecond);

void sweep(benchmark::State &state)
{
  auto c = chain(11);
  c.coupling = CouplingModel::filament;
  c.all_pairs = true;
  const auto model = build_model(c);
  for (auto _ : state)
    benchmark::DoNotOptimize(frequency_sweep(model, 10e6, 18e6, 2001, mode(state)));
}
BENCHMARK(sweep)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void raca(benchmark::State &state)
{
  SearchSpace space;
  space.n_relays = 3;
  space.dimensions = {{"side:*", {0.06, 0.08, 0.10, 0.12}},
                      {"axial_c:0", {0.02, 0.03, 0.04, 0.05, 0.06}},
                      {"axial_c:1", {0.03, 0.04, 0.05, 0.06, 0.08}},
                      {"axial_c:2", {0.03, 0.04, 0.05, 0.06, 0.08}},
                      {"axial_c:3", {0.02, 0.03, 0.04, 0.05}},
                      {"angle:*", {0.0, 15 * deg, 30 * deg}}};
  const ChainConfig base = chain(3);
  RacaOptions o;
  o.iterations = 50;
  o.ants = 32;
  for (auto _ : state)
    benchmark::DoNotOptimize(raca_optimize(space, base, ConstraintSet{}, o, mode(state)));
}
BENCHMARK(raca)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

void exhaustive(benchmark::State &state)
{
  SearchSpace space;
  space.dimensions = {{"side:1", {0.06, 0.08, 0.10, 0.12}},
                      {"axial_c:1", {0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10}},
                      {"angle:1", {0.0, 15 * deg, 30 * deg}}};
  const ChainConfig base = chain(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(exhaustive_search(space, base, ConstraintSet{}, mode(state)));
}
BENCHMARK(exhaustive)->Arg(0)->Arg(1)->ArgName("parallel")->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
