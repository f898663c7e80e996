// Microbenchmarks for the hot paths: snapshot enumeration, joint behaviour
// generation, and a full network check.

#include <benchmark/benchmark.h>

#include <string>

#include "mvcheck/checker.hpp"
#include "mvcheck/enumerate.hpp"
#include "mvcheck/exec.hpp"
#include "mvcheck/resolver.hpp"

namespace {

using namespace mvcheck;

Library load(const std::string& subdir, const std::string& dolName) {
  Library lib;
  lib.rootDir = std::string(MVCHECK_MODELS_DIR) + "/" + subdir;
  Diagnostics d;
  lib.dol = parse_dol(*lib.read(dolName), d);
  return lib;
}

void BM_enumerate_snapshots(benchmark::State& state) {
  Library lib = load("shared", "shared.dol");
  Diagnostics d;
  Resolver res(lib, d);
  Theory inventory = res.model("Inventory");
  Bounds b;
  b.maxObjectsPerClass = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto snaps = enumerate_snapshots(inventory.data, b);
    benchmark::DoNotOptimize(snaps);
  }
}
BENCHMARK(BM_enumerate_snapshots)->Arg(2)->Arg(3);

void BM_generate_system_ts(benchmark::State& state) {
  Library lib = load("atm", "variants.dol");
  Diagnostics d;
  Resolver res(lib, d);
  Theory sys = res.model("System");
  Bounds b;
  ExecModel em;
  Snapshot init;
  for (const auto& s : enumerate_snapshots(sys.data, b)) {
    if (auto m = exec_for_component(sys.data, sys.component, sys.machines, s)) {
      em = *m;
      init = s;
      break;
    }
  }
  for (auto _ : state) {
    GenStats stats;
    auto ts = generate_ts(em, init, b, &stats);
    benchmark::DoNotOptimize(ts);
  }
}
BENCHMARK(BM_generate_system_ts);

void BM_check_network(benchmark::State& state) {
  Library lib = load("atm", "variants.dol");
  Diagnostics d;
  Resolver res(lib, d);
  auto net = res.network("N_init");
  CheckOptions opts;
  for (auto _ : state) {
    Diagnostics cd;
    auto r = check_network(*net, opts, cd);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_check_network);

}  // namespace

BENCHMARK_MAIN();
