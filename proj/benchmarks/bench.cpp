#include <benchmark/benchmark.h>

#include "paleocorr/alignment.hpp"
#include "paleocorr/bayes.hpp"
#include "paleocorr/pseudoproxy.hpp"

using namespace paleocorr;

namespace {

AlignedPairs make_pairs(std::size_t n) {
  RngStream g = derive_stream(1);
  AlignedPairs p;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = draw_normal(g);
    p.x.push_back(a);
    p.y.push_back(0.5 * a + 0.866 * draw_normal(g));
  }
  return p;
}

void bm_metropolis(benchmark::State& state) {
  const AlignedPairs p = make_pairs(static_cast<std::size_t>(state.range(0)));
  InferenceConfig cfg;
  cfg.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(metropolis(p, cfg));
}
BENCHMARK(bm_metropolis)->Arg(50)->Arg(300);

void bm_generate_ou(benchmark::State& state) {
  RngStream g = derive_stream(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(generate_ou(static_cast<std::size_t>(state.range(0)),
                                         1.0, 0.1, g));
}
BENCHMARK(bm_generate_ou)->Arg(1000)->Arg(100000);

void bm_align(benchmark::State& state) {
  RngStream g = derive_stream(3);
  const LatentPair p = generate_latent_pair(600, 0.5, 0.1, g);
  std::vector<double> yt = p.times;
  for (double& t : yt) t += 0.37;
  const TimeSeries x(p.times, p.x), y(yt, p.y);
  const AlignmentSpec spec =
      AlignmentSpec::parse(state.range(0) == 0 ? "LI" : "G(2)");
  for (auto _ : state) benchmark::DoNotOptimize(align(x, y, spec));
}
BENCHMARK(bm_align)->Arg(0)->Arg(1);

void bm_posterior_mode(benchmark::State& state) {
  RngStream g = derive_stream(4);
  PosteriorSample s;
  for (int i = 0; i < 10000; ++i) s.rho_draws.push_back(0.4 + 0.1 * draw_normal(g));
  for (auto _ : state) benchmark::DoNotOptimize(posterior_mode(s));
}
BENCHMARK(bm_posterior_mode);

}  // namespace

BENCHMARK_MAIN();
