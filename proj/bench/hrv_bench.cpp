// OpenMP kernels against their serial references.

#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "hrv/nonlinear.hpp"
#include "hrv/serial.hpp"
#include "hrv/spectral.hpp"
#include "hrv/synth.hpp"
#include "hrv/windowing.hpp"

namespace {

hrv::RrSeries recording(double duration_s) {
  hrv::RrModel m;
  m.lf_amp = 30;
  m.hf_amp = 20;
  m.noise_sd = 25;
  m.duration_s = duration_s;
  m.seed = 1;
  return hrv::synth_rr(m);
}

std::vector<std::size_t> dfa_scales() {
  std::vector<std::size_t> s(61);
  std::iota(s.begin(), s.end(), std::size_t{4});
  return s;
}

void BM_LombScargle(benchmark::State &state) {
  const auto rr = recording(300);
  const auto grid = hrv::default_frequency_grid(rr.span_s());
  for (auto _ : state)
    benchmark::DoNotOptimize(hrv::lomb_scargle(rr, grid));
}

void BM_LombScargleSerial(benchmark::State &state) {
  const auto rr = recording(300);
  const auto grid = hrv::default_frequency_grid(rr.span_s());
  for (auto _ : state)
    benchmark::DoNotOptimize(hrv::serial::lomb_scargle(rr, grid));
}

void BM_SampEnMatches(benchmark::State &state) {
  const auto rr = recording(1800);
  for (auto _ : state)
    benchmark::DoNotOptimize(hrv::sample_entropy_matches(rr.intervals(), 2, 10.0));
}

void BM_SampEnMatchesSerial(benchmark::State &state) {
  const auto rr = recording(1800);
  for (auto _ : state)
    benchmark::DoNotOptimize(hrv::serial::sample_entropy_matches(rr.intervals(), 2, 10.0));
}

void BM_Dfa(benchmark::State &state) {
  const auto rr = recording(3600);
  const auto scales = dfa_scales();
  for (auto _ : state)
    benchmark::DoNotOptimize(hrv::dfa_fluctuations(rr, scales));
}

void BM_DfaSerial(benchmark::State &state) {
  const auto rr = recording(3600);
  const auto scales = dfa_scales();
  for (auto _ : state)
    benchmark::DoNotOptimize(hrv::serial::dfa_fluctuations(rr, scales));
}

void BM_Track(benchmark::State &state) {
  const auto rr = recording(1800);
  for (auto _ : state)
    benchmark::DoNotOptimize(hrv::compute_track(rr, hrv::WindowSpec{}));
}

void BM_TrackSerial(benchmark::State &state) {
  const auto rr = recording(1800);
  for (auto _ : state)
    benchmark::DoNotOptimize(hrv::serial::compute_track(rr, hrv::WindowSpec{}));
}

} // namespace

BENCHMARK(BM_LombScargle)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LombScargleSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SampEnMatches)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SampEnMatchesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Dfa)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_DfaSerial)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Track)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrackSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
