#include "hrv/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "hrv/error.hpp"
#include "hrv/spectral.hpp"

namespace hrv {

void RrModel::validate() const {
  if (!(duration_s > 0.0))
    throw Error(ErrorKind::invalid_argument, "duration must be positive");
  if (vlf_amp < 0.0 || lf_amp < 0.0 || hf_amp < 0.0 || noise_sd < 0.0)
    throw Error(ErrorKind::invalid_argument, "amplitudes and noise must be non-negative");
  if (vlf_amp > 0.0 && (vlf_freq < BandEdges::ulf_hi || vlf_freq > BandEdges::vlf_hi))
    throw Error(ErrorKind::invalid_argument, "VLF frequency outside 0.0033-0.04 Hz");
  if (lf_amp > 0.0 && (lf_freq < BandEdges::vlf_hi || lf_freq > BandEdges::lf_hi))
    throw Error(ErrorKind::invalid_argument, "LF frequency outside 0.04-0.15 Hz");
  if (hf_amp > 0.0 && (hf_freq < BandEdges::lf_hi || hf_freq > BandEdges::hf_hi))
    throw Error(ErrorKind::invalid_argument, "HF frequency outside 0.15-0.4 Hz");
  if (!(mean_rr > vlf_amp + lf_amp + hf_amp))
    throw Error(ErrorKind::non_positive_interval, "mean interval does not exceed the modulation depth");
}

RrSeries synth_rr(const RrModel &model) {
  model.validate();
  std::mt19937_64 rng(model.seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> intervals;
  std::vector<double> onsets;
  double t = 0.0;
  while (t < model.duration_s) {
    double rr = model.mean_rr + model.vlf_amp * std::sin(two_pi * model.vlf_freq * t) +
                model.lf_amp * std::sin(two_pi * model.lf_freq * t) +
                model.hf_amp * std::sin(two_pi * model.hf_freq * t);
    if (model.noise_sd > 0.0)
      rr += model.noise_sd * noise(rng);
    if (!(rr > 0.0))
      throw Error(ErrorKind::non_positive_interval, "generated a non-positive interval");
    t += rr / 1000.0;
    intervals.push_back(rr);
    onsets.push_back(t);
  }
  return {std::move(intervals), std::move(onsets)};
}

std::vector<double> beat_times(const RrSeries &rr, double first_beat_s) {
  std::vector<double> out{first_beat_s};
  for (double v : rr.intervals())
    out.push_back(out.back() + v / 1000.0);
  return out;
}

SyntheticEcg synth_ecg(const std::vector<double> &beat_times_s, const EcgSynthOptions &options) {
  const double rate = options.sampling_rate;
  if (!(rate >= 100.0))
    throw Error(ErrorKind::rate_too_low, "sampling rate below 100 Hz cannot render a QRS");
  for (std::size_t i = 1; i < beat_times_s.size(); ++i)
    if (!(beat_times_s[i] > beat_times_s[i - 1]))
      throw Error(ErrorKind::invalid_argument, "beat times must be strictly increasing");
  if (!beat_times_s.empty() && beat_times_s.front() < 0.0)
    throw Error(ErrorKind::invalid_argument, "beat times must be non-negative");

  const double duration =
      options.duration_s.value_or(beat_times_s.empty() ? 10.0 : beat_times_s.back() + 1.5);
  const auto n = static_cast<std::size_t>(std::ceil(duration * rate));
  std::vector<double> x(std::max<std::size_t>(n, 2), 0.0);

  // Troughs of the Ricker wavelet sit at +-sqrt(3) sigma.
  const double sigma = 0.080 / (2.0 * std::sqrt(3.0));
  const auto support = static_cast<std::ptrdiff_t>(std::ceil(5.0 * sigma * rate));
  SyntheticEcg out{EcgRecording({0.0, 0.0}, rate), {}};
  for (double beat : beat_times_s) {
    const auto centre = static_cast<std::ptrdiff_t>(std::llround(beat * rate));
    if (centre >= static_cast<std::ptrdiff_t>(x.size()))
      continue;
    out.truth.push_back(static_cast<std::size_t>(centre));
    for (std::ptrdiff_t k = -support; k <= support; ++k) {
      const std::ptrdiff_t i = centre + k;
      if (i < 0 || i >= static_cast<std::ptrdiff_t>(x.size()))
        continue;
      const double u = (static_cast<double>(k) / rate) / sigma;
      x[static_cast<std::size_t>(i)] += (1.0 - u * u) * std::exp(-0.5 * u * u);
    }
  }

  if (options.snr_db) {
    double power = 0.0;
    for (double v : x)
      power += v * v;
    power /= static_cast<double>(x.size());
    if (power > 0.0) {
      const double sd = std::sqrt(power / std::pow(10.0, *options.snr_db / 10.0));
      std::mt19937_64 rng(options.seed);
      std::normal_distribution<double> noise(0.0, sd);
      for (double &v : x)
        v += noise(rng);
    }
  }
  out.recording = EcgRecording(std::move(x), rate);
  return out;
}

CohortModel thermal_study_cohort() {
  struct Row {
    ClassModel model;
    double sdrr;
  };
  // Cold, neutral, hot: Mean RR, RMSSD, VLF, LF, HF (mean, sd) and mean SDRR.
  constexpr std::array<Row, 3> rows{{
      {{{824.47, 91.42}, {43.37, 20.57}, {4442.82, 483.55}, {1800.04, 206.71}, {2554.58, 491.47}}, 54.25},
      {{{795.13, 79.55}, {42.73, 30.74}, {4291.14, 418.26}, {1777.18, 203.12}, {2607.48, 545.67}}, 55.56},
      {{{768.69, 83.52}, {31.00, 14.15}, {4141.95, 442.64}, {1723.08, 213.18}, {2482.16, 528.45}}, 44.34},
  }};
  CohortModel cohort;
  double tone_variance = 0.0;
  double band_power = 0.0;
  for (std::size_t c = 0; c < rows.size(); ++c) {
    const auto &m = rows[c].model;
    cohort.classes[c] = m;
    tone_variance += rows[c].sdrr * rows[c].sdrr - 0.5 * m.rmssd.mean * m.rmssd.mean;
    band_power += m.vlf.mean + m.lf.mean + m.hf.mean;
  }
  cohort.power_scale = tone_variance / band_power;
  return cohort;
}

RrModel recording_model(const CohortModel &cohort, ThermalState state, const SubjectTraits &traits) {
  const auto &cls = cohort.classes[static_cast<std::size_t>(state)];
  const std::array<const Moments *, 5> fields{&cls.mean_rr, &cls.rmssd, &cls.vlf, &cls.lf, &cls.hf};
  std::array<double, 5> v{};
  for (std::size_t q = 0; q < v.size(); ++q)
    v[q] = std::max(fields[q]->mean + traits[q] * fields[q]->sd, 0.1 * fields[q]->mean);
  const auto [mean_rr, rmssd, vlf, lf, hf] = v;

  RrModel m;
  m.mean_rr = mean_rr;
  // White jitter of sd s gives RMSSD = sqrt(2) s.
  m.noise_sd = rmssd / std::numbers::sqrt2;
  // A sinusoid of amplitude A has variance A^2 / 2.
  auto amplitude = [&](double power) { return std::sqrt(2.0 * cohort.power_scale * power); };
  m.vlf_amp = amplitude(vlf);
  m.vlf_freq = cohort.vlf_freq;
  m.lf_amp = amplitude(lf);
  m.lf_freq = cohort.lf_freq;
  m.hf_amp = amplitude(hf);
  m.hf_freq = cohort.hf_freq;
  return m;
}

std::vector<CohortRecording> synth_cohort(const CohortModel &cohort, std::size_t recordings_per_class,
                                          double duration_s, std::uint64_t seed) {
  std::mt19937_64 subject_rng(seed);
  std::normal_distribution<double> trait(0.0, 1.0);
  std::vector<CohortRecording> out;
  for (std::size_t s = 0; s < recordings_per_class; ++s) {
    SubjectTraits traits;
    for (double &z : traits)
      z = trait(subject_rng);
    char name[32];
    std::snprintf(name, sizeof name, "s%02zu", s + 1);
    for (auto state : kThermalStates) {
      RrModel model = recording_model(cohort, state, traits);
      model.duration_s = duration_s;
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(state)};
      std::array<std::uint32_t, 2> words{};
      seq.generate(words.begin(), words.end());
      model.seed = (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
      out.push_back({name, state, synth_rr(model)});
    }
  }
  return out;
}

} // namespace hrv
