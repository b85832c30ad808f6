#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hrv/ecg.hpp"
#include "hrv/labels.hpp"
#include "hrv/rr.hpp"

namespace hrv {

/// Sinusoidally modulated interval generator with white jitter.
struct RrModel {
  double mean_rr = 800.0; ///< ms
  double vlf_amp = 0.0;   ///< ms
  double vlf_freq = 0.02; ///< Hz
  double lf_amp = 0.0;    ///< ms
  double lf_freq = 0.1;   ///< Hz
  double hf_amp = 0.0;    ///< ms
  double hf_freq = 0.25;  ///< Hz
  double noise_sd = 0.0;  ///< ms
  double duration_s = 300.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// RR_{i+1} = mean + sum over bands of amp*sin(2 pi f t_i) + N(0, sd^2),
/// with t_0 = 0 and t_{i+1} = t_i + RR_{i+1}. Beats are generated until the
/// last onset reaches `duration_s`, so the span is at least the duration.
RrSeries synth_rr(const RrModel &model);

struct EcgSynthOptions {
  double sampling_rate = 1000.0;
  std::optional<double> snr_db;
  std::uint64_t seed = 0;
  /// Defaults to the last beat plus 1.5 s (10 s with no beats).
  std::optional<double> duration_s;
};

struct SyntheticEcg {
  EcgRecording recording;
  std::vector<std::size_t> truth; ///< sample index of each rendered R apex
};

/// Renders each beat as an inverted second-derivative-of-Gaussian (Ricker)
/// QRS: 1 mV apex at the beat time, Q and S troughs 80 ms apart. With
/// `snr_db`, white noise is added at that ratio to the mean clean power.
SyntheticEcg synth_ecg(const std::vector<double> &beat_times_s, const EcgSynthOptions &options = {});

/// Beat times (s) spaced by the intervals of `rr`, starting at `first_beat_s`.
std::vector<double> beat_times(const RrSeries &rr, double first_beat_s);

/// Mean and between-subject standard deviation of one index.
struct Moments {
  double mean = 0;
  double sd = 0;
};

/// Per-class HRV summary that drives the generator.
struct ClassModel {
  Moments mean_rr; ///< ms
  Moments rmssd;   ///< ms
  Moments vlf;     ///< ms^2
  Moments lf;      ///< ms^2
  Moments hf;      ///< ms^2
};

struct CohortModel {
  std::array<ClassModel, 3> classes; ///< indexed by ThermalState
  double vlf_freq = 0.02;
  double lf_freq = 0.1;
  double hf_freq = 0.25;
  /// Tone variance per unit of band power (ms^2 per ms^2).
  double power_scale = 1.0;
};

/// Per-environment HRV summary of the thermal chamber study. The power scale
/// makes the mean tone variance match the mean of SDRR^2 - RMSSD^2 / 2.
CohortModel thermal_study_cohort();

/// Subject traits in standard-deviation units, one per ClassModel field.
using SubjectTraits = std::array<double, 5>;

/// RrModel for one recording. Each index is mean + trait * sd, floored at a
/// tenth of its mean. The jitter has sd RMSSD / sqrt(2); each band gets a
/// tone of variance power_scale * band power.
RrModel recording_model(const CohortModel &cohort, ThermalState state, const SubjectTraits &traits);

struct CohortRecording {
  std::string subject;
  ThermalState label;
  RrSeries rr;
};

/// One recording per class for each of `recordings_per_class` subjects. A
/// subject draws one set of traits shared by all of its recordings, so the
/// recordings of a subject differ only through their class.
std::vector<CohortRecording> synth_cohort(const CohortModel &cohort, std::size_t recordings_per_class,
                                          double duration_s, std::uint64_t seed);

} // namespace hrv
