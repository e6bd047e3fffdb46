#include "swarmdet/signal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace swarmdet {

namespace {

std::size_t sample_count(double duration_s, double sample_rate_hz) {
  const auto n = std::llround(duration_s * sample_rate_hz);
  if (n < 1) {
    throw std::invalid_argument("waveform would be empty: duration " +
                                std::to_string(duration_s) + " s at " +
                                std::to_string(sample_rate_hz) + " Hz");
  }
  return static_cast<std::size_t>(n);
}

}  // namespace

Waveform make_lfm_chirp(double bandwidth_hz, double duration_s, double sample_rate_hz) {
  if (!(bandwidth_hz > 0.0) || !(duration_s > 0.0) || !(sample_rate_hz > 0.0)) {
    throw std::invalid_argument("lfm chirp parameters must be positive");
  }
  if (sample_rate_hz < 2.0 * bandwidth_hz) {
    throw std::invalid_argument("lfm chirp is sub-Nyquist: Fs < 2B");
  }
  Waveform w;
  w.bandwidth_hz = bandwidth_hz;
  w.duration_s = duration_s;
  w.sample_rate_hz = sample_rate_hz;
  w.kind = WaveformKind::lfm;

  const std::size_t n = sample_count(duration_s, sample_rate_hz);
  const double rate = bandwidth_hz / duration_s;  // sweep slope B/T
  w.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / sample_rate_hz;
    const double phase = std::numbers::pi * rate * t * t;
    w.samples[k] = {std::cos(phase), std::sin(phase)};
  }
  return w;
}

Waveform make_tone_pulse(double freq_hz, double duration_s, double sample_rate_hz) {
  if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0)) {
    throw std::invalid_argument("tone pulse parameters must be positive");
  }
  if (!(freq_hz > 0.0) || !(freq_hz < sample_rate_hz / 2.0)) {
    throw std::invalid_argument("tone frequency must satisfy 0 < f < Fs/2");
  }
  Waveform w;
  w.bandwidth_hz = freq_hz;
  w.duration_s = duration_s;
  w.sample_rate_hz = sample_rate_hz;
  w.kind = WaveformKind::tone;

  const std::size_t n = sample_count(duration_s, sample_rate_hz);
  w.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / sample_rate_hz;
    const double phase = 2.0 * std::numbers::pi * freq_hz * t;
    w.samples[k] = {std::cos(phase), std::sin(phase)};
  }
  return w;
}

double pulse_energy(const Waveform& w) {
  double e = 0.0;
  for (const cplx& s : w.samples) e += std::norm(s);
  return e;
}

std::vector<cplx> widen(std::span<const cplxf> x) {
  std::vector<cplx> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = {static_cast<double>(x[i].real()), static_cast<double>(x[i].imag())};
  }
  return out;
}

}  // namespace swarmdet
