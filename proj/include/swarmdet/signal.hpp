#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace swarmdet {

using cplx = std::complex<double>;
using cplxf = std::complex<float>;

enum class WaveformKind : std::uint8_t { lfm = 0, tone = 1 };

// Sampled complex baseband pulse. For kind == tone, bandwidth_hz carries the
// tone frequency (an unmodulated pulse has no sweep bandwidth).
struct Waveform {
  std::vector<cplx> samples;
  double bandwidth_hz = 0.0;
  double duration_s = 0.0;
  double sample_rate_hz = 0.0;
  WaveformKind kind = WaveformKind::lfm;

  std::size_t size() const { return samples.size(); }
};

// LFM up-chirp sweeping bandwidth_hz over duration_s: s_k = exp(j*pi*(B/T)*t_k^2),
// t_k = k / Fs. Rejects non-positive parameters and Fs < 2B.
Waveform make_lfm_chirp(double bandwidth_hz, double duration_s, double sample_rate_hz);

// Unmodulated complex tone: s_k = exp(j*2*pi*f*t_k). Requires 0 < f < Fs/2.
Waveform make_tone_pulse(double freq_hz, double duration_s, double sample_rate_hz);

// Sum of |s_k|^2; equals the sample count for unit-magnitude pulses.
double pulse_energy(const Waveform& w);

// Exact float->double embedding of stored IQ samples.
std::vector<cplx> widen(std::span<const cplxf> x);

}  // namespace swarmdet
