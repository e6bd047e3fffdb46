#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swarmdet/signal.hpp"

namespace swarmdet {

// Pulse-compressed profile. linear[i] is the energy-normalized squared
// correlation at lag i; db[i] = 20*log10(linear[i]) (-inf where linear is 0).
// Length is m - n + 1: no padding, the tail that cannot host a full pulse is
// simply absent.
struct CompressedProfile {
  std::vector<double> linear;
  std::vector<double> db;

  std::size_t size() const { return linear.size(); }
};

struct CfarConfig {
  std::uint32_t guard_per_side = 2;
  std::uint32_t ref_per_side = 10;
  double pfa_target = 1e-3;
  std::uint32_t cell_stride = 2;
  double threshold_factor = 0.0;  // alpha, derived from the fields above

  static CfarConfig make(std::uint32_t guard_per_side, std::uint32_t ref_per_side,
                         double pfa_target, std::uint32_t cell_stride);
};

struct CfarResult {
  std::vector<std::uint8_t> detections;  // 1 where cell exceeds its threshold
  std::vector<double> thresholds;        // NaN where the window does not fit
  std::vector<std::uint8_t> valid;       // 1 where a detection decision exists
};

// CA-CFAR threshold factor alpha = R * (pfa^(-1/R) - 1).
double cfar_alpha(std::uint32_t total_ref_cells, double pfa);

// Normalized matched filter: linear[i] = |sum_k x[i+k] * conj(s_k)|^2 / sum|s_k|^2.
CompressedProfile matched_filter_profile(std::span<const cplx> x, const Waveform& s);

// Cell-averaging CFAR with guard and reference cells picked at multiples of
// cell_stride on both sides of the cell under test. Cells whose full window
// exceeds the profile are marked invalid and never alarm.
CfarResult ca_cfar_detect(const CompressedProfile& cp, const CfarConfig& cfg);

}  // namespace swarmdet
