#include "swarmdet/mf_cfar.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace swarmdet {

double cfar_alpha(std::uint32_t total_ref_cells, double pfa) {
  if (total_ref_cells < 1) throw std::invalid_argument("cfar_alpha: R must be >= 1");
  if (!(pfa > 0.0) || pfa > 1.0) {
    throw std::invalid_argument("cfar_alpha: pfa must lie in (0, 1]");
  }
  const double r = static_cast<double>(total_ref_cells);
  return r * (std::pow(pfa, -1.0 / r) - 1.0);
}

CfarConfig CfarConfig::make(std::uint32_t guard_per_side, std::uint32_t ref_per_side,
                            double pfa_target, std::uint32_t cell_stride) {
  if (guard_per_side < 1 || ref_per_side < 1 || cell_stride < 1) {
    throw std::invalid_argument("cfar config counts must be >= 1");
  }
  CfarConfig cfg;
  cfg.guard_per_side = guard_per_side;
  cfg.ref_per_side = ref_per_side;
  cfg.pfa_target = pfa_target;
  cfg.cell_stride = cell_stride;
  cfg.threshold_factor = cfar_alpha(2 * ref_per_side, pfa_target);
  return cfg;
}

CompressedProfile matched_filter_profile(std::span<const cplx> x, const Waveform& s) {
  const std::size_t n = s.size();
  if (n == 0) throw std::invalid_argument("matched filter: empty pulse");
  if (x.size() < n) {
    throw std::invalid_argument("matched filter: signal shorter than the pulse");
  }
  const double energy = pulse_energy(s);

  CompressedProfile cp;
  const std::size_t out_len = x.size() - n + 1;
  cp.linear.resize(out_len);
  cp.db.resize(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    double acc_re = 0.0;
    double acc_im = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      // x[i+k] * conj(s_k)
      const double xr = x[i + k].real();
      const double xi = x[i + k].imag();
      const double sr = s.samples[k].real();
      const double si = s.samples[k].imag();
      acc_re += xr * sr + xi * si;
      acc_im += xi * sr - xr * si;
    }
    const double lin = (acc_re * acc_re + acc_im * acc_im) / energy;
    cp.linear[i] = lin;
    cp.db[i] = lin > 0.0 ? 20.0 * std::log10(lin)
                         : -std::numeric_limits<double>::infinity();
  }
  return cp;
}

CfarResult ca_cfar_detect(const CompressedProfile& cp, const CfarConfig& cfg) {
  if (cfg.guard_per_side < 1 || cfg.ref_per_side < 1 || cfg.cell_stride < 1) {
    throw std::invalid_argument("ca_cfar_detect: bad config");
  }
  const std::size_t len = cp.size();
  const std::size_t reach =
      static_cast<std::size_t>(cfg.cell_stride) * (cfg.guard_per_side + cfg.ref_per_side);
  if (len < 2 * reach + 1) {
    throw std::invalid_argument("ca_cfar_detect: profile cannot host a full CFAR window");
  }

  CfarResult res;
  res.detections.assign(len, 0);
  res.thresholds.assign(len, std::numeric_limits<double>::quiet_NaN());
  res.valid.assign(len, 0);

  const double alpha = cfg.threshold_factor;
  const std::uint32_t n_ref = 2 * cfg.ref_per_side;
  for (std::size_t i = reach; i + reach < len; ++i) {
    double acc = 0.0;
    for (std::uint32_t r = 1; r <= cfg.ref_per_side; ++r) {
      const std::size_t off =
          static_cast<std::size_t>(cfg.cell_stride) * (cfg.guard_per_side + r);
      acc += cp.linear[i - off] + cp.linear[i + off];
    }
    const double threshold = alpha * (acc / n_ref);
    res.thresholds[i] = threshold;
    res.valid[i] = 1;
    res.detections[i] = cp.linear[i] > threshold ? 1 : 0;
  }
  return res;
}

}  // namespace swarmdet
