#include "swarmdet/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "binio.hpp"
#include "swarmdet/parallel.hpp"

namespace swarmdet {

bool operator==(const ProfileMeta& a, const ProfileMeta& b) {
  return a.bandwidth_hz == b.bandwidth_hz && a.reflection_coeff == b.reflection_coeff &&
         a.noise_std == b.noise_std && a.kind == b.kind;
}

bool operator==(const RangeProfile& a, const RangeProfile& b) {
  return a.samples == b.samples && a.labels == b.labels &&
         a.target_bins == b.target_bins && a.meta == b.meta;
}

std::uint32_t DatasetSpec::pulse_len() const {
  const auto n = std::llround(pulse_duration_s * sample_rate_hz);
  return n > 0 ? static_cast<std::uint32_t>(n) : 0u;
}

void DatasetSpec::validate() const {
  const std::uint32_t n = pulse_len();
  if (n < 1) throw std::invalid_argument("dataset spec: empty pulse");
  if (m < n) throw std::invalid_argument("dataset spec: profile shorter than pulse");
  if (bandwidths_hz.empty() || reflection_coeffs.empty() || noise_stds.empty()) {
    throw std::invalid_argument("dataset spec: empty parameter grid");
  }
  for (double b : bandwidths_hz) {
    if (!(b > 0.0) || sample_rate_hz < 2.0 * b) {
      throw std::invalid_argument("dataset spec: bandwidth not in (0, Fs/2]");
    }
  }
  for (double r : reflection_coeffs) {
    if (!(r >= 0.0)) throw std::invalid_argument("dataset spec: negative reflection coeff");
  }
  for (double s : noise_stds) {
    if (!(s >= 0.0)) throw std::invalid_argument("dataset spec: negative noise std");
  }
  if (target_counts.min < 1 || target_counts.min > target_counts.max) {
    throw std::invalid_argument("dataset spec: bad target count range");
  }
  if (strides.min < 1 || strides.min > strides.max) {
    throw std::invalid_argument("dataset spec: bad stride range");
  }
  if (offset_step < 1) throw std::invalid_argument("dataset spec: offset step must be >= 1");
  const std::uint64_t reach =
      static_cast<std::uint64_t>(target_counts.max) * strides.min + n;
  if (reach > m) {
    throw std::invalid_argument(
        "dataset spec: max target count at min stride does not fit the profile");
  }
  if (tone_freq_hz != 0.0 &&
      (!(tone_freq_hz > 0.0) || !(tone_freq_hz < sample_rate_hz / 2.0))) {
    throw std::invalid_argument("dataset spec: tone frequency not in (0, Fs/2)");
  }
}

std::uint64_t Dataset::count_kind(ProfileKind k) const {
  std::uint64_t c = 0;
  for (const auto& p : profiles) {
    if (p.meta.kind == k) ++c;
  }
  return c;
}

std::vector<std::uint32_t> place_targets_regular(std::uint32_t num_targets,
                                                 std::uint32_t stride,
                                                 std::uint32_t offset,
                                                 std::uint32_t m, std::uint32_t n) {
  if (num_targets == 0) return {};
  if (stride < 1) throw std::invalid_argument("placement stride must be >= 1");
  const std::uint64_t last =
      static_cast<std::uint64_t>(offset) + static_cast<std::uint64_t>(num_targets - 1) * stride;
  if (last + n > m) {
    throw std::invalid_argument("target placement overflows the range profile");
  }
  std::vector<std::uint32_t> positions(num_targets);
  for (std::uint32_t i = 0; i < num_targets; ++i) positions[i] = offset + i * stride;
  return positions;
}

std::vector<std::uint32_t> jitter_positions(const std::vector<std::uint32_t>& positions,
                                            std::uint32_t jitter_max, std::uint32_t m,
                                            std::uint32_t n, RandomStream& rng) {
  if (m < n) throw std::invalid_argument("profile shorter than pulse");
  const std::int64_t max_bin = static_cast<std::int64_t>(m) - static_cast<std::int64_t>(n);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] > max_bin || (i > 0 && positions[i] <= positions[i - 1])) {
      throw std::invalid_argument("jitter input positions must be strictly increasing and legal");
    }
  }
  if (jitter_max == 0) return positions;

  std::vector<std::uint32_t> out;
  out.reserve(positions.size());
  const std::int64_t j = static_cast<std::int64_t>(jitter_max);
  for (std::uint32_t p : positions) {
    std::int64_t shifted = static_cast<std::int64_t>(p) + rng.uniform_int(-j, j);
    shifted = std::clamp<std::int64_t>(shifted, 0, max_bin);
    out.push_back(static_cast<std::uint32_t>(shifted));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RangeProfile synthesize_profile(const Waveform& w,
                                const std::vector<std::uint32_t>& positions,
                                double reflection_coeff, double noise_std,
                                std::uint32_t m, RandomStream& rng) {
  const std::size_t n = w.size();
  if (!(reflection_coeff >= 0.0) || !(noise_std >= 0.0)) {
    throw std::invalid_argument("reflection coeff and noise std must be non-negative");
  }
  std::vector<cplx> acc(m, cplx{0.0, 0.0});
  for (std::uint32_t p : positions) {
    if (static_cast<std::uint64_t>(p) + n > m) {
      throw std::invalid_argument("echo does not fit the range profile");
    }
    for (std::size_t k = 0; k < n; ++k) {
      acc[p + k] += reflection_coeff * w.samples[k];
    }
  }
  if (noise_std > 0.0) {
    for (std::uint32_t i = 0; i < m; ++i) {
      const auto [g_re, g_im] = rng.gaussian_pair();
      acc[i] += cplx{noise_std * g_re, noise_std * g_im};
    }
  }

  RangeProfile profile;
  profile.samples.resize(m);
  for (std::uint32_t i = 0; i < m; ++i) {
    profile.samples[i] = cplxf{static_cast<float>(acc[i].real()),
                               static_cast<float>(acc[i].imag())};
  }
  profile.labels.assign(m, 0);
  profile.target_bins.assign(positions.begin(), positions.end());
  for (std::uint32_t p : positions) profile.labels[p] = 1;
  profile.meta.bandwidth_hz = w.bandwidth_hz;
  profile.meta.reflection_coeff = reflection_coeff;
  profile.meta.noise_std = noise_std;
  profile.meta.kind = ProfileKind::targets;
  return profile;
}

namespace {

struct Recipe {
  ProfileKind kind = ProfileKind::targets;
  std::uint32_t bw_index = 0;
  double reflection = 0.0;
  double noise = 0.0;
  std::uint32_t count = 0;
  std::uint32_t stride = 0;
  std::uint32_t offset = 0;
};

// Offsets available for `count` targets at `stride` (0 when none fit).
std::uint64_t offset_slots(const DatasetSpec& spec, std::uint32_t n,
                           std::uint32_t count, std::uint32_t stride) {
  const std::uint64_t span = static_cast<std::uint64_t>(count - 1) * stride + n;
  if (span > spec.m) return 0;
  const std::uint64_t max_offset = spec.m - span;
  return max_offset / spec.offset_step + 1;
}

std::vector<Recipe> grid_recipes(const DatasetSpec& spec, std::uint32_t n) {
  std::vector<Recipe> recipes;
  for (std::uint32_t b = 0; b < spec.bandwidths_hz.size(); ++b) {
    for (double refl : spec.reflection_coeffs) {
      for (double noise : spec.noise_stds) {
        for (std::uint32_t c = spec.target_counts.min; c <= spec.target_counts.max; ++c) {
          for (std::uint32_t s = spec.strides.min; s <= spec.strides.max; ++s) {
            const std::uint64_t slots = offset_slots(spec, n, c, s);
            for (std::uint64_t o = 0; o < slots; ++o) {
              recipes.push_back(Recipe{ProfileKind::targets, b, refl, noise, c, s,
                                       static_cast<std::uint32_t>(o * spec.offset_step)});
            }
          }
        }
      }
    }
  }
  return recipes;
}

// Contrastive placements are drawn from the profile stream: stride, then a
// feasible count, then offset; jitter follows when enabled.
std::vector<std::uint32_t> draw_contrastive_positions(const DatasetSpec& spec,
                                                      std::uint32_t n,
                                                      RandomStream& rng) {
  const std::uint32_t stride = static_cast<std::uint32_t>(
      rng.uniform_int(spec.strides.min, spec.strides.max));
  const std::uint64_t cap = (spec.m - n) / stride + 1;
  const std::uint32_t c_max = static_cast<std::uint32_t>(
      std::min<std::uint64_t>(spec.target_counts.max, cap));
  const std::uint32_t c_min = std::min(spec.target_counts.min, c_max);
  const std::uint32_t count =
      static_cast<std::uint32_t>(rng.uniform_int(c_min, c_max));
  const std::uint32_t max_offset =
      spec.m - n - (count - 1) * stride;
  const std::uint32_t offset =
      static_cast<std::uint32_t>(rng.uniform_int(0, max_offset));
  auto positions = place_targets_regular(count, stride, offset, spec.m, n);
  if (spec.jitter_max > 0) {
    positions = jitter_positions(positions, spec.jitter_max, spec.m, n, rng);
  }
  return positions;
}

}  // namespace

std::uint64_t count_grid_profiles(const DatasetSpec& spec) {
  spec.validate();
  const std::uint32_t n = spec.pulse_len();
  std::uint64_t total = 0;
  for (std::uint32_t c = spec.target_counts.min; c <= spec.target_counts.max; ++c) {
    for (std::uint32_t s = spec.strides.min; s <= spec.strides.max; ++s) {
      total += offset_slots(spec, n, c, s);
    }
  }
  return total * spec.bandwidths_hz.size() * spec.reflection_coeffs.size() *
         spec.noise_stds.size();
}

Dataset generate_dataset(const DatasetSpec& spec, int threads) {
  spec.validate();
  const std::uint32_t n = spec.pulse_len();

  std::vector<Waveform> chirps;
  chirps.reserve(spec.bandwidths_hz.size());
  for (double b : spec.bandwidths_hz) {
    chirps.push_back(make_lfm_chirp(b, spec.pulse_duration_s, spec.sample_rate_hz));
  }
  const double tone_freq =
      spec.tone_freq_hz > 0.0 ? spec.tone_freq_hz : spec.bandwidths_hz.front() / 2.0;
  Waveform tone;
  if (spec.n_contrastive > 0) {
    tone = make_tone_pulse(tone_freq, spec.pulse_duration_s, spec.sample_rate_hz);
  }

  std::vector<Recipe> recipes = grid_recipes(spec, n);
  const std::uint64_t n_targets = recipes.size();
  recipes.reserve(n_targets + spec.n_empty + spec.n_contrastive);
  const std::size_t n_noise = spec.noise_stds.size();
  const std::size_t n_refl = spec.reflection_coeffs.size();
  for (std::uint64_t j = 0; j < spec.n_empty; ++j) {
    Recipe r;
    r.kind = ProfileKind::empty;
    r.noise = spec.noise_stds[j % n_noise];
    recipes.push_back(r);
  }
  for (std::uint64_t j = 0; j < spec.n_contrastive; ++j) {
    Recipe r;
    r.kind = ProfileKind::contrastive;
    r.reflection = spec.reflection_coeffs[j % n_refl];
    r.noise = spec.noise_stds[(j / n_refl) % n_noise];
    recipes.push_back(r);
  }

  Dataset ds;
  ds.m = spec.m;
  ds.n = n;
  ds.profiles.resize(recipes.size());

  parallel_for(0, recipes.size(), threads, [&](std::size_t i) {
    const Recipe& r = recipes[i];
    RandomStream rng = RandomStream::derive(spec.seed, SeedPurpose::datagen, i);
    switch (r.kind) {
      case ProfileKind::targets: {
        auto positions = place_targets_regular(r.count, r.stride, r.offset, spec.m, n);
        if (spec.jitter_max > 0) {
          positions = jitter_positions(positions, spec.jitter_max, spec.m, n, rng);
        }
        ds.profiles[i] = synthesize_profile(chirps[r.bw_index], positions,
                                            r.reflection, r.noise, spec.m, rng);
        break;
      }
      case ProfileKind::empty: {
        ds.profiles[i] = synthesize_profile(chirps.front(), {}, 0.0, r.noise, spec.m, rng);
        ds.profiles[i].meta.bandwidth_hz = 0.0;
        ds.profiles[i].meta.kind = ProfileKind::empty;
        break;
      }
      case ProfileKind::contrastive: {
        const auto positions = draw_contrastive_positions(spec, n, rng);
        ds.profiles[i] = synthesize_profile(tone, positions, r.reflection, r.noise,
                                            spec.m, rng);
        // tone pulses are non-targets: no labels, no target bins
        ds.profiles[i].labels.assign(spec.m, 0);
        ds.profiles[i].target_bins.clear();
        ds.profiles[i].meta.bandwidth_hz = 0.0;
        ds.profiles[i].meta.kind = ProfileKind::contrastive;
        break;
      }
    }
  });
  return ds;
}

namespace {

constexpr char kMagic[4] = {'R', 'P', 'D', 'S'};
constexpr std::uint16_t kVersion = 1;

using binio::put;

}  // namespace

void write_dataset(const std::string& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path);

  std::string buf;
  buf.append(kMagic, 4);
  put(buf, kVersion);
  put(buf, ds.m);
  put(buf, ds.n);
  put(buf, static_cast<std::uint64_t>(ds.profiles.size()));
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));

  const std::size_t label_bytes = (ds.m + 7) / 8;
  for (const RangeProfile& p : ds.profiles) {
    buf.clear();
    put(buf, static_cast<std::uint8_t>(p.meta.kind));
    put(buf, p.meta.bandwidth_hz);
    put(buf, p.meta.reflection_coeff);
    put(buf, p.meta.noise_std);
    put(buf, static_cast<std::uint32_t>(p.target_bins.size()));
    for (std::uint32_t b : p.target_bins) put(buf, b);
    for (const cplxf& s : p.samples) {
      put(buf, s.real());
      put(buf, s.imag());
    }
    // labels packed LSB-first: bin i lives in bit (i & 7) of byte (i >> 3)
    std::string packed(label_bytes, '\0');
    for (std::uint32_t i = 0; i < ds.m; ++i) {
      if (p.labels[i]) packed[i >> 3] |= static_cast<char>(1u << (i & 7));
    }
    buf.append(packed);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw io_error("write failed: " + path);
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  binio::Reader r(in, "RPDS");

  char magic[4];
  r.get_bytes(magic, 4);
  if (std::memcmp(magic, kMagic, 4) != 0) throw format_error("RPDS: bad magic");
  const auto version = r.get<std::uint16_t>();
  if (version != kVersion) {
    throw format_error("RPDS: unsupported version " + std::to_string(version));
  }

  Dataset ds;
  ds.m = r.get<std::uint32_t>();
  ds.n = r.get<std::uint32_t>();
  const auto count = r.get<std::uint64_t>();
  if (ds.m == 0 || ds.n == 0 || ds.n > ds.m) throw format_error("RPDS: bad geometry");

  const std::size_t label_bytes = (ds.m + 7) / 8;
  ds.profiles.resize(count);
  std::vector<std::uint8_t> packed(label_bytes);
  for (std::uint64_t idx = 0; idx < count; ++idx) {
    RangeProfile& p = ds.profiles[idx];
    const auto kind = r.get<std::uint8_t>();
    if (kind > 2) throw format_error("RPDS: bad profile kind");
    p.meta.kind = static_cast<ProfileKind>(kind);
    p.meta.bandwidth_hz = r.get<double>();
    p.meta.reflection_coeff = r.get<double>();
    p.meta.noise_std = r.get<double>();
    const auto n_bins = r.get<std::uint32_t>();
    if (n_bins > ds.m) throw format_error("RPDS: bad target count");
    p.target_bins.resize(n_bins);
    for (std::uint32_t i = 0; i < n_bins; ++i) {
      p.target_bins[i] = r.get<std::uint32_t>();
      if (p.target_bins[i] + ds.n > ds.m ||
          (i > 0 && p.target_bins[i] <= p.target_bins[i - 1])) {
        throw format_error("RPDS: bad target bin list");
      }
    }
    p.samples.resize(ds.m);
    for (std::uint32_t i = 0; i < ds.m; ++i) {
      const float re = r.get<float>();
      const float im = r.get<float>();
      p.samples[i] = cplxf{re, im};
    }
    r.get_bytes(packed.data(), label_bytes);
    p.labels.assign(ds.m, 0);
    for (std::uint32_t i = 0; i < ds.m; ++i) {
      p.labels[i] = (packed[i >> 3] >> (i & 7)) & 1u;
    }
    std::vector<std::uint32_t> set_bits;
    for (std::uint32_t i = 0; i < ds.m; ++i) {
      if (p.labels[i]) set_bits.push_back(i);
    }
    if (set_bits != p.target_bins) {
      throw format_error("RPDS: labels disagree with target bins");
    }
  }
  if (!r.at_eof()) {
    throw format_error("RPDS: trailing bytes after last record");
  }
  return ds;
}

}  // namespace swarmdet
