#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmdet/rng.hpp"
#include "swarmdet/signal.hpp"

namespace swarmdet {

enum class ProfileKind : std::uint8_t { targets = 0, empty = 1, contrastive = 2 };

struct ProfileMeta {
  double bandwidth_hz = 0.0;     // echo sweep bandwidth; 0 for empty/contrastive
  double reflection_coeff = 0.0;
  double noise_std = 0.0;        // per-component gaussian std
  ProfileKind kind = ProfileKind::targets;
};

bool operator==(const ProfileMeta& a, const ProfileMeta& b);

// One received signal over a PRI. labels[i] == 1 iff an echo starts in bin i
// (leading-edge convention); target_bins lists those bins in increasing order.
struct RangeProfile {
  std::vector<cplxf> samples;
  std::vector<std::uint8_t> labels;
  std::vector<std::uint32_t> target_bins;
  ProfileMeta meta;
};

bool operator==(const RangeProfile& a, const RangeProfile& b);

struct CountRange {
  std::uint32_t min = 1;
  std::uint32_t max = 1;
};

struct DatasetSpec {
  std::uint32_t m = 1000;  // range bins per profile
  double pulse_duration_s = 1e-4;
  double sample_rate_hz = 2e6;
  std::vector<double> bandwidths_hz = {1e6};
  std::vector<double> reflection_coeffs = {0.5, 1.0};
  std::vector<double> noise_stds = {0.04, 0.06};
  CountRange target_counts{1, 119};
  CountRange strides{5, 50};
  std::uint32_t offset_step = 1;
  std::uint32_t jitter_max = 0;     // 0 keeps the regular grid
  std::uint64_t n_empty = 0;
  std::uint64_t n_contrastive = 0;
  double tone_freq_hz = 0.0;        // 0 resolves to bandwidths_hz.front() / 2
  std::uint64_t seed = 1;

  std::uint32_t pulse_len() const;
  void validate() const;  // throws std::invalid_argument on inconsistency
};

struct Dataset {
  std::uint32_t m = 0;
  std::uint32_t n = 0;  // pulse length the profiles were generated with
  std::vector<RangeProfile> profiles;

  std::uint64_t count_kind(ProfileKind k) const;
};

// Evenly spaced placement [offset, offset+stride, ...]; every echo must fit:
// offset + (num_targets-1)*stride + n <= m.
std::vector<std::uint32_t> place_targets_regular(std::uint32_t num_targets,
                                                 std::uint32_t stride,
                                                 std::uint32_t offset,
                                                 std::uint32_t m, std::uint32_t n);

// Shifts each position by a uniform integer in [-jitter_max, +jitter_max],
// clamps to legal range, sorts, and collapses duplicates.
std::vector<std::uint32_t> jitter_positions(const std::vector<std::uint32_t>& positions,
                                            std::uint32_t jitter_max, std::uint32_t m,
                                            std::uint32_t n, RandomStream& rng);

// Coherent sum of shifted echoes plus circular complex gaussian noise
// (noise_std per component). Labels are set at the given positions.
RangeProfile synthesize_profile(const Waveform& w,
                                const std::vector<std::uint32_t>& positions,
                                double reflection_coeff, double noise_std,
                                std::uint32_t m, RandomStream& rng);

// Number of targets-kind profiles the generation grid will emit.
std::uint64_t count_grid_profiles(const DatasetSpec& spec);

// Full cartesian sweep of the spec grid plus empty and contrastive profiles.
// Deterministic for a fixed spec (each profile has its own derived stream).
Dataset generate_dataset(const DatasetSpec& spec, int threads = 0);

// "RPDS" little-endian binary container; read(write(d)) == d bit-exactly.
void write_dataset(const std::string& path, const Dataset& ds);
Dataset read_dataset(const std::string& path);

// Thrown on malformed or truncated container files.
struct format_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace swarmdet
