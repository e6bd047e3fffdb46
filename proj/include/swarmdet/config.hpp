#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace swarmdet {

// Flat key = value run configuration. One global seed feeds every random
// stream; flag > file > default precedence is handled by the callers applying
// overrides after config_load_file.
struct RunConfig {
  std::uint64_t seed = 1;
  int threads = 0;  // 0: SWARMDET_THREADS env var, else hardware concurrency

  // signal
  double sample_rate_hz = 2e6;
  double pulse_duration_s = 1e-4;
  double train_bandwidth_hz = 1e6;  // defines the matched filter
  double tone_freq_hz = 0.0;        // 0: train_bandwidth_hz / 2

  // dataset grid
  std::uint32_t profile_len = 1000;
  std::vector<double> bandwidths_hz = {1e6};
  std::vector<double> reflection_coeffs = {0.5, 1.0};
  std::vector<double> noise_stds = {0.04, 0.06};
  std::uint32_t target_count_min = 1;
  std::uint32_t target_count_max = 119;
  std::uint32_t stride_min = 5;
  std::uint32_t stride_max = 50;
  std::uint32_t offset_step = 1;
  std::uint32_t jitter_max = 0;
  std::uint64_t n_empty = 0;
  std::uint64_t n_contrastive = 0;

  // cfar
  std::uint32_t guard_per_side = 2;
  std::uint32_t ref_per_side = 10;
  double pfa_target = 1e-3;
  std::uint32_t cell_stride = 2;

  // network training
  std::uint32_t epochs = 100;
  std::uint32_t batch = 512;
  double lr0 = 1e-3;
  std::uint32_t lr_half_every = 20;
  double pos_weight = 10.0;
  double threshold = 0.5;
  std::uint32_t hidden_width = 256;

  // metrics
  std::uint32_t exclusion_window = 199;

  // files and selection
  std::string dataset_out;
  std::string dataset_in;
  std::string valid_in;
  std::string model_in;
  std::string model_out;
  std::string history_out;
  std::string report_out;
  std::string detect_out;
  std::uint64_t profile_index = 0;
};

struct ConfigKey {
  const char* name;
  const char* help;
};

// Registry of every settable key, in canonical order.
std::span<const ConfigKey> config_keys();

// Throws std::invalid_argument for unknown keys or unparsable values.
void config_set(RunConfig& cfg, std::string_view key, std::string_view value);
std::string config_get(const RunConfig& cfg, std::string_view key);

// key = value lines, # comments and blank lines ignored.
void config_load_file(RunConfig& cfg, const std::string& path);
void config_parse_text(RunConfig& cfg, std::string_view text);

// Full echo of the effective configuration, one key = value per line.
std::string config_to_text(const RunConfig& cfg);

}  // namespace swarmdet
