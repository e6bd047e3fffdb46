#include "swarmdet/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "swarmdet/datagen.hpp"

namespace swarmdet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(std::string(v), &used);
    if (used != v.size()) throw std::invalid_argument("trailing junk");
    return d;
  } catch (...) {
    throw std::invalid_argument("config: bad numeric value for " + std::string(key) +
                                ": '" + std::string(v) + "'");
  }
}

template <typename T>
T parse_unsigned(std::string_view key, std::string_view v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() ||
      out > std::numeric_limits<T>::max()) {
    throw std::invalid_argument("config: bad integer value for " + std::string(key) +
                                ": '" + std::string(v) + "'");
  }
  return static_cast<T>(out);
}

int parse_int(std::string_view key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    throw std::invalid_argument("config: bad integer value for " + std::string(key) +
                                ": '" + std::string(v) + "'");
  }
  return out;
}

std::vector<double> parse_list(std::string_view key, std::string_view v) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= v.size()) {
    const std::size_t comma = v.find(',', pos);
    const std::string_view item =
        trim(v.substr(pos, comma == std::string_view::npos ? v.size() - pos : comma - pos));
    if (!item.empty()) out.push_back(parse_double(key, item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) {
    throw std::invalid_argument("config: empty list for " + std::string(key));
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

struct KeyEntry {
  ConfigKey key;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define SD_KEY_DOUBLE(field, help)                                             \
  KeyEntry{{#field, help},                                                     \
           [](RunConfig& c, std::string_view v) { c.field = parse_double(#field, v); }, \
           [](const RunConfig& c) { return format_double(c.field); }}

#define SD_KEY_U32(field, help)                                                \
  KeyEntry{{#field, help},                                                     \
           [](RunConfig& c, std::string_view v) {                              \
             c.field = parse_unsigned<std::uint32_t>(#field, v);               \
           },                                                                  \
           [](const RunConfig& c) { return std::to_string(c.field); }}

#define SD_KEY_U64(field, help)                                                \
  KeyEntry{{#field, help},                                                     \
           [](RunConfig& c, std::string_view v) {                              \
             c.field = parse_unsigned<std::uint64_t>(#field, v);               \
           },                                                                  \
           [](const RunConfig& c) { return std::to_string(c.field); }}

#define SD_KEY_STRING(field, help)                                             \
  KeyEntry{{#field, help},                                                     \
           [](RunConfig& c, std::string_view v) { c.field = std::string(v); }, \
           [](const RunConfig& c) { return c.field; }}

#define SD_KEY_LIST(field, help)                                               \
  KeyEntry{{#field, help},                                                     \
           [](RunConfig& c, std::string_view v) { c.field = parse_list(#field, v); }, \
           [](const RunConfig& c) { return format_list(c.field); }}

const std::vector<KeyEntry>& registry() {
  static const std::vector<KeyEntry> keys = {
      SD_KEY_U64(seed, "global seed feeding every random stream"),
      KeyEntry{{"threads", "worker threads (0 = env SWARMDET_THREADS or hardware)"},
               [](RunConfig& c, std::string_view v) { c.threads = parse_int("threads", v); },
               [](const RunConfig& c) { return std::to_string(c.threads); }},
      SD_KEY_DOUBLE(sample_rate_hz, "IQ sampling rate in Hz"),
      SD_KEY_DOUBLE(pulse_duration_s, "transmitted pulse duration in seconds"),
      SD_KEY_DOUBLE(train_bandwidth_hz, "matched-filter (training) chirp bandwidth in Hz"),
      SD_KEY_DOUBLE(tone_freq_hz, "contrastive tone frequency (0 = train_bandwidth_hz/2)"),
      SD_KEY_U32(profile_len, "range bins per profile"),
      SD_KEY_LIST(bandwidths_hz, "comma list of echo chirp bandwidths for generation"),
      SD_KEY_LIST(reflection_coeffs, "comma list of echo amplitudes"),
      SD_KEY_LIST(noise_stds, "comma list of per-component gaussian noise stds"),
      SD_KEY_U32(target_count_min, "smallest targets-per-profile in the sweep"),
      SD_KEY_U32(target_count_max, "largest targets-per-profile in the sweep"),
      SD_KEY_U32(stride_min, "smallest target spacing in bins"),
      SD_KEY_U32(stride_max, "largest target spacing in bins"),
      SD_KEY_U32(offset_step, "bin step between swept placement offsets"),
      SD_KEY_U32(jitter_max, "max random shift applied to placements (0 = regular)"),
      SD_KEY_U64(n_empty, "noise-only profiles to append"),
      SD_KEY_U64(n_contrastive, "tone-pulse profiles to append"),
      SD_KEY_U32(guard_per_side, "CFAR guard cells per side"),
      SD_KEY_U32(ref_per_side, "CFAR reference cells per side"),
      SD_KEY_DOUBLE(pfa_target, "CFAR false alarm probability target"),
      SD_KEY_U32(cell_stride, "bin stride between CFAR guard/reference cells"),
      SD_KEY_U32(epochs, "training epochs"),
      SD_KEY_U32(batch, "profiles per training batch"),
      SD_KEY_DOUBLE(lr0, "initial Adam learning rate"),
      SD_KEY_U32(lr_half_every, "epochs between learning-rate halvings"),
      SD_KEY_DOUBLE(pos_weight, "loss weight on target bins"),
      SD_KEY_DOUBLE(threshold, "detection threshold on the network output"),
      SD_KEY_U32(hidden_width, "complex hidden units"),
      SD_KEY_U32(exclusion_window, "bins around a target excluded from Pfa counting"),
      SD_KEY_STRING(dataset_out, "path for the generated RPDS dataset"),
      SD_KEY_STRING(dataset_in, "input RPDS dataset path"),
      SD_KEY_STRING(valid_in, "optional validation RPDS dataset path"),
      SD_KEY_STRING(model_in, "input RPNN checkpoint path"),
      SD_KEY_STRING(model_out, "path for the trained RPNN checkpoint"),
      SD_KEY_STRING(history_out, "optional per-epoch training history CSV path"),
      SD_KEY_STRING(report_out, "path for the evaluation report CSV"),
      SD_KEY_STRING(detect_out, "path for the per-bin detection CSV"),
      SD_KEY_U64(profile_index, "profile to export with the detect command"),
  };
  return keys;
}

#undef SD_KEY_DOUBLE
#undef SD_KEY_U32
#undef SD_KEY_U64
#undef SD_KEY_STRING
#undef SD_KEY_LIST

const KeyEntry* find_key(std::string_view name) {
  for (const auto& e : registry()) {
    if (name == e.key.name) return &e;
  }
  return nullptr;
}

}  // namespace

std::span<const ConfigKey> config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const auto& e : registry()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

void config_set(RunConfig& cfg, std::string_view key, std::string_view value) {
  const KeyEntry* e = find_key(key);
  if (!e) throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  e->set(cfg, trim(value));
}

std::string config_get(const RunConfig& cfg, std::string_view key) {
  const KeyEntry* e = find_key(key);
  if (!e) throw std::invalid_argument("config: unknown key '" + std::string(key) + "'");
  return e->get(cfg);
}

void config_parse_text(RunConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (!line.empty()) {
      const std::size_t eq = line.find('=');
      if (eq == std::string_view::npos) {
        throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                    " is not 'key = value'");
      }
      config_set(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
}

void config_load_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  config_parse_text(cfg, buf.str());
}

std::string config_to_text(const RunConfig& cfg) {
  std::string out;
  for (const auto& e : registry()) {
    out += e.key.name;
    out += " = ";
    out += e.get(cfg);
    out += '\n';
  }
  return out;
}

}  // namespace swarmdet
