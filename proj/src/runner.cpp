#include "swarmdet/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "swarmdet/cvnn.hpp"
#include "swarmdet/metrics.hpp"
#include "swarmdet/mf_cfar.hpp"
#include "swarmdet/parallel.hpp"

namespace swarmdet {

namespace {

void require_path(const std::string& value, const char* key) {
  if (value.empty()) {
    throw std::invalid_argument(std::string("config: ") + key +
                                " must be set for this command");
  }
}

std::string comment_block(const RunConfig& cfg) {
  std::istringstream echo(config_to_text(cfg));
  std::string out;
  std::string line;
  while (std::getline(echo, line)) {
    out += "# ";
    out += line;
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw io_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw io_error("write failed: " + path);
}

double resolved_tone_freq(const RunConfig& cfg) {
  return cfg.tone_freq_hz > 0.0 ? cfg.tone_freq_hz : cfg.train_bandwidth_hz / 2.0;
}

Waveform reference_chirp(const RunConfig& cfg, const Dataset& ds) {
  Waveform chirp =
      make_lfm_chirp(cfg.train_bandwidth_hz, cfg.pulse_duration_s, cfg.sample_rate_hz);
  if (chirp.size() != ds.n) {
    throw std::invalid_argument(
        "config pulse geometry disagrees with the dataset (pulse length " +
        std::to_string(chirp.size()) + " vs " + std::to_string(ds.n) + ")");
  }
  return chirp;
}

std::string format_g4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// Per-profile detections from both chains, expanded to profile length with a
// validity mask (matched-filter cells without output or full CFAR window are
// invalid).
struct ProfileDecisions {
  std::vector<std::uint8_t> det;
  std::vector<std::uint8_t> valid;
};

ProfileDecisions mf_decisions(const RangeProfile& rp, const Waveform& chirp,
                              const CfarConfig& cfar) {
  const std::size_t m = rp.samples.size();
  const auto cp = matched_filter_profile(widen(rp.samples), chirp);
  const auto res = ca_cfar_detect(cp, cfar);
  ProfileDecisions out;
  out.det.assign(m, 0);
  out.valid.assign(m, 0);
  for (std::size_t i = 0; i < cp.size(); ++i) {
    out.det[i] = res.detections[i];
    out.valid[i] = res.valid[i];
  }
  return out;
}

}  // namespace

DatasetSpec dataset_spec_from(const RunConfig& cfg) {
  DatasetSpec spec;
  spec.m = cfg.profile_len;
  spec.pulse_duration_s = cfg.pulse_duration_s;
  spec.sample_rate_hz = cfg.sample_rate_hz;
  spec.bandwidths_hz = cfg.bandwidths_hz;
  spec.reflection_coeffs = cfg.reflection_coeffs;
  spec.noise_stds = cfg.noise_stds;
  spec.target_counts = {cfg.target_count_min, cfg.target_count_max};
  spec.strides = {cfg.stride_min, cfg.stride_max};
  spec.offset_step = cfg.offset_step;
  spec.jitter_max = cfg.jitter_max;
  spec.n_empty = cfg.n_empty;
  spec.n_contrastive = cfg.n_contrastive;
  spec.tone_freq_hz = resolved_tone_freq(cfg);
  spec.seed = cfg.seed;
  return spec;
}

std::uint64_t fnv1a_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open for reading: " + path);
  std::uint64_t h = 14695981039346656037ull;
  char buf[1 << 16];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    if (!in) break;
  }
  return h;
}

GenerateSummary run_generate(const RunConfig& cfg) {
  require_path(cfg.dataset_out, "dataset_out");
  const DatasetSpec spec = dataset_spec_from(cfg);
  const Dataset ds = generate_dataset(spec, cfg.threads);
  write_dataset(cfg.dataset_out, ds);

  GenerateSummary s;
  s.total = ds.profiles.size();
  s.targets = ds.count_kind(ProfileKind::targets);
  s.empty = ds.count_kind(ProfileKind::empty);
  s.contrastive = ds.count_kind(ProfileKind::contrastive);
  s.content_hash = fnv1a_file(cfg.dataset_out);

  std::printf("wrote %s: %llu profiles (targets %llu, empty %llu, contrastive %llu), "
              "m=%u n=%u, fnv1a %016llx\n",
              cfg.dataset_out.c_str(), static_cast<unsigned long long>(s.total),
              static_cast<unsigned long long>(s.targets),
              static_cast<unsigned long long>(s.empty),
              static_cast<unsigned long long>(s.contrastive), ds.m, ds.n,
              static_cast<unsigned long long>(s.content_hash));
  return s;
}

void run_train(const RunConfig& cfg) {
  require_path(cfg.dataset_in, "dataset_in");
  require_path(cfg.model_out, "model_out");
  const Dataset train_set = read_dataset(cfg.dataset_in);
  std::optional<Dataset> valid_set;
  if (!cfg.valid_in.empty()) valid_set = read_dataset(cfg.valid_in);

  TrainConfig tc;
  tc.epochs = cfg.epochs;
  tc.batch = cfg.batch;
  tc.lr0 = cfg.lr0;
  tc.lr_half_every = cfg.lr_half_every;
  tc.pos_weight = cfg.pos_weight;
  tc.threshold = cfg.threshold;
  tc.hidden_width = cfg.hidden_width;
  tc.seed = cfg.seed;
  tc.exclusion_window = cfg.exclusion_window;
  tc.threads = cfg.threads;

  TrainHistory history;
  const NetworkParams params =
      train(train_set, valid_set ? &*valid_set : nullptr, tc, &history);
  save_model(cfg.model_out, params);

  if (!cfg.history_out.empty()) {
    std::string text = comment_block(cfg);
    text += "epoch,lr,train_loss,valid_loss,valid_pd,valid_pfa\n";
    for (std::size_t e = 0; e < history.epochs.size(); ++e) {
      const EpochStats& st = history.epochs[e];
      char buf[160];
      std::snprintf(buf, sizeof(buf), "%zu,%.10g,%.10g,", e, st.lr, st.train_loss);
      text += buf;
      if (st.valid_loss) text += format_g4(*st.valid_loss);
      text += ',';
      if (st.valid_pd) text += format_g4(*st.valid_pd);
      text += ',';
      if (st.valid_pfa) text += format_g4(*st.valid_pfa);
      text += '\n';
    }
    write_text_file(cfg.history_out, text);
  }

  const double final_loss =
      history.epochs.empty() ? 0.0 : history.epochs.back().train_loss;
  std::printf("trained %u epochs on %zu profiles (final train loss %.6g), wrote %s\n",
              cfg.epochs, train_set.profiles.size(), final_loss, cfg.model_out.c_str());
  if (history.best_valid_epoch != static_cast<std::size_t>(-1)) {
    std::printf("best validation loss at epoch %zu\n", history.best_valid_epoch);
  }
}

void run_detect(const RunConfig& cfg) {
  require_path(cfg.dataset_in, "dataset_in");
  require_path(cfg.detect_out, "detect_out");
  const Dataset ds = read_dataset(cfg.dataset_in);
  if (cfg.profile_index >= ds.profiles.size()) {
    throw std::out_of_range("profile_index " + std::to_string(cfg.profile_index) +
                            " out of range (dataset has " +
                            std::to_string(ds.profiles.size()) + " profiles)");
  }
  const RangeProfile& rp = ds.profiles[cfg.profile_index];
  const Waveform chirp = reference_chirp(cfg, ds);
  const CfarConfig cfar = CfarConfig::make(cfg.guard_per_side, cfg.ref_per_side,
                                           cfg.pfa_target, cfg.cell_stride);

  const auto cp = matched_filter_profile(widen(rp.samples), chirp);
  const auto res = ca_cfar_detect(cp, cfar);

  std::optional<NetworkParams> model;
  ForwardCache cache;
  if (!cfg.model_in.empty()) {
    model = load_model(cfg.model_in);
    if (model->m != ds.m) {
      throw std::invalid_argument("model input length does not match the dataset");
    }
    forward(*model, std::span<const cplxf>(rp.samples), cache);
  }

  std::string text = comment_block(cfg);
  text += "bin,mf_db,cfar_threshold_db,mf_detect,nn_output,nn_detect,label\n";
  char buf[200];
  for (std::size_t i = 0; i < ds.m; ++i) {
    text += std::to_string(i);
    text += ',';
    if (i < cp.size()) {
      std::snprintf(buf, sizeof(buf), "%.10g", cp.db[i]);
      text += buf;
    }
    text += ',';
    if (i < cp.size() && res.valid[i]) {
      const double thr = res.thresholds[i];
      std::snprintf(buf, sizeof(buf), "%.10g",
                    thr > 0.0 ? 20.0 * std::log10(thr)
                              : -std::numeric_limits<double>::infinity());
      text += buf;
    }
    text += ',';
    if (i < cp.size() && res.valid[i]) text += res.detections[i] ? '1' : '0';
    text += ',';
    if (model) {
      std::snprintf(buf, sizeof(buf), "%.10g", cache.y[i]);
      text += buf;
      text += ',';
      text += cache.y[i] > cfg.threshold ? '1' : '0';
    } else {
      text += ',';
    }
    text += ',';
    text += rp.labels[i] ? '1' : '0';
    text += '\n';
  }
  write_text_file(cfg.detect_out, text);
  std::printf("wrote %s (profile %llu, kind %u, %zu bins)\n", cfg.detect_out.c_str(),
              static_cast<unsigned long long>(cfg.profile_index),
              static_cast<unsigned>(rp.meta.kind), static_cast<std::size_t>(ds.m));
}

void run_evaluate(const RunConfig& cfg) {
  require_path(cfg.dataset_in, "dataset_in");
  require_path(cfg.report_out, "report_out");
  const Dataset ds = read_dataset(cfg.dataset_in);
  const Waveform chirp = reference_chirp(cfg, ds);
  const CfarConfig cfar = CfarConfig::make(cfg.guard_per_side, cfg.ref_per_side,
                                           cfg.pfa_target, cfg.cell_stride);

  std::optional<NetworkParams> model;
  if (!cfg.model_in.empty()) {
    model = load_model(cfg.model_in);
    if (model->m != ds.m) {
      throw std::invalid_argument("model input length does not match the dataset");
    }
  }

  const std::size_t count = ds.profiles.size();
  std::vector<DetectionCounts> mf_counts(count);
  std::vector<DetectionCounts> nn_counts(model ? count : 0);
  const std::vector<std::uint8_t> all_valid(ds.m, 1);
  parallel_for(0, count, cfg.threads, [&](std::size_t i) {
    const RangeProfile& rp = ds.profiles[i];
    const auto mf = mf_decisions(rp, chirp, cfar);
    mf_counts[i] = score_profile(mf.det, mf.valid, rp.labels, rp.target_bins,
                                 cfg.exclusion_window);
    if (model) {
      const auto det = detect(*model, rp.samples, cfg.threshold);
      nn_counts[i] = score_profile(det, all_valid, rp.labels, rp.target_bins,
                                   cfg.exclusion_window);
    }
  });

  // Table rows: the whole set, then one row per distinct reflection, noise,
  // and bandwidth value observed on targets-kind profiles.
  struct Subset {
    std::string name;
    SubsetFilter filter;
  };
  std::vector<Subset> subsets;
  subsets.push_back({"All RPs", {}});
  auto add_values = [&](auto getter, const char* prefix, bool mhz) {
    std::vector<double> values;
    for (const auto& p : ds.profiles) {
      if (p.meta.kind != ProfileKind::targets) continue;
      const double v = getter(p.meta);
      bool seen = false;
      for (double u : values) seen = seen || u == v;
      if (!seen) values.push_back(v);
    }
    std::sort(values.begin(), values.end());
    for (double v : values) {
      Subset s;
      if (mhz) {
        s.name = std::string(prefix) + format_g4(v / 1e6) + " MHz";
        s.filter.bandwidth_hz = v;
      } else {
        s.name = std::string(prefix) + format_g4(v);
      }
      if (std::string(prefix).find("Refl") == 0) s.filter.reflection_coeff = v;
      if (std::string(prefix).find("Noise") == 0) s.filter.noise_std = v;
      subsets.push_back(std::move(s));
    }
  };
  add_values([](const ProfileMeta& m) { return m.reflection_coeff; }, "Refl coeff = ",
             false);
  add_values([](const ProfileMeta& m) { return m.noise_std; }, "Noise std = ", false);
  add_values([](const ProfileMeta& m) { return m.bandwidth_hz; }, "LFM ", true);

  std::vector<ReportRow> rows;
  for (const auto& subset : subsets) {
    DetectionCounts mf_total;
    DetectionCounts nn_total;
    for (std::size_t i = 0; i < count; ++i) {
      if (!subset.filter.matches(ds.profiles[i].meta)) continue;
      mf_total += mf_counts[i];
      if (model) nn_total += nn_counts[i];
    }
    if (model) {
      rows.push_back({subset.name, "nn", aggregate({&nn_total, 1})});
    }
    rows.push_back({subset.name, "mf_cfar", aggregate({&mf_total, 1})});
  }

  std::string text = comment_block(cfg);
  text += report_csv(rows);
  write_text_file(cfg.report_out, text);
  std::cout << report_text(rows);
  std::printf("wrote %s (%zu profiles scored)\n", cfg.report_out.c_str(), count);
}

}  // namespace swarmdet
