#include "swarmdet.h"

#include <algorithm>
#include <cstring>
#include <memory>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include "swarmdet/config.hpp"
#include "swarmdet/cvnn.hpp"
#include "swarmdet/datagen.hpp"
#include "swarmdet/runner.hpp"

struct sd_config {
  swarmdet::RunConfig cfg;
};

struct sd_dataset {
  swarmdet::Dataset ds;
};

struct sd_model {
  swarmdet::NetworkParams params;
};

namespace {

thread_local std::string t_last_error;

int fail(int code, const char* what) {
  t_last_error = what ? what : "unknown error";
  return code;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return SD_OK;
  } catch (const swarmdet::format_error& e) {
    return fail(SD_EFORMAT, e.what());
  } catch (const swarmdet::io_error& e) {
    return fail(SD_EIO, e.what());
  } catch (const std::out_of_range& e) {
    return fail(SD_ERANGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(SD_EINVAL, e.what());
  } catch (const std::exception& e) {
    return fail(SD_EINTERNAL, e.what());
  } catch (...) {
    return fail(SD_EINTERNAL, "unknown error");
  }
}

swarmdet::TrainConfig train_config_from(const swarmdet::RunConfig& cfg) {
  swarmdet::TrainConfig tc;
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
  return tc;
}

}  // namespace

extern "C" {

const char* sd_version(void) { return "0.1.0"; }

const char* sd_error_name(int code) {
  switch (code) {
    case SD_OK: return "SD_OK";
    case SD_EINVAL: return "SD_EINVAL";
    case SD_EIO: return "SD_EIO";
    case SD_EFORMAT: return "SD_EFORMAT";
    case SD_ERANGE: return "SD_ERANGE";
    case SD_EINTERNAL: return "SD_EINTERNAL";
    default: return "SD_UNKNOWN";
  }
}

const char* sd_last_error(void) { return t_last_error.c_str(); }

sd_config* sd_config_new(void) { return new (std::nothrow) sd_config(); }

void sd_config_free(sd_config* cfg) { delete cfg; }

int sd_config_load(sd_config* cfg, const char* path) {
  if (!cfg || !path) return fail(SD_EINVAL, "null argument");
  return guarded([&] { swarmdet::config_load_file(cfg->cfg, path); });
}

int sd_config_set(sd_config* cfg, const char* key, const char* value) {
  if (!cfg || !key || !value) return fail(SD_EINVAL, "null argument");
  return guarded([&] { swarmdet::config_set(cfg->cfg, key, value); });
}

int sd_config_get(const sd_config* cfg, const char* key, char* buf, size_t buflen) {
  if (!cfg || !key || !buf || buflen == 0) return fail(SD_EINVAL, "null argument");
  return guarded([&] {
    const std::string v = swarmdet::config_get(cfg->cfg, key);
    const size_t n = std::min(buflen - 1, v.size());
    std::memcpy(buf, v.data(), n);
    buf[n] = '\0';
  });
}

size_t sd_config_key_count(void) { return swarmdet::config_keys().size(); }

const char* sd_config_key_name(size_t index) {
  const auto keys = swarmdet::config_keys();
  return index < keys.size() ? keys[index].name : nullptr;
}

const char* sd_config_key_help(size_t index) {
  const auto keys = swarmdet::config_keys();
  return index < keys.size() ? keys[index].help : nullptr;
}

int sd_dataset_generate(const sd_config* cfg, sd_dataset** out) {
  if (!cfg || !out) return fail(SD_EINVAL, "null argument");
  return guarded([&] {
    auto ds = std::make_unique<sd_dataset>();
    ds->ds = swarmdet::generate_dataset(swarmdet::dataset_spec_from(cfg->cfg),
                                        cfg->cfg.threads);
    *out = ds.release();
  });
}

int sd_dataset_read(const char* path, sd_dataset** out) {
  if (!path || !out) return fail(SD_EINVAL, "null argument");
  return guarded([&] {
    auto ds = std::make_unique<sd_dataset>();
    ds->ds = swarmdet::read_dataset(path);
    *out = ds.release();
  });
}

int sd_dataset_write(const sd_dataset* ds, const char* path) {
  if (!ds || !path) return fail(SD_EINVAL, "null argument");
  return guarded([&] { swarmdet::write_dataset(path, ds->ds); });
}

void sd_dataset_free(sd_dataset* ds) { delete ds; }

uint64_t sd_dataset_size(const sd_dataset* ds) {
  return ds ? ds->ds.profiles.size() : 0;
}

uint32_t sd_dataset_profile_len(const sd_dataset* ds) { return ds ? ds->ds.m : 0; }

uint32_t sd_dataset_pulse_len(const sd_dataset* ds) { return ds ? ds->ds.n : 0; }

uint64_t sd_dataset_count_kind(const sd_dataset* ds, int kind) {
  if (!ds || kind < 0 || kind > 2) return 0;
  return ds->ds.count_kind(static_cast<swarmdet::ProfileKind>(kind));
}

int sd_model_train(const sd_config* cfg, const sd_dataset* train_set,
                   const sd_dataset* valid_set, sd_model** out) {
  if (!cfg || !train_set || !out) return fail(SD_EINVAL, "null argument");
  return guarded([&] {
    auto model = std::make_unique<sd_model>();
    model->params = swarmdet::train(train_set->ds,
                                    valid_set ? &valid_set->ds : nullptr,
                                    train_config_from(cfg->cfg), nullptr);
    *out = model.release();
  });
}

int sd_model_read(const char* path, sd_model** out) {
  if (!path || !out) return fail(SD_EINVAL, "null argument");
  return guarded([&] {
    auto model = std::make_unique<sd_model>();
    model->params = swarmdet::load_model(path);
    *out = model.release();
  });
}

int sd_model_write(const sd_model* model, const char* path) {
  if (!model || !path) return fail(SD_EINVAL, "null argument");
  return guarded([&] { swarmdet::save_model(path, model->params); });
}

void sd_model_free(sd_model* model) { delete model; }

uint32_t sd_model_input_len(const sd_model* model) {
  return model ? static_cast<uint32_t>(model->params.m) : 0;
}

uint32_t sd_model_hidden_width(const sd_model* model) {
  return model ? static_cast<uint32_t>(model->params.hidden) : 0;
}

int sd_model_predict(const sd_model* model, const float* iq_interleaved, uint32_t len,
                     double* out_scores) {
  if (!model || !iq_interleaved || !out_scores) return fail(SD_EINVAL, "null argument");
  if (len != model->params.m) {
    return fail(SD_EINVAL, "sd_model_predict: profile length does not match the model");
  }
  return guarded([&] {
    std::vector<swarmdet::cplxf> x(len);
    for (uint32_t i = 0; i < len; ++i) {
      x[i] = swarmdet::cplxf{iq_interleaved[2 * i], iq_interleaved[2 * i + 1]};
    }
    swarmdet::ForwardCache cache;
    swarmdet::forward(model->params, std::span<const swarmdet::cplxf>(x), cache);
    for (uint32_t i = 0; i < len; ++i) out_scores[i] = cache.y[i];
  });
}

int sd_run_generate(const sd_config* cfg) {
  if (!cfg) return fail(SD_EINVAL, "null argument");
  return guarded([&] { swarmdet::run_generate(cfg->cfg); });
}

int sd_run_train(const sd_config* cfg) {
  if (!cfg) return fail(SD_EINVAL, "null argument");
  return guarded([&] { swarmdet::run_train(cfg->cfg); });
}

int sd_run_detect(const sd_config* cfg) {
  if (!cfg) return fail(SD_EINVAL, "null argument");
  return guarded([&] { swarmdet::run_detect(cfg->cfg); });
}

int sd_run_evaluate(const sd_config* cfg) {
  if (!cfg) return fail(SD_EINVAL, "null argument");
  return guarded([&] { swarmdet::run_evaluate(cfg->cfg); });
}

}  // extern "C"
