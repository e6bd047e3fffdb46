/* swarmdet — radar range-profile simulation and swarm detection toolkit.
 *
 * C API over the C++ core: opaque handles, integer status codes, and a
 * thread-local error message. Every function that can fail returns SD_OK (0)
 * on success; sd_last_error() describes the most recent failure on the
 * calling thread.
 */
#ifndef SWARMDET_H
#define SWARMDET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  SD_OK = 0,
  SD_EINVAL = 1,   /* bad argument, config value, or geometry mismatch */
  SD_EIO = 2,      /* file could not be opened, read, or written */
  SD_EFORMAT = 3,  /* malformed RPDS/RPNN container */
  SD_ERANGE = 4,   /* index out of range */
  SD_EINTERNAL = 5 /* unexpected failure */
};

const char* sd_version(void);
const char* sd_error_name(int code);
const char* sd_last_error(void);

/* ---- run configuration ------------------------------------------------ */

typedef struct sd_config sd_config;

sd_config* sd_config_new(void);
void sd_config_free(sd_config* cfg);
int sd_config_load(sd_config* cfg, const char* path);
int sd_config_set(sd_config* cfg, const char* key, const char* value);
/* Writes the value into buf (NUL-terminated, truncated if needed). */
int sd_config_get(const sd_config* cfg, const char* key, char* buf, size_t buflen);

size_t sd_config_key_count(void);
const char* sd_config_key_name(size_t index);
const char* sd_config_key_help(size_t index);

/* ---- datasets (RPDS containers) ---------------------------------------- */

typedef struct sd_dataset sd_dataset;

enum { SD_KIND_TARGETS = 0, SD_KIND_EMPTY = 1, SD_KIND_CONTRASTIVE = 2 };

int sd_dataset_generate(const sd_config* cfg, sd_dataset** out);
int sd_dataset_read(const char* path, sd_dataset** out);
int sd_dataset_write(const sd_dataset* ds, const char* path);
void sd_dataset_free(sd_dataset* ds);

uint64_t sd_dataset_size(const sd_dataset* ds);
uint32_t sd_dataset_profile_len(const sd_dataset* ds);
uint32_t sd_dataset_pulse_len(const sd_dataset* ds);
uint64_t sd_dataset_count_kind(const sd_dataset* ds, int kind);

/* ---- models (RPNN checkpoints) ----------------------------------------- */

typedef struct sd_model sd_model;

int sd_model_train(const sd_config* cfg, const sd_dataset* train_set,
                   const sd_dataset* valid_set /* may be NULL */, sd_model** out);
int sd_model_read(const char* path, sd_model** out);
int sd_model_write(const sd_model* model, const char* path);
void sd_model_free(sd_model* model);

uint32_t sd_model_input_len(const sd_model* model);
uint32_t sd_model_hidden_width(const sd_model* model);

/* Detection scores in [0,1] for one profile of interleaved float IQ pairs
 * (re0, im0, re1, im1, ...). len must equal sd_model_input_len. */
int sd_model_predict(const sd_model* model, const float* iq_interleaved, uint32_t len,
                     double* out_scores);

/* ---- command drivers (paths taken from the config) --------------------- */

int sd_run_generate(const sd_config* cfg);
int sd_run_train(const sd_config* cfg);
int sd_run_detect(const sd_config* cfg);
int sd_run_evaluate(const sd_config* cfg);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SWARMDET_H */
