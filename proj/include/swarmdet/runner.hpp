#pragma once

#include <cstdint>
#include <string>

#include "swarmdet/config.hpp"
#include "swarmdet/datagen.hpp"

namespace swarmdet {

DatasetSpec dataset_spec_from(const RunConfig& cfg);

struct GenerateSummary {
  std::uint64_t total = 0;
  std::uint64_t targets = 0;
  std::uint64_t empty = 0;
  std::uint64_t contrastive = 0;
  std::uint64_t content_hash = 0;  // FNV-1a of the written file
};

// Command drivers. Input/output paths come from the config; all of them
// refuse to run with a required path unset.
GenerateSummary run_generate(const RunConfig& cfg);
void run_train(const RunConfig& cfg);
void run_detect(const RunConfig& cfg);
void run_evaluate(const RunConfig& cfg);

std::uint64_t fnv1a_file(const std::string& path);

}  // namespace swarmdet
