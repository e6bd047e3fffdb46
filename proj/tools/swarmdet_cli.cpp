// Command-line driver for the swarmdet shared library. Talks to the core
// exclusively through the C API in swarmdet.h; every config key doubles as a
// long flag (underscores become dashes), applied over an optional config file.

#include <cstdio>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "swarmdet.h"

namespace {

std::string dashed(const std::string& key) {
  std::string out = key;
  for (char& c : out) {
    if (c == '_') c = '-';
  }
  return out;
}

struct ConfigHolder {
  sd_config* cfg = sd_config_new();
  ~ConfigHolder() { sd_config_free(cfg); }
};

int die(int code) {
  std::fprintf(stderr, "swarmdet: %s (%s)\n", sd_last_error(), sd_error_name(code));
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radar range-profile simulation and swarm detection toolkit"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const sd_config*);
  };
  const Command commands[] = {
      {"generate", "synthesize a labeled RPDS dataset", sd_run_generate},
      {"train", "train the hybrid complex/real detector", sd_run_train},
      {"detect", "export per-bin detector traces for one profile", sd_run_detect},
      {"evaluate", "score detectors over a dataset and write a report", sd_run_evaluate},
  };

  struct SubState {
    CLI::App* sub = nullptr;
    int (*run)(const sd_config*) = nullptr;
    std::string config_file;
    // flag values arrive as strings and are forwarded to sd_config_set
    std::vector<std::pair<std::string, std::string>> overrides;
  };
  std::vector<std::unique_ptr<SubState>> states;

  for (const Command& cmd : commands) {
    auto state = std::make_unique<SubState>();
    state->sub = app.add_subcommand(cmd.name, cmd.help);
    state->run = cmd.run;
    state->sub->add_option("--config", state->config_file,
                           "key = value config file applied before flags");
    for (size_t k = 0; k < sd_config_key_count(); ++k) {
      const std::string key = sd_config_key_name(k);
      SubState* raw = state.get();
      state->sub
          ->add_option_function<std::string>(
              "--" + dashed(key),
              [raw, key](const std::string& v) { raw->overrides.emplace_back(key, v); },
              sd_config_key_help(k))
          ->expected(1);
    }
    states.push_back(std::move(state));
  }

  CLI11_PARSE(app, argc, argv);

  for (const auto& state : states) {
    if (!state->sub->parsed()) continue;
    ConfigHolder holder;
    if (!holder.cfg) {
      std::fprintf(stderr, "swarmdet: out of memory\n");
      return 1;
    }
    if (!state->config_file.empty()) {
      if (int rc = sd_config_load(holder.cfg, state->config_file.c_str()); rc != SD_OK) {
        return die(rc);
      }
    }
    for (const auto& [key, value] : state->overrides) {
      if (int rc = sd_config_set(holder.cfg, key.c_str(), value.c_str()); rc != SD_OK) {
        return die(rc);
      }
    }
    if (int rc = state->run(holder.cfg); rc != SD_OK) return die(rc);
  }
  return 0;
}
