#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / "swarmdet_cli_test";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const char* name) const { return (path / name).string(); }
};

int run(const std::string& args, const std::string& out_file) {
  const std::string cmd =
      std::string(SWARMDET_CLI_PATH) + " " + args + " >" + out_file + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return rc == -1 ? -1 : WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(f)), {});
}

const char* kTinyGrid =
    " --profile-len 1000 --bandwidths-hz 1e6 --reflection-coeffs 1.0"
    " --noise-stds 0.05 --target-count-min 1 --target-count-max 2"
    " --stride-min 5 --stride-max 5 --offset-step 200 --n-empty 1"
    " --n-contrastive 1 --seed 77";

}  // namespace

TEST_CASE("cli runs generate -> train -> detect -> evaluate") {
  TempDir tmp;
  const std::string log = tmp.file("log.txt");

  REQUIRE(run(std::string("generate") + kTinyGrid + " --dataset-out " +
                  tmp.file("ds.rpds"),
              log) == 0);
  CHECK(slurp(log).find("profiles") != std::string::npos);
  REQUIRE(fs::exists(tmp.file("ds.rpds")));

  // rerunning the same config reproduces the same file
  const std::string bytes = slurp(tmp.file("ds.rpds"));
  REQUIRE(run(std::string("generate") + kTinyGrid + " --dataset-out " +
                  tmp.file("ds.rpds"),
              log) == 0);
  CHECK(slurp(tmp.file("ds.rpds")) == bytes);

  REQUIRE(run("train --dataset-in " + tmp.file("ds.rpds") +
                  " --model-out " + tmp.file("model.rpnn") +
                  " --history-out " + tmp.file("hist.csv") +
                  " --epochs 1 --batch 8 --hidden-width 8 --seed 77",
              log) == 0);
  REQUIRE(fs::exists(tmp.file("model.rpnn")));

  REQUIRE(run("detect --dataset-in " + tmp.file("ds.rpds") + " --model-in " +
                  tmp.file("model.rpnn") + " --detect-out " + tmp.file("trace.csv") +
                  " --profile-index 0 --seed 77",
              log) == 0);
  const std::string trace = slurp(tmp.file("trace.csv"));
  CHECK(trace.find("bin,mf_db,") != std::string::npos);
  CHECK(trace.find("# seed = 77") != std::string::npos);

  REQUIRE(run("evaluate --dataset-in " + tmp.file("ds.rpds") + " --model-in " +
                  tmp.file("model.rpnn") + " --report-out " + tmp.file("report.csv"),
              log) == 0);
  CHECK(slurp(tmp.file("report.csv")).find("All RPs") != std::string::npos);
}

TEST_CASE("cli config file with flag overrides") {
  TempDir tmp;
  const std::string log = tmp.file("log.txt");
  {
    std::ofstream f(tmp.file("run.cfg"));
    f << "# tiny run\n"
      << "profile_len = 1000\n"
      << "bandwidths_hz = 1e6\n"
      << "reflection_coeffs = 1.0\n"
      << "noise_stds = 0.05\n"
      << "target_count_min = 1\n"
      << "target_count_max = 1\n"
      << "stride_min = 5\n"
      << "stride_max = 5\n"
      << "offset_step = 1000\n"
      << "seed = 1\n"
      << "dataset_out = " << tmp.file("a.rpds") << "\n";
  }
  REQUIRE(run("generate --config " + tmp.file("run.cfg"), log) == 0);
  REQUIRE(fs::exists(tmp.file("a.rpds")));

  // the flag wins over the file entry
  REQUIRE(run("generate --config " + tmp.file("run.cfg") + " --dataset-out " +
                  tmp.file("b.rpds"),
              log) == 0);
  CHECK(fs::exists(tmp.file("b.rpds")));
}

TEST_CASE("cli failures exit nonzero with a one-line diagnostic") {
  TempDir tmp;
  const std::string log = tmp.file("log.txt");

  CHECK(run("generate", log) != 0);  // dataset_out unset
  std::string text = slurp(log);
  CHECK(text.find("swarmdet:") != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);

  CHECK(run("evaluate --dataset-in /nonexistent.rpds --report-out " +
                tmp.file("r.csv"),
            log) != 0);
  CHECK(slurp(log).find("SD_EIO") != std::string::npos);

  CHECK(run("generate --no-such-flag 1", log) != 0);
  CHECK(run("", log) != 0);  // a subcommand is required
}
