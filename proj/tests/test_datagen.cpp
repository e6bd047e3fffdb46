#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "swarmdet/datagen.hpp"

using namespace swarmdet;

namespace {

const Waveform& chirp200() {
  static const Waveform w = make_lfm_chirp(1e6, 1e-4, 2e6);
  return w;
}

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

DatasetSpec tiny_spec() {
  DatasetSpec spec;
  spec.m = 1000;
  spec.bandwidths_hz = {1e6};
  spec.reflection_coeffs = {1.0};
  spec.noise_stds = {0.05};
  spec.target_counts = {1, 1};
  spec.strides = {5, 5};
  spec.offset_step = 1000;  // one placement only
  spec.seed = 7;
  return spec;
}

}  // namespace

TEST_CASE("regular placement arithmetic") {
  CHECK(place_targets_regular(3, 50, 0, 1000, 200) ==
        std::vector<std::uint32_t>{0, 50, 100});
  CHECK(place_targets_regular(1, 5, 790, 1000, 200) == std::vector<std::uint32_t>{790});

  const auto dense = place_targets_regular(119, 5, 0, 1000, 200);
  CHECK(dense.size() == 119);
  CHECK(dense.back() == 590);

  // 790 + 200 = 990 <= 1000 is legal, adding a second target overflows
  CHECK_THROWS_AS(place_targets_regular(2, 50, 790, 1000, 200), std::invalid_argument);
  CHECK_THROWS_AS(place_targets_regular(119, 50, 0, 1000, 200), std::invalid_argument);
}

TEST_CASE("jitter is bounded, clamped and strictly increasing") {
  RandomStream rng(123);

  const std::vector<std::uint32_t> base = {0, 50, 100};
  CHECK(jitter_positions(base, 0, 1000, 200, rng) == base);

  for (int trial = 0; trial < 200; ++trial) {
    const auto out = jitter_positions(base, 2, 1000, 200, rng);
    for (std::uint32_t p : out) {
      bool near = false;
      for (std::uint32_t b : base) {
        near = near || (p + 2 >= b && p <= b + 2);
      }
      CHECK(near);
    }
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i] > out[i - 1]);
  }

  // clamp keeps the echo inside the profile: 790+10+200 = 1000
  for (int trial = 0; trial < 50; ++trial) {
    const auto out = jitter_positions({790}, 10, 1000, 200, rng);
    REQUIRE(out.size() == 1);
    CHECK(out[0] <= 800);
  }

  // collisions collapse, order is preserved
  for (int trial = 0; trial < 100; ++trial) {
    const auto out = jitter_positions({10, 12, 14}, 3, 1000, 200, rng);
    CHECK(!out.empty());
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i] > out[i - 1]);
  }

  CHECK_THROWS_AS(jitter_positions({5, 5}, 1, 1000, 200, rng), std::invalid_argument);
  CHECK_THROWS_AS(jitter_positions({900}, 1, 1000, 200, rng), std::invalid_argument);
}

TEST_CASE("synthesize: no targets, no noise is exactly zero") {
  RandomStream rng(1);
  const auto p = synthesize_profile(chirp200(), {}, 1.0, 0.0, 1000, rng);
  for (const cplxf& s : p.samples) {
    CHECK(s.real() == 0.0f);
    CHECK(s.imag() == 0.0f);
  }
  for (auto l : p.labels) CHECK(l == 0);
  CHECK(p.target_bins.empty());
}

TEST_CASE("synthesize: single clean echo copies the pulse") {
  RandomStream rng(1);
  const Waveform& w = chirp200();
  const auto p = synthesize_profile(w, {300}, 1.0, 0.0, 1000, rng);
  for (std::size_t k = 0; k < 200; ++k) {
    CHECK(p.samples[300 + k] == cplxf{static_cast<float>(w.samples[k].real()),
                                      static_cast<float>(w.samples[k].imag())});
  }
  for (std::size_t i = 0; i < 300; ++i) CHECK(p.samples[i] == cplxf{0.0f, 0.0f});
  for (std::size_t i = 500; i < 1000; ++i) CHECK(p.samples[i] == cplxf{0.0f, 0.0f});
  for (std::size_t i = 0; i < 1000; ++i) CHECK(p.labels[i] == (i == 300 ? 1 : 0));
}

TEST_CASE("synthesize: overlapping echoes add coherently") {
  RandomStream rng(1);
  const Waveform& w = chirp200();
  const auto p = synthesize_profile(w, {300, 310}, 1.0, 0.0, 1000, rng);

  // independent direct-summation oracle
  std::vector<cplx> expect(1000, cplx{0.0, 0.0});
  for (std::size_t k = 0; k < 200; ++k) expect[300 + k] += w.samples[k];
  for (std::size_t k = 0; k < 200; ++k) expect[310 + k] += w.samples[k];
  for (std::size_t i = 0; i < 1000; ++i) {
    CHECK(std::abs(static_cast<double>(p.samples[i].real()) - expect[i].real()) < 1e-6);
    CHECK(std::abs(static_cast<double>(p.samples[i].imag()) - expect[i].imag()) < 1e-6);
  }
  CHECK(p.target_bins == std::vector<std::uint32_t>{300, 310});
}

TEST_CASE("synthesize: energy scales with the reflection coefficient") {
  RandomStream rng(1);
  const Waveform& w = chirp200();
  const double refl = 0.7;
  const auto p = synthesize_profile(w, {123}, refl, 0.0, 1000, rng);
  double energy = 0.0;
  for (const cplxf& s : p.samples) {
    energy += static_cast<double>(s.real()) * s.real() +
              static_cast<double>(s.imag()) * s.imag();
  }
  CHECK(energy == doctest::Approx(refl * refl * pulse_energy(w)).epsilon(1e-6));
}

TEST_CASE("noise statistics converge to the configured std") {
  const double sigma = 0.1;
  double sum_re2 = 0.0, sum_im2 = 0.0;
  std::size_t count = 0;
  for (int rep = 0; rep < 120; ++rep) {
    RandomStream rng(1000 + rep);
    const auto p = synthesize_profile(chirp200(), {}, 0.0, sigma, 1000, rng);
    for (const cplxf& s : p.samples) {
      sum_re2 += static_cast<double>(s.real()) * s.real();
      sum_im2 += static_cast<double>(s.imag()) * s.imag();
      ++count;
    }
  }
  REQUIRE(count >= 100000);
  CHECK(sum_re2 / count == doctest::Approx(sigma * sigma).epsilon(0.05));
  CHECK(sum_im2 / count == doctest::Approx(sigma * sigma).epsilon(0.05));
}

TEST_CASE("degenerate grid emits exactly one targets profile") {
  DatasetSpec spec = tiny_spec();
  spec.n_empty = 2;
  spec.n_contrastive = 3;
  CHECK(count_grid_profiles(spec) == 1);

  const Dataset ds = generate_dataset(spec);
  CHECK(ds.profiles.size() == 6);
  CHECK(ds.count_kind(ProfileKind::targets) == 1);
  CHECK(ds.count_kind(ProfileKind::empty) == 2);
  CHECK(ds.count_kind(ProfileKind::contrastive) == 3);
  CHECK(ds.m == 1000);
  CHECK(ds.n == 200);
}

TEST_CASE("grid counts match the emitted stream") {
  DatasetSpec spec;
  spec.m = 400;
  spec.bandwidths_hz = {1e6, 0.96e6};
  spec.reflection_coeffs = {0.5, 1.0};
  spec.noise_stds = {0.05};
  spec.target_counts = {1, 3};
  spec.strides = {5, 9};
  spec.offset_step = 37;
  spec.seed = 9;
  const Dataset ds = generate_dataset(spec);
  CHECK(ds.profiles.size() == count_grid_profiles(spec));
  CHECK(ds.count_kind(ProfileKind::targets) == ds.profiles.size());

  for (const auto& p : ds.profiles) {
    // label/target consistency
    std::vector<std::uint32_t> bits;
    for (std::uint32_t i = 0; i < spec.m; ++i) {
      if (p.labels[i]) bits.push_back(i);
    }
    CHECK(bits == p.target_bins);
    for (std::uint32_t b : p.target_bins) CHECK(b + ds.n <= ds.m);
  }
}

TEST_CASE("jittered generation keeps labels consistent") {
  DatasetSpec spec;
  spec.m = 600;
  spec.bandwidths_hz = {1e6};
  spec.reflection_coeffs = {0.8};
  spec.noise_stds = {0.1};
  spec.target_counts = {2, 4};
  spec.strides = {5, 15};
  spec.offset_step = 61;
  spec.jitter_max = 2;
  spec.n_contrastive = 5;
  spec.seed = 11;
  const Dataset ds = generate_dataset(spec);
  for (const auto& p : ds.profiles) {
    std::vector<std::uint32_t> bits;
    for (std::uint32_t i = 0; i < spec.m; ++i) {
      if (p.labels[i]) bits.push_back(i);
    }
    CHECK(bits == p.target_bins);
    if (p.meta.kind == ProfileKind::contrastive) {
      CHECK(p.target_bins.empty());
      CHECK(p.meta.bandwidth_hz == 0.0);
    }
  }
}

TEST_CASE("generation is deterministic and schedule independent") {
  DatasetSpec spec = tiny_spec();
  spec.target_counts = {1, 4};
  spec.strides = {5, 10};
  spec.offset_step = 211;
  spec.noise_stds = {0.05, 0.1};
  spec.n_empty = 4;
  spec.n_contrastive = 4;

  const Dataset a = generate_dataset(spec, 1);
  const Dataset b = generate_dataset(spec, 4);
  REQUIRE(a.profiles.size() == b.profiles.size());
  for (std::size_t i = 0; i < a.profiles.size(); ++i) {
    CHECK(a.profiles[i] == b.profiles[i]);
  }

  DatasetSpec other = spec;
  other.seed = spec.seed + 1;
  const Dataset c = generate_dataset(other);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.profiles.size(); ++i) {
    any_diff = any_diff || !(a.profiles[i] == c.profiles[i]);
  }
  CHECK(any_diff);
}

TEST_CASE("spec validation rejects inconsistent grids") {
  DatasetSpec spec = tiny_spec();
  spec.strides = {0, 5};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = tiny_spec();
  spec.target_counts = {200, 300};  // 200*5 + 200 > 1000
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = tiny_spec();
  spec.m = 100;  // shorter than the pulse
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = tiny_spec();
  spec.noise_stds = {};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

  spec = tiny_spec();
  spec.offset_step = 0;
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("rpds round trip is bit exact") {
  DatasetSpec spec = tiny_spec();
  spec.noise_stds = {0.05, 0.2};
  spec.n_empty = 2;
  spec.n_contrastive = 2;
  spec.jitter_max = 1;
  const Dataset ds = generate_dataset(spec);

  const auto path = temp_file("swarmdet_roundtrip.rpds");
  write_dataset(path.string(), ds);
  const Dataset back = read_dataset(path.string());
  CHECK(back.m == ds.m);
  CHECK(back.n == ds.n);
  REQUIRE(back.profiles.size() == ds.profiles.size());
  for (std::size_t i = 0; i < ds.profiles.size(); ++i) {
    CHECK(back.profiles[i] == ds.profiles[i]);
  }

  // writing twice gives identical bytes
  const auto path2 = temp_file("swarmdet_roundtrip2.rpds");
  write_dataset(path2.string(), back);
  std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(f1)), {});
  const std::string b2((std::istreambuf_iterator<char>(f2)), {});
  CHECK(b1 == b2);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("empty dataset survives the round trip") {
  Dataset ds;
  ds.m = 1000;
  ds.n = 200;
  const auto path = temp_file("swarmdet_empty.rpds");
  write_dataset(path.string(), ds);
  const Dataset back = read_dataset(path.string());
  CHECK(back.m == 1000);
  CHECK(back.n == 200);
  CHECK(back.profiles.empty());
  std::filesystem::remove(path);
}

TEST_CASE("corrupted containers are rejected") {
  DatasetSpec spec = tiny_spec();
  const Dataset ds = generate_dataset(spec);
  const auto path = temp_file("swarmdet_corrupt.rpds");
  write_dataset(path.string(), ds);

  SUBCASE("bad magic") {
    std::fstream f(path, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(0);
    f.write("XXXX", 4);
    f.close();
    CHECK_THROWS_AS(read_dataset(path.string()), format_error);
  }
  SUBCASE("truncated record") {
    const auto size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, size - 37);
    CHECK_THROWS_AS(read_dataset(path.string()), format_error);
  }
  SUBCASE("trailing bytes") {
    std::ofstream f(path, std::ios::binary | std::ios::app);
    f.write("zz", 2);
    f.close();
    CHECK_THROWS_AS(read_dataset(path.string()), format_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_dataset("/nonexistent/nowhere.rpds"), io_error);
  }
  std::filesystem::remove(path);
}
