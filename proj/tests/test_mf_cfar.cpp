#include <doctest.h>

#include <cmath>
#include <vector>

#include "swarmdet/mf_cfar.hpp"
#include "swarmdet/parallel.hpp"
#include "swarmdet/rng.hpp"

using namespace swarmdet;

namespace {

const Waveform& chirp200() {
  static const Waveform w = make_lfm_chirp(1e6, 1e-4, 2e6);
  return w;
}

std::vector<cplx> clean_echo(std::size_t m, std::size_t at, double amp = 1.0) {
  std::vector<cplx> x(m, cplx{0.0, 0.0});
  const Waveform& w = chirp200();
  for (std::size_t k = 0; k < w.size(); ++k) x[at + k] = amp * w.samples[k];
  return x;
}

CfarConfig paper_cfar() { return CfarConfig::make(2, 10, 1e-3, 2); }

}  // namespace

TEST_CASE("cfar alpha closed form") {
  // alpha = R * (pfa^(-1/R) - 1)
  const double a = cfar_alpha(20, 1e-3);
  CHECK(a == doctest::Approx(20.0 * (std::pow(1e-3, -0.05) - 1.0)).epsilon(1e-15));
  CHECK(std::abs(a - 8.2507) < 1e-4);

  CHECK(cfar_alpha(20, 1.0) == 0.0);
  CHECK(cfar_alpha(7, 1.0) == 0.0);
  CHECK(cfar_alpha(1, 0.5) == doctest::Approx(1.0).epsilon(1e-15));

  CHECK_THROWS_AS(cfar_alpha(0, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(cfar_alpha(20, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(cfar_alpha(20, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(cfar_alpha(20, 1.5), std::invalid_argument);
}

TEST_CASE("matched filter peak on a clean echo") {
  const auto x = clean_echo(1000, 0);
  const auto cp = matched_filter_profile(x, chirp200());
  CHECK(cp.size() == 801);

  // |sum |s_k|^2|^2 / sum|s_k|^2 = n = 200 for a unit-magnitude pulse
  CHECK(std::abs(cp.linear[0] - 200.0) / 200.0 < 1e-9);
  CHECK(cp.db[0] == doctest::Approx(20.0 * std::log10(200.0)).epsilon(1e-12));
  CHECK(std::abs(cp.db[0] - 46.0206) < 1e-6);

  // the peak sits at the leading edge
  for (std::size_t i = 1; i < cp.size(); ++i) CHECK(cp.linear[i] < cp.linear[0]);
}

TEST_CASE("matched filter of zeros is zero with -inf dB") {
  const std::vector<cplx> x(1000, cplx{0.0, 0.0});
  const auto cp = matched_filter_profile(x, chirp200());
  for (std::size_t i = 0; i < cp.size(); ++i) {
    CHECK(cp.linear[i] == 0.0);
    CHECK(std::isinf(cp.db[i]));
    CHECK(cp.db[i] < 0.0);
  }
}

TEST_CASE("matched filter rejects signals shorter than the pulse") {
  const std::vector<cplx> x(199, cplx{0.0, 0.0});
  CHECK_THROWS_AS(matched_filter_profile(x, chirp200()), std::invalid_argument);
}

TEST_CASE("dB trace is consistent with the linear trace") {
  RandomStream rng(5);
  std::vector<cplx> x(1000);
  for (auto& v : x) {
    const auto [re, im] = rng.gaussian_pair();
    v = cplx{re, im};
  }
  const auto cp = matched_filter_profile(x, chirp200());
  for (std::size_t i = 0; i < cp.size(); ++i) {
    if (cp.linear[i] > 0.0) {
      CHECK(cp.db[i] == doctest::Approx(20.0 * std::log10(cp.linear[i])).epsilon(1e-12));
    }
  }
}

TEST_CASE("ca-cfar never alarms on an all-zero profile") {
  CompressedProfile cp;
  cp.linear.assign(801, 0.0);
  cp.db.assign(801, -std::numeric_limits<double>::infinity());
  const auto res = ca_cfar_detect(cp, paper_cfar());
  for (std::size_t i = 0; i < res.detections.size(); ++i) {
    CHECK(res.detections[i] == 0);
  }
}

TEST_CASE("ca-cfar fires on a clean echo") {
  const auto x = clean_echo(1000, 300);
  const auto cp = matched_filter_profile(x, chirp200());
  const auto res = ca_cfar_detect(cp, paper_cfar());

  REQUIRE(res.valid[300] == 1);
  CHECK(res.detections[300] == 1);
  // stride-2 references sit near the even-lag nulls of the chirp
  // autocorrelation, so the local threshold stays tiny next to the peak
  CHECK(res.thresholds[300] < 0.05 * cp.linear[300]);

  // edge cells carry no decision
  CHECK(res.valid[0] == 0);
  CHECK(res.valid[23] == 0);
  CHECK(res.valid[24] == 1);
  CHECK(res.valid[800] == 0);
  CHECK(res.valid[800 - 23] == 0);
  CHECK(res.valid[800 - 24] == 1);
  CHECK(std::isnan(res.thresholds[0]));
  CHECK(res.detections[0] == 0);
}

TEST_CASE("ca-cfar rejects windows that cannot fit") {
  CompressedProfile cp;
  cp.linear.assign(48, 1.0);
  cp.db.assign(48, 0.0);
  CHECK_THROWS_AS(ca_cfar_detect(cp, paper_cfar()), std::invalid_argument);
  cp.linear.assign(49, 1.0);
  cp.db.assign(49, 0.0);
  CHECK_NOTHROW(ca_cfar_detect(cp, paper_cfar()));
}

TEST_CASE("scaling the input leaves detections unchanged") {
  RandomStream rng(17);
  std::vector<cplx> x(1000);
  for (auto& v : x) {
    const auto [re, im] = rng.gaussian_pair();
    v = cplx{0.3 * re, 0.3 * im};
  }
  const Waveform& w = chirp200();
  for (std::size_t k = 0; k < w.size(); ++k) x[400 + k] += w.samples[k];

  std::vector<cplx> x2(x);
  for (auto& v : x2) v *= 2.0;  // exact in binary floating point

  const auto cp1 = matched_filter_profile(x, w);
  const auto cp2 = matched_filter_profile(x2, w);
  const auto r1 = ca_cfar_detect(cp1, paper_cfar());
  const auto r2 = ca_cfar_detect(cp2, paper_cfar());

  for (std::size_t i = 0; i < cp1.size(); ++i) {
    CHECK(cp2.linear[i] == 4.0 * cp1.linear[i]);
    CHECK(r1.detections[i] == r2.detections[i]);
    if (r1.valid[i]) {
      CHECK(r2.thresholds[i] == 4.0 * r1.thresholds[i]);
    }
  }
}

TEST_CASE("thresholds depend only on a local window") {
  RandomStream rng(29);
  std::vector<cplx> x(1000);
  for (auto& v : x) {
    const auto [re, im] = rng.gaussian_pair();
    v = cplx{re, im};
  }
  const std::size_t cell = 400;
  const auto base_cp = matched_filter_profile(x, chirp200());
  const auto base = ca_cfar_detect(base_cp, paper_cfar());

  // (guard+ref)*stride + n = 224 bins away: no effect on cell 400
  std::vector<cplx> far(x);
  far[cell + 224] += cplx{50.0, -25.0};
  const auto far_cp = matched_filter_profile(far, chirp200());
  const auto far_res = ca_cfar_detect(far_cp, paper_cfar());
  CHECK(far_res.thresholds[cell] == base.thresholds[cell]);
  CHECK(far_cp.linear[cell] == base_cp.linear[cell]);

  // inside the reach it does move the threshold
  std::vector<cplx> near(x);
  near[cell + 220] += cplx{50.0, -25.0};
  const auto near_res = ca_cfar_detect(matched_filter_profile(near, chirp200()),
                                       paper_cfar());
  CHECK(near_res.thresholds[cell] != base.thresholds[cell]);
}

TEST_CASE("empirical false alarm rate matches the design pfa") {
  // monte carlo over i.i.d. complex gaussian noise, paper geometry
  const std::size_t profiles = 1400;
  const std::size_t m = 1000;
  const Waveform& w = chirp200();
  const CfarConfig cfg = paper_cfar();

  std::vector<std::uint64_t> alarms(profiles, 0);
  std::vector<std::uint64_t> cells(profiles, 0);
  parallel_for(0, profiles, 0, [&](std::size_t p) {
    RandomStream rng = RandomStream::derive(424242, SeedPurpose::acceptance, p);
    std::vector<cplx> x(m);
    for (auto& v : x) {
      const auto [re, im] = rng.gaussian_pair();
      v = cplx{re, im};
    }
    const auto cp = matched_filter_profile(x, w);
    const auto res = ca_cfar_detect(cp, cfg);
    for (std::size_t i = 0; i < cp.size(); ++i) {
      if (!res.valid[i]) continue;
      ++cells[p];
      if (res.detections[i]) ++alarms[p];
    }
  });
  std::uint64_t total_alarms = 0;
  std::uint64_t total_cells = 0;
  for (std::size_t p = 0; p < profiles; ++p) {
    total_alarms += alarms[p];
    total_cells += cells[p];
  }
  REQUIRE(total_cells >= 1000000);
  const double rate = static_cast<double>(total_alarms) / static_cast<double>(total_cells);
  MESSAGE("empirical pfa = ", rate, " over ", total_cells, " cells");
  CHECK(rate >= 5e-4);
  CHECK(rate <= 2e-3);
}
