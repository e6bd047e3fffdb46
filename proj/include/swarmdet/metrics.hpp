#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "swarmdet/datagen.hpp"

namespace swarmdet {

struct DetectionCounts {
  std::uint64_t true_detections = 0;
  std::uint64_t missed = 0;
  std::uint64_t false_alarms = 0;
  std::uint64_t eligible_negatives = 0;
  std::uint64_t excluded_bins = 0;  // valid non-target bins inside an exclusion window

  DetectionCounts& operator+=(const DetectionCounts& o);
};

struct DetectionRates {
  std::optional<double> pd;
  std::optional<double> pfa;
};

// Per-profile counting with the target-correlated-bin exclusion rule:
// a non-target bin is an eligible negative only when it sits further than
// exclusion_window bins from every target. Bins with valid[i] == 0 (detector
// undefined there) contribute to neither numerator nor denominator.
DetectionCounts score_profile(std::span<const std::uint8_t> detections,
                              std::span<const std::uint8_t> valid,
                              std::span<const std::uint8_t> labels,
                              std::span<const std::uint32_t> target_bins,
                              std::uint32_t exclusion_window);

// Ratio of sums, not mean of ratios. Undefined ratios stay empty.
DetectionRates aggregate(std::span<const DetectionCounts> counts);

// Empty filter selects everything; set fields must all match.
struct SubsetFilter {
  std::optional<double> reflection_coeff;
  std::optional<double> noise_std;
  std::optional<double> bandwidth_hz;
  std::optional<ProfileKind> kind;

  bool matches(const ProfileMeta& meta) const;
};

std::vector<const RangeProfile*> filter_subset(const Dataset& ds, const SubsetFilter& f);

struct ReportRow {
  std::string subset;
  std::string detector;
  DetectionRates rates;
};

// 4-significant-digit rendering; undefined ratios print as n/a.
std::string format_rate(const std::optional<double>& v);
std::string report_csv(std::span<const ReportRow> rows);
std::string report_text(std::span<const ReportRow> rows);

}  // namespace swarmdet
