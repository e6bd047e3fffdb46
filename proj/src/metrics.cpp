#include "swarmdet/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace swarmdet {

DetectionCounts& DetectionCounts::operator+=(const DetectionCounts& o) {
  true_detections += o.true_detections;
  missed += o.missed;
  false_alarms += o.false_alarms;
  eligible_negatives += o.eligible_negatives;
  excluded_bins += o.excluded_bins;
  return *this;
}

DetectionCounts score_profile(std::span<const std::uint8_t> detections,
                              std::span<const std::uint8_t> valid,
                              std::span<const std::uint8_t> labels,
                              std::span<const std::uint32_t> target_bins,
                              std::uint32_t exclusion_window) {
  const std::size_t m = labels.size();
  if (detections.size() != m || valid.size() != m) {
    throw std::invalid_argument("score_profile: length mismatch");
  }

  DetectionCounts counts;
  // targets are sorted, so one forward sweep tracks the nearest ones
  std::size_t next_target = 0;
  for (std::size_t i = 0; i < m; ++i) {
    while (next_target < target_bins.size() && target_bins[next_target] < i) {
      ++next_target;
    }
    if (!valid[i]) continue;
    if (labels[i]) {
      if (detections[i]) {
        ++counts.true_detections;
      } else {
        ++counts.missed;
      }
      continue;
    }
    bool excluded = false;
    const std::int64_t w = exclusion_window;
    if (next_target < target_bins.size() &&
        static_cast<std::int64_t>(target_bins[next_target]) - static_cast<std::int64_t>(i) <= w) {
      excluded = true;
    }
    if (!excluded && next_target > 0 &&
        static_cast<std::int64_t>(i) - static_cast<std::int64_t>(target_bins[next_target - 1]) <= w) {
      excluded = true;
    }
    if (excluded) {
      ++counts.excluded_bins;
      continue;
    }
    ++counts.eligible_negatives;
    if (detections[i]) ++counts.false_alarms;
  }
  return counts;
}

DetectionRates aggregate(std::span<const DetectionCounts> counts) {
  DetectionCounts total;
  for (const auto& c : counts) total += c;

  DetectionRates rates;
  const std::uint64_t positives = total.true_detections + total.missed;
  if (positives > 0) {
    rates.pd = static_cast<double>(total.true_detections) / static_cast<double>(positives);
  }
  if (total.eligible_negatives > 0) {
    rates.pfa = static_cast<double>(total.false_alarms) /
                static_cast<double>(total.eligible_negatives);
  }
  return rates;
}

namespace {

bool close(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= 1e-9 * std::max(scale, 1e-300);
}

}  // namespace

bool SubsetFilter::matches(const ProfileMeta& meta) const {
  if (reflection_coeff && !close(*reflection_coeff, meta.reflection_coeff)) return false;
  if (noise_std && !close(*noise_std, meta.noise_std)) return false;
  if (bandwidth_hz && !close(*bandwidth_hz, meta.bandwidth_hz)) return false;
  if (kind && *kind != meta.kind) return false;
  return true;
}

std::vector<const RangeProfile*> filter_subset(const Dataset& ds, const SubsetFilter& f) {
  std::vector<const RangeProfile*> out;
  for (const auto& p : ds.profiles) {
    if (f.matches(p.meta)) out.push_back(&p);
  }
  return out;
}

std::string format_rate(const std::optional<double>& v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", *v);
  return buf;
}

std::string report_csv(std::span<const ReportRow> rows) {
  std::ostringstream out;
  out << "subset,detector,pd,pfa\n";
  for (const auto& r : rows) {
    out << r.subset << ',' << r.detector << ',' << format_rate(r.rates.pd) << ','
        << format_rate(r.rates.pfa) << '\n';
  }
  return out.str();
}

std::string report_text(std::span<const ReportRow> rows) {
  std::size_t w_subset = 6;
  std::size_t w_detector = 8;
  for (const auto& r : rows) {
    w_subset = std::max(w_subset, r.subset.size());
    w_detector = std::max(w_detector, r.detector.size());
  }
  std::ostringstream out;
  auto pad = [&out](const std::string& s, std::size_t w) {
    out << s;
    for (std::size_t i = s.size(); i < w + 2; ++i) out << ' ';
  };
  pad("subset", w_subset);
  pad("detector", w_detector);
  out << "pd        pfa\n";
  for (const auto& r : rows) {
    pad(r.subset, w_subset);
    pad(r.detector, w_detector);
    pad(format_rate(r.rates.pd), 8);
    out << format_rate(r.rates.pfa) << '\n';
  }
  return out.str();
}

}  // namespace swarmdet
