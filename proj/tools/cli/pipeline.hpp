#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hmrfcs/cuckoo_search.hpp"
#include "hmrfcs/energy.hpp"
#include "hmrfcs/evaluation.hpp"
#include "hmrfcs/image.hpp"

namespace hmrfcs::cli {

struct SegmentSettings {
  EnergyParams energy;
  CsConfig search;  // search.dimension is the class count K
};

struct Segmentation {
  LabelMap labels;        // aligned: class 1 darkest
  MeansVector mu_star;    // ascending, matches `labels`
  OptimizeResult result;
};

/// Minimises the energy of `image` and returns the aligned nearest-mean map.
Segmentation segment_image(const GrayImage& image, const SegmentSettings& settings);

struct RunReport {
  std::string variant;
  std::uint64_t seed = 0;
  SegmentSettings settings;
  MeansVector mu_star;
  double final_energy = 0.0;
  std::vector<double> energy_trace;
  std::optional<DiceReport> dice;
  DiceDenominator dice_denominator = DiceDenominator::sum;
  double wall_time_seconds = 0.0;
};

RunReport make_run_report(const Segmentation& segmentation, const SegmentSettings& settings,
                          std::optional<DiceReport> dice);

nlohmann::json to_json(const DiceReport& report, DiceDenominator denominator);
nlohmann::json to_json(const RunReport& report);

/// Describes every way `doc` departs from the RunReport layout; empty when valid.
std::vector<std::string> run_report_problems(const nlohmann::json& doc);

}  // namespace hmrfcs::cli
