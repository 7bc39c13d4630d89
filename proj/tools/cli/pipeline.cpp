#include "cli/pipeline.hpp"

#include <algorithm>
#include <cmath>

namespace hmrfcs::cli {

using nlohmann::json;

Segmentation segment_image(const GrayImage& image, const SegmentSettings& settings) {
  const EnergyModel model(image, settings.energy);
  OptimizeResult result =
      optimize([&model](const MeansVector& mu) { return model(mu); }, settings.search);

  const MeansVector clamped = clamp_to_intensity_range(result.best);
  LabelMap labels = align_labels(classify(image, clamped), result.best);
  MeansVector sorted = result.best;
  std::stable_sort(sorted.values.begin(), sorted.values.end());
  return {std::move(labels), std::move(sorted), std::move(result)};
}

RunReport make_run_report(const Segmentation& segmentation, const SegmentSettings& settings,
                          std::optional<DiceReport> dice) {
  RunReport report;
  report.variant = std::string(to_string(settings.search.variant));
  report.seed = settings.search.seed;
  report.settings = settings;
  report.mu_star = segmentation.mu_star;
  report.final_energy = segmentation.result.best_energy;
  report.energy_trace = segmentation.result.trace.best_energy_per_generation;
  report.dice = std::move(dice);
  report.wall_time_seconds = segmentation.result.trace.wall_time;
  return report;
}

json to_json(const DiceReport& report, DiceDenominator denominator) {
  json per_class = json::object();
  for (std::size_t j = 0; j < report.per_class.size(); ++j) {
    per_class[report.class_names.at(j)] = report.per_class[j];
  }
  return {
      {"class_names", report.class_names},
      {"per_class", report.per_class},
      {"by_name", per_class},
      {"mean", report.mean},
      {"background_excluded", report.background_excluded},
      {"denominator", denominator == DiceDenominator::sum ? "sum" : "union"},
  };
}

json to_json(const RunReport& report) {
  const CsConfig& cs = report.settings.search;
  const EnergyParams& e = report.settings.energy;
  json config = {
      {"classes", cs.dimension},
      {"n", cs.nests},
      {"max_generations", cs.max_generations},
      {"temperature", e.temperature},
      {"coupling", e.coupling},
      {"neighborhood", static_cast<int>(e.neighborhood)},
      {"pa", cs.pa},
      {"pa_min", cs.pa_min},
      {"pa_max", cs.pa_max},
      {"alpha", cs.alpha},
      {"alpha_min", cs.alpha_min},
      {"alpha_max", cs.alpha_max},
      {"levy_beta", cs.levy_beta},
      {"sigma_floor", e.sigma_floor},
      {"penalty_slope", e.penalty_slope},
  };
  return {
      {"variant", report.variant},
      {"seed", report.seed},
      {"config", config},
      {"mu_star", report.mu_star.values},
      {"final_energy", report.final_energy},
      {"energy_trace", report.energy_trace},
      {"dice", report.dice ? to_json(*report.dice, report.dice_denominator) : json(nullptr)},
      {"wall_time_seconds", report.wall_time_seconds},
  };
}

std::vector<std::string> run_report_problems(const json& doc) {
  std::vector<std::string> problems;
  if (!doc.is_object()) return {"report is not a JSON object"};

  static const std::vector<std::string> keys = {"variant",      "seed",         "config",
                                                "mu_star",      "final_energy", "energy_trace",
                                                "dice",         "wall_time_seconds"};
  for (const auto& key : keys) {
    if (!doc.contains(key)) problems.push_back("missing key '" + key + "'");
  }
  for (const auto& [key, value] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      problems.push_back("unexpected key '" + key + "'");
    }
  }
  if (!problems.empty()) return problems;

  if (!doc["variant"].is_string()) problems.push_back("variant must be a string");
  if (!doc["seed"].is_number_unsigned()) problems.push_back("seed must be an unsigned integer");
  if (!doc["config"].is_object()) {
    problems.push_back("config must be an object");
  } else {
    for (const char* key : {"classes", "n", "max_generations", "temperature", "coupling",
                            "neighborhood", "pa", "pa_min", "pa_max", "alpha", "alpha_min",
                            "alpha_max", "levy_beta"}) {
      if (!doc["config"].contains(key) || !doc["config"][key].is_number()) {
        problems.push_back(std::string("config.") + key + " must be a number");
      }
    }
  }
  const auto numeric_array = [](const json& v) {
    return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
  };
  if (!numeric_array(doc["mu_star"])) problems.push_back("mu_star must be an array of numbers");
  if (!doc["final_energy"].is_number()) problems.push_back("final_energy must be a number");
  if (!numeric_array(doc["energy_trace"]) || doc["energy_trace"].empty()) {
    problems.push_back("energy_trace must be a non-empty array of numbers");
  } else {
    const auto trace = doc["energy_trace"].get<std::vector<double>>();
    for (std::size_t i = 1; i < trace.size(); ++i) {
      if (trace[i] > trace[i - 1]) {
        problems.push_back("energy_trace increases at generation " + std::to_string(i));
        break;
      }
    }
    if (doc["final_energy"].is_number() && doc["final_energy"].get<double>() != trace.back()) {
      problems.push_back("final_energy differs from the last trace entry");
    }
  }
  if (!doc["dice"].is_null() &&
      !(doc["dice"].is_object() && doc["dice"].contains("mean") && doc["dice"].contains("per_class"))) {
    problems.push_back("dice must be null or a Dice report");
  }
  if (!doc["wall_time_seconds"].is_number() || doc["wall_time_seconds"].get<double>() < 0.0) {
    problems.push_back("wall_time_seconds must be a non-negative number");
  }
  if (doc["config"].is_object() && doc["config"].contains("classes") && doc["mu_star"].is_array() &&
      doc["config"]["classes"].is_number() &&
      doc["mu_star"].size() != doc["config"]["classes"].get<std::size_t>()) {
    problems.push_back("mu_star length differs from config.classes");
  }
  return problems;
}

}  // namespace hmrfcs::cli
