#include "hmrfcs/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "hmrfcs/error.hpp"

namespace hmrfcs {

double dice(const LabelMap& pred, const LabelMap& truth, int class_index,
            DiceDenominator denominator) {
  if (!pred.same_shape(truth)) {
    throw Error(ErrorCode::dimension_mismatch, "prediction and truth differ in size");
  }
  const int k = std::max(pred.num_classes(), truth.num_classes());
  if (class_index < 1 || class_index > k) {
    throw Error(ErrorCode::out_of_range, "class " + std::to_string(class_index) +
                                             " outside [1, " + std::to_string(k) + "]");
  }

  std::size_t in_pred = 0;
  std::size_t in_truth = 0;
  std::size_t both = 0;
  const auto p = pred.labels();
  const auto t = truth.labels();
  for (std::size_t s = 0; s < p.size(); ++s) {
    const bool a = p[s] == class_index;
    const bool b = t[s] == class_index;
    in_pred += a;
    in_truth += b;
    both += a && b;
  }

  const double overlap = 2.0 * static_cast<double>(both);
  if (denominator == DiceDenominator::union_) {
    const std::size_t either = in_pred + in_truth - both;
    return either == 0 ? 2.0 : overlap / static_cast<double>(either);
  }
  const std::size_t total = in_pred + in_truth;
  return total == 0 ? 1.0 : overlap / static_cast<double>(total);
}

LabelMap align_labels(const LabelMap& pred, const MeansVector& mu_star) {
  const auto k = static_cast<std::size_t>(pred.num_classes());
  if (mu_star.size() != k) {
    throw Error(ErrorCode::dimension_mismatch, "means vector has " + std::to_string(mu_star.size()) +
                                                   " entries for a " + std::to_string(k) +
                                                   "-class map");
  }
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mu_star[a] < mu_star[b]; });

  // rank[old label - 1] = new label
  std::vector<Label> rank(k);
  for (std::size_t r = 0; r < k; ++r) rank[order[r]] = static_cast<Label>(r + 1);

  std::vector<Label> relabelled;
  relabelled.reserve(pred.size());
  for (Label l : pred.labels()) relabelled.push_back(rank[l - 1u]);
  return LabelMap(pred.width(), pred.height(), pred.num_classes(), std::move(relabelled));
}

std::vector<std::string> default_class_names(int num_classes) {
  if (num_classes == 4) return {"Background", "CSF", "GM", "WM"};
  if (num_classes == 3) return {"CSF", "GM", "WM"};
  std::vector<std::string> names;
  for (int j = 1; j <= num_classes; ++j) names.push_back("class" + std::to_string(j));
  return names;
}

DiceReport evaluate(const LabelMap& pred, const LabelMap& truth, const EvaluateOptions& options) {
  if (!pred.same_shape(truth)) {
    throw Error(ErrorCode::dimension_mismatch, "prediction and truth differ in size");
  }
  if (pred.num_classes() != truth.num_classes()) {
    throw Error(ErrorCode::dimension_mismatch,
                "prediction has " + std::to_string(pred.num_classes()) + " classes, truth has " +
                    std::to_string(truth.num_classes()));
  }
  const int k = pred.num_classes();
  if (options.exclude_background && k < 2) {
    throw Error(ErrorCode::invalid_argument, "cannot exclude the only class");
  }
  if (!options.class_names.empty() && options.class_names.size() != static_cast<std::size_t>(k)) {
    throw Error(ErrorCode::invalid_argument, "need one class name per class");
  }

  DiceReport report;
  report.class_names = options.class_names.empty() ? default_class_names(k) : options.class_names;
  report.background_excluded = options.exclude_background;
  for (int j = 1; j <= k; ++j) report.per_class.push_back(dice(pred, truth, j, options.denominator));

  const auto first = report.per_class.begin() + (options.exclude_background ? 1 : 0);
  report.mean = std::accumulate(first, report.per_class.end(), 0.0) /
                static_cast<double>(std::distance(first, report.per_class.end()));
  return report;
}

}  // namespace hmrfcs
