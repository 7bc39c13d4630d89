#pragma once

#include <string>
#include <vector>

#include "hmrfcs/energy.hpp"
#include "hmrfcs/image.hpp"

namespace hmrfcs {

enum class DiceDenominator {
  sum,    // 2|A n B| / (|A| + |B|)
  union_  // 2|A n B| / |A u B|, kept for comparison with published numbers
};

/// Overlap of class `class_index` between two maps. Both-empty counts as
/// perfect agreement (1 for the sum denominator, 2 for the union one).
double dice(const LabelMap& pred, const LabelMap& truth, int class_index,
            DiceDenominator denominator = DiceDenominator::sum);

/// Renumbers labels so that class 1 has the darkest mean in `mu_star` and
/// class K the brightest. Equal means keep their index order.
LabelMap align_labels(const LabelMap& pred, const MeansVector& mu_star);

struct DiceReport {
  std::vector<double> per_class;
  double mean = 0.0;
  std::vector<std::string> class_names;
  bool background_excluded = false;
};

struct EvaluateOptions {
  bool exclude_background = false;  // class 1 left out of the mean
  DiceDenominator denominator = DiceDenominator::sum;
  std::vector<std::string> class_names;  // empty: default_class_names(K)
};

/// Names used in reports: Background/CSF/GM/WM for K = 4, CSF/GM/WM for
/// K = 3, otherwise "class1".."classK".
std::vector<std::string> default_class_names(int num_classes);

DiceReport evaluate(const LabelMap& pred, const LabelMap& truth, const EvaluateOptions& options = {});

}  // namespace hmrfcs
