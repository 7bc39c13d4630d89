#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hmrfcs/energy.hpp"
#include "hmrfcs/random.hpp"

namespace hmrfcs {

enum class Variant { standard, improved, auto_adaptive };

std::string_view to_string(Variant variant);
/// Accepts "standard", "improved", "auto" / "auto-adaptive".
Variant parse_variant(std::string_view name);

struct Interval {
  double lower = kMinIntensity;
  double upper = kMaxIntensity;
};

struct CsConfig {
  Variant variant = Variant::improved;
  int dimension = 4;  // K
  int nests = 30;
  int max_generations = 100;

  // Standard CS uses the fixed values; the scheduled variants use the ranges.
  double pa = 0.25;
  double pa_min = 0.05;
  double pa_max = 0.5;
  double alpha = 0.01;
  double alpha_min = 0.01;
  double alpha_max = 0.5;

  double levy_beta = 1.5;
  bool levy_flights = true;  // false: step == 1 (plain random walk)

  // Initialisation box, one interval per dimension; empty means [0, 255].
  std::vector<Interval> bounds;
  std::uint64_t seed = 0;
  unsigned threads = 1;  // 0 = all hardware threads

  void validate() const;
  Interval bound(std::size_t dim) const;
};

using Objective = std::function<double(const MeansVector&)>;

struct Nest {
  MeansVector position;
  double energy = 0.0;
};

struct Trace {
  std::vector<double> best_energy_per_generation;
  MeansVector best_position_final;
  std::uint64_t evaluations = 0;
  double wall_time = 0.0;  // seconds
};

struct OptimizeResult {
  MeansVector best;
  double best_energy = 0.0;
  Trace trace;
};

/// n nests drawn uniformly from the configured bounds, energies evaluated.
std::vector<Nest> init_population(const CsConfig& config, const Objective& objective, Rng& rng);

/// Index of the lowest-energy nest; ties go to the lowest index.
std::size_t best_nest(std::span<const Nest> population);

/// c = mu + alpha * step (x) (mu - best) (x) gaussian, entry-wise. No clamping.
MeansVector generate_cuckoo(const MeansVector& nest, const MeansVector& best, double alpha,
                            std::span<const double> step, std::span<const double> gaussian);

/// Draws the step (Levy or all ones) and the Gaussian vector from `rng`.
MeansVector generate_cuckoo(const MeansVector& nest, const MeansVector& best, double alpha,
                            const CsConfig& config, Rng& rng);

/// Keeps the candidate when its energy is <= the nest's energy.
Nest greedy_replace(const Nest& nest, MeansVector candidate, double candidate_energy);
Nest greedy_replace(const Nest& nest, MeansVector candidate, const Objective& objective);

struct RebuildOptions {
  unsigned threads = 1;
  std::optional<std::size_t> shielded;  // nest exempt from replacement (elitism)
  // Keep a rebuilt position only if its energy is <= the old one.
  bool keep_improvements_only = false;
};

/// Biased random walk: every nest i moves to
///   mu_i + r (x) H(pa - u) (x) (mu_a(i) - mu_b(i))
/// where a, b are two independent random permutations and r, u are K-vectors
/// of Uniform(0,1) draws. H(0) == 0. Energies are re-evaluated only for nests
/// whose position changed. Returns the number of objective evaluations.
/// With keep_improvements_only, a move that raises a nest's energy is undone.
std::size_t abandon_and_rebuild(std::vector<Nest>& population, double pa,
                                const Objective& objective, Rng& rng,
                                const RebuildOptions& options = {});

struct ScheduleParams {
  double pa = 0.0;
  double alpha = 0.0;
};

/// Per-generation (pa, alpha).
///   standard: constants.
///   improved: pa linear from pa_max to pa_min, alpha exponential from
///             alpha_max to alpha_min over max_generations.
///   auto_adaptive: as improved, alpha further scaled by `dispersion`.
ScheduleParams schedule_params(const CsConfig& config, int generation, double dispersion = 1.0);

/// Mean distance of the nests to `best`, normalised by sqrt(K) * 255 and
/// clamped to [1e-3, 1].
double population_dispersion(std::span<const Nest> population, const MeansVector& best);

/// Runs the cuckoo search. Deterministic for a given (objective, config)
/// irrespective of config.threads.
OptimizeResult optimize(const Objective& objective, const CsConfig& config);

}  // namespace hmrfcs
