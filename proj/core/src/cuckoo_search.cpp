#include "hmrfcs/cuckoo_search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "hmrfcs/error.hpp"
#include "hmrfcs/levy.hpp"
#include "hmrfcs/parallel.hpp"

namespace hmrfcs {

namespace {

// Stream tags mixed into the master seed.
constexpr std::uint64_t kInitStream = 1;
constexpr std::uint64_t kCuckooStream = 2;
constexpr std::uint64_t kRebuildStream = 3;

constexpr double kMinDispersion = 1e-3;

void require(bool condition, const char* message) {
  if (!condition) throw Error(ErrorCode::invalid_argument, message);
}

// Uniform draw on the open interval (0, 1).
double open_unit(Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double x = unit(rng);
  while (x == 0.0) x = unit(rng);
  return x;
}

}  // namespace

std::string_view to_string(Variant variant) {
  switch (variant) {
    case Variant::standard: return "standard";
    case Variant::improved: return "improved";
    case Variant::auto_adaptive: return "auto";
  }
  return "unknown";
}

Variant parse_variant(std::string_view name) {
  if (name == "standard") return Variant::standard;
  if (name == "improved") return Variant::improved;
  if (name == "auto" || name == "auto-adaptive") return Variant::auto_adaptive;
  throw Error(ErrorCode::invalid_argument, "unknown variant '" + std::string(name) + "'");
}

void CsConfig::validate() const {
  require(dimension >= 1, "dimension must be >= 1");
  require(nests >= 2, "at least two nests are required");
  require(max_generations >= 1, "max_generations must be >= 1");
  require(pa >= 0.0 && pa <= 1.0, "pa must lie in [0, 1]");
  require(pa_min >= 0.0 && pa_min <= pa_max && pa_max <= 1.0, "need 0 <= pa_min <= pa_max <= 1");
  require(alpha > 0.0 && std::isfinite(alpha), "alpha must be > 0");
  require(alpha_min > 0.0 && alpha_min <= alpha_max && std::isfinite(alpha_max),
          "need 0 < alpha_min <= alpha_max");
  require(levy_beta > 1.0 && levy_beta <= 2.0, "levy beta must lie in (1, 2]");
  require(bounds.empty() || bounds.size() == static_cast<std::size_t>(dimension),
          "bounds must be empty or have one interval per dimension");
  for (const Interval& b : bounds) {
    require(std::isfinite(b.lower) && std::isfinite(b.upper) && b.lower <= b.upper,
            "bounds must be finite with lower <= upper");
  }
}

Interval CsConfig::bound(std::size_t dim) const {
  return bounds.empty() ? Interval{} : bounds.at(dim);
}

std::vector<Nest> init_population(const CsConfig& config, const Objective& objective, Rng& rng) {
  config.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Nest> population(static_cast<std::size_t>(config.nests));
  for (Nest& nest : population) {
    nest.position.values.resize(static_cast<std::size_t>(config.dimension));
    for (std::size_t j = 0; j < nest.position.size(); ++j) {
      const Interval b = config.bound(j);
      nest.position[j] = b.lower + (b.upper - b.lower) * unit(rng);
    }
  }
  parallel_for(population.size(), config.threads,
               [&](std::size_t i) { population[i].energy = objective(population[i].position); });
  return population;
}

std::size_t best_nest(std::span<const Nest> population) {
  if (population.empty()) throw Error(ErrorCode::invalid_argument, "empty population");
  std::size_t best = 0;
  for (std::size_t i = 1; i < population.size(); ++i) {
    if (population[i].energy < population[best].energy) best = i;
  }
  return best;
}

MeansVector generate_cuckoo(const MeansVector& nest, const MeansVector& best, double alpha,
                            std::span<const double> step, std::span<const double> gaussian) {
  const std::size_t k = nest.size();
  if (best.size() != k || step.size() != k || gaussian.size() != k) {
    throw Error(ErrorCode::dimension_mismatch, "cuckoo operands differ in dimension");
  }
  MeansVector egg = nest;
  for (std::size_t j = 0; j < k; ++j) {
    egg[j] += alpha * step[j] * (nest[j] - best[j]) * gaussian[j];
  }
  return egg;
}

MeansVector generate_cuckoo(const MeansVector& nest, const MeansVector& best, double alpha,
                            const CsConfig& config, Rng& rng) {
  const int k = static_cast<int>(nest.size());
  std::vector<double> step = config.levy_flights ? levy_steps(k, config.levy_beta, rng)
                                                 : std::vector<double>(nest.size(), 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> gaussian(nest.size());
  for (double& g : gaussian) g = normal(rng);
  return generate_cuckoo(nest, best, alpha, step, gaussian);
}

Nest greedy_replace(const Nest& nest, MeansVector candidate, double candidate_energy) {
  if (candidate_energy <= nest.energy) return Nest{std::move(candidate), candidate_energy};
  return nest;
}

Nest greedy_replace(const Nest& nest, MeansVector candidate, const Objective& objective) {
  const double energy = objective(candidate);
  return greedy_replace(nest, std::move(candidate), energy);
}

std::size_t abandon_and_rebuild(std::vector<Nest>& population, double pa,
                                const Objective& objective, Rng& rng,
                                const RebuildOptions& options) {
  const std::size_t n = population.size();
  if (n < 2) throw Error(ErrorCode::invalid_argument, "abandonment needs at least two nests");
  require(pa >= 0.0 && pa <= 1.0, "pa must lie in [0, 1]");

  std::vector<std::size_t> perm_a(n);
  std::vector<std::size_t> perm_b(n);
  std::iota(perm_a.begin(), perm_a.end(), std::size_t{0});
  std::iota(perm_b.begin(), perm_b.end(), std::size_t{0});
  std::shuffle(perm_a.begin(), perm_a.end(), rng);
  std::shuffle(perm_b.begin(), perm_b.end(), rng);
  const std::uint64_t base = rng();

  // Every move reads the generation-t positions, not partially updated ones.
  std::vector<MeansVector> previous;
  previous.reserve(n);
  for (const Nest& nest : population) previous.push_back(nest.position);

  std::atomic<std::size_t> evaluations{0};
  parallel_for(n, options.threads, [&](std::size_t i) {
    if (options.shielded && *options.shielded == i) return;
    Rng nest_rng = make_rng(derive_seed(base, {i}));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const MeansVector& from = previous[i];
    const MeansVector& a = previous[perm_a[i]];
    const MeansVector& b = previous[perm_b[i]];
    MeansVector moved = from;
    for (std::size_t j = 0; j < from.size(); ++j) {
      const double r = open_unit(nest_rng);
      const double heaviside = pa - unit(nest_rng) > 0.0 ? 1.0 : 0.0;
      moved[j] += r * heaviside * (a[j] - b[j]);
    }
    if (moved == from) return;
    const double energy = objective(moved);
    evaluations.fetch_add(1, std::memory_order_relaxed);
    if (options.keep_improvements_only && energy > population[i].energy) return;
    population[i].energy = energy;
    population[i].position = std::move(moved);
  });
  return evaluations.load();
}

ScheduleParams schedule_params(const CsConfig& config, int generation, double dispersion) {
  if (generation < 0 || generation >= config.max_generations) {
    throw Error(ErrorCode::out_of_range, "generation " + std::to_string(generation) +
                                             " outside [0, " +
                                             std::to_string(config.max_generations) + ")");
  }
  if (config.variant == Variant::standard) return {config.pa, config.alpha};

  const double progress = static_cast<double>(generation) / config.max_generations;
  const double pa = config.pa_max - progress * (config.pa_max - config.pa_min);
  const double rate = std::log(config.alpha_min / config.alpha_max) / config.max_generations;
  double alpha = config.alpha_max * std::exp(rate * generation);
  if (config.variant == Variant::auto_adaptive) alpha *= dispersion;
  return {pa, alpha};
}

double population_dispersion(std::span<const Nest> population, const MeansVector& best) {
  if (population.empty()) throw Error(ErrorCode::invalid_argument, "empty population");
  double total = 0.0;
  for (const Nest& nest : population) {
    double sq = 0.0;
    for (std::size_t j = 0; j < best.size(); ++j) {
      const double d = nest.position[j] - best[j];
      sq += d * d;
    }
    total += std::sqrt(sq);
  }
  const double mean = total / static_cast<double>(population.size());
  const double scale = std::sqrt(static_cast<double>(best.size())) * kMaxIntensity;
  return std::clamp(mean / scale, kMinDispersion, 1.0);
}

OptimizeResult optimize(const Objective& objective, const CsConfig& config) {
  config.validate();
  const auto started = std::chrono::steady_clock::now();
  const std::size_t n = static_cast<std::size_t>(config.nests);

  Rng init_rng = make_rng(derive_seed(config.seed, {kInitStream}));
  std::vector<Nest> population = init_population(config, objective, init_rng);
  std::uint64_t evaluations = n;

  Nest elite = population[best_nest(population)];
  Trace trace;
  trace.best_energy_per_generation.reserve(static_cast<std::size_t>(config.max_generations));

  std::vector<Nest> eggs(n);
  for (int t = 0; t < config.max_generations; ++t) {
    const MeansVector best = population[best_nest(population)].position;
    const double dispersion = config.variant == Variant::auto_adaptive
                                  ? population_dispersion(population, best)
                                  : 1.0;
    const ScheduleParams params = schedule_params(config, t, dispersion);

    // New cuckoos, one per nest, each from its own stream.
    const std::uint64_t cuckoo_seed =
        derive_seed(config.seed, {kCuckooStream, static_cast<std::uint64_t>(t)});
    parallel_for(n, config.threads, [&](std::size_t i) {
      Rng rng = make_rng(derive_seed(cuckoo_seed, {i}));
      eggs[i].position = generate_cuckoo(population[i].position, best, params.alpha, config, rng);
      eggs[i].energy = objective(eggs[i].position);
    });
    evaluations += n;
    for (std::size_t i = 0; i < n; ++i) {
      population[i] = greedy_replace(population[i], std::move(eggs[i].position), eggs[i].energy);
    }

    // Abandon a fraction of nests; the current best is exempt.
    Rng rebuild_rng =
        make_rng(derive_seed(config.seed, {kRebuildStream, static_cast<std::uint64_t>(t)}));
    evaluations += abandon_and_rebuild(population, params.pa, objective, rebuild_rng,
                                       {config.threads, best_nest(population), true});

    const std::size_t leader = best_nest(population);
    if (population[leader].energy < elite.energy) {
      elite = population[leader];
    } else if (population[leader].energy > elite.energy) {
      const auto worst = std::max_element(population.begin(), population.end(),
                                          [](const Nest& a, const Nest& b) { return a.energy < b.energy; });
      *worst = elite;
    }
    trace.best_energy_per_generation.push_back(elite.energy);
  }

  trace.best_position_final = elite.position;
  trace.evaluations = evaluations;
  trace.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return {elite.position, elite.energy, std::move(trace)};
}

}  // namespace hmrfcs
