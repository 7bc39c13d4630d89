#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cli/cli.hpp"
#include "cli/config_file.hpp"
#include "cli/pipeline.hpp"
#include "hmrfcs/error.hpp"
#include "hmrfcs/parallel.hpp"

namespace hmrfcs::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr const char* kThreadsVariable = "HMRF_CS_THREADS";

// Flags shared by `segment` and `bench`. Initial values are the built-in
// defaults.
struct SearchFlags {
  int classes = 4;
  std::string variant = "improved";
  std::uint64_t seed = 0;
  int nests = 30;
  double temperature = 4.0;
  double coupling = 1.0;
  int neighborhood = 8;
  int max_generations = 100;
  double pa = 0.25;
  double pa_min = 0.05;
  double pa_max = 0.5;
  double alpha = 0.01;
  double alpha_min = 0.01;
  double alpha_max = 0.5;
  double levy_beta = 1.5;
};

struct ScoringFlags {
  std::string truth_table;
  bool exclude_background = false;
  bool jaccard_denominator = false;

  EvaluateOptions options() const {
    EvaluateOptions o;
    o.exclude_background = exclude_background;
    o.denominator = jaccard_denominator ? DiceDenominator::union_ : DiceDenominator::sum;
    return o;
  }

  std::optional<LabelTable> table() const {
    if (truth_table.empty()) return std::nullopt;
    return load_label_table(truth_table);
  }
};

void add_search_flags(CLI::App* cmd, SearchFlags& f, bool allow_all_variants) {
  std::vector<std::string> variants = {"standard", "improved", "auto", "auto-adaptive"};
  if (allow_all_variants) variants.push_back("all");
  cmd->add_option("--classes", f.classes, "Number of classes K")->check(CLI::Range(1, kMaxClasses));
  cmd->add_option("--variant", f.variant, "Cuckoo search variant")->check(CLI::IsMember(variants));
  cmd->add_option("--seed", f.seed, "Master random seed");
  cmd->add_option("--n", f.nests, "Number of host nests")->check(CLI::Range(2, 1 << 20));
  cmd->add_option("--temperature", f.temperature, "Temperature T");
  cmd->add_option("--coupling", f.coupling, "Clique coupling constant B");
  cmd->add_option("--neighborhood", f.neighborhood, "Clique neighbourhood (4 or 8)")
      ->check(CLI::IsMember({4, 8}));
  cmd->add_option("--max-generations", f.max_generations, "Generations to run")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--pa", f.pa, "Abandonment probability (standard)");
  cmd->add_option("--pa-min", f.pa_min, "Final abandonment probability (improved/auto)");
  cmd->add_option("--pa-max", f.pa_max, "Initial abandonment probability (improved/auto)");
  cmd->add_option("--alpha", f.alpha, "Step scale (standard)");
  cmd->add_option("--alpha-min", f.alpha_min, "Final step scale (improved/auto)");
  cmd->add_option("--alpha-max", f.alpha_max, "Initial step scale (improved/auto)");
  cmd->add_option("--levy-beta", f.levy_beta, "Levy exponent in (1, 2]");
}

void add_scoring_flags(CLI::App* cmd, ScoringFlags& f) {
  cmd->add_option("--truth-table", f.truth_table,
                  "Gray-to-label table for a ground truth without a .meta sidecar");
  cmd->add_flag("--exclude-background", f.exclude_background,
                "Leave class 1 out of the mean Dice");
  cmd->add_flag("--jaccard-denominator", f.jaccard_denominator,
                "Use |A u B| instead of |A| + |B| in the Dice denominator");
}

SegmentSettings make_settings(const SearchFlags& f, Variant variant, unsigned threads) {
  SegmentSettings s;
  s.energy.temperature = f.temperature;
  s.energy.coupling = f.coupling;
  s.energy.neighborhood = f.neighborhood == 4 ? Neighborhood::four : Neighborhood::eight;
  s.energy.validate();

  CsConfig& c = s.search;
  c.variant = variant;
  c.dimension = f.classes;
  c.nests = f.nests;
  c.max_generations = f.max_generations;
  c.pa = f.pa;
  c.pa_min = f.pa_min;
  c.pa_max = f.pa_max;
  c.alpha = f.alpha;
  c.alpha_min = f.alpha_min;
  c.alpha_max = f.alpha_max;
  c.levy_beta = f.levy_beta;
  c.seed = f.seed;
  c.threads = threads;
  c.validate();
  return s;
}

// Fills options that were not given on the command line from a key=value file.
void apply_config_file(CLI::App* cmd, const std::string& path) {
  if (path.empty()) return;
  ConfigEntries entries;
  try {
    entries = load_config_file(path);
  } catch (const Error& e) {
    throw UsageError(std::string("--config: ") + e.what());
  }
  for (const auto& [key, value] : entries) {
    if (key == "config") throw UsageError("config files cannot include other config files");
    CLI::Option* opt = cmd->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw UsageError(path + ": unknown key '" + key + "' for " + cmd->get_name());
    }
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError(path + ": " + key + ": " + e.what());
    }
  }
}

void require_value(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string(flag) + " is required");
}

void write_json(const json& doc, const fs::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::io_failure, "short write to " + path.string());
}

LabelMap load_truth(const std::string& path, const ScoringFlags& scoring, int classes) {
  LabelMap truth = load_label_map(path, scoring.table());
  if (truth.num_classes() != classes) {
    throw Error(ErrorCode::dimension_mismatch,
                path + " has " + std::to_string(truth.num_classes()) + " classes, expected " +
                    std::to_string(classes));
  }
  return truth;
}

// --------------------------------------------------------------------------
// segment

struct SegmentCommand {
  SearchFlags search;
  ScoringFlags scoring;
  std::string input;
  std::string out = "segmentation.pgm";
  std::string report;
  std::string truth;
  std::string config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", input, "Grayscale image to segment (PGM P5 or 8-bit PNG)");
    cmd->add_option("--out", out, "Label map output (PGM + .meta sidecar)");
    cmd->add_option("--report", report, "RunReport JSON (default: --out with .json extension)");
    cmd->add_option("--truth", truth, "Optional ground truth; adds Dice scores to the report");
    cmd->add_option("--config", config, "key=value defaults file");
    add_search_flags(cmd, search, false);
    add_scoring_flags(cmd, scoring);
  }

  int execute(std::ostream& out_stream) {
    require_value(input, "--input");
    const SegmentSettings settings =
        make_settings(search, parse_variant(search.variant), threads_from_environment());
    const GrayImage image = load_gray_image(input);

    std::optional<LabelMap> truth_map;
    if (!truth.empty()) {
      truth_map = load_truth(truth, scoring, search.classes);
      if (truth_map->width() != image.width() || truth_map->height() != image.height()) {
        throw Error(ErrorCode::dimension_mismatch, "truth and input differ in size");
      }
    }

    const Segmentation seg = segment_image(image, settings);
    save_label_map(seg.labels, out);

    std::optional<DiceReport> dice_report;
    if (truth_map) dice_report = evaluate(seg.labels, *truth_map, scoring.options());
    RunReport run_report = make_run_report(seg, settings, dice_report);
    run_report.dice_denominator = scoring.options().denominator;

    fs::path report_path = report;
    if (report_path.empty()) report_path = fs::path(out).replace_extension(".json");
    write_json(to_json(run_report), report_path);

    out_stream << "segment: " << to_string(settings.search.variant) << " seed=" << settings.search.seed
               << " energy=" << std::setprecision(10) << seg.result.best_energy << " mu*=[";
    for (std::size_t j = 0; j < seg.mu_star.size(); ++j) {
      out_stream << (j ? ", " : "") << std::setprecision(6) << seg.mu_star[j];
    }
    out_stream << "]";
    if (dice_report) out_stream << " mean_dice=" << std::setprecision(4) << dice_report->mean;
    out_stream << " time=" << std::setprecision(3) << seg.result.trace.wall_time << "s\n";
    return kSuccess;
  }
};

// --------------------------------------------------------------------------
// evaluate

struct EvaluateCommand {
  ScoringFlags scoring;
  std::string pred;
  std::string truth;
  std::string config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--pred", pred, "Predicted label map (PGM + .meta)");
    cmd->add_option("--truth", truth, "Ground-truth label map");
    cmd->add_option("--config", config, "key=value defaults file");
    add_scoring_flags(cmd, scoring);
  }

  int execute(std::ostream& out) {
    require_value(pred, "--pred");
    require_value(truth, "--truth");
    const LabelMap predicted = load_label_map(pred);
    const LabelMap reference = load_truth(truth, scoring, predicted.num_classes());
    const DiceReport report = evaluate(predicted, reference, scoring.options());
    out << to_json(report, scoring.options().denominator).dump(2) << '\n';
    return kSuccess;
  }
};

// --------------------------------------------------------------------------
// phantom

struct PhantomCommand {
  int width = 128;
  int height = 128;
  std::string means = "30,90,150,210";
  double noise = 10.0;
  std::uint64_t seed = 0;
  std::string layout = "disks";
  std::string out = "phantom.pgm";
  std::string truth = "phantom_truth.pgm";
  std::string config;

  void attach(CLI::App* cmd) {
    cmd->add_option("--width", width, "Image width")->check(CLI::PositiveNumber);
    cmd->add_option("--height", height, "Image height")->check(CLI::PositiveNumber);
    cmd->add_option("--means", means, "Comma-separated ascending class means");
    cmd->add_option("--noise", noise, "Gaussian noise sigma (intensity units)");
    cmd->add_option("--seed", seed, "Noise seed");
    cmd->add_option("--layout", layout, "Region layout")->check(CLI::IsMember({"bands", "disks"}));
    cmd->add_option("--out", out, "Image output (PGM)");
    cmd->add_option("--truth", truth, "Ground-truth label map output (PGM + .meta)");
    cmd->add_option("--config", config, "key=value defaults file");
  }

  int execute(std::ostream& out_stream) {
    PhantomSpec spec;
    spec.width = width;
    spec.height = height;
    spec.noise_sigma = noise;
    spec.seed = seed;
    spec.region_layout =
        layout == "bands" ? RegionLayout::horizontal_bands : RegionLayout::concentric_disks;
    spec.class_means.clear();
    std::stringstream list(means);
    for (std::string item; std::getline(list, item, ',');) {
      try {
        std::size_t used = 0;
        spec.class_means.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw UsageError("--means: '" + item + "' is not a number");
      }
    }
    const Phantom phantom = generate_phantom(spec);
    save_gray_image(phantom.image, out);
    save_label_map(phantom.truth, truth);
    out_stream << "phantom: " << out << " + " << truth << " (" << width << "x" << height << ", K="
               << spec.class_means.size() << ")\n";
    return kSuccess;
  }
};

// --------------------------------------------------------------------------
// bench

struct BenchCase {
  std::string name;
  GrayImage image;
  LabelMap truth;
};

std::vector<BenchCase> load_dataset(const fs::path& dir, const ScoringFlags& scoring, int classes) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::file_not_found, dir.string());

  std::vector<fs::path> images;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const fs::path& p = entry.path();
    const std::string ext = p.extension().string();
    if (!entry.is_regular_file() || (ext != ".pgm" && ext != ".png")) continue;
    const std::string stem = p.stem().string();
    if (stem.size() >= 6 && stem.compare(stem.size() - 6, 6, "_truth") == 0) continue;
    images.push_back(p);
  }
  std::sort(images.begin(), images.end());
  if (images.empty()) throw Error(ErrorCode::file_not_found, dir.string() + ": no images");

  std::vector<BenchCase> cases;
  for (const fs::path& p : images) {
    const std::string stem = p.stem().string();
    fs::path truth_path;
    for (const char* ext : {".pgm", ".png"}) {
      const fs::path candidate = dir / (stem + "_truth" + ext);
      if (fs::exists(candidate)) {
        truth_path = candidate;
        break;
      }
    }
    if (truth_path.empty()) {
      throw Error(ErrorCode::file_not_found, "no ground truth " + stem + "_truth.pgm for " + p.string());
    }
    GrayImage image = load_gray_image(p);
    LabelMap truth = load_truth(truth_path.string(), scoring, classes);
    if (truth.width() != image.width() || truth.height() != image.height()) {
      throw Error(ErrorCode::dimension_mismatch, truth_path.string() + " differs in size from " + p.string());
    }
    cases.push_back({stem, std::move(image), std::move(truth)});
  }
  return cases;
}

struct BenchRun {
  std::size_t case_index = 0;
  Variant variant = Variant::improved;
  int run = 0;
  std::uint64_t seed = 0;
  DiceReport dice;
  double final_energy = 0.0;
  double wall_time = 0.0;
};

struct BenchCommand {
  SearchFlags search;
  ScoringFlags scoring;
  std::string input;
  std::string out = "bench.csv";
  std::string report = "bench.json";
  std::string config;
  int runs = 10;
  int top = 3;

  void attach(CLI::App* cmd) {
    search.variant = "all";
    cmd->add_option("--input", input, "Directory of <name>.pgm / <name>_truth.pgm pairs");
    cmd->add_option("--out", out, "CSV table output");
    cmd->add_option("--report", report, "JSON table output");
    cmd->add_option("--runs", runs, "Runs per variant and image")->check(CLI::PositiveNumber);
    cmd->add_option("--top", top, "Best runs reported per variant")->check(CLI::PositiveNumber);
    cmd->add_option("--config", config, "key=value defaults file");
    add_search_flags(cmd, search, true);
    add_scoring_flags(cmd, scoring);
  }

  int execute(std::ostream& out_stream) {
    require_value(input, "--input");
    std::vector<Variant> variants;
    if (search.variant == "all") {
      variants = {Variant::auto_adaptive, Variant::standard, Variant::improved};
    } else {
      variants = {parse_variant(search.variant)};
    }
    // Validate the configuration once before loading data.
    for (Variant v : variants) make_settings(search, v, 1);

    const std::vector<BenchCase> cases = load_dataset(input, scoring, search.classes);
    const EvaluateOptions eval_options = scoring.options();

    std::vector<BenchRun> jobs;
    for (std::size_t c = 0; c < cases.size(); ++c) {
      for (Variant v : variants) {
        for (int r = 0; r < runs; ++r) {
          BenchRun job;
          job.case_index = c;
          job.variant = v;
          job.run = r;
          job.seed = search.seed + static_cast<std::uint64_t>(r);
          jobs.push_back(job);
        }
      }
    }

    // Independent jobs, one thread each; results land in their own slots.
    parallel_for(jobs.size(), threads_from_environment(), [&](std::size_t i) {
      BenchRun& job = jobs[i];
      SearchFlags flags = search;
      flags.seed = job.seed;
      const SegmentSettings settings = make_settings(flags, job.variant, 1);
      const BenchCase& bc = cases[job.case_index];
      const Segmentation seg = segment_image(bc.image, settings);
      job.dice = evaluate(seg.labels, bc.truth, eval_options);
      job.final_energy = seg.result.best_energy;
      job.wall_time = seg.result.trace.wall_time;
    });

    const std::vector<std::string> names = default_class_names(search.classes);
    std::ostringstream csv;
    csv << std::setprecision(10);
    csv << "image,variant,rank,run,seed";
    for (const auto& name : names) csv << ",dice_" << name;
    csv << ",mean,final_energy,wall_time_seconds,time_min_seconds,time_max_seconds\n";

    json doc = {{"runs", runs}, {"top", top}, {"class_names", names},
                {"background_excluded", scoring.exclude_background},
                {"denominator", scoring.jaccard_denominator ? "union" : "sum"},
                {"images", json::array()}};

    out_stream << std::left << std::setw(20) << "image" << std::setw(10) << "variant"
               << std::setw(28) << "best mean Dice" << "time (s)\n";
    std::size_t offset = 0;
    for (const BenchCase& bc : cases) {
      json image_doc = {{"image", bc.name}, {"variants", json::array()}};
      for (Variant v : variants) {
        std::vector<const BenchRun*> group;
        for (int r = 0; r < runs; ++r) group.push_back(&jobs[offset + static_cast<std::size_t>(r)]);
        offset += static_cast<std::size_t>(runs);

        double t_min = group.front()->wall_time;
        double t_max = t_min;
        for (const BenchRun* j : group) {
          t_min = std::min(t_min, j->wall_time);
          t_max = std::max(t_max, j->wall_time);
        }
        std::stable_sort(group.begin(), group.end(), [](const BenchRun* a, const BenchRun* b) {
          return a->dice.mean > b->dice.mean;
        });
        const std::size_t shown = std::min<std::size_t>(group.size(), static_cast<std::size_t>(top));

        json best = json::array();
        std::ostringstream means;
        for (std::size_t rank = 0; rank < shown; ++rank) {
          const BenchRun& j = *group[rank];
          csv << bc.name << ',' << to_string(v) << ',' << rank + 1 << ',' << j.run << ',' << j.seed;
          for (double d : j.dice.per_class) csv << ',' << d;
          csv << ',' << j.dice.mean << ',' << j.final_energy << ',' << j.wall_time << ',' << t_min
              << ',' << t_max << '\n';
          best.push_back({{"rank", rank + 1},
                          {"run", j.run},
                          {"seed", j.seed},
                          {"dice", to_json(j.dice, eval_options.denominator)},
                          {"final_energy", j.final_energy},
                          {"wall_time_seconds", j.wall_time}});
          means << (rank ? " " : "") << std::fixed << std::setprecision(3) << j.dice.mean;
        }
        image_doc["variants"].push_back({{"variant", to_string(v)},
                                         {"time_min_seconds", t_min},
                                         {"time_max_seconds", t_max},
                                         {"best", best}});
        std::ostringstream times;
        times << std::fixed << std::setprecision(3) << t_min << " - " << t_max;
        out_stream << std::left << std::setw(20) << bc.name << std::setw(10) << to_string(v)
                   << std::setw(28) << means.str() << times.str() << '\n';
      }
      doc["images"].push_back(image_doc);
    }

    std::ofstream csv_file(out, std::ios::trunc);
    if (!csv_file) throw Error(ErrorCode::io_failure, "cannot write " + out);
    csv_file << csv.str();
    if (!csv_file) throw Error(ErrorCode::io_failure, "short write to " + out);
    write_json(doc, report);
    return kSuccess;
  }
};

int classify_error(const Error& e) {
  switch (e.code()) {
    case ErrorCode::invalid_argument:
      return kUsageError;
    default:
      return kDataError;
  }
}

}  // namespace

unsigned threads_from_environment() {
  const char* raw = std::getenv(kThreadsVariable);
  if (raw == nullptr || *raw == '\0') return 0;
  const std::string value = raw;
  std::size_t used = 0;
  unsigned long parsed = 0;
  try {
    parsed = std::stoul(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != value.size() || value.front() == '-' || parsed > 4096) {
    throw UsageError(std::string(kThreadsVariable) + " must be an integer in [0, 4096], got '" +
                     value + "'");
  }
  return static_cast<unsigned>(parsed);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"HMRF image segmentation with cuckoo search", "hmrf-cs"};
  app.require_subcommand(1);

  SegmentCommand segment;
  EvaluateCommand evaluate_cmd;
  PhantomCommand phantom;
  BenchCommand bench;
  CLI::App* segment_app = app.add_subcommand("segment", "Segment an image into K classes");
  CLI::App* evaluate_app = app.add_subcommand("evaluate", "Dice scores of a label map against ground truth");
  CLI::App* phantom_app = app.add_subcommand("phantom", "Write a synthetic image and its ground truth");
  CLI::App* bench_app = app.add_subcommand("bench", "Repeated runs of every variant over a dataset");
  segment.attach(segment_app);
  evaluate_cmd.attach(evaluate_app);
  phantom.attach(phantom_app);
  bench.attach(bench_app);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "hmrf-cs: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (segment_app->parsed()) {
      apply_config_file(segment_app, segment.config);
      return segment.execute(out);
    }
    if (evaluate_app->parsed()) {
      apply_config_file(evaluate_app, evaluate_cmd.config);
      return evaluate_cmd.execute(out);
    }
    if (phantom_app->parsed()) {
      apply_config_file(phantom_app, phantom.config);
      return phantom.execute(out);
    }
    apply_config_file(bench_app, bench.config);
    return bench.execute(out);
  } catch (const UsageError& e) {
    err << "hmrf-cs: " << e.what() << '\n';
    return kUsageError;
  } catch (const Error& e) {
    err << "hmrf-cs: " << e.what() << '\n';
    return classify_error(e);
  } catch (const std::exception& e) {
    err << "hmrf-cs: " << e.what() << '\n';
    return kDataError;
  }
}

}  // namespace hmrfcs::cli
