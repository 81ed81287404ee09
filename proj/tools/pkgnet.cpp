// pkgnet - package dependency network analysis pipeline.
//
// Subcommands: ingest (Packages index -> edge list), stats (degree
// distributions and fits), community (Louvain modules), nullmodel
// (rewired-ensemble significance), simulate (random local installation),
// evolve (cross-release report).
//
// Exit codes: 0 success, 1 usage, 2 unreadable/malformed input,
// 3 computation error.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pkgnet/community.hpp"
#include "pkgnet/control_parser.hpp"
#include "pkgnet/degree_stats.hpp"
#include "pkgnet/errors.hpp"
#include "pkgnet/evolution.hpp"
#include "pkgnet/graph.hpp"
#include "pkgnet/install_sim.hpp"
#include "pkgnet/null_model.hpp"
#include "pkgnet/report_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw InputError("failed reading '" + path + "'");
  return buffer.str();
}

// Artifacts land under their final name only when complete: temp + rename.
void write_file_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path temp = target.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + temp.string() + "'");
    out << content;
    if (!out.good()) throw InputError("failed writing '" + temp.string() + "'");
  }
  fs::rename(temp, target);
}

struct PolicyFlags {
  std::string alternatives = "first_listed";
  std::string virtuals = "first_provider";
  bool no_pre_depends = false;
  bool symmetrize_conflicts = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--alternatives", alternatives,
                    "Alternative handling: first_listed | all_alternatives")
        ->check(CLI::IsMember({"first_listed", "all_alternatives"}))
        ->capture_default_str();
    cmd->add_option("--virtuals", virtuals,
                    "Virtual package handling: first_provider | "
                    "all_providers | drop")
        ->check(CLI::IsMember({"first_provider", "all_providers", "drop"}))
        ->capture_default_str();
    cmd->add_flag("--no-pre-depends", no_pre_depends,
                  "Do not count Pre-Depends as dependencies");
    cmd->add_flag("--symmetrize-conflicts", symmetrize_conflicts,
                  "Add the reverse edge for every declared conflict");
  }

  pkgnet::ResolutionPolicy policy() const {
    pkgnet::ResolutionPolicy p;
    p.alternatives = alternatives == "all_alternatives"
                         ? pkgnet::AlternativesPolicy::all_alternatives
                         : pkgnet::AlternativesPolicy::first_listed;
    if (virtuals == "all_providers") {
      p.virtuals = pkgnet::VirtualsPolicy::all_providers;
    } else if (virtuals == "drop") {
      p.virtuals = pkgnet::VirtualsPolicy::drop;
    } else {
      p.virtuals = pkgnet::VirtualsPolicy::first_provider;
    }
    p.include_pre_depends = !no_pre_depends;
    p.conflict_direction = symmetrize_conflicts
                               ? pkgnet::ConflictDirection::symmetrized
                               : pkgnet::ConflictDirection::as_declared;
    return p;
  }

  std::string canonical() const {
    return "alternatives=" + alternatives + ";virtuals=" + virtuals +
           ";pre_depends=" + (no_pre_depends ? "0" : "1") +
           ";conflicts=" + (symmetrize_conflicts ? "sym" : "decl");
  }
};

struct GraphInput {
  std::string packages_path;
  std::string edges_path;
  PolicyFlags policy;

  void attach(CLI::App* cmd) {
    auto* pkgs = cmd->add_option("--packages", packages_path,
                                 "Debian-style Packages index to ingest");
    auto* edges = cmd->add_option("--graph,--edges", edges_path,
                                  "Edge-list file (DEP/CON <from> <to>)");
    pkgs->excludes(edges);
    edges->excludes(pkgs);
    policy.attach(cmd);
  }

  bool given() const { return !packages_path.empty() || !edges_path.empty(); }

  std::string canonical() const {
    return "input=" + (packages_path.empty() ? edges_path : packages_path) +
           ";" + policy.canonical();
  }

  pkgnet::DependencyGraph load(std::vector<std::string>* warnings) const {
    if (!given()) throw CLI::ValidationError("need --packages or --graph");
    if (!edges_path.empty()) {
      return pkgnet::read_edge_list(read_file(edges_path));
    }
    auto parsed = pkgnet::parse_packages_index(read_file(packages_path));
    auto built = pkgnet::build_graph(parsed.records, policy.policy());
    if (warnings != nullptr) {
      *warnings = std::move(parsed.warnings);
      warnings->insert(warnings->end(), built.warnings.begin(),
                       built.warnings.end());
    }
    return std::move(built.graph);
  }
};

void report_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "pkgnet: warning: " << w << "\n";
}

unsigned jobs_flag(CLI::App* cmd, unsigned& jobs) {
  cmd->add_option("--jobs", jobs, "Worker threads for ensembles")
      ->envname("PKGNET_JOBS")
      ->check(CLI::PositiveNumber);
  return jobs;
}

// ---------------------------------------------------------------- ingest --

struct IngestCmd {
  GraphInput input;
  std::string out_path;
  std::string summary_path;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "ingest", "Parse package metadata and write the edge-list graph");
    input.attach(cmd);
    cmd->add_option("--out", out_path, "Edge-list output file")->required();
    cmd->add_option("--summary", summary_path, "Write the JSON summary here");
    cmd->callback([this] { run(); });
  }

  void run() const {
    std::vector<std::string> warnings;
    const auto graph = input.load(&warnings);
    report_warnings(warnings);
    write_file_atomic(out_path, pkgnet::write_edge_list(graph));
    const std::string summary = pkgnet::to_json(pkgnet::summarize(graph));
    if (!summary_path.empty()) write_file_atomic(summary_path, summary);
    json line = json::parse(summary);
    line["command"] = "ingest";
    line["out"] = out_path;
    line["warnings"] = warnings.size();
    std::cout << line.dump() << "\n";
  }
};

// ----------------------------------------------------------------- stats --

struct StatsCmd {
  GraphInput input;
  std::string kind = "dep";
  std::string direction;
  double bin_base = 2.0;
  bool fit_raw = false;
  std::string csv_path;
  std::string binned_csv_path;
  std::string json_path;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "stats", "Cumulative degree distribution and exponential vs "
                 "power-law fits");
    input.attach(cmd);
    cmd->add_option("--kind", kind, "Edge kind: dep | con")
        ->check(CLI::IsMember({"dep", "con"}))
        ->capture_default_str();
    cmd->add_option("--direction", direction, "Degree direction: in | out")
        ->check(CLI::IsMember({"in", "out"}))
        ->required();
    cmd->add_option("--bin-base", bin_base, "Multiplicative bin base")
        ->check(CLI::Range(1.0 + 1e-9, 1e9))
        ->capture_default_str();
    cmd->add_flag("--raw", fit_raw,
                  "Fit on raw cumulative points instead of binned ones");
    cmd->add_option("--out-csv", csv_path, "Raw points CSV (k,p,bin)");
    cmd->add_option("--binned-csv", binned_csv_path, "Binned points CSV");
    cmd->add_option("--out-json", json_path, "Fit report JSON");
    cmd->callback([this] { run(); });
  }

  void run() const {
    std::vector<std::string> warnings;
    const auto graph = input.load(&warnings);
    report_warnings(warnings);
    const auto ekind = kind == "dep" ? pkgnet::EdgeKind::dependency
                                     : pkgnet::EdgeKind::conflict;
    const auto dir =
        direction == "in" ? pkgnet::Direction::in : pkgnet::Direction::out;

    const auto points =
        pkgnet::cumulative_degree_distribution(graph, ekind, dir);
    const auto binned = pkgnet::multiplicative_bin(points, bin_base);
    const auto fits = pkgnet::best_fit(fit_raw ? points : binned);

    if (!csv_path.empty()) {
      write_file_atomic(csv_path, pkgnet::distribution_csv(points, bin_base));
    }
    if (!binned_csv_path.empty()) {
      write_file_atomic(binned_csv_path,
                        pkgnet::binned_distribution_csv(binned));
    }
    const std::string report =
        pkgnet::fits_json(fits, pkgnet::summarize(graph), ekind, dir, bin_base,
                          !fit_raw);
    if (!json_path.empty()) write_file_atomic(json_path, report);

    json line{{"command", "stats"},
              {"kind", kind},
              {"direction", direction},
              {"points", points.size()},
              {"bins", binned.size()},
              {"best", pkgnet::to_string(fits.winner)},
              {"f_exponential", fits.exponential.f_stat},
              {"f_power_law", fits.power_law.f_stat}};
    std::cout << line.dump() << "\n";
  }
};

// ------------------------------------------------------------- community --

struct CommunityCmd {
  GraphInput input;
  unsigned restarts = 10;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool collapse_reciprocal = false;
  std::string partition_path;
  std::string summary_path;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "community", "Louvain modules of the dependency network");
    input.attach(cmd);
    cmd->add_option("--restarts", restarts, "Independent Louvain restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed")->required();
    jobs_flag(cmd, jobs);
    cmd->add_flag("--collapse-reciprocal", collapse_reciprocal,
                  "Weight reciprocal dependencies 1 instead of 2");
    cmd->add_option("--out-partition", partition_path,
                    "Partition CSV (package,module)");
    cmd->add_option("--out-summary", summary_path, "Module summary JSON");
    cmd->callback([this] { run(); });
  }

  void run() const {
    std::vector<std::string> warnings;
    const auto graph = input.load(&warnings);
    report_warnings(warnings);
    const auto view =
        pkgnet::symmetrized_dependency_view(graph, collapse_reciprocal);
    const auto partition = pkgnet::louvain(view, restarts, seed, jobs);

    if (!partition_path.empty()) {
      write_file_atomic(partition_path,
                        pkgnet::partition_csv(graph, partition));
    }
    if (!summary_path.empty()) {
      write_file_atomic(summary_path,
                        pkgnet::module_summary_json(graph, partition));
    }
    json line{{"command", "community"},
              {"q", partition.q},
              {"modules", partition.module_count()},
              {"major_modules", pkgnet::major_module_count(partition, 0.05)},
              {"covered", partition.covered_count()},
              {"seed", seed}};
    std::cout << line.dump() << "\n";
  }
};

// ------------------------------------------------------------- nullmodel --

struct NullModelCmd {
  GraphInput input;
  std::string statistic = "louvain_q";
  std::size_t networks = 1000;
  std::uint64_t seed = 0;
  unsigned swaps_per_edge = 10;
  unsigned restarts = 10;
  std::size_t replicates = 1000;
  unsigned jobs = 1;
  bool symmetric_conflicts = false;
  std::string out_path;
  std::string samples_path;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "nullmodel",
        "Statistic against a degree-preserving rewired ensemble");
    input.attach(cmd);
    cmd->add_option("--statistic", statistic,
                    "louvain_q | mean_installed_fraction")
        ->check(CLI::IsMember({"louvain_q", "mean_installed_fraction"}))
        ->capture_default_str();
    cmd->add_option("--networks", networks, "Number of rewired networks")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed")->required();
    cmd->add_option("--swaps-per-edge", swaps_per_edge,
                    "Successful swaps per dependency edge")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--restarts", restarts, "Louvain restarts (louvain_q)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--replicates", replicates,
                    "Installation replicates (mean_installed_fraction)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    jobs_flag(cmd, jobs);
    cmd->add_flag("--symmetric-conflicts", symmetric_conflicts,
                  "Treat conflicts as blocking in both directions");
    cmd->add_option("--out", out_path, "Ensemble stats JSON");
    cmd->add_option("--samples-csv", samples_path, "Raw null samples CSV");
    cmd->callback([this] { run(); });
  }

  void run() const {
    std::vector<std::string> warnings;
    const auto graph = input.load(&warnings);
    report_warnings(warnings);

    pkgnet::EnsembleStats stats;
    if (statistic == "mean_installed_fraction" && symmetric_conflicts) {
      pkgnet::EffectOptions opts;
      opts.swaps_per_edge = swaps_per_edge;
      opts.rule = pkgnet::ConflictRule::symmetric;
      opts.jobs = jobs;
      stats = pkgnet::modularity_effect(graph, networks, replicates, seed,
                                        opts);
    } else {
      pkgnet::EnsembleOptions opts;
      opts.swaps_per_edge = swaps_per_edge;
      opts.louvain_restarts = restarts;
      opts.install_replicates = replicates;
      opts.jobs = jobs;
      stats = pkgnet::ensemble(graph, networks,
                               statistic == "louvain_q"
                                   ? pkgnet::EnsembleStatistic::louvain_q
                                   : pkgnet::EnsembleStatistic::
                                         mean_installed_fraction,
                               seed, opts);
    }

    pkgnet::Provenance provenance{
        seed, pkgnet::config_digest(
                  "cmd=nullmodel;" + input.canonical() +
                  ";statistic=" + statistic + ";networks=" +
                  std::to_string(networks) + ";swaps=" +
                  std::to_string(swaps_per_edge) + ";restarts=" +
                  std::to_string(restarts) + ";replicates=" +
                  std::to_string(replicates) +
                  ";sym=" + (symmetric_conflicts ? "1" : "0") +
                  ";seed=" + std::to_string(seed))};
    if (!out_path.empty()) {
      write_file_atomic(out_path, pkgnet::to_json(stats, provenance));
    }
    if (!samples_path.empty()) {
      write_file_atomic(samples_path, pkgnet::samples_csv(stats, provenance));
    }
    json line{{"command", "nullmodel"},
              {"statistic", statistic},
              {"observed", stats.observed},
              {"null_mean", stats.null_mean},
              {"null_std", stats.null_std},
              {"z", stats.z ? json(*stats.z) : json(nullptr)},
              {"p", stats.p},
              {"seed", seed}};
    std::cout << line.dump() << "\n";
  }
};

// -------------------------------------------------------------- simulate --

struct SimulateCmd {
  GraphInput input;
  std::size_t replicates = 1000;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  bool symmetric_conflicts = false;
  std::string out_path;
  std::string per_replicate_path;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "simulate", "Random local installation replicates");
    input.attach(cmd);
    cmd->add_option("--replicates", replicates, "Number of replicates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Master seed")->required();
    jobs_flag(cmd, jobs);
    cmd->add_flag("--symmetric-conflicts", symmetric_conflicts,
                  "Treat conflicts as blocking in both directions");
    cmd->add_option("--out", out_path, "Fraction statistics JSON");
    cmd->add_option("--per-replicate", per_replicate_path,
                    "Per-replicate fractions CSV");
    cmd->callback([this] { run(); });
  }

  void run() const {
    std::vector<std::string> warnings;
    const auto graph = input.load(&warnings);
    report_warnings(warnings);

    pkgnet::ReplicateOptions opts;
    opts.rule = symmetric_conflicts ? pkgnet::ConflictRule::symmetric
                                    : pkgnet::ConflictRule::directional;
    opts.jobs = jobs;
    const auto stats = pkgnet::run_replicates(graph, replicates, seed, opts);

    pkgnet::Provenance provenance{
        seed, pkgnet::config_digest(
                  "cmd=simulate;" + input.canonical() + ";replicates=" +
                  std::to_string(replicates) +
                  ";sym=" + (symmetric_conflicts ? "1" : "0") +
                  ";seed=" + std::to_string(seed))};
    if (!out_path.empty()) {
      write_file_atomic(out_path, pkgnet::to_json(stats, provenance));
    }
    if (!per_replicate_path.empty()) {
      write_file_atomic(per_replicate_path,
                        pkgnet::replicates_csv(stats, provenance));
    }
    json line{{"command", "simulate"},
              {"replicates", stats.replicates},
              {"mean", stats.mean},
              {"std_dev", stats.std_dev},
              {"min", stats.min},
              {"max", stats.max},
              {"seed", seed}};
    std::cout << line.dump() << "\n";
  }
};

// ---------------------------------------------------------------- evolve --

struct EvolveCmd {
  std::vector<std::string> release_paths;
  std::vector<std::string> labels;
  PolicyFlags policy;
  pkgnet::EvolutionConfig config;
  bool no_drop_last = false;
  bool no_modularity_z = false;
  bool no_install_z = false;
  bool symmetric_conflicts = false;
  std::uint64_t seed = 0;
  std::string out_dir;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand(
        "evolve", "Cross-release evolution report over ordered releases");
    cmd->add_option("--release", release_paths,
                    "Release input (Packages index or edge list), oldest "
                    "first; repeatable")
        ->required();
    cmd->add_option("--label", labels,
                    "Release labels matching --release order");
    policy.attach(cmd);
    cmd->add_option("--threshold", config.module_threshold,
                    "Major-module size threshold")
        ->check(CLI::Range(1e-9, 1.0 - 1e-9))
        ->capture_default_str();
    cmd->add_option("--modularity-randomizations",
                    config.modularity_randomizations,
                    "Rewired networks for modularity significance")
        ->capture_default_str();
    cmd->add_option("--install-networks", config.install_networks,
                    "Rewired networks for the installation experiment")
        ->capture_default_str();
    cmd->add_option("--install-replicates", config.install_replicates,
                    "Installation replicates per network")
        ->capture_default_str();
    cmd->add_option("--restarts", config.louvain_restarts, "Louvain restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--swaps-per-edge", config.swaps_per_edge,
                    "Successful swaps per dependency edge")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--no-drop-last", no_drop_last,
                  "Skip the drop-newest-release sensitivity reruns");
    cmd->add_flag("--no-modularity-z", no_modularity_z,
                  "Skip the modularity significance ensembles");
    cmd->add_flag("--no-install-z", no_install_z,
                  "Skip the installation experiment");
    cmd->add_flag("--symmetric-conflicts", symmetric_conflicts,
                  "Treat conflicts as blocking in both directions");
    cmd->add_option("--seed", seed, "Master seed")->required();
    jobs_flag(cmd, config.jobs);
    cmd->add_option("--out-dir", out_dir, "Report output directory")
        ->required();
    cmd->callback([this] { run(); });
  }

  static bool looks_like_edge_list(const std::string& text) {
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      const auto start = line.find_first_not_of(" \t\r");
      if (start == std::string::npos || line[start] == '#') continue;
      return line.compare(start, 4, "DEP ") == 0 ||
             line.compare(start, 4, "CON ") == 0;
    }
    return false;
  }

  void run() {
    if (!labels.empty() && labels.size() != release_paths.size()) {
      throw CLI::ValidationError("--label count must match --release count");
    }
    config.drop_last_sensitivity = !no_drop_last;
    config.modularity_significance = !no_modularity_z;
    config.installation_experiment = !no_install_z;
    config.conflict_rule = symmetric_conflicts
                               ? pkgnet::ConflictRule::symmetric
                               : pkgnet::ConflictRule::directional;

    std::vector<pkgnet::Release> releases;
    for (std::size_t i = 0; i < release_paths.size(); ++i) {
      const std::string text = read_file(release_paths[i]);
      pkgnet::Release release;
      release.label = i < labels.size()
                          ? labels[i]
                          : fs::path(release_paths[i]).stem().string();
      release.ordinal = static_cast<int>(i + 1);
      if (looks_like_edge_list(text)) {
        release.graph = pkgnet::read_edge_list(text);
      } else {
        auto parsed = pkgnet::parse_packages_index(text);
        report_warnings(parsed.warnings);
        auto built = pkgnet::build_graph(parsed.records, policy.policy());
        report_warnings(built.warnings);
        release.graph = std::move(built.graph);
        for (const auto& record : parsed.records) {
          release.versions.emplace(record.name, record.version);
        }
      }
      releases.push_back(std::move(release));
    }

    const auto report = pkgnet::evolution_report(releases, config, seed);

    std::string canonical = "cmd=evolve;" + policy.canonical();
    for (const auto& path : release_paths) canonical += ";release=" + path;
    canonical += ";threshold=" + std::to_string(config.module_threshold) +
                 ";modz=" + std::to_string(config.modularity_randomizations) +
                 ";inets=" + std::to_string(config.install_networks) +
                 ";ireps=" + std::to_string(config.install_replicates) +
                 ";restarts=" + std::to_string(config.louvain_restarts) +
                 ";swaps=" + std::to_string(config.swaps_per_edge) +
                 ";seed=" + std::to_string(seed);
    pkgnet::Provenance provenance{seed, pkgnet::config_digest(canonical)};

    const fs::path dir(out_dir);
    write_file_atomic((dir / "report.json").string(),
                      pkgnet::to_json(report, provenance));
    write_file_atomic((dir / "releases.csv").string(),
                      pkgnet::release_metrics_csv(report, provenance));
    write_file_atomic((dir / "transitions.csv").string(),
                      pkgnet::transitions_csv(report, provenance));
    write_file_atomic((dir / "trends.csv").string(),
                      pkgnet::trends_csv(report, provenance));

    json line{{"command", "evolve"},
              {"releases", report.releases.size()},
              {"trends", report.trends.size()},
              {"out_dir", out_dir},
              {"seed", seed}};
    std::cout << line.dump() << "\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pkgnet - package dependency network analysis"};
  app.require_subcommand(1);
  // Declarative runs: key=value lines under a [subcommand] section, e.g.
  // [evolve]. Command-line flags override config values. fallthrough lets
  // `pkgnet evolve --config run.conf` hand the flag to the main app.
  app.set_config("--config", "",
                 "Configuration file with [subcommand] sections of "
                 "key=value lines");
  app.fallthrough();

  IngestCmd ingest;
  StatsCmd stats;
  CommunityCmd community;
  NullModelCmd nullmodel;
  SimulateCmd simulate;
  EvolveCmd evolve;
  ingest.attach(app);
  stats.attach(app);
  community.attach(app);
  nullmodel.attach(app);
  simulate.attach(app);
  evolve.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const InputError& e) {
    std::cerr << "pkgnet: " << e.what() << "\n";
    return 2;
  } catch (const pkgnet::ParseError& e) {
    std::cerr << "pkgnet: parse error: " << e.what() << "\n";
    return 2;
  } catch (const pkgnet::Error& e) {
    std::cerr << "pkgnet: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "pkgnet: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
