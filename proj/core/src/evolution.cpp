#include "pkgnet/evolution.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pkgnet/community.hpp"
#include "pkgnet/errors.hpp"
#include "pkgnet/null_model.hpp"
#include "pkgnet/rng.hpp"

namespace pkgnet {

namespace {

std::set<std::string> name_set(const DependencyGraph& graph) {
  std::set<std::string> names;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    names.insert(graph.name_of(v));
  }
  return names;
}

}  // namespace

ReleaseDiff release_diff(const DependencyGraph& prev,
                         const DependencyGraph& next) {
  const auto prev_names = name_set(prev);
  const auto next_names = name_set(next);
  ReleaseDiff diff;
  std::set_difference(prev_names.begin(), prev_names.end(), next_names.begin(),
                      next_names.end(), std::back_inserter(diff.deprecated));
  std::set_intersection(prev_names.begin(), prev_names.end(),
                        next_names.begin(), next_names.end(),
                        std::back_inserter(diff.kept));
  std::set_difference(next_names.begin(), next_names.end(), prev_names.begin(),
                      prev_names.end(), std::back_inserter(diff.added));
  return diff;
}

ReleaseDiff release_diff(const Release& prev, const Release& next) {
  ReleaseDiff diff = release_diff(prev.graph, next.graph);
  if (!prev.versions.empty() && !next.versions.empty()) {
    for (const auto& name : diff.kept) {
      const auto a = prev.versions.find(name);
      const auto b = next.versions.find(name);
      if (a != prev.versions.end() && b != next.versions.end() &&
          a->second != b->second) {
        ++diff.version_changed;
      }
    }
  }
  return diff;
}

FitResult regress(const std::vector<std::pair<double, double>>& series,
                  FitModel model) {
  if (model != FitModel::linear && model != FitModel::exponential) {
    throw std::invalid_argument("trend regression is linear or exponential");
  }
  if (model == FitModel::exponential) {
    for (const auto& [x, y] : series) {
      if (y <= 0.0) {
        throw DataError("exponential regression needs positive values");
      }
    }
  }
  // fit_model treats (k, p) as (x, y) and applies the log transform for the
  // exponential model itself.
  std::vector<CumulativePoint> points;
  points.reserve(series.size());
  for (const auto& [x, y] : series) points.push_back({x, y});
  return fit_model(points, model);
}

namespace {

const char* kSkipTooFew = "skipped: fewer than 3 points";

class ReportBuilder {
public:
  ReportBuilder(const std::vector<Release>& releases,
                const EvolutionConfig& config, std::uint64_t seed)
      : releases_(releases), config_(config), seed_(seed) {}

  EvolutionReport build();

private:
  void release_metrics(std::size_t index);
  void transition_rows();
  void trend_tests();

  // Series of one metric across releases; nullopt when any cell is missing.
  std::optional<std::vector<std::pair<double, double>>> series(
      const std::string& metric) const;

  void add_trend(const std::string& name, FitModel model,
                 std::optional<std::vector<std::pair<double, double>>> data,
                 bool drop_last = false);

  const std::vector<Release>& releases_;
  const EvolutionConfig& config_;
  std::uint64_t seed_;
  EvolutionReport report_;
};

void ReportBuilder::release_metrics(std::size_t index) {
  const Release& release = releases_[index];
  const DependencyGraph& graph = release.graph;
  ReleaseRow row;
  row.label = release.label;
  row.ordinal = release.ordinal;

  auto put = [&row](const std::string& name, double value) {
    row.metrics.push_back({name, value, ""});
  };
  auto put_missing = [&row](const std::string& name, const std::string& note) {
    row.metrics.push_back({name, std::nullopt, note});
  };

  const GraphSummary summary = summarize(graph);
  put("package_count", static_cast<double>(summary.nodes));
  put("dep_edge_count", static_cast<double>(summary.dep_edges));
  put("con_edge_count", static_cast<double>(summary.con_edges));
  if (summary.con_edges > 0) {
    put("dep_con_ratio", static_cast<double>(summary.dep_edges) /
                             static_cast<double>(summary.con_edges));
  } else {
    put_missing("dep_con_ratio", "undefined: no conflicts");
  }
  put("non_interacting_fraction", summary.non_interacting_fraction);
  put("interacting_count", static_cast<double>(summary.interacting));

  std::size_t with_deps = 0;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (graph.degree(v, EdgeKind::dependency, Direction::in) > 0 ||
        graph.degree(v, EdgeKind::dependency, Direction::out) > 0) {
      ++with_deps;
    }
  }
  put("packages_with_dependencies", static_cast<double>(with_deps));

  const std::uint64_t release_seed =
      derive_seed(seed_, seed_stream::release, index);

  // Community structure. A failed detection marks all dependent cells.
  try {
    const auto view = symmetrized_dependency_view(graph);
    Partition partition =
        louvain(view, config_.louvain_restarts, derive_seed(release_seed, 1));
    put("modularity_q", partition.q);
    put("module_count", static_cast<double>(partition.module_count()));
    put("major_module_count",
        static_cast<double>(
            major_module_count(partition, config_.module_threshold)));

    const Partition full = complete_with_singletons(partition, graph);
    auto dep_frac = within_module_fraction(graph, full, EdgeKind::dependency);
    auto con_frac = within_module_fraction(graph, full, EdgeKind::conflict);
    if (dep_frac) {
      put("within_module_dep_fraction", *dep_frac);
    } else {
      put_missing("within_module_dep_fraction", "undefined: no dependencies");
    }
    if (con_frac) {
      put("within_module_con_fraction", *con_frac);
    } else {
      put_missing("within_module_con_fraction", "undefined: no conflicts");
    }
  } catch (const std::exception& e) {
    for (const char* name :
         {"modularity_q", "module_count", "major_module_count",
          "within_module_dep_fraction", "within_module_con_fraction"}) {
      put_missing(name, std::string("failed: ") + e.what());
    }
  }

  if (config_.modularity_significance) {
    try {
      EnsembleOptions opts;
      opts.swaps_per_edge = config_.swaps_per_edge;
      opts.louvain_restarts = config_.louvain_restarts;
      opts.jobs = config_.jobs;
      const EnsembleStats stats =
          ensemble(graph, config_.modularity_randomizations,
                   EnsembleStatistic::louvain_q, derive_seed(release_seed, 2),
                   opts);
      if (stats.z) {
        put("modularity_z", *stats.z);
      } else {
        put_missing("modularity_z", "undefined: null std is zero");
      }
      put("modularity_p", stats.p);
    } catch (const std::exception& e) {
      put_missing("modularity_z", std::string("failed: ") + e.what());
      put_missing("modularity_p", std::string("failed: ") + e.what());
    }
  }

  if (config_.installation_experiment) {
    try {
      ReplicateOptions ropts;
      ropts.rule = config_.conflict_rule;
      ropts.jobs = config_.jobs;
      const ReplicateStats stats = run_replicates(
          graph, config_.install_replicates, derive_seed(release_seed, 3),
          ropts);
      put("mean_installed_fraction", stats.mean);
      put("installed_fraction_std", stats.std_dev);

      EffectOptions eopts;
      eopts.swaps_per_edge = config_.swaps_per_edge;
      eopts.rule = config_.conflict_rule;
      eopts.jobs = config_.jobs;
      const EnsembleStats effect = modularity_effect(
          graph, config_.install_networks, config_.install_replicates,
          derive_seed(release_seed, 4), eopts);
      if (effect.z) {
        put("install_z", *effect.z);
      } else {
        put_missing("install_z", "undefined: null std is zero");
      }
      put("install_p", effect.p);
    } catch (const std::exception& e) {
      for (const char* name : {"mean_installed_fraction",
                               "installed_fraction_std", "install_z",
                               "install_p"}) {
        put_missing(name, std::string("failed: ") + e.what());
      }
    }
  }

  report_.releases.push_back(std::move(row));
}

void ReportBuilder::transition_rows() {
  for (std::size_t i = 1; i < releases_.size(); ++i) {
    const ReleaseDiff diff = release_diff(releases_[i - 1], releases_[i]);
    TransitionRow row;
    row.from = releases_[i - 1].label;
    row.to = releases_[i].label;
    row.deprecated = diff.deprecated.size();
    row.kept = diff.kept.size();
    row.added = diff.added.size();
    row.version_changed = diff.version_changed;
    report_.transitions.push_back(std::move(row));
  }
}

std::optional<std::vector<std::pair<double, double>>> ReportBuilder::series(
    const std::string& metric) const {
  std::vector<std::pair<double, double>> data;
  for (const auto& row : report_.releases) {
    const MetricCell* cell = row.find(metric);
    if (cell == nullptr || !cell->value) return std::nullopt;
    data.emplace_back(static_cast<double>(row.ordinal), *cell->value);
  }
  return data;
}

void ReportBuilder::add_trend(
    const std::string& name, FitModel model,
    std::optional<std::vector<std::pair<double, double>>> data,
    bool drop_last) {
  TrendTest test;
  test.series = drop_last ? name + "_drop_last" : name;
  test.model = model;
  if (!data) {
    test.note = "skipped: metric missing for some release";
    report_.trends.push_back(std::move(test));
    return;
  }
  if (drop_last) data->pop_back();
  if (data->size() < 3) {
    test.note = kSkipTooFew;
    report_.trends.push_back(std::move(test));
    return;
  }
  try {
    test.fit = regress(*data, model);
  } catch (const std::exception& e) {
    test.note = std::string("failed: ") + e.what();
  }
  report_.trends.push_back(std::move(test));
}

void ReportBuilder::trend_tests() {
  using Model = FitModel;

  // Growth of counts is tested on an exponential model, with the
  // drop-the-newest-release rerun as a stationarity probe.
  for (const char* metric :
       {"package_count", "dep_edge_count", "con_edge_count"}) {
    add_trend(metric, Model::exponential, series(metric));
    if (config_.drop_last_sensitivity) {
      add_trend(metric, Model::exponential, series(metric), true);
    }
  }

  // Turnover counts live on transitions (one fewer point than releases).
  auto transition_series =
      [this](auto member) -> std::vector<std::pair<double, double>> {
    std::vector<std::pair<double, double>> data;
    for (std::size_t i = 0; i < report_.transitions.size(); ++i) {
      data.emplace_back(static_cast<double>(releases_[i + 1].ordinal),
                        static_cast<double>(report_.transitions[i].*member));
    }
    return data;
  };
  add_trend("deprecated_count", Model::exponential,
            transition_series(&TransitionRow::deprecated));
  add_trend("kept_count", Model::exponential,
            transition_series(&TransitionRow::kept));
  add_trend("added_count", Model::exponential,
            transition_series(&TransitionRow::added));
  if (config_.drop_last_sensitivity) {
    add_trend("added_count", Model::exponential,
              transition_series(&TransitionRow::added), true);
  }

  add_trend("dep_con_ratio", Model::linear, series("dep_con_ratio"));
  add_trend("non_interacting_fraction", Model::linear,
            series("non_interacting_fraction"));
  add_trend("major_module_count", Model::linear, series("major_module_count"));
  add_trend("within_module_dep_fraction", Model::linear,
            series("within_module_dep_fraction"));
  add_trend("within_module_con_fraction", Model::linear,
            series("within_module_con_fraction"));

  if (config_.modularity_significance) {
    add_trend("modularity_z", Model::linear, series("modularity_z"));
    add_trend("modularity_z", Model::exponential, series("modularity_z"));
  }
  if (config_.installation_experiment) {
    add_trend("mean_installed_fraction", Model::linear,
              series("mean_installed_fraction"));
    add_trend("install_z", Model::linear, series("install_z"));
  }

  // Modules against packages with dependencies, x taken from the metric
  // itself rather than the release ordinal.
  {
    std::optional<std::vector<std::pair<double, double>>> data;
    auto xs = series("packages_with_dependencies");
    auto ys = series("module_count");
    if (xs && ys) {
      std::vector<std::pair<double, double>> merged;
      for (std::size_t i = 0; i < xs->size(); ++i) {
        merged.emplace_back((*xs)[i].second, (*ys)[i].second);
      }
      data = std::move(merged);
    }
    add_trend("module_count_vs_packages_with_dependencies", Model::linear,
              std::move(data));
  }
}

EvolutionReport ReportBuilder::build() {
  for (std::size_t i = 0; i < releases_.size(); ++i) release_metrics(i);
  transition_rows();
  trend_tests();
  return std::move(report_);
}

}  // namespace

const MetricCell* ReleaseRow::find(const std::string& metric) const {
  for (const auto& cell : metrics) {
    if (cell.metric == metric) return &cell;
  }
  return nullptr;
}

EvolutionReport evolution_report(const std::vector<Release>& releases,
                                 const EvolutionConfig& config,
                                 std::uint64_t seed) {
  if (releases.size() < 2) {
    throw std::invalid_argument("evolution report needs at least 2 releases");
  }
  for (std::size_t i = 1; i < releases.size(); ++i) {
    if (releases[i].ordinal <= releases[i - 1].ordinal) {
      throw std::invalid_argument("release ordinals must strictly increase");
    }
  }
  return ReportBuilder(releases, config, seed).build();
}

}  // namespace pkgnet
