#include "pkgnet/report_io.hpp"

#include <cinttypes>
#include <cstdio>

#include "json.hpp"

namespace pkgnet {

using nlohmann::json;

namespace {

// Shortest round-trip formatting, so CSV cells match the JSON encoder and
// reruns are byte-identical.
std::string fmt(double value) {
  return json(value).dump();
}

json meta(const Provenance& provenance) {
  return json{{"seed", provenance.seed},
              {"config_digest", provenance.config_digest}};
}

json fit_json(const FitResult& fit) {
  return json{{"model", to_string(fit.model)},
              {"slope", fit.slope},
              {"intercept", fit.intercept},
              {"r_squared", fit.r_squared},
              {"f_stat", fit.f_stat},
              {"df", {1, fit.df_denominator}},
              {"p_value", fit.p_value},
              {"n_points", fit.n_points}};
}

json ensemble_json(const EnsembleStats& stats) {
  json j{{"observed", stats.observed},
         {"null_mean", stats.null_mean},
         {"null_std", stats.null_std},
         {"p", stats.p},
         {"n_samples", stats.n_samples}};
  if (stats.z) {
    j["z"] = *stats.z;
  } else {
    j["z"] = nullptr;
  }
  return j;
}

}  // namespace

std::string config_digest(const std::string& canonical_config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_config) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016" PRIx64, hash);
  return buffer;
}

std::string csv_provenance_line(const Provenance& provenance) {
  return "# seed=" + std::to_string(provenance.seed) +
         " config_digest=" + provenance.config_digest + "\n";
}

std::string to_json(const GraphSummary& summary) {
  return json{{"nodes", summary.nodes},
              {"dep_edges", summary.dep_edges},
              {"con_edges", summary.con_edges},
              {"interacting", summary.interacting},
              {"non_interacting_fraction", summary.non_interacting_fraction}}
      .dump();
}

std::string distribution_csv(const std::vector<CumulativePoint>& points,
                             double bin_base) {
  std::string out = "k,p,bin\n";
  for (const auto& point : points) {
    out += fmt(point.k) + "," + fmt(point.p) + "," +
           std::to_string(multiplicative_bin_index(point.k, bin_base)) + "\n";
  }
  return out;
}

std::string binned_distribution_csv(
    const std::vector<CumulativePoint>& binned) {
  std::string out = "k,p\n";
  for (const auto& point : binned) {
    out += fmt(point.k) + "," + fmt(point.p) + "\n";
  }
  return out;
}

std::string to_json(const FitResult& fit) { return fit_json(fit).dump(); }

std::string fits_json(const BestFit& fits, const GraphSummary& summary,
                      EdgeKind kind, Direction direction, double bin_base,
                      bool binned) {
  json j{{"kind", kind == EdgeKind::dependency ? "dep" : "con"},
         {"direction", direction == Direction::in ? "in" : "out"},
         {"bin_base", bin_base},
         {"fitted_on", binned ? "binned" : "raw"},
         {"graph", json::parse(to_json(summary))},
         {"best", to_string(fits.winner)},
         {"exponential", fit_json(fits.exponential)},
         {"power_law", fit_json(fits.power_law)}};
  return j.dump();
}

std::string partition_csv(const DependencyGraph& graph,
                          const Partition& partition) {
  std::string out = "package,module\n";
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (partition.assignment[v] < 0) continue;
    out += graph.name_of(v) + "," +
           std::to_string(partition.assignment[v]) + "\n";
  }
  return out;
}

std::string module_summary_json(const DependencyGraph& graph,
                                const Partition& partition) {
  const Partition full = complete_with_singletons(partition, graph);
  const auto dep_frac =
      within_module_fraction(graph, full, EdgeKind::dependency);
  const auto con_frac = within_module_fraction(graph, full, EdgeKind::conflict);
  json j{{"q", partition.q},
         {"module_count", partition.module_count()},
         {"module_sizes", partition.module_sizes()},
         {"covered_nodes", partition.covered_count()},
         {"levels", partition.levels.size()},
         {"within_module_dep_fraction",
          dep_frac ? json(*dep_frac) : json(nullptr)},
         {"within_module_con_fraction",
          con_frac ? json(*con_frac) : json(nullptr)}};
  return j.dump();
}

std::string to_json(const EnsembleStats& stats, const Provenance& provenance) {
  json j = ensemble_json(stats);
  j["meta"] = meta(provenance);
  return j.dump();
}

std::string samples_csv(const EnsembleStats& stats,
                        const Provenance& provenance) {
  std::string out = csv_provenance_line(provenance);
  out += "network,value\n";
  for (std::size_t i = 0; i < stats.samples.size(); ++i) {
    out += std::to_string(i) + "," + fmt(stats.samples[i]) + "\n";
  }
  return out;
}

std::string to_json(const ReplicateStats& stats,
                    const Provenance& provenance) {
  json j{{"replicates", stats.replicates},
         {"mean", stats.mean},
         {"std_dev", stats.std_dev},
         {"min", stats.min},
         {"max", stats.max},
         {"histogram", stats.histogram},
         {"meta", meta(provenance)}};
  return j.dump();
}

std::string replicates_csv(const ReplicateStats& stats,
                           const Provenance& provenance) {
  std::string out = csv_provenance_line(provenance);
  out += "replicate,fraction\n";
  for (std::size_t i = 0; i < stats.fractions.size(); ++i) {
    out += std::to_string(i) + "," + fmt(stats.fractions[i]) + "\n";
  }
  return out;
}

std::string to_json(const EvolutionReport& report,
                    const Provenance& provenance) {
  json releases = json::array();
  for (const auto& row : report.releases) {
    json metrics = json::object();
    for (const auto& cell : row.metrics) {
      if (cell.value) {
        metrics[cell.metric] = *cell.value;
      } else {
        metrics[cell.metric] = {{"value", nullptr}, {"note", cell.note}};
      }
    }
    releases.push_back(json{{"label", row.label},
                            {"ordinal", row.ordinal},
                            {"metrics", metrics}});
  }
  json transitions = json::array();
  for (const auto& t : report.transitions) {
    transitions.push_back(json{{"from", t.from},
                               {"to", t.to},
                               {"deprecated", t.deprecated},
                               {"kept", t.kept},
                               {"added", t.added},
                               {"version_changed", t.version_changed}});
  }
  json trends = json::array();
  for (const auto& t : report.trends) {
    json entry{{"series", t.series}, {"model", to_string(t.model)}};
    if (t.fit) {
      entry["fit"] = fit_json(*t.fit);
    } else {
      entry["fit"] = nullptr;
      entry["note"] = t.note;
    }
    trends.push_back(std::move(entry));
  }
  return json{{"releases", releases},
              {"transitions", transitions},
              {"trends", trends},
              {"meta", meta(provenance)}}
      .dump();
}

std::string release_metrics_csv(const EvolutionReport& report,
                                const Provenance& provenance) {
  std::string out = csv_provenance_line(provenance);
  out += "release,ordinal,metric,value,note\n";
  for (const auto& row : report.releases) {
    for (const auto& cell : row.metrics) {
      out += row.label + "," + std::to_string(row.ordinal) + "," +
             cell.metric + "," + (cell.value ? fmt(*cell.value) : "") + "," +
             cell.note + "\n";
    }
  }
  return out;
}

std::string transitions_csv(const EvolutionReport& report,
                            const Provenance& provenance) {
  std::string out = csv_provenance_line(provenance);
  out += "from,to,deprecated,kept,added,version_changed\n";
  for (const auto& t : report.transitions) {
    out += t.from + "," + t.to + "," + std::to_string(t.deprecated) + "," +
           std::to_string(t.kept) + "," + std::to_string(t.added) + "," +
           std::to_string(t.version_changed) + "\n";
  }
  return out;
}

std::string trends_csv(const EvolutionReport& report,
                       const Provenance& provenance) {
  std::string out = csv_provenance_line(provenance);
  out += "series,model,slope,intercept,r_squared,f_stat,df2,p_value,note\n";
  for (const auto& t : report.trends) {
    out += t.series + "," + to_string(t.model) + ",";
    if (t.fit) {
      out += fmt(t.fit->slope) + "," + fmt(t.fit->intercept) + "," +
             fmt(t.fit->r_squared) + "," + fmt(t.fit->f_stat) + "," +
             std::to_string(t.fit->df_denominator) + "," +
             fmt(t.fit->p_value) + ",";
    } else {
      out += ",,,,,,";
    }
    out += t.note + "\n";
  }
  return out;
}

}  // namespace pkgnet
