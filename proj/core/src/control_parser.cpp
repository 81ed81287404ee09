#include "pkgnet/control_parser.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "pkgnet/errors.hpp"

namespace pkgnet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n'))
    s.remove_suffix(1);
  return s;
}

bool blank(std::string_view line) { return trim(line).empty(); }

// Splits on `sep` at the top level; parentheses and brackets do not nest in
// the Debian relation grammar, so a flat scan is enough.
std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

Relation parse_alternative(std::string_view text, std::string_view group) {
  std::string_view rest = trim(text);
  Relation rel;

  const auto name_end = rest.find_first_of(" \t([");
  rel.target = std::string(rest.substr(0, name_end));
  rest = name_end == std::string_view::npos ? std::string_view{}
                                            : trim(rest.substr(name_end));

  while (!rest.empty()) {
    if (rest.front() == '(') {
      const auto close = rest.find(')');
      if (close == std::string_view::npos) {
        throw ParseError("unbalanced parentheses in group '" +
                         std::string(trim(group)) + "'");
      }
      if (!rel.version_constraint.empty()) {
        throw ParseError("multiple version constraints in group '" +
                         std::string(trim(group)) + "'");
      }
      rel.version_constraint = std::string(trim(rest.substr(1, close - 1)));
      rest = trim(rest.substr(close + 1));
    } else if (rest.front() == '[') {
      // Architecture qualifiers are stripped.
      const auto close = rest.find(']');
      if (close == std::string_view::npos) {
        throw ParseError("unbalanced brackets in group '" +
                         std::string(trim(group)) + "'");
      }
      rest = trim(rest.substr(close + 1));
    } else {
      throw ParseError("unexpected text '" + std::string(rest) +
                       "' in group '" + std::string(trim(group)) + "'");
    }
  }
  return rel;
}

}  // namespace

RelationList parse_relation_field(std::string_view text) {
  RelationList list;
  if (trim(text).empty()) return list;

  for (std::string_view group_text : split(text, ',')) {
    if (trim(group_text).empty()) continue;  // tolerate stray commas
    AlternativeGroup group;
    for (std::string_view alt_text : split(group_text, '|')) {
      if (trim(alt_text).empty()) continue;
      Relation rel = parse_alternative(alt_text, group_text);
      if (!rel.target.empty()) group.alternatives.push_back(std::move(rel));
    }
    if (!group.alternatives.empty()) list.groups.push_back(std::move(group));
  }
  return list;
}

std::string serialize_relation(const RelationList& relations) {
  std::string out;
  for (std::size_t g = 0; g < relations.groups.size(); ++g) {
    if (g > 0) out += ", ";
    const auto& alts = relations.groups[g].alternatives;
    for (std::size_t a = 0; a < alts.size(); ++a) {
      if (a > 0) out += " | ";
      out += alts[a].target;
      if (!alts[a].version_constraint.empty()) {
        out += " (" + alts[a].version_constraint + ")";
      }
    }
  }
  return out;
}

namespace {

struct RawStanza {
  // Field order preserved; later duplicates of a key within one stanza
  // overwrite earlier ones (dpkg keeps the last).
  std::vector<std::pair<std::string, std::string>> fields;
  std::size_t first_line = 0;

  const std::string* get(std::string_view key) const {
    for (auto it = fields.rbegin(); it != fields.rend(); ++it) {
      if (it->first == key) return &it->second;
    }
    return nullptr;
  }
};

bool has_whitespace(std::string_view s) {
  return s.find_first_of(" \t\r\n") != std::string_view::npos;
}

}  // namespace

ParsedIndex parse_packages_index(std::string_view text) {
  ParsedIndex out;
  std::vector<RawStanza> stanzas;
  RawStanza current;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  auto flush = [&] {
    if (!current.fields.empty()) stanzas.push_back(std::move(current));
    current = RawStanza{};
  };

  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(
        pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    const bool last = eol == std::string_view::npos;
    pos = last ? text.size() + 1 : eol + 1;
    ++lineno;
    if (last && line.empty()) break;

    if (blank(line)) {
      flush();
      continue;
    }
    if (line.front() == ' ' || line.front() == '\t') {
      // Continuation line extends the previous field value.
      if (current.fields.empty()) {
        throw ParseError("continuation line without a field", lineno);
      }
      auto& value = current.fields.back().second;
      if (!value.empty()) value += ' ';
      value += std::string(trim(line));
      continue;
    }
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError("field line without a colon", lineno);
    }
    if (current.fields.empty()) current.first_line = lineno;
    std::string key{trim(line.substr(0, colon))};
    std::string value{trim(line.substr(colon + 1))};
    current.fields.emplace_back(std::move(key), std::move(value));
  }
  flush();

  std::unordered_map<std::string, std::size_t> seen;  // name -> record slot
  for (const auto& stanza : stanzas) {
    const std::string* name = stanza.get("Package");
    if (name == nullptr || trim(*name).empty()) {
      out.warnings.push_back("stanza at line " +
                             std::to_string(stanza.first_line) +
                             " has no Package field, skipped");
      continue;
    }
    PackageRecord record;
    record.name = std::string(trim(*name));
    if (has_whitespace(record.name)) {
      throw ParseError("package name '" + record.name +
                           "' contains whitespace",
                       stanza.first_line);
    }
    if (const auto* v = stanza.get("Version")) record.version = *v;
    if (const auto* v = stanza.get("Depends"))
      record.depends = parse_relation_field(*v);
    if (const auto* v = stanza.get("Pre-Depends"))
      record.pre_depends = parse_relation_field(*v);
    if (const auto* v = stanza.get("Conflicts"))
      record.conflicts = parse_relation_field(*v);
    if (const auto* v = stanza.get("Provides")) {
      for (const auto& group : parse_relation_field(*v).groups) {
        for (const auto& alt : group.alternatives) {
          record.provides.push_back(alt.target);
        }
      }
    }
    // Relation fields the network does not model are still validated so a
    // garbled stanza does not slip through silently.
    for (const char* key : {"Breaks", "Replaces", "Recommends", "Suggests"}) {
      if (const auto* v = stanza.get(key)) {
        try {
          parse_relation_field(*v);
        } catch (const ParseError& e) {
          out.warnings.push_back("package '" + record.name + "': ignored " +
                                 key + " field: " + e.what());
        }
      }
    }

    auto [it, inserted] = seen.try_emplace(record.name, out.records.size());
    if (inserted) {
      out.records.push_back(std::move(record));
    } else {
      out.warnings.push_back("duplicate package '" + record.name +
                             "', keeping the last stanza");
      out.records[it->second] = std::move(record);
    }
  }
  return out;
}

BuiltGraph build_graph(const std::vector<PackageRecord>& records,
                       const ResolutionPolicy& policy) {
  GraphBuilder builder;
  std::vector<std::string> warnings;

  for (const auto& record : records) builder.intern(record.name);

  // Virtual name -> providers, sorted so "first provider" means
  // alphabetically first.
  std::map<std::string, std::vector<std::string>> providers;
  for (const auto& record : records) {
    for (const auto& token : record.provides) {
      providers[token].push_back(record.name);
    }
  }
  for (auto& [_, names] : providers) {
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
  }

  auto resolve = [&](const std::string& target,
                     const std::string& source) -> std::vector<NodeId> {
    if (auto id = builder.find(target)) return {*id};
    auto it = providers.find(target);
    if (it == providers.end()) {
      warnings.push_back("package '" + source + "': target '" + target +
                         "' names no package and no Provides token, dropped");
      return {};
    }
    switch (policy.virtuals) {
      case VirtualsPolicy::first_provider:
        return {builder.find(it->second.front()).value()};
      case VirtualsPolicy::all_providers: {
        std::vector<NodeId> ids;
        for (const auto& name : it->second)
          ids.push_back(builder.find(name).value());
        return ids;
      }
      case VirtualsPolicy::drop:
        return {};
    }
    return {};
  };

  auto add_edges = [&](const PackageRecord& record, const RelationList& list,
                       EdgeKind kind) {
    const NodeId self = builder.find(record.name).value();
    for (const auto& group : list.groups) {
      const std::size_t take =
          policy.alternatives == AlternativesPolicy::first_listed
              ? 1
              : group.alternatives.size();
      for (std::size_t a = 0; a < take; ++a) {
        for (NodeId target : resolve(group.alternatives[a].target,
                                     record.name)) {
          if (target == self) continue;  // self-edges removed
          builder.add_edge(self, target, kind);
          if (kind == EdgeKind::conflict &&
              policy.conflict_direction == ConflictDirection::symmetrized) {
            builder.add_edge(target, self, kind);
          }
        }
      }
    }
  };

  for (const auto& record : records) {
    add_edges(record, record.depends, EdgeKind::dependency);
    if (policy.include_pre_depends) {
      add_edges(record, record.pre_depends, EdgeKind::dependency);
    }
    add_edges(record, record.conflicts, EdgeKind::conflict);
  }

  return {builder.build(), std::move(warnings)};
}

}  // namespace pkgnet
