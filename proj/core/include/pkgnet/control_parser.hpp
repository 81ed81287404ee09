#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pkgnet/graph.hpp"

namespace pkgnet {

// One alternative inside a relation group: a target package name plus an
// optional version constraint. Constraints are kept as opaque text; the
// package-level network never uses them.
struct Relation {
  std::string target;
  std::string version_constraint;  // empty = unconstrained, e.g. ">= 2.3"

  bool operator==(const Relation&) const = default;
};

// A comma-separated element of a relation field; '|' separates alternatives.
struct AlternativeGroup {
  std::vector<Relation> alternatives;

  bool operator==(const AlternativeGroup&) const = default;
};

struct RelationList {
  std::vector<AlternativeGroup> groups;

  bool empty() const noexcept { return groups.empty(); }
  bool operator==(const RelationList&) const = default;
};

// One parsed control stanza.
struct PackageRecord {
  std::string name;
  std::string version;
  RelationList depends;
  RelationList pre_depends;
  RelationList conflicts;
  std::vector<std::string> provides;
};

enum class AlternativesPolicy { first_listed, all_alternatives };
enum class VirtualsPolicy { first_provider, all_providers, drop };
enum class ConflictDirection { as_declared, symmetrized };

// How relation fields are turned into concrete package-level edges. The
// defaults give one edge per group (first listed alternative), resolve
// virtual names to their alphabetically first provider, count Pre-Depends
// as dependencies and keep conflicts directed as declared.
struct ResolutionPolicy {
  AlternativesPolicy alternatives = AlternativesPolicy::first_listed;
  VirtualsPolicy virtuals = VirtualsPolicy::first_provider;
  bool include_pre_depends = true;
  ConflictDirection conflict_direction = ConflictDirection::as_declared;
};

struct ParsedIndex {
  std::vector<PackageRecord> records;
  std::vector<std::string> warnings;
};

// Parses a Debian-style Packages index: stanzas separated by blank lines,
// "Key: value" fields, continuation lines indented. Stanzas without a
// Package field are skipped with a warning; a duplicated package name keeps
// the last stanza and records a warning. Unknown fields are ignored.
ParsedIndex parse_packages_index(std::string_view text);

// Parses a single relation field ("libc6 (>= 2.3), mta | exim").
// Architecture qualifiers in [...] are stripped. Order is preserved.
RelationList parse_relation_field(std::string_view text);

std::string serialize_relation(const RelationList& relations);

struct BuiltGraph {
  DependencyGraph graph;
  std::vector<std::string> warnings;
};

// Resolves relation fields into the package-level graph. Targets that name
// neither a record nor a Provides token are dropped with a warning;
// self-edges and duplicates are removed. Building never fails.
BuiltGraph build_graph(const std::vector<PackageRecord>& records,
                       const ResolutionPolicy& policy = {});

}  // namespace pkgnet
