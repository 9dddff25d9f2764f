#pragma once

// OBO-subset import and taxonomies with subsumption queries.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "wfsynth/error.hpp"

namespace wfsynth {

// ---------------------------------------------------------------------------
// OBO source

struct OboTerm {
  std::string id;
  std::string name;
  std::vector<std::string> parents;  // is_a targets, comments stripped
  bool obsolete = false;
};

/// The `[Term]` stanzas of an OBO file. Obsolete terms are never stored.
struct OntologySource {
  std::vector<OboTerm> terms;

  const OboTerm* find(std::string_view id) const;
};

/// Parses OBO 1.2-style text. Only `[Term]` stanzas and their `id`, `name`,
/// `is_a` and `is_obsolete` tags are interpreted; everything else is skipped.
/// is_a links to obsolete terms are dropped together with the obsolete term.
/// Throws ParseError (with the offending line) on a stanza without id, a
/// duplicate id or an is_a target that is defined nowhere in the file.
OntologySource parse_obo(std::istream& in);
OntologySource parse_obo(std::string_view text);

/// Writes the source back as OBO text. `parse_obo(to_obo(s))` reproduces `s`.
std::string to_obo(const OntologySource& source);

// ---------------------------------------------------------------------------
// Taxonomy

enum class TermKind : std::uint8_t { Class, Instance };

/// Handle to a class or instance of one particular taxonomy.
struct TermRef {
  TermKind kind = TermKind::Class;
  std::uint32_t index = 0;

  static constexpr TermRef make_class(std::uint32_t i) { return {TermKind::Class, i}; }
  static constexpr TermRef make_instance(std::uint32_t i) { return {TermKind::Instance, i}; }

  bool is_class() const { return kind == TermKind::Class; }
  bool is_instance() const { return kind == TermKind::Instance; }

  friend auto operator<=>(const TermRef&, const TermRef&) = default;
};

std::string_view to_string(TermKind kind);
TermKind term_kind_from_string(std::string_view text);

/// Rooted is-a DAG of classes plus instances attached to one or more classes.
///
/// Class and instance ids live in disjoint namespaces. Every class reaches the
/// root through parent links and the class graph is acyclic; both are checked
/// whenever a taxonomy is constructed. The ancestor closure is materialized as
/// bitsets, so subsumption and satisfaction queries are O(1).
class Taxonomy {
 public:
  struct ClassInfo {
    std::string id;
    std::string name;
    std::vector<std::uint32_t> parents;
  };

  struct InstanceInfo {
    std::string id;
    std::vector<std::uint32_t> member_of;
  };

  /// Root together with every term that reaches it through is_a. Parent
  /// links leaving the retained set are dropped.
  static Taxonomy build(const OntologySource& source, std::string_view root);

  /// Reads the canonical taxonomy document
  /// `{root, classes:[{id,name,parents}], instances:[{id,member_of}]}`.
  static Taxonomy from_json(const nlohmann::json& doc);
  nlohmann::ordered_json to_json() const;

  /// Adds a concrete member. Throws LookupError for unknown classes and
  /// ModelError for an id already used by a class or instance.
  TermRef add_instance(std::string id, std::span<const std::string> member_of);
  TermRef add_instance(std::string id, std::span<const std::uint32_t> member_of);

  std::uint32_t root() const { return root_; }
  const std::vector<ClassInfo>& classes() const { return classes_; }
  const std::vector<InstanceInfo>& instances() const { return instances_; }
  std::size_t class_count() const { return classes_.size(); }
  std::size_t instance_count() const { return instances_.size(); }

  std::optional<TermRef> find(std::string_view id) const;
  std::optional<std::uint32_t> find_class(std::string_view id) const;
  /// Resolves an id in either namespace; throws LookupError.
  TermRef resolve(std::string_view id) const;
  std::uint32_t resolve_class(std::string_view id) const;
  /// Terms whose display name equals `name` (instances are named by their id).
  std::vector<TermRef> find_by_name(std::string_view name) const;

  const std::string& id(TermRef ref) const;
  /// Display name; instances use their id.
  const std::string& name(TermRef ref) const;

  /// Reflexive-transitive is-a between classes.
  bool is_subsumed(std::uint32_t a, std::uint32_t b) const;
  bool is_subsumed(std::string_view a, std::string_view b) const;

  /// `provided` satisfies `required` when it is subsumed by a required class
  /// (instances through any of their classes) or is the required instance.
  bool satisfies(TermRef provided, TermRef required) const;

  /// Classes that subsume `ref` (including itself when it is a class).
  std::vector<std::uint32_t> ancestors(TermRef ref) const;

 private:
  using Bits = std::vector<std::uint64_t>;

  void index_and_validate();
  Bits closure_of(std::span<const std::uint32_t> classes) const;
  bool test(const Bits& bits, std::uint32_t cls) const {
    return (bits[cls >> 6] >> (cls & 63)) & 1u;
  }
  const Bits& bits_of(TermRef ref) const {
    return ref.is_class() ? class_ancestors_[ref.index] : instance_ancestors_[ref.index];
  }

  std::uint32_t root_ = 0;
  std::vector<ClassInfo> classes_;
  std::vector<InstanceInfo> instances_;
  std::unordered_map<std::string, TermRef> by_id_;
  std::vector<Bits> class_ancestors_;
  std::vector<Bits> instance_ancestors_;
};

}  // namespace wfsynth
