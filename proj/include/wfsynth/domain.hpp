#pragma once

// Domain model: service descriptions over a service and a type taxonomy,
// and the transition semantics of the configuration universe.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "wfsynth/ontology.hpp"
#include "wfsynth/type_state.hpp"

namespace wfsynth {

/// How outputs propagate along a sequence.
enum class UniverseMode {
  Accumulating,  // outputs are added to everything available so far
  Pipelining,    // outputs replace the state; data reaches only the direct successor
};

std::string_view to_string(UniverseMode mode);
UniverseMode universe_mode_from_string(std::string_view text);

/// A reference as written in a domain file, before resolution.
struct TermSpec {
  std::string id;
  std::optional<TermKind> kind;  // unset: class if such a class exists, otherwise instance
};

/// Unresolved service description, as read from a domain file.
struct ServiceSpec {
  std::string name;
  std::vector<std::string> classifications;
  std::vector<TermSpec> inputs;
  std::vector<TermSpec> outputs;
};

/// Resolved service. `instance` is the service's own instance in the service
/// taxonomy; inputs and outputs are type-taxonomy terms.
struct Service {
  std::string name;
  TermRef instance;
  std::vector<std::uint32_t> classifications;
  std::vector<TermRef> inputs;
  std::vector<TermRef> outputs;
};

struct Diagnostic {
  enum class Kind {
    OutputNeverConsumed,
    InputNeverProduced,
    UnusedClass,
  };
  Kind kind;
  std::string subject;  // display name of the type/class concerned
  std::string message;
};

std::string_view to_string(Diagnostic::Kind kind);

class DomainModel {
 public:
  /// Resolves and validates the services; each one is registered as an
  /// instance of its classifications in the service taxonomy. Throws
  /// LookupError for unresolved references (naming service and reference)
  /// and ModelError for duplicate names or empty classifications.
  DomainModel(Taxonomy service_taxonomy, Taxonomy type_taxonomy, std::vector<ServiceSpec> services);

  /// Domain document: `{service_taxonomy, type_taxonomy, services:[...]}`.
  /// Taxonomies are inline documents or paths relative to `base_dir`.
  static DomainModel from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
  static DomainModel load(const std::filesystem::path& path);

  const Taxonomy& service_taxonomy() const { return service_taxonomy_; }
  const Taxonomy& type_taxonomy() const { return type_taxonomy_; }
  const std::vector<Service>& services() const { return services_; }
  std::size_t size() const { return services_.size(); }

  std::optional<std::size_t> find_service(std::string_view name) const;
  /// Throws LookupError.
  std::size_t service_index(std::string_view name) const;
  const Service& service(std::string_view name) const { return services_[service_index(name)]; }
  const Service& service(std::size_t index) const { return services_.at(index); }

  /// Service whose taxonomy instance is `ref`, if any.
  std::optional<std::size_t> service_of_instance(TermRef ref) const;

  /// Every input is satisfied by some element of `state`.
  bool applicable(const TypeState& state, std::size_t service) const;
  bool applicable(const TypeState& state, std::string_view service) const {
    return applicable(state, service_index(service));
  }

  /// State after running `service`. Throws std::invalid_argument when the
  /// service is not applicable in `state`.
  TypeState successor(const TypeState& state, std::size_t service, UniverseMode mode) const;
  TypeState successor(const TypeState& state, std::string_view service, UniverseMode mode) const {
    return successor(state, service_index(service), mode);
  }

  /// Every element of `goal` is satisfied by some element of `state`.
  bool satisfies_all(const TypeState& state, std::span<const TermRef> goal) const;

  /// State built from type ids; throws LookupError.
  TypeState make_state(std::span<const std::string> type_ids) const;

  /// Rank of each service's name in lexicographic order, indexed by service.
  const std::vector<std::uint32_t>& name_rank() const { return name_rank_; }

 private:
  Taxonomy service_taxonomy_;
  Taxonomy type_taxonomy_;
  std::vector<Service> services_;
  std::unordered_map<std::string, std::size_t> by_name_;
  std::vector<std::int32_t> service_by_instance_;
  std::vector<std::uint32_t> name_rank_;
};

/// Warnings about a loaded model: outputs no other service consumes, inputs
/// no service produces, and non-root classes nothing is filed under.
std::vector<Diagnostic> validate_domain(const DomainModel& model);

}  // namespace wfsynth
