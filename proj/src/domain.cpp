#include "wfsynth/domain.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace wfsynth {

std::string_view to_string(UniverseMode mode) {
  return mode == UniverseMode::Pipelining ? "pipelining" : "accumulating";
}

UniverseMode universe_mode_from_string(std::string_view text) {
  if (text == "pipelining") return UniverseMode::Pipelining;
  if (text == "accumulating") return UniverseMode::Accumulating;
  throw std::invalid_argument("unknown universe mode '" + std::string(text) + "' (expected pipelining or accumulating)");
}

std::string_view to_string(Diagnostic::Kind kind) {
  switch (kind) {
    case Diagnostic::Kind::OutputNeverConsumed: return "output-never-consumed";
    case Diagnostic::Kind::InputNeverProduced: return "input-never-produced";
    case Diagnostic::Kind::UnusedClass: return "unused-class";
  }
  return "unknown";
}

namespace {

TermRef resolve_type(const Taxonomy& types, const TermSpec& spec, const std::string& service) {
  const auto ref = types.find(spec.id);
  if (!ref || (spec.kind && ref->kind != *spec.kind)) {
    std::string what = spec.kind ? std::string(to_string(*spec.kind)) + " " : std::string{};
    throw LookupError("service '" + service + "': unknown type " + what + "'" + spec.id + "'");
  }
  return *ref;
}

TermSpec term_spec_from_json(const nlohmann::json& j) {
  if (j.is_string()) return TermSpec{j.get<std::string>(), std::nullopt};
  TermSpec spec{j.at("id").get<std::string>(), std::nullopt};
  if (const auto it = j.find("kind"); it != j.end()) spec.kind = term_kind_from_string(it->get<std::string>());
  return spec;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "': no such file");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

Taxonomy taxonomy_from(const nlohmann::json& entry, const std::filesystem::path& base_dir) {
  if (entry.is_string()) {
    auto path = std::filesystem::path(entry.get<std::string>());
    if (path.is_relative()) path = base_dir / path;
    return Taxonomy::from_json(read_json_file(path));
  }
  return Taxonomy::from_json(entry);
}

}  // namespace

DomainModel::DomainModel(Taxonomy service_taxonomy, Taxonomy type_taxonomy, std::vector<ServiceSpec> services)
    : service_taxonomy_(std::move(service_taxonomy)), type_taxonomy_(std::move(type_taxonomy)) {
  for (auto& spec : services) {
    if (!by_name_.emplace(spec.name, services_.size()).second)
      throw ModelError("duplicate service name '" + spec.name + "'");

    Service svc;
    svc.name = spec.name;
    for (const auto& c : spec.classifications) {
      const auto cls = service_taxonomy_.find_class(c);
      if (!cls) throw LookupError("service '" + spec.name + "': unknown service class '" + c + "'");
      svc.classifications.push_back(*cls);
    }

    if (const auto existing = service_taxonomy_.find(spec.name)) {
      if (!existing->is_instance())
        throw ModelError("service '" + spec.name + "' collides with a service class id");
      auto members = service_taxonomy_.instances()[existing->index].member_of;
      if (svc.classifications.empty()) {
        svc.classifications = members;
      } else {
        auto declared = svc.classifications;
        std::sort(declared.begin(), declared.end());
        std::sort(members.begin(), members.end());
        if (declared != members)
          throw ModelError("service '" + spec.name + "': classifications disagree with its taxonomy instance");
      }
      svc.instance = *existing;
    } else {
      if (svc.classifications.empty()) throw ModelError("service '" + spec.name + "' has no classification");
      svc.instance = service_taxonomy_.add_instance(spec.name, std::span<const std::uint32_t>(svc.classifications));
    }

    for (const auto& in : spec.inputs) svc.inputs.push_back(resolve_type(type_taxonomy_, in, spec.name));
    for (const auto& out : spec.outputs) svc.outputs.push_back(resolve_type(type_taxonomy_, out, spec.name));
    services_.push_back(std::move(svc));
  }

  service_by_instance_.assign(service_taxonomy_.instance_count(), -1);
  for (std::size_t i = 0; i < services_.size(); ++i)
    service_by_instance_[services_[i].instance.index] = static_cast<std::int32_t>(i);

  std::vector<std::size_t> order(services_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return services_[a].name < services_[b].name; });
  name_rank_.assign(services_.size(), 0);
  for (std::size_t r = 0; r < order.size(); ++r) name_rank_[order[r]] = static_cast<std::uint32_t>(r);
}

DomainModel DomainModel::from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir) {
  Taxonomy services_tax = [&] {
    try {
      return taxonomy_from(doc.at("service_taxonomy"), base_dir);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("domain document: ") + e.what(), 0);
    }
  }();
  Taxonomy types_tax = [&] {
    try {
      return taxonomy_from(doc.at("type_taxonomy"), base_dir);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("domain document: ") + e.what(), 0);
    }
  }();

  std::vector<ServiceSpec> specs;
  try {
    for (const auto& s : doc.at("services")) {
      ServiceSpec spec;
      spec.name = s.at("name").get<std::string>();
      if (const auto it = s.find("classifications"); it != s.end())
        spec.classifications = it->get<std::vector<std::string>>();
      if (const auto it = s.find("inputs"); it != s.end())
        for (const auto& in : *it) spec.inputs.push_back(term_spec_from_json(in));
      if (const auto it = s.find("outputs"); it != s.end())
        for (const auto& out : *it) spec.outputs.push_back(term_spec_from_json(out));
      specs.push_back(std::move(spec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("domain document: ") + e.what(), 0);
  }
  return DomainModel(std::move(services_tax), std::move(types_tax), std::move(specs));
}

DomainModel DomainModel::load(const std::filesystem::path& path) {
  return from_json(read_json_file(path), path.parent_path());
}

std::optional<std::size_t> DomainModel::find_service(std::string_view name) const {
  const auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::size_t DomainModel::service_index(std::string_view name) const {
  if (const auto i = find_service(name)) return *i;
  throw LookupError("unknown service '" + std::string(name) + "'");
}

std::optional<std::size_t> DomainModel::service_of_instance(TermRef ref) const {
  if (!ref.is_instance() || ref.index >= service_by_instance_.size()) return std::nullopt;
  const auto i = service_by_instance_[ref.index];
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

bool DomainModel::satisfies_all(const TypeState& state, std::span<const TermRef> goal) const {
  return std::all_of(goal.begin(), goal.end(), [&](TermRef required) {
    return std::any_of(state.begin(), state.end(), [&](TermRef have) { return type_taxonomy_.satisfies(have, required); });
  });
}

bool DomainModel::applicable(const TypeState& state, std::size_t service) const {
  return satisfies_all(state, services_.at(service).inputs);
}

TypeState DomainModel::successor(const TypeState& state, std::size_t service, UniverseMode mode) const {
  if (!applicable(state, service))
    throw std::invalid_argument("service '" + services_.at(service).name + "' is not applicable in this state");
  const auto& outputs = services_[service].outputs;
  if (mode == UniverseMode::Pipelining) return TypeState(outputs);
  TypeState next = state;
  for (const auto out : outputs) next.insert(out);
  return next;
}

TypeState DomainModel::make_state(std::span<const std::string> type_ids) const {
  std::vector<TermRef> refs;
  for (const auto& id : type_ids) refs.push_back(type_taxonomy_.resolve(id));
  return TypeState(std::move(refs));
}

std::vector<Diagnostic> validate_domain(const DomainModel& model) {
  const auto& types = model.type_taxonomy();
  const auto& services = model.services();
  std::vector<Diagnostic> out;

  auto join = [](const std::vector<std::string>& names) {
    std::string s;
    for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
    return s;
  };

  // Outputs that no other service accepts.
  std::map<TermRef, std::vector<std::string>> unconsumed;
  for (std::size_t s = 0; s < services.size(); ++s) {
    for (const auto out_ref : services[s].outputs) {
      bool consumed = false;
      for (std::size_t t = 0; t < services.size() && !consumed; ++t) {
        if (t == s) continue;
        for (const auto in_ref : services[t].inputs) consumed = consumed || types.satisfies(out_ref, in_ref);
      }
      if (!consumed) unconsumed[out_ref].push_back(services[s].name);
    }
  }
  for (const auto& [ref, producers] : unconsumed) {
    out.push_back({Diagnostic::Kind::OutputNeverConsumed, types.name(ref),
                   types.name(ref) + " consumed by no service (output of " + join(producers) + ")"});
  }

  // Inputs that no service output satisfies.
  std::map<TermRef, std::vector<std::string>> unproduced;
  for (const auto& svc : services) {
    for (const auto in_ref : svc.inputs) {
      const bool produced = std::any_of(services.begin(), services.end(), [&](const Service& p) {
        return std::any_of(p.outputs.begin(), p.outputs.end(), [&](TermRef o) { return types.satisfies(o, in_ref); });
      });
      if (!produced) unproduced[in_ref].push_back(svc.name);
    }
  }
  for (const auto& [ref, consumers] : unproduced) {
    out.push_back({Diagnostic::Kind::InputNeverProduced, types.name(ref),
                   types.name(ref) + " is produced by no service (required by " + join(consumers) + ")"});
  }

  // Non-root classes with nothing filed at or below them.
  auto report_unused = [&](const Taxonomy& tax, const std::vector<TermRef>& used, std::string_view what) {
    std::vector<char> covered(tax.class_count(), 0);
    for (const auto ref : used)
      for (const auto c : tax.ancestors(ref)) covered[c] = 1;
    for (std::uint32_t c = 0; c < tax.class_count(); ++c) {
      if (covered[c] || c == tax.root()) continue;
      const auto& name = tax.name(TermRef::make_class(c));
      out.push_back({Diagnostic::Kind::UnusedClass, name, std::string(what) + " class " + name + " is used by no service"});
    }
  };
  std::vector<TermRef> service_refs, type_refs;
  for (const auto& svc : services) {
    service_refs.push_back(svc.instance);
    type_refs.insert(type_refs.end(), svc.inputs.begin(), svc.inputs.end());
    type_refs.insert(type_refs.end(), svc.outputs.begin(), svc.outputs.end());
  }
  report_unused(model.service_taxonomy(), service_refs, "service");
  report_unused(types, type_refs, "type");
  return out;
}

}  // namespace wfsynth
