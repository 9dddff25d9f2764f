#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "wfsynth/bundled.hpp"
#include "wfsynth/synthesis.hpp"

namespace testing {

inline std::filesystem::path data_path(const std::string& file = {}) {
  std::filesystem::path p = WFSYNTH_TEST_DATA;
  return file.empty() ? p : p / file;
}

inline const wfsynth::bundled::Experiment& experiment() {
  static const auto exp = wfsynth::bundled::load(data_path());
  return exp;
}

inline std::shared_ptr<const wfsynth::DomainModel> domain() { return experiment().domain; }

inline wfsynth::Vocabulary vocab() { return wfsynth::Vocabulary::of(*domain()); }

// Type term by display name.
inline wfsynth::TermRef type(const std::string& name, const wfsynth::DomainModel& model = *domain()) {
  const auto hits = model.type_taxonomy().find_by_name(name);
  if (hits.size() != 1) throw std::runtime_error("no unique type named " + name);
  return hits.front();
}

inline wfsynth::TermRef service_term(const std::string& name, const wfsynth::DomainModel& model = *domain()) {
  return model.service(name).instance;
}

inline wfsynth::TypeState state(std::initializer_list<std::string> names) {
  wfsynth::TypeState s;
  for (const auto& n : names) s.insert(type(n));
  return s;
}

inline wfsynth::Formula library(std::vector<std::string> names) {
  return wfsynth::bundled::constraints_named(experiment().library, names);
}

inline std::vector<std::string> names_of(const wfsynth::Solution& s) {
  return wfsynth::service_names(s, *domain());
}

}  // namespace testing
