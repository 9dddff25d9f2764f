#pragma once

// Random formulas and traces over the bundled vocabulary.

#include <random>
#include <vector>

#include "wfsynth/domain.hpp"
#include "wfsynth/sltl.hpp"

namespace testing {

class RandomSltl {
 public:
  RandomSltl(const wfsynth::DomainModel& model, std::uint32_t seed) : model_(model), rng_(seed) {
    const auto& types = model.type_taxonomy();
    for (std::uint32_t c = 0; c < types.class_count(); ++c) type_terms_.push_back(wfsynth::TermRef::make_class(c));
    for (std::uint32_t i = 0; i < types.instance_count(); ++i) type_terms_.push_back(wfsynth::TermRef::make_instance(i));
    const auto& svc = model.service_taxonomy();
    for (std::uint32_t c = 0; c < svc.class_count(); ++c) service_terms_.push_back(wfsynth::TermRef::make_class(c));
    for (std::uint32_t i = 0; i < svc.instance_count(); ++i) service_terms_.push_back(wfsynth::TermRef::make_instance(i));
  }

  std::mt19937& rng() { return rng_; }

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  wfsynth::ServiceConstraint sc(int depth) {
    using SC = wfsynth::ServiceConstraint;
    const auto pick = depth <= 0 ? below(3) : below(6);
    switch (pick) {
      case 0: return SC::any();
      case 1:
      case 2: return SC::atom(service_terms_[below(service_terms_.size())]);
      case 3: return SC::negation(sc(depth - 1));
      case 4: return SC::conjunction(sc(depth - 1), sc(depth - 1));
      default: return SC::disjunction(sc(depth - 1), sc(depth - 1));
    }
  }

  wfsynth::Formula formula(int depth) {
    using namespace wfsynth;
    const auto pick = depth <= 0 ? below(4) : 4 + below(11);
    switch (pick) {
      case 0: return f_true();
      case 1: return f_false();
      case 2:
      case 3: return type_atom(type_terms_[below(type_terms_.size())]);
      case 4: return negation(formula(depth - 1));
      case 5: return conjunction(formula(depth - 1), formula(depth - 1));
      case 6: return disjunction(formula(depth - 1), formula(depth - 1));
      case 7: return implication(formula(depth - 1), formula(depth - 1));
      case 8: return diamond(sc(1), formula(depth - 1));
      case 9: return box(sc(1), formula(depth - 1));
      case 10: return next(formula(depth - 1));
      case 11: return eventually(formula(depth - 1));
      case 12: return always(formula(depth - 1));
      default: return until(formula(depth - 1), formula(depth - 1));
    }
  }

  wfsynth::TypeState state() {
    wfsynth::TypeState s;
    const auto n = below(4);
    for (std::size_t i = 0; i < n; ++i) s.insert(type_terms_[below(type_terms_.size())]);
    return s;
  }

  /// Arbitrary (not necessarily executable) trace with `length` actions.
  wfsynth::Trace trace(std::size_t length) {
    wfsynth::Trace t;
    t.states.push_back(state());
    for (std::size_t i = 0; i < length; ++i) {
      t.actions.push_back(model_.service(below(model_.size())).instance);
      t.states.push_back(state());
    }
    return t;
  }

 private:
  const wfsynth::DomainModel& model_;
  std::mt19937 rng_;
  std::vector<wfsynth::TermRef> type_terms_;
  std::vector<wfsynth::TermRef> service_terms_;
};

/// Decides `f` on `trace` from `position` by progression alone.
inline bool by_progression(wfsynth::Formula f, const wfsynth::Trace& trace, std::size_t position,
                           const wfsynth::Vocabulary& vocab) {
  for (std::size_t i = position; i < trace.actions.size(); ++i) {
    f = wfsynth::progress(f, trace.states[i], trace.actions[i], vocab);
    if (f.is_false()) return false;
  }
  return wfsynth::accepts_end(f, trace.states.back(), vocab);
}

}  // namespace testing
