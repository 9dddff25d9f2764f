#include <stdexcept>

#include "wfsynth/sltl.hpp"

namespace wfsynth {

namespace {

bool holds_in_state(const TypeState& state, TermRef required, const Taxonomy& types) {
  for (const auto have : state)
    if (types.satisfies(have, required)) return true;
  return false;
}

bool eval_at(const Formula& f, const Trace& t, std::size_t i, const Vocabulary& v) {
  const std::size_t n = t.length();
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Type: return holds_in_state(t.states[i], f.type_ref(), *v.types);
    case Op::Not: return !eval_at(f.body(), t, i, v);
    case Op::And: return eval_at(f.lhs(), t, i, v) && eval_at(f.rhs(), t, i, v);
    case Op::Or: return eval_at(f.lhs(), t, i, v) || eval_at(f.rhs(), t, i, v);
    case Op::Implies: return !eval_at(f.lhs(), t, i, v) || eval_at(f.rhs(), t, i, v);
    case Op::Diamond:
      return i < n && f.sc().matches(*v.services, t.actions[i]) && eval_at(f.body(), t, i + 1, v);
    case Op::Box:
      return i == n || !f.sc().matches(*v.services, t.actions[i]) || eval_at(f.body(), t, i + 1, v);
    case Op::Finally:
      for (std::size_t j = i; j <= n; ++j)
        if (eval_at(f.body(), t, j, v)) return true;
      return false;
    case Op::Globally:
      for (std::size_t j = i; j <= n; ++j)
        if (!eval_at(f.body(), t, j, v)) return false;
      return true;
    case Op::Until:
      for (std::size_t j = i; j <= n; ++j) {
        if (eval_at(f.rhs(), t, j, v)) return true;
        if (!eval_at(f.lhs(), t, j, v)) return false;
      }
      return false;
  }
  return false;
}

// Rebuilds a binary node only when an operand changed, so obligations that
// survive a step keep their identity.
template <typename Make>
Formula rebuild(const Formula& f, Formula a, Formula b, Make make) {
  if (a.same(f.lhs()) && b.same(f.rhs())) return f;
  return make(std::move(a), std::move(b));
}

}  // namespace

bool eval_trace(const Formula& f, const Trace& trace, std::size_t position, const Vocabulary& vocab) {
  if (trace.states.size() != trace.actions.size() + 1)
    throw std::out_of_range("trace needs exactly one more state than actions");
  if (position > trace.length()) throw std::out_of_range("trace position past the end");
  return eval_at(f, trace, position, vocab);
}

Formula progress(const Formula& f, const TypeState& state, TermRef action, const Vocabulary& vocab) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::True:
    case Op::False: return f;
    case Op::Type: return holds_in_state(state, f.type_ref(), *vocab.types) ? f_true() : f_false();
    case Op::Not: return negation(progress(f.body(), state, action, vocab));
    case Op::And:
      return rebuild(f, progress(f.lhs(), state, action, vocab), progress(f.rhs(), state, action, vocab),
                     [](Formula a, Formula b) { return conjunction(std::move(a), std::move(b)); });
    case Op::Or:
      return rebuild(f, progress(f.lhs(), state, action, vocab), progress(f.rhs(), state, action, vocab),
                     [](Formula a, Formula b) { return disjunction(std::move(a), std::move(b)); });
    case Op::Implies:
      return rebuild(f, progress(f.lhs(), state, action, vocab), progress(f.rhs(), state, action, vocab),
                     [](Formula a, Formula b) { return implication(std::move(a), std::move(b)); });
    case Op::Diamond: return f.sc().matches(*vocab.services, action) ? f.body() : f_false();
    case Op::Box: return f.sc().matches(*vocab.services, action) ? f.body() : f_true();
    case Op::Finally: {
      auto now = progress(f.body(), state, action, vocab);
      if (now.is_true()) return now;
      return disjunction(std::move(now), f);
    }
    case Op::Globally: {
      auto now = progress(f.body(), state, action, vocab);
      if (now.is_false()) return now;
      return conjunction(std::move(now), f);
    }
    case Op::Until: {
      auto done = progress(f.rhs(), state, action, vocab);
      if (done.is_true()) return done;
      return disjunction(std::move(done), conjunction(progress(f.lhs(), state, action, vocab), f));
    }
  }
  return f;
}

bool accepts_end(const Formula& f, const TypeState& state, const Vocabulary& vocab) {
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::True: return true;
    case Op::False: return false;
    case Op::Type: return holds_in_state(state, f.type_ref(), *vocab.types);
    case Op::Not: return !accepts_end(f.body(), state, vocab);
    case Op::And: return accepts_end(f.lhs(), state, vocab) && accepts_end(f.rhs(), state, vocab);
    case Op::Or: return accepts_end(f.lhs(), state, vocab) || accepts_end(f.rhs(), state, vocab);
    case Op::Implies: return !accepts_end(f.lhs(), state, vocab) || accepts_end(f.rhs(), state, vocab);
    case Op::Diamond: return false;
    case Op::Box: return true;
    case Op::Finally:
    case Op::Globally: return accepts_end(f.body(), state, vocab);
    case Op::Until: return accepts_end(f.rhs(), state, vocab);
  }
  return false;
}

}  // namespace wfsynth
