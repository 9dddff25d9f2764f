#pragma once

// Semantic Linear Time Logic over finite traces.
//
// State predicates are type-taxonomy atoms; the next-step modalities <sc> and
// [sc] are indexed by boolean combinations of service-taxonomy terms. A trace
// of n actions has positions 0..n. <sc>phi is a strong next (false at the
// last position), [sc]phi is its weak dual (true at the last position), and
// F, G, U quantify over the remaining positions i..n.

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wfsynth/domain.hpp"
#include "wfsynth/ontology.hpp"
#include "wfsynth/type_state.hpp"

namespace wfsynth {

/// The two taxonomies formulas are resolved against.
struct Vocabulary {
  const Taxonomy* services = nullptr;
  const Taxonomy* types = nullptr;

  static Vocabulary of(const DomainModel& model) { return {&model.service_taxonomy(), &model.type_taxonomy()}; }
};

// ---------------------------------------------------------------------------

/// Boolean combination of service-taxonomy terms; indexes the modalities.
class ServiceConstraint {
 public:
  enum class Op : std::uint8_t { True, Atom, Not, And, Or };

  ServiceConstraint();  // true

  static ServiceConstraint any();
  static ServiceConstraint atom(TermRef ref);
  static ServiceConstraint negation(ServiceConstraint sc);
  static ServiceConstraint conjunction(ServiceConstraint a, ServiceConstraint b);
  static ServiceConstraint disjunction(ServiceConstraint a, ServiceConstraint b);

  Op op() const;
  TermRef ref() const;
  const ServiceConstraint& lhs() const;
  const ServiceConstraint& rhs() const;

  /// A service (its taxonomy instance) satisfies an atom when it is the atom
  /// itself or is filed under it.
  bool matches(const Taxonomy& services, TermRef service) const;

  friend bool operator==(const ServiceConstraint& a, const ServiceConstraint& b);

 private:
  struct Node;
  explicit ServiceConstraint(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Immutable SLTL formula. The factory functions fold constants
/// (true/false absorption) and nothing else.
class Formula {
 public:
  enum class Op : std::uint8_t { True, False, Type, Not, And, Or, Implies, Diamond, Box, Finally, Globally, Until };

  Formula();  // true

  Op op() const;
  TermRef type_ref() const;             // Type
  const ServiceConstraint& sc() const;  // Diamond, Box
  const Formula& lhs() const;           // binary operators; body of unary ones
  const Formula& rhs() const;           // binary operators
  const Formula& body() const { return lhs(); }

  bool is_true() const { return op() == Op::True; }
  bool is_false() const { return op() == Op::False; }

  /// Same underlying node; implies structural equality.
  bool same(const Formula& other) const { return node_ == other.node_; }

  /// Number of nodes in the syntax tree.
  std::size_t size() const;

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  // Placeholder for unused operand slots.
  static Formula none() { return Formula(std::shared_ptr<const Node>()); }
  static Formula make(Op op, TermRef atom, ServiceConstraint sc, Formula a, Formula b);

  friend Formula f_true();
  friend Formula f_false();
  friend Formula type_atom(TermRef);
  friend Formula negation(Formula);
  friend Formula conjunction(Formula, Formula);
  friend Formula disjunction(Formula, Formula);
  friend Formula implication(Formula, Formula);
  friend Formula diamond(ServiceConstraint, Formula);
  friend Formula box(ServiceConstraint, Formula);
  friend Formula eventually(Formula);
  friend Formula always(Formula);
  friend Formula until(Formula, Formula);

  std::shared_ptr<const Node> node_;
};

Formula f_true();
Formula f_false();
Formula type_atom(TermRef type);
Formula negation(Formula f);
Formula conjunction(Formula a, Formula b);
Formula disjunction(Formula a, Formula b);
Formula implication(Formula a, Formula b);
Formula diamond(ServiceConstraint sc, Formula body);
Formula box(ServiceConstraint sc, Formula body);
/// X phi, i.e. <true>phi.
Formula next(Formula body);
Formula eventually(Formula body);
Formula always(Formula body);
Formula until(Formula lhs, Formula rhs);

/// Right-folded conjunction; the empty list is true.
Formula conjoin(std::span<const Formula> formulas);

// ---------------------------------------------------------------------------
// Concrete syntax
//
//   phi ::= true | false | type(ref) | !phi | phi & phi | phi | phi | phi -> phi
//         | <sc>phi | [sc]phi | F phi | G phi | X phi | phi U phi | (phi)
//   sc  ::= true | ref | !sc | sc & sc | sc | sc | (sc)
//   ref ::= identifier | "display name"
//
// Binding, tightest first: unary, U, &, |, ->. U and -> associate to the right.

/// Throws ParseError (column of the offending token) or LookupError.
Formula parse_formula(std::string_view text, const Vocabulary& vocab);
ServiceConstraint parse_service_constraint(std::string_view text, const Vocabulary& vocab);

/// Prints in the concrete syntax; `parse_formula(to_string(f)) == f`.
std::string to_string(const Formula& f, const Vocabulary& vocab);
std::string to_string(const ServiceConstraint& sc, const Vocabulary& vocab);

// ---------------------------------------------------------------------------
// Semantics

/// A finite run: states[0..n] and the n actions between them (service
/// instances of the service taxonomy); actions[i] leads from states[i] to
/// states[i+1].
struct Trace {
  std::vector<TypeState> states;
  std::vector<TermRef> actions;

  std::size_t length() const { return actions.size(); }
};

/// Direct recursive evaluation at `position`. Throws std::out_of_range when
/// the position is past the end or the trace is malformed.
bool eval_trace(const Formula& f, const Trace& trace, std::size_t position, const Vocabulary& vocab);

/// Residual obligation after observing `state` and then `action`: `f` holds
/// at position i iff the result holds at i+1, for every continuation.
Formula progress(const Formula& f, const TypeState& state, TermRef action, const Vocabulary& vocab);

/// `f` on the single-position trace [state].
bool accepts_end(const Formula& f, const TypeState& state, const Vocabulary& vocab);

// ---------------------------------------------------------------------------
// Templates

enum class TemplateKind {
  Exclude,           // G(!<s>true) for every parameter
  AtMostOnce,        // G([s] G(!<s>true))
  FollowedBy,        // G(<s>true -> X F(<t>true))
  ExistsFollowedBy,  // F(<s> F(<t>true))
  ExistsThen,        // F(<a> F(<b>true))
  Exists,            // F(<a>true)
};

std::string_view to_string(TemplateKind kind);
/// Throws std::invalid_argument for an unknown name.
TemplateKind template_kind_from_string(std::string_view name);

/// Throws std::invalid_argument on an arity mismatch.
Formula make_template(TemplateKind kind, std::span<const ServiceConstraint> params);

// ---------------------------------------------------------------------------
// Constraint files
//
// One constraint per line: either a formula or `template: kind(arg, ...)`.
// A line may be bound to a name with `name = ...`. `#` starts a comment.

struct NamedConstraint {
  std::string name;  // empty for anonymous lines
  std::string text;
  Formula formula;
  std::size_t line = 0;
};

struct ConstraintSet {
  std::vector<NamedConstraint> entries;

  const NamedConstraint* find(std::string_view name) const;
  /// Conjunction of every entry.
  Formula conjunction() const;
};

/// Formula or `template: ...` expression.
Formula parse_constraint(std::string_view text, const Vocabulary& vocab);
/// Errors carry the file line number.
ConstraintSet parse_constraint_file(std::string_view text, const Vocabulary& vocab);
ConstraintSet load_constraint_file(const std::filesystem::path& path, const Vocabulary& vocab);

}  // namespace wfsynth
