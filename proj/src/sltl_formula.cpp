#include <stdexcept>

#include "wfsynth/sltl.hpp"

namespace wfsynth {

struct ServiceConstraint::Node {
  Op op;
  TermRef ref;
  ServiceConstraint a;
  ServiceConstraint b;
};

ServiceConstraint::ServiceConstraint() {
  static const auto leaf = std::shared_ptr<const Node>(new Node{Op::True, {}, ServiceConstraint(nullptr), ServiceConstraint(nullptr)});
  node_ = leaf;
}

ServiceConstraint ServiceConstraint::any() { return ServiceConstraint(); }

ServiceConstraint ServiceConstraint::atom(TermRef ref) {
  return ServiceConstraint(std::make_shared<const Node>(Node{Op::Atom, ref, ServiceConstraint(nullptr), ServiceConstraint(nullptr)}));
}

ServiceConstraint ServiceConstraint::negation(ServiceConstraint sc) {
  return ServiceConstraint(std::make_shared<const Node>(Node{Op::Not, {}, std::move(sc), ServiceConstraint(nullptr)}));
}

ServiceConstraint ServiceConstraint::conjunction(ServiceConstraint a, ServiceConstraint b) {
  if (a.op() == Op::True) return b;
  if (b.op() == Op::True) return a;
  return ServiceConstraint(std::make_shared<const Node>(Node{Op::And, {}, std::move(a), std::move(b)}));
}

ServiceConstraint ServiceConstraint::disjunction(ServiceConstraint a, ServiceConstraint b) {
  if (a.op() == Op::True) return a;
  if (b.op() == Op::True) return b;
  return ServiceConstraint(std::make_shared<const Node>(Node{Op::Or, {}, std::move(a), std::move(b)}));
}

ServiceConstraint::Op ServiceConstraint::op() const { return node_->op; }
TermRef ServiceConstraint::ref() const { return node_->ref; }
const ServiceConstraint& ServiceConstraint::lhs() const { return node_->a; }
const ServiceConstraint& ServiceConstraint::rhs() const { return node_->b; }

bool ServiceConstraint::matches(const Taxonomy& services, TermRef service) const {
  switch (node_->op) {
    case Op::True: return true;
    case Op::Atom: return services.satisfies(service, node_->ref);
    case Op::Not: return !node_->a.matches(services, service);
    case Op::And: return node_->a.matches(services, service) && node_->b.matches(services, service);
    case Op::Or: return node_->a.matches(services, service) || node_->b.matches(services, service);
  }
  return false;
}

bool operator==(const ServiceConstraint& a, const ServiceConstraint& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case ServiceConstraint::Op::True: return true;
    case ServiceConstraint::Op::Atom: return a.ref() == b.ref();
    case ServiceConstraint::Op::Not: return a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

// ---------------------------------------------------------------------------

struct Formula::Node {
  Op op;
  TermRef atom;
  ServiceConstraint sc;
  Formula a;
  Formula b;
  std::size_t size;
};

Formula::Formula() : node_(f_true().node_) {}

Formula Formula::make(Op op, TermRef atom, ServiceConstraint sc, Formula a, Formula b) {
  std::size_t size = 1;
  if (a.node_) size += a.size();
  if (b.node_) size += b.size();
  return Formula(std::make_shared<const Node>(Node{op, atom, std::move(sc), std::move(a), std::move(b), size}));
}

Formula::Op Formula::op() const { return node_->op; }
TermRef Formula::type_ref() const { return node_->atom; }
const ServiceConstraint& Formula::sc() const { return node_->sc; }
const Formula& Formula::lhs() const { return node_->a; }
const Formula& Formula::rhs() const { return node_->b; }
std::size_t Formula::size() const { return node_->size; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.op() != b.op() || a.size() != b.size()) return false;
  using Op = Formula::Op;
  switch (a.op()) {
    case Op::True:
    case Op::False: return true;
    case Op::Type: return a.type_ref() == b.type_ref();
    case Op::Not:
    case Op::Finally:
    case Op::Globally: return a.lhs() == b.lhs();
    case Op::Diamond:
    case Op::Box: return a.sc() == b.sc() && a.lhs() == b.lhs();
    default: return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Formula f_true() {
  static const Formula t(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Op::True, {}, ServiceConstraint(), Formula::none(),
                    Formula::none(), 1}));
  return t;
}

Formula f_false() {
  static const Formula f(std::make_shared<const Formula::Node>(
      Formula::Node{Formula::Op::False, {}, ServiceConstraint(), Formula::none(),
                    Formula::none(), 1}));
  return f;
}

Formula type_atom(TermRef type) {
  return Formula::make(Formula::Op::Type, type, {}, Formula::none(), Formula::none());
}

Formula negation(Formula f) {
  if (f.is_true()) return f_false();
  if (f.is_false()) return f_true();
  return Formula::make(Formula::Op::Not, {}, {}, std::move(f), Formula::none());
}

Formula conjunction(Formula a, Formula b) {
  if (a.is_false() || b.is_true()) return a;
  if (b.is_false() || a.is_true()) return b;
  return Formula::make(Formula::Op::And, {}, {}, std::move(a), std::move(b));
}

Formula disjunction(Formula a, Formula b) {
  if (a.is_true() || b.is_false()) return a;
  if (b.is_true() || a.is_false()) return b;
  return Formula::make(Formula::Op::Or, {}, {}, std::move(a), std::move(b));
}

Formula implication(Formula a, Formula b) {
  if (a.is_true()) return b;
  if (a.is_false() || b.is_true()) return f_true();
  if (b.is_false()) return negation(std::move(a));
  return Formula::make(Formula::Op::Implies, {}, {}, std::move(a), std::move(b));
}

Formula diamond(ServiceConstraint sc, Formula body) {
  if (body.is_false()) return body;
  return Formula::make(Formula::Op::Diamond, {}, std::move(sc), std::move(body), Formula::none());
}

Formula box(ServiceConstraint sc, Formula body) {
  if (body.is_true()) return body;
  return Formula::make(Formula::Op::Box, {}, std::move(sc), std::move(body), Formula::none());
}

Formula next(Formula body) { return diamond(ServiceConstraint::any(), std::move(body)); }

Formula eventually(Formula body) {
  if (body.is_true() || body.is_false()) return body;
  return Formula::make(Formula::Op::Finally, {}, {}, std::move(body), Formula::none());
}

Formula always(Formula body) {
  if (body.is_true() || body.is_false()) return body;
  return Formula::make(Formula::Op::Globally, {}, {}, std::move(body), Formula::none());
}

Formula until(Formula lhs, Formula rhs) {
  if (rhs.is_true() || rhs.is_false()) return rhs;
  if (lhs.is_false()) return rhs;
  if (lhs.is_true()) return eventually(std::move(rhs));
  return Formula::make(Formula::Op::Until, {}, {}, std::move(lhs), std::move(rhs));
}

Formula conjoin(std::span<const Formula> formulas) {
  if (formulas.empty()) return f_true();
  Formula acc = formulas.back();
  for (auto it = formulas.rbegin() + 1; it != formulas.rend(); ++it) acc = conjunction(*it, std::move(acc));
  return acc;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_plain_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (const char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == ':' || c == '.';
    if (!ok) return false;
  }
  return s != "true" && s != "false" && s != "type" && s != "F" && s != "G" && s != "X" && s != "U";
}

std::string print_ref(const Taxonomy& tax, TermRef ref) {
  const auto& id = tax.id(ref);
  if (is_plain_identifier(id)) return id;
  return "\"" + id + "\"";
}

// Binding levels: 0 ->, 1 |, 2 &, 3 U, 4 unary/atomic.
int level(const Formula& f) {
  switch (f.op()) {
    case Formula::Op::Implies: return 0;
    case Formula::Op::Or: return 1;
    case Formula::Op::And: return 2;
    case Formula::Op::Until: return 3;
    default: return 4;
  }
}

int sc_level(const ServiceConstraint& sc) {
  switch (sc.op()) {
    case ServiceConstraint::Op::Or: return 0;
    case ServiceConstraint::Op::And: return 1;
    default: return 2;
  }
}

void print_sc(std::string& out, const ServiceConstraint& sc, const Taxonomy& services, int min_level) {
  const bool paren = sc_level(sc) < min_level;
  if (paren) out += '(';
  switch (sc.op()) {
    case ServiceConstraint::Op::True: out += "true"; break;
    case ServiceConstraint::Op::Atom: out += print_ref(services, sc.ref()); break;
    case ServiceConstraint::Op::Not:
      out += '!';
      print_sc(out, sc.lhs(), services, 2);
      break;
    case ServiceConstraint::Op::And:
      print_sc(out, sc.lhs(), services, 1);
      out += " & ";
      print_sc(out, sc.rhs(), services, 2);
      break;
    case ServiceConstraint::Op::Or:
      print_sc(out, sc.lhs(), services, 0);
      out += " | ";
      print_sc(out, sc.rhs(), services, 1);
      break;
  }
  if (paren) out += ')';
}

void print(std::string& out, const Formula& f, const Vocabulary& vocab, int min_level) {
  const bool paren = level(f) < min_level;
  if (paren) out += '(';
  using Op = Formula::Op;
  switch (f.op()) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Type: out += "type(" + print_ref(*vocab.types, f.type_ref()) + ")"; break;
    case Op::Not:
      out += '!';
      print(out, f.body(), vocab, 4);
      break;
    case Op::And:
      print(out, f.lhs(), vocab, 2);
      out += " & ";
      print(out, f.rhs(), vocab, 3);
      break;
    case Op::Or:
      print(out, f.lhs(), vocab, 1);
      out += " | ";
      print(out, f.rhs(), vocab, 2);
      break;
    case Op::Implies:
      print(out, f.lhs(), vocab, 1);
      out += " -> ";
      print(out, f.rhs(), vocab, 0);
      break;
    case Op::Until:
      print(out, f.lhs(), vocab, 4);
      out += " U ";
      print(out, f.rhs(), vocab, 3);
      break;
    case Op::Diamond:
      if (f.sc().op() == ServiceConstraint::Op::True) {
        out += "X(";
        print(out, f.body(), vocab, 0);
        out += ')';
        break;
      }
      out += '<';
      print_sc(out, f.sc(), *vocab.services, 0);
      out += '>';
      print(out, f.body(), vocab, 4);
      break;
    case Op::Box:
      out += '[';
      print_sc(out, f.sc(), *vocab.services, 0);
      out += ']';
      print(out, f.body(), vocab, 4);
      break;
    case Op::Finally:
    case Op::Globally:
      out += f.op() == Op::Finally ? "F(" : "G(";
      print(out, f.body(), vocab, 0);
      out += ')';
      break;
  }
  if (paren) out += ')';
}

}  // namespace

std::string to_string(const Formula& f, const Vocabulary& vocab) {
  std::string out;
  print(out, f, vocab, 0);
  return out;
}

std::string to_string(const ServiceConstraint& sc, const Vocabulary& vocab) {
  std::string out;
  print_sc(out, sc, *vocab.services, 0);
  return out;
}

// ---------------------------------------------------------------------------
// Templates

std::string_view to_string(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::Exclude: return "exclude";
    case TemplateKind::AtMostOnce: return "at_most_once";
    case TemplateKind::FollowedBy: return "followed_by";
    case TemplateKind::ExistsFollowedBy: return "exists_followed_by";
    case TemplateKind::ExistsThen: return "exists_then";
    case TemplateKind::Exists: return "exists";
  }
  return "unknown";
}

TemplateKind template_kind_from_string(std::string_view name) {
  for (const auto kind : {TemplateKind::Exclude, TemplateKind::AtMostOnce, TemplateKind::FollowedBy,
                          TemplateKind::ExistsFollowedBy, TemplateKind::ExistsThen, TemplateKind::Exists}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown template '" + std::string(name) + "'");
}

Formula make_template(TemplateKind kind, std::span<const ServiceConstraint> params) {
  auto expect = [&](std::size_t n) {
    if (params.size() != n) {
      throw std::invalid_argument("template " + std::string(to_string(kind)) + " takes " + std::to_string(n) +
                                  " argument(s), got " + std::to_string(params.size()));
    }
  };
  auto occurs = [](const ServiceConstraint& s) { return diamond(s, f_true()); };

  switch (kind) {
    case TemplateKind::Exclude: {
      if (params.empty()) throw std::invalid_argument("template exclude needs at least one argument");
      std::vector<Formula> parts;
      for (const auto& s : params) parts.push_back(always(negation(occurs(s))));
      return conjoin(parts);
    }
    case TemplateKind::AtMostOnce:
      expect(1);
      return always(box(params[0], always(negation(occurs(params[0])))));
    case TemplateKind::FollowedBy:
      expect(2);
      return always(implication(occurs(params[0]), next(eventually(occurs(params[1])))));
    case TemplateKind::ExistsFollowedBy:
    case TemplateKind::ExistsThen:
      expect(2);
      return eventually(diamond(params[0], eventually(occurs(params[1]))));
    case TemplateKind::Exists:
      expect(1);
      return eventually(occurs(params[0]));
  }
  throw std::invalid_argument("unknown template kind");
}

}  // namespace wfsynth
