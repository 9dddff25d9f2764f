#include "wfsynth/ontology.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <unordered_set>

namespace wfsynth {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Drops a trailing `! comment` and `{qualifier}` block from a tag value.
std::string_view strip_annotations(std::string_view value) {
  if (const auto bang = value.find('!'); bang != std::string_view::npos) value = value.substr(0, bang);
  value = trim(value);
  if (!value.empty() && value.back() == '}') {
    if (const auto brace = value.rfind('{'); brace != std::string_view::npos) value = value.substr(0, brace);
  }
  return trim(value);
}

struct PendingTerm {
  OboTerm term;
  std::size_t line = 0;
  bool has_id = false;
  std::size_t id_line = 0;
  std::vector<std::size_t> parent_lines;
};

}  // namespace

const OboTerm* OntologySource::find(std::string_view id) const {
  const auto it = std::find_if(terms.begin(), terms.end(), [&](const OboTerm& t) { return t.id == id; });
  return it == terms.end() ? nullptr : &*it;
}

OntologySource parse_obo(std::istream& in) {
  std::vector<PendingTerm> pending;
  bool in_term = false;
  std::string raw;
  std::size_t line_no = 0;

  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      in_term = line == "[Term]";
      if (in_term) pending.push_back(PendingTerm{{}, line_no, false, 0, {}});
      continue;
    }
    if (!in_term || line.front() == '!') continue;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) continue;
    const auto tag = trim(line.substr(0, colon));
    const auto value = trim(line.substr(colon + 1));
    auto& cur = pending.back();

    if (tag == "id") {
      if (cur.has_id) throw ParseError("stanza declares more than one id", line_no);
      const auto id = strip_annotations(value);
      if (id.empty()) throw ParseError("empty id", line_no);
      cur.term.id = std::string(id);
      cur.has_id = true;
      cur.id_line = line_no;
    } else if (tag == "name") {
      cur.term.name = std::string(value);
    } else if (tag == "is_a") {
      const auto parent = strip_annotations(value);
      if (parent.empty()) throw ParseError("empty is_a target", line_no);
      cur.term.parents.emplace_back(parent);
      cur.parent_lines.push_back(line_no);
    } else if (tag == "is_obsolete") {
      cur.term.obsolete = strip_annotations(value) == "true";
    }
  }

  std::unordered_map<std::string, const PendingTerm*> by_id;
  for (const auto& p : pending) {
    if (!p.has_id) throw ParseError("[Term] stanza without id", p.line);
    if (!by_id.emplace(p.term.id, &p).second) throw ParseError("duplicate term id '" + p.term.id + "'", p.id_line);
  }

  OntologySource source;
  for (const auto& p : pending) {
    if (p.term.obsolete) continue;
    OboTerm term = p.term;
    term.parents.clear();
    for (std::size_t i = 0; i < p.term.parents.size(); ++i) {
      const auto& parent = p.term.parents[i];
      const auto it = by_id.find(parent);
      if (it == by_id.end())
        throw ParseError("is_a references undefined term '" + parent + "'", p.parent_lines[i]);
      if (it->second->term.obsolete) continue;
      if (std::find(term.parents.begin(), term.parents.end(), parent) == term.parents.end())
        term.parents.push_back(parent);
    }
    source.terms.push_back(std::move(term));
  }
  return source;
}

OntologySource parse_obo(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_obo(in);
}

std::string to_obo(const OntologySource& source) {
  std::ostringstream out;
  out << "format-version: 1.2\n";
  for (const auto& term : source.terms) {
    out << "\n[Term]\nid: " << term.id << '\n';
    if (!term.name.empty()) out << "name: " << term.name << '\n';
    for (const auto& parent : term.parents) {
      out << "is_a: " << parent;
      if (const auto* p = source.find(parent); p && !p->name.empty()) out << " ! " << p->name;
      out << '\n';
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------

std::string_view to_string(TermKind kind) { return kind == TermKind::Class ? "class" : "instance"; }

TermKind term_kind_from_string(std::string_view text) {
  if (text == "class") return TermKind::Class;
  if (text == "instance") return TermKind::Instance;
  throw ParseError("unknown term kind '" + std::string(text) + "' (expected class or instance)", 0);
}

Taxonomy Taxonomy::build(const OntologySource& source, std::string_view root) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < source.terms.size(); ++i) index.emplace(source.terms[i].id, i);
  const auto root_it = index.find(root);
  if (root_it == index.end()) throw LookupError("root term '" + std::string(root) + "' not found");

  // Fixpoint over parent links: a term is retained once any parent is.
  std::vector<char> retained(source.terms.size(), 0);
  retained[root_it->second] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < source.terms.size(); ++i) {
      if (retained[i]) continue;
      for (const auto& parent : source.terms[i].parents) {
        const auto it = index.find(parent);
        if (it != index.end() && retained[it->second]) {
          retained[i] = 1;
          changed = true;
          break;
        }
      }
    }
  }

  Taxonomy tax;
  std::unordered_map<std::string_view, std::uint32_t> class_index;
  for (std::size_t i = 0; i < source.terms.size(); ++i) {
    if (!retained[i]) continue;
    class_index.emplace(source.terms[i].id, static_cast<std::uint32_t>(tax.classes_.size()));
    tax.classes_.push_back(ClassInfo{source.terms[i].id, source.terms[i].name, {}});
  }
  for (std::size_t i = 0, c = 0; i < source.terms.size(); ++i) {
    if (!retained[i]) continue;
    if (i != root_it->second) {
      for (const auto& parent : source.terms[i].parents) {
        if (const auto it = class_index.find(parent); it != class_index.end())
          tax.classes_[c].parents.push_back(it->second);
      }
    }
    ++c;
  }
  tax.root_ = class_index.at(root);
  tax.index_and_validate();
  return tax;
}

void Taxonomy::index_and_validate() {
  by_id_.clear();
  for (std::uint32_t i = 0; i < classes_.size(); ++i) {
    if (!by_id_.emplace(classes_[i].id, TermRef::make_class(i)).second)
      throw ModelError("duplicate class id '" + classes_[i].id + "'");
  }
  for (std::uint32_t i = 0; i < instances_.size(); ++i) {
    if (!by_id_.emplace(instances_[i].id, TermRef::make_instance(i)).second)
      throw ModelError("instance id '" + instances_[i].id + "' is already in use");
  }
  if (!classes_[root_].parents.empty()) throw ModelError("root class '" + classes_[root_].id + "' has parents");

  // Topological order (parents first) doubles as the cycle check.
  const auto n = classes_.size();
  std::vector<std::vector<std::uint32_t>> children(n);
  std::vector<std::size_t> pending_parents(n, 0);
  for (std::uint32_t c = 0; c < n; ++c) {
    pending_parents[c] = classes_[c].parents.size();
    for (const auto p : classes_[c].parents) children[p].push_back(c);
  }
  std::vector<std::uint32_t> order;
  order.reserve(n);
  for (std::uint32_t c = 0; c < n; ++c)
    if (pending_parents[c] == 0) order.push_back(c);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (const auto child : children[order[head]])
      if (--pending_parents[child] == 0) order.push_back(child);
  }
  if (order.size() != n) {
    for (std::uint32_t c = 0; c < n; ++c)
      if (pending_parents[c] != 0) throw ModelError("is_a cycle through class '" + classes_[c].id + "'");
  }

  const std::size_t words = (n + 63) / 64;
  class_ancestors_.assign(n, Bits(words, 0));
  for (const auto c : order) {
    auto& bits = class_ancestors_[c];
    bits[c >> 6] |= std::uint64_t{1} << (c & 63);
    for (const auto p : classes_[c].parents)
      for (std::size_t w = 0; w < words; ++w) bits[w] |= class_ancestors_[p][w];
  }
  for (std::uint32_t c = 0; c < n; ++c) {
    if (!test(class_ancestors_[c], root_))
      throw ModelError("class '" + classes_[c].id + "' does not reach root '" + classes_[root_].id + "'");
  }

  instance_ancestors_.clear();
  for (const auto& inst : instances_) {
    if (inst.member_of.empty()) throw ModelError("instance '" + inst.id + "' belongs to no class");
    instance_ancestors_.push_back(closure_of(inst.member_of));
  }
}

Taxonomy::Bits Taxonomy::closure_of(std::span<const std::uint32_t> classes) const {
  Bits bits((classes_.size() + 63) / 64, 0);
  for (const auto c : classes)
    for (std::size_t w = 0; w < bits.size(); ++w) bits[w] |= class_ancestors_[c][w];
  return bits;
}

Taxonomy Taxonomy::from_json(const nlohmann::json& doc) {
  try {
    Taxonomy tax;
    std::unordered_map<std::string, std::uint32_t> ids;
    const auto& classes = doc.at("classes");
    for (const auto& c : classes) {
      const auto id = c.at("id").get<std::string>();
      if (!ids.emplace(id, static_cast<std::uint32_t>(tax.classes_.size())).second)
        throw ModelError("duplicate class id '" + id + "'");
      tax.classes_.push_back(ClassInfo{id, c.value("name", std::string{}), {}});
    }
    auto class_of = [&](const std::string& id, const std::string& context) {
      const auto it = ids.find(id);
      if (it == ids.end()) throw LookupError(context + " references unknown class '" + id + "'");
      return it->second;
    };
    std::size_t i = 0;
    for (const auto& c : classes) {
      if (const auto it = c.find("parents"); it != c.end()) {
        for (const auto& p : *it) tax.classes_[i].parents.push_back(class_of(p.get<std::string>(), "class '" + tax.classes_[i].id + "'"));
      }
      ++i;
    }
    tax.root_ = class_of(doc.at("root").get<std::string>(), "root");
    if (const auto it = doc.find("instances"); it != doc.end()) {
      for (const auto& inst : *it) {
        InstanceInfo info{inst.at("id").get<std::string>(), {}};
        for (const auto& m : inst.at("member_of")) info.member_of.push_back(class_of(m.get<std::string>(), "instance '" + info.id + "'"));
        tax.instances_.push_back(std::move(info));
      }
    }
    tax.index_and_validate();
    return tax;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("taxonomy document: ") + e.what(), 0);
  }
}

nlohmann::ordered_json Taxonomy::to_json() const {
  nlohmann::ordered_json doc;
  doc["root"] = classes_[root_].id;
  auto classes = nlohmann::ordered_json::array();
  for (const auto& c : classes_) {
    nlohmann::ordered_json entry;
    entry["id"] = c.id;
    entry["name"] = c.name;
    auto parents = nlohmann::ordered_json::array();
    for (const auto p : c.parents) parents.push_back(classes_[p].id);
    entry["parents"] = std::move(parents);
    classes.push_back(std::move(entry));
  }
  doc["classes"] = std::move(classes);
  auto instances = nlohmann::ordered_json::array();
  for (const auto& inst : instances_) {
    nlohmann::ordered_json entry;
    entry["id"] = inst.id;
    auto members = nlohmann::ordered_json::array();
    for (const auto m : inst.member_of) members.push_back(classes_[m].id);
    entry["member_of"] = std::move(members);
    instances.push_back(std::move(entry));
  }
  doc["instances"] = std::move(instances);
  return doc;
}

TermRef Taxonomy::add_instance(std::string id, std::span<const std::string> member_of) {
  std::vector<std::uint32_t> classes;
  for (const auto& m : member_of) {
    const auto cls = find_class(m);
    if (!cls) throw LookupError("instance '" + id + "': unknown class '" + m + "'");
    classes.push_back(*cls);
  }
  return add_instance(std::move(id), std::span<const std::uint32_t>(classes));
}

TermRef Taxonomy::add_instance(std::string id, std::span<const std::uint32_t> member_of) {
  if (member_of.empty()) throw ModelError("instance '" + id + "' belongs to no class");
  for (const auto c : member_of)
    if (c >= classes_.size()) throw LookupError("instance '" + id + "': class index out of range");
  if (by_id_.contains(id)) throw ModelError("id '" + id + "' is already in use");
  const auto ref = TermRef::make_instance(static_cast<std::uint32_t>(instances_.size()));
  std::vector<std::uint32_t> members(member_of.begin(), member_of.end());
  instance_ancestors_.push_back(closure_of(members));
  by_id_.emplace(id, ref);
  instances_.push_back(InstanceInfo{std::move(id), std::move(members)});
  return ref;
}

std::optional<TermRef> Taxonomy::find(std::string_view id) const {
  const auto it = by_id_.find(std::string(id));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> Taxonomy::find_class(std::string_view id) const {
  const auto ref = find(id);
  if (!ref || !ref->is_class()) return std::nullopt;
  return ref->index;
}

TermRef Taxonomy::resolve(std::string_view id) const {
  if (const auto ref = find(id)) return *ref;
  throw LookupError("unknown term '" + std::string(id) + "' in taxonomy rooted at '" + classes_[root_].id + "'");
}

std::uint32_t Taxonomy::resolve_class(std::string_view id) const {
  const auto ref = resolve(id);
  if (!ref.is_class()) throw LookupError("'" + std::string(id) + "' is an instance, not a class");
  return ref.index;
}

std::vector<TermRef> Taxonomy::find_by_name(std::string_view name) const {
  std::vector<TermRef> hits;
  for (std::uint32_t i = 0; i < classes_.size(); ++i)
    if (classes_[i].name == name) hits.push_back(TermRef::make_class(i));
  for (std::uint32_t i = 0; i < instances_.size(); ++i)
    if (instances_[i].id == name) hits.push_back(TermRef::make_instance(i));
  return hits;
}

const std::string& Taxonomy::id(TermRef ref) const {
  return ref.is_class() ? classes_.at(ref.index).id : instances_.at(ref.index).id;
}

const std::string& Taxonomy::name(TermRef ref) const {
  if (ref.is_class()) {
    const auto& c = classes_.at(ref.index);
    return c.name.empty() ? c.id : c.name;
  }
  return instances_.at(ref.index).id;
}

bool Taxonomy::is_subsumed(std::uint32_t a, std::uint32_t b) const {
  if (a >= classes_.size() || b >= classes_.size()) throw LookupError("class index out of range");
  return test(class_ancestors_[a], b);
}

bool Taxonomy::is_subsumed(std::string_view a, std::string_view b) const {
  return is_subsumed(resolve_class(a), resolve_class(b));
}

bool Taxonomy::satisfies(TermRef provided, TermRef required) const {
  if (required.is_instance()) return provided == required;
  return test(bits_of(provided), required.index);
}

std::vector<std::uint32_t> Taxonomy::ancestors(TermRef ref) const {
  std::vector<std::uint32_t> out;
  const auto& bits = bits_of(ref);
  for (std::uint32_t c = 0; c < classes_.size(); ++c)
    if (test(bits, c)) out.push_back(c);
  return out;
}

}  // namespace wfsynth
