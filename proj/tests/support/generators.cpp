#include "generators.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "vdfm/lexer.hpp"
#include "vdfm/schema.hpp"
#include "vdfm/semantics.hpp"

namespace vdfm::testing
{

namespace
{

std::size_t pick(Rng & rng, std::size_t lo, std::size_t hi)
{
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng & rng, double p = 0.5)
{
  return std::bernoulli_distribution(p)(rng);
}

template <class T>
const T & one_of(Rng & rng, const std::vector<T> & v)
{
  return v[pick(rng, 0, v.size() - 1)];
}

GroupKind random_group(Rng & rng, std::size_t children, bool allow_empty = true)
{
  std::vector<GroupKind> g = {GroupKind::And, GroupKind::Mandatory};
  if (children >= 2) {
    g.push_back(GroupKind::Xor);
    g.push_back(GroupKind::Or);
    g.push_back(GroupKind::Xor);
  }
  if (allow_empty) {
    g.push_back(GroupKind::Empty);
  }
  return one_of(rng, g);
}

FeatureNode def(OpAction action, OpTarget target, const std::string & name, const std::string & payload)
{
  FeatureNode d;
  d.kind = target == OpTarget::Field ? NodeKind::FieldDef : NodeKind::IcDef;
  d.name = name;
  d.ops.push_back(EvolutionOp::make(action, target, name, payload));
  return d;
}

const std::vector<std::string> kTypes = {"string", "float", "number", "integer", "text", "date", "boolean"};

// Appends `length` revisions to `version`, replaying an item set as it goes so
// that every op is legal. `prefix` keeps item names unique per version.
void grow_chain(Rng & rng, FeatureNode & version, std::size_t length, const std::string & prefix)
{
  std::vector<std::pair<std::string, bool>> live;  // name, is_field
  std::size_t fresh = 0;
  for (std::size_t r = 1; r <= length; ++r) {
    FeatureNode rev;
    rev.kind = NodeKind::Revision;
    rev.name = "R" + std::to_string(r);
    rev.group = GroupKind::And;
    std::set<std::string> touched;
    const std::size_t ops = pick(rng, 1, 3);
    for (std::size_t k = 0; k < ops; ++k) {
      const bool first = r == 1;
      const std::size_t choice = first || live.empty() ? 0 : pick(rng, 0, 3);
      if (choice <= 1) {
        const bool field = coin(rng, 0.75);
        std::string name = prefix + (field ? "f" : "c") + std::to_string(++fresh);
        if (!field && coin(rng)) {
          name += "-Pk";
        }
        rev.children.push_back(
          def(OpAction::Add, field ? OpTarget::Field : OpTarget::Ic, name,
              field ? one_of(rng, kTypes) : (coin(rng) ? "unique not null" : "x > 0")));
        live.emplace_back(name, field);
        touched.insert(name);
        continue;
      }
      std::vector<std::size_t> candidates;
      for (std::size_t i = 0; i < live.size(); ++i) {
        if (!touched.contains(live[i].first)) {
          candidates.push_back(i);
        }
      }
      if (candidates.empty()) {
        continue;
      }
      const std::size_t i = one_of(rng, candidates);
      const auto [name, field] = live[i];
      touched.insert(name);
      const OpTarget target = field ? OpTarget::Field : OpTarget::Ic;
      if (choice == 2) {
        rev.children.push_back(def(OpAction::Delete, target, name, {}));
        live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        rev.children.push_back(def(OpAction::Modify, target, name, field ? one_of(rng, kTypes) : "x > 0"));
      }
    }
    if (rev.children.empty()) {
      const std::string name = prefix + "f" + std::to_string(++fresh);
      rev.children.push_back(def(OpAction::Add, OpTarget::Field, name, "string"));
      live.emplace_back(name, true);
    }
    version.children.push_back(std::move(rev));
  }
}

ModelDocument empty_vcfm(const std::string & name)
{
  ModelDocument doc;
  doc.kind = ModelKind::Vcfm;
  doc.name = name;
  doc.sdfm = SchemaDefinitionModel{};
  doc.sdfm->name = name + "-Def";
  doc.srfm = SchemaRelationModel{};
  doc.srfm->name = name + "-Rel";
  return doc;
}

ModelDocument model_candidate(Rng & rng, const ModelShape & shape)
{
  ModelDocument doc = empty_vcfm("M");
  std::size_t budget = pick(rng, std::min<std::size_t>(6, shape.max_features), std::max<std::size_t>(3, shape.max_features));
  const std::vector<std::string> rel_names = {"A", "B", "C", "D"};
  for (std::size_t r = 0; r < rel_names.size() && budget >= 3; ++r) {
    FeatureNode rel;
    rel.kind = NodeKind::Relation;
    rel.name = rel_names[r];
    budget -= 1;
    const std::size_t versions = pick(rng, 1, std::min<std::size_t>(3, budget / 2));
    for (std::size_t v = 1; v <= versions && budget >= 2; ++v) {
      FeatureNode ver;
      ver.kind = NodeKind::Version;
      ver.name = "V" + std::to_string(v);
      budget -= 1;
      const std::size_t reserve = (versions - v) * 2;
      const std::size_t max_revs = std::min<std::size_t>(r == 0 ? 2 : 3, budget > reserve ? budget - reserve : 1);
      const std::size_t revs = pick(rng, 1, std::max<std::size_t>(1, max_revs));
      budget -= revs;
      grow_chain(rng, ver, revs, rel.name + "-" + ver.name + "-");
      ver.group = random_group(rng, ver.children.size());
      rel.children.push_back(std::move(ver));
    }
    rel.group = random_group(rng, rel.children.size());
    doc.sdfm->relations.push_back(std::move(rel));
    if (coin(rng, 0.15)) {
      break;
    }
  }
  doc.sdfm->group = random_group(rng, doc.sdfm->relations.size(), false);

  const auto selectables = enumerate_selectables(doc);
  std::vector<FeaturePath> revisions;
  for (const auto & p : selectables) {
    if (p.depth() == 3) {
      revisions.push_back(p);
    }
  }
  const std::size_t constraints = pick(rng, 0, shape.max_constraints);
  for (std::size_t k = 0; k < constraints; ++k) {
    CrossTreeConstraint c;
    const std::size_t kind = pick(rng, 0, 6);
    if (kind <= 2) {
      c.kind = ConstraintKind::Imply;
    } else if (kind <= 4) {
      c.kind = ConstraintKind::Exclude;
    } else {
      c.kind = ConstraintKind::Import;
    }
    if (c.kind == ConstraintKind::Import) {
      c.source = one_of(rng, revisions);
      c.target = one_of(rng, revisions);
      if (c.source.segments()[0] == c.target.segments()[0]) {
        continue;
      }
      Replayer replay(doc, false);
      const auto & exported = replay.schema_at(c.target);
      std::vector<std::string> names;
      for (const auto * items : {&exported.fields, &exported.constraints}) {
        for (const auto & i : *items) {
          names.push_back(i.name);
        }
      }
      if (names.empty()) {
        continue;
      }
      c.imported_items.push_back(one_of(rng, names));
      if (names.size() > 1 && coin(rng, 0.3)) {
        const auto & second = one_of(rng, names);
        if (second != c.imported_items.front()) {
          c.imported_items.push_back(second);
        }
      }
    } else {
      c.source = one_of(rng, selectables);
      c.target = one_of(rng, selectables);
    }
    doc.srfm->constraints.push_back(std::move(c));
  }
  return doc;
}

// ---- syntactic documents --------------------------------------------------

std::string ident(Rng & rng)
{
  static const std::vector<std::string> heads = {"St", "Co", "Rel", "x", "Name", "Q", "emp", "Dept", "V", "R"};
  static const std::vector<std::string> tails = {"", "1", "-Pk", "-Fk", "_a", "-b2", "9", "-Id", "Z"};
  while (true) {
    std::string s = one_of(rng, heads) + one_of(rng, tails);
    if (coin(rng, 0.3)) {
      s += one_of(rng, tails);
    }
    if (is_identifier(s) && !is_keyword(s)) {
      return s;
    }
  }
}

std::string value(Rng & rng)
{
  static const std::vector<std::string> values = {
    "string", "float", "unique not null", "Add", "end", "x > 0 and y < 3", "say \"hi\"", "back\\slash",
    "Ünïcødé", "a, b ; c", "// not a comment", "(paren)", "-", "7",
  };
  return coin(rng) ? ident(rng) : one_of(rng, values);
}

std::string comment(Rng & rng)
{
  static const std::vector<std::string> words = {"note", "TODO", "x->y", "\"q\"", "Relation", "[xor]", ";", "é"};
  std::string c = "//";
  const std::size_t n = pick(rng, 0, 4);
  for (std::size_t i = 0; i < n; ++i) {
    c += " " + one_of(rng, words);
  }
  return c;
}

Trivia trivia(Rng & rng)
{
  Trivia t;
  if (coin(rng, 0.15)) {
    const std::size_t n = pick(rng, 1, 2);
    for (std::size_t i = 0; i < n; ++i) {
      t.leading.push_back(comment(rng));
    }
  }
  if (coin(rng, 0.15)) {
    t.trailing = comment(rng);
  }
  return t;
}

FeaturePath path(Rng & rng, std::size_t min_depth, std::size_t max_depth)
{
  std::vector<std::string> seg;
  const std::size_t d = pick(rng, min_depth, max_depth);
  for (std::size_t i = 0; i < d; ++i) {
    seg.push_back(ident(rng));
  }
  return FeaturePath(std::move(seg));
}

std::vector<Attribute> op_attrs(Rng & rng, OpAction action, OpTarget target)
{
  std::vector<Attribute> attrs;
  for (auto name : required_attributes(action, target)) {
    attrs.push_back({std::string(name), value(rng)});
  }
  return attrs;
}

FeatureNode random_def(Rng & rng)
{
  FeatureNode d;
  const bool field = coin(rng);
  d.kind = field ? NodeKind::FieldDef : NodeKind::IcDef;
  d.name = ident(rng);
  d.trivia = trivia(rng);
  const std::size_t ops = pick(rng, 0, 2);
  for (std::size_t i = 0; i < ops; ++i) {
    EvolutionOp op;
    op.action = static_cast<OpAction>(pick(rng, 0, 2));
    op.target = field ? OpTarget::Field : OpTarget::Ic;
    op.attrs = op_attrs(rng, op.action, op.target);
    op.trivia = trivia(rng);
    d.ops.push_back(std::move(op));
  }
  return d;
}

FeatureNode random_node(Rng & rng, NodeKind kind, bool allow_empty_group)
{
  FeatureNode n;
  n.kind = kind;
  n.name = ident(rng);
  n.trivia = trivia(rng);
  const std::size_t kids = pick(rng, 0, kind == NodeKind::Revision ? 3 : 2);
  for (std::size_t i = 0; i < kids; ++i) {
    if (kind == NodeKind::Revision) {
      n.children.push_back(random_def(rng));
    } else {
      n.children.push_back(random_node(
        rng, kind == NodeKind::Relation ? NodeKind::Version : NodeKind::Revision, allow_empty_group));
    }
  }
  n.group = random_group(rng, n.children.size(), allow_empty_group);
  return n;
}

ModelDocument random_model(Rng & rng, ModelKind kind, bool top)
{
  ModelDocument doc;
  doc.kind = kind;
  doc.name = ident(rng);
  doc.trivia = trivia(rng);
  doc.footer_trivia = trivia(rng);
  if (kind == ModelKind::Vdfm) {
    const std::size_t subs = pick(rng, 0, 3);
    for (std::size_t i = 0; i < subs; ++i) {
      doc.sub_models.push_back(random_model(rng, static_cast<ModelKind>(pick(rng, 1, 3)), false));
    }
  } else {
    if (kind != ModelKind::Vcfm) {
      const std::string input = ident(rng);
      const std::size_t needs = pick(rng, 1, 2);
      for (std::size_t i = 0; i < needs; ++i) {
        NeedsClause nc;
        nc.model = input;
        nc.trivia = trivia(rng);
        const std::size_t n = pick(rng, 1, 3);
        for (std::size_t k = 0; k < n; ++k) {
          nc.features.push_back(path(rng, 1, 3));
        }
        doc.needs.push_back(std::move(nc));
      }
    }
    doc.sdfm = SchemaDefinitionModel{};
    doc.sdfm->name = ident(rng);
    doc.sdfm->trivia = trivia(rng);
    doc.sdfm->footer_trivia = trivia(rng);
    const std::size_t rels = pick(rng, 0, 3);
    for (std::size_t i = 0; i < rels; ++i) {
      doc.sdfm->relations.push_back(random_node(rng, NodeKind::Relation, true));
    }
    doc.sdfm->group = random_group(rng, doc.sdfm->relations.size(), false);
    doc.srfm = SchemaRelationModel{};
    doc.srfm->name = ident(rng);
    doc.srfm->trivia = trivia(rng);
    doc.srfm->footer_trivia = trivia(rng);
    const std::size_t cons = pick(rng, 0, 4);
    for (std::size_t i = 0; i < cons; ++i) {
      CrossTreeConstraint c;
      c.kind = static_cast<ConstraintKind>(pick(rng, 0, 2));
      c.source = path(rng, 1, 4);
      c.target = path(rng, 1, 4);
      c.trivia = trivia(rng);
      if (c.kind == ConstraintKind::Import) {
        const std::size_t items = pick(rng, 1, 3);
        for (std::size_t k = 0; k < items; ++k) {
          c.imported_items.push_back(ident(rng));
        }
      } else if (coin(rng, 0.3)) {
        c.attrs.push_back({ident(rng), value(rng)});
        if (coin(rng)) {
          c.attrs.push_back({ident(rng), value(rng)});
        }
      }
      doc.srfm->constraints.push_back(std::move(c));
    }
    if (kind != ModelKind::Vcfm) {
      const std::size_t locals = pick(rng, 0, 2);
      for (std::size_t i = 0; i < locals; ++i) {
        LocalFeature l;
        const bool version = kind == ModelKind::Vlfm && coin(rng);
        l.path = path(rng, version ? 2 : 3, version ? 2 : 3);
        l.node = random_node(rng, version ? NodeKind::Version : NodeKind::Revision, false);
        l.node.name = l.path.leaf();
        if (version) {
          doc.local_versions.push_back(std::move(l));
        } else {
          doc.local_revisions.push_back(std::move(l));
        }
      }
    }
  }
  if (top && coin(rng, 0.2)) {
    doc.trailing_comments.push_back(comment(rng));
  }
  return doc;
}

}  // namespace

ModelDocument random_valid_model(Rng & rng, const ModelShape & shape)
{
  while (true) {
    ModelDocument doc = model_candidate(rng, shape);
    if (enumerate_selectables(doc).size() > shape.max_features) {
      continue;
    }
    if (validate(doc).ok()) {
      return doc;
    }
  }
}

ModelDocument random_chain(Rng & rng, std::size_t length)
{
  ModelDocument doc = empty_vcfm("Chain");
  FeatureNode rel;
  rel.kind = NodeKind::Relation;
  rel.name = "T";
  rel.group = GroupKind::Mandatory;
  FeatureNode ver;
  ver.kind = NodeKind::Version;
  ver.name = "V1";
  grow_chain(rng, ver, length, "T-");
  ver.group = GroupKind::And;
  rel.children.push_back(std::move(ver));
  doc.sdfm->relations.push_back(std::move(rel));
  return doc;
}

ModelDocument random_document(Rng & rng)
{
  return random_model(rng, static_cast<ModelKind>(pick(rng, 0, 3)), true);
}

std::string perturb_layout(const std::string & canonical, Rng & rng)
{
  std::string out;
  const bool crlf = coin(rng, 0.2);
  std::size_t start = 0;
  while (start < canonical.size()) {
    std::size_t end = canonical.find('\n', start);
    if (end == std::string::npos) {
      end = canonical.size();
    }
    std::string line = canonical.substr(start, end - start);
    start = end + 1;
    if (line.find('"') == std::string::npos && line.find("//") == std::string::npos) {
      std::string spaced;
      for (char c : line) {
        if (c == ' ') {
          spaced += one_of(rng, std::vector<std::string>{" ", "  ", "\t", " \t "});
        } else {
          spaced += c;
        }
      }
      line = std::move(spaced);
    }
    out += line + (crlf ? "\r\n" : "\n");
    if (coin(rng, 0.1)) {
      out += crlf ? "\r\n" : "\n";
    }
  }
  return out;
}

std::string random_bytes(Rng & rng, std::size_t max_len)
{
  static const std::string alphabet = "VCFMDLIRSend:;[]()<>-,.\"/\\ \n\tabcxyzAddfieldIC0123456789";
  std::string s(pick(rng, 0, max_len), '\0');
  const bool any = coin(rng, 0.3);
  for (auto & c : s) {
    c = any ? static_cast<char>(pick(rng, 0, 255)) : alphabet[pick(rng, 0, alphabet.size() - 1)];
  }
  return s;
}

// ---- oracle -----------------------------------------------------------------

Oracle::Oracle(const ConstraintGraph & graph)
{
  // Only the tree shape and constraint list are read from the graph; the
  // semantics below are restated from scratch.
  n_ = graph.size();
  std::map<FeaturePath, int> index;
  for (std::size_t i = 0; i < n_; ++i) {
    paths_.push_back(graph.node(static_cast<int>(i)).path);
    index[paths_.back()] = static_cast<int>(i);
  }
  for (const auto & p : paths_) {
    parent_.push_back(p.depth() > 1 ? index.at(p.parent()) : -1);
  }
  Group root;
  root.kind = graph.root_group();
  for (std::size_t i = 0; i < n_; ++i) {
    if (parent_[i] < 0) {
      root.members |= 1u << i;
    }
  }
  groups_.push_back(root);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto & nd = graph.node(static_cast<int>(i));
    if (nd.kind == NodeKind::Revision) {
      continue;
    }
    Group g;
    g.kind = nd.group;
    g.owner = static_cast<int>(i);
    for (std::size_t j = 0; j < n_; ++j) {
      if (parent_[j] == static_cast<int>(i)) {
        g.members |= 1u << j;
      }
    }
    if (g.members != 0) {
      groups_.push_back(g);
    }
  }
  for (const auto & e : graph.imply_edges()) {
    implies_.emplace_back(index.at(graph.node(e.source).path), index.at(graph.node(e.target).path));
  }
  for (const auto & e : graph.exclude_edges()) {
    excludes_.emplace_back(e.a, e.b);
  }
}

bool Oracle::closed(std::uint32_t m) const
{
  auto in = [&](int i) { return (m >> i) & 1u; };
  for (std::size_t i = 0; i < n_; ++i) {
    if (in(static_cast<int>(i)) && parent_[i] >= 0 && !in(parent_[i])) {
      return false;
    }
  }
  for (const auto & g : groups_) {
    const bool active = g.owner < 0 ? m != 0 : in(g.owner);
    if (active && (g.kind == GroupKind::And || g.kind == GroupKind::Mandatory) && (m & g.members) != g.members) {
      return false;
    }
  }
  for (auto [s, t] : implies_) {
    if (in(s) && !in(t)) {
      return false;
    }
  }
  return true;
}

bool Oracle::coherent(std::uint32_t m) const
{
  auto in = [&](int i) { return (m >> i) & 1u; };
  for (auto [a, b] : excludes_) {
    if (in(a) && in(b)) {
      return false;
    }
  }
  for (const auto & g : groups_) {
    const bool active = g.owner < 0 ? m != 0 : in(g.owner);
    if (!active) {
      continue;
    }
    const int count = std::popcount(m & g.members);
    if (g.kind == GroupKind::Xor && count != 1) {
      return false;
    }
    if (g.kind == GroupKind::Or && count < 1) {
      return false;
    }
  }
  return true;
}

std::set<std::uint32_t> Oracle::valid() const
{
  std::set<std::uint32_t> out;
  for (std::uint32_t m = 0; m < (1u << n_); ++m) {
    if (closed(m) && coherent(m)) {
      out.insert(m);
    }
  }
  return out;
}

std::uint32_t Oracle::mask(const std::set<FeaturePath> & paths) const
{
  std::uint32_t m = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    if (paths.contains(paths_[i])) {
      m |= 1u << i;
    }
  }
  return m;
}

std::set<FeaturePath> Oracle::paths(std::uint32_t m) const
{
  std::set<FeaturePath> out;
  for (std::size_t i = 0; i < n_; ++i) {
    if ((m >> i) & 1u) {
      out.insert(paths_[i]);
    }
  }
  return out;
}

}  // namespace vdfm::testing
