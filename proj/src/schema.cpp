// vdfm/schema.cpp - replay of evolution operations into concrete relation schemas
#include "vdfm/schema.hpp"

#include <algorithm>
#include <functional>

namespace vdfm
{

namespace
{
bool ends_with(std::string_view s, std::string_view suffix)
{
  return s.size() > suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

// `references Rel.Key-Pk` names the key a foreign-key IC points at.
std::optional<KeyReference> parse_reference(std::string_view expr)
{
  constexpr std::string_view kw = "references ";
  if (!expr.starts_with(kw)) {
    return std::nullopt;
  }
  expr.remove_prefix(kw.size());
  const auto dot = expr.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == expr.size()) {
    return std::nullopt;
  }
  const std::string rel(expr.substr(0, dot));
  const std::string key(expr.substr(dot + 1));
  if (!is_identifier(rel) || !is_identifier(key)) {
    return std::nullopt;
  }
  return KeyReference{rel, key};
}

std::string op_label(const EvolutionOp & op)
{
  return std::string(to_string(op.action)) + (op.target == OpTarget::Field ? " field" : " IC");
}
}  // namespace

KeySuffix key_suffix(std::string_view ic_name)
{
  if (ends_with(ic_name, "-Pk")) return KeySuffix::Pk;
  if (ends_with(ic_name, "-Fk")) return KeySuffix::Fk;
  return KeySuffix::Other;
}

const SchemaItem * RelationSchema::find(std::string_view name) const
{
  for (const auto * list : {&fields, &constraints}) {
    for (const auto & item : *list) {
      if (item.name == name) {
        return &item;
      }
    }
  }
  return nullptr;
}

std::vector<const SchemaItem *> RelationSchema::primary_keys() const
{
  std::vector<const SchemaItem *> out;
  for (const auto & c : constraints) {
    if (c.suffix() == KeySuffix::Pk) {
      out.push_back(&c);
    }
  }
  return out;
}

Replayer::Replayer(const ModelDocument & doc, bool strict) : doc_(doc), strict_(strict)
{
  if (doc.sdfm) {
    for (const auto & rel : doc.sdfm->relations) {
      for (const auto & ver : rel.children) {
        index_chain(FeaturePath{rel.name, ver.name}, ver);
      }
    }
  }
  for (const auto & local : doc.local_versions) {
    const FeaturePath version = local.path;
    if (!chains_.contains(version)) {
      index_chain(version, local.node);
    }
  }
  for (const auto & local : doc.local_revisions) {
    const FeaturePath version = local.path.parent();
    auto it = chains_.find(version);
    if (it == chains_.end() || entries_.contains(local.path)) {
      continue;
    }
    entries_[local.path] = ChainEntry{version, it->second.size(), &local.node};
    it->second.push_back(local.path);
    order_.push_back(local.path);
  }
  find_cycles();
}

void Replayer::index_chain(const FeaturePath & version, const FeatureNode & node)
{
  auto & chain = chains_[version];
  for (const auto & rev : node.children) {
    const FeaturePath path = version.child(rev.name);
    if (entries_.contains(path)) {
      continue;
    }
    entries_[path] = ChainEntry{version, chain.size(), &rev};
    chain.push_back(path);
    order_.push_back(path);
  }
}

bool Replayer::knows_revision(const FeaturePath & revision) const
{
  return entries_.contains(revision);
}

std::vector<FeaturePath> Replayer::revisions() const
{
  return order_;
}

void Replayer::report(ReplayIssue issue)
{
  if (strict_) {
    if (issue.kind == ReplayIssueKind::AddDuplicate || issue.kind == ReplayIssueKind::DeleteAbsent ||
        issue.kind == ReplayIssueKind::ModifyAbsent) {
      throw ReplayConflict(issue);
    }
    throw ImportUnresolved(issue);
  }
  issues_.push_back(std::move(issue));
}

void Replayer::apply_ops(RelationSchema & schema, const FeaturePath & revision, const FeatureNode & node)
{
  for (const auto & def : node.children) {
    for (const auto & op : def.ops) {
      const std::string name(op.item_name());
      auto & list = op.target == OpTarget::Field ? schema.fields : schema.constraints;
      auto it = std::find_if(list.begin(), list.end(), [&](const SchemaItem & s) { return s.name == name; });
      const auto where = revision.str();
      switch (op.action) {
        case OpAction::Add: {
          if (schema.find(name) != nullptr) {
            report({ReplayIssueKind::AddDuplicate, revision, name, &op, nullptr,
                    op_label(op) + " " + name + " in " + where + ": item already exists"});
            break;
          }
          SchemaItem item;
          item.name = name;
          item.kind = op.target == OpTarget::Field ? ItemKind::Field : ItemKind::Constraint;
          item.payload = std::string(op.payload());
          item.origin = revision;
          item.op = op_label(op);
          if (item.kind == ItemKind::Constraint && key_suffix(name) == KeySuffix::Fk) {
            item.references = parse_reference(item.payload);
          }
          list.push_back(std::move(item));
          break;
        }
        case OpAction::Delete:
          if (it == list.end()) {
            report({ReplayIssueKind::DeleteAbsent, revision, name, &op, nullptr,
                    op_label(op) + " " + name + " in " + where + ": no such item along the revision chain"});
            break;
          }
          list.erase(it);
          break;
        case OpAction::Modify:
          if (it == list.end()) {
            report({ReplayIssueKind::ModifyAbsent, revision, name, &op, nullptr,
                    op_label(op) + " " + name + " in " + where + ": no such item along the revision chain"});
            break;
          }
          it->payload = std::string(op.payload());
          it->origin = revision;
          it->op = op_label(op);
          it->references.reset();
          if (it->kind == ItemKind::Constraint && key_suffix(name) == KeySuffix::Fk) {
            it->references = parse_reference(it->payload);
          }
          break;
      }
    }
  }
}

void Replayer::apply_imports(RelationSchema & schema, const FeaturePath & revision)
{
  if (!doc_.srfm) {
    return;
  }
  for (const auto & c : doc_.srfm->constraints) {
    if (c.kind != ConstraintKind::Import || c.source != revision) {
      continue;
    }
    const std::string from = c.target.str();
    if (!knows_revision(c.target)) {
      report({ReplayIssueKind::ImportSourceMissing, revision, {}, nullptr, &c,
              "import into " + revision.str() + ": exporter " + from + " is not a revision of this model"});
      continue;
    }
    const RelationSchema exporter = schema_at(c.target);
    for (const auto & item_name : c.imported_items) {
      if (schema.find(item_name) != nullptr) {
        report({ReplayIssueKind::AddDuplicate, revision, item_name, nullptr, &c,
                "import of " + item_name + " into " + revision.str() + ": item already exists"});
        continue;
      }
      SchemaItem item;
      if (const SchemaItem * src = exporter.find(item_name)) {
        item = *src;
      } else if (key_suffix(item_name) == KeySuffix::Fk && exporter.primary_keys().size() == 1) {
        // A foreign key the exporter does not carry itself binds to its primary key.
        const SchemaItem * pk = exporter.primary_keys().front();
        item.name = item_name;
        item.kind = ItemKind::Constraint;
        item.payload = "references " + exporter.relation_name + "." + pk->name;
        item.references = KeyReference{exporter.relation_name, pk->name};
      } else {
        report({ReplayIssueKind::ImportItemMissing, revision, item_name, nullptr, &c,
                "import of " + item_name + " into " + revision.str() + ": " + from + " has no such item"});
        continue;
      }
      item.origin = revision;
      item.op = "Import from " + from;
      (item.kind == ItemKind::Field ? schema.fields : schema.constraints).push_back(std::move(item));
    }
  }
}

RelationSchema Replayer::schema_before_imports(const FeaturePath & revision)
{
  const auto it = entries_.find(revision);
  if (it == entries_.end()) {
    FeaturePath prefix;
    find_path(doc_, revision, &prefix);
    throw UnknownPath(revision, prefix);
  }
  const ChainEntry entry = it->second;
  RelationSchema schema;
  if (entry.index > 0) {
    schema = schema_at(chains_.at(entry.version)[entry.index - 1]);
  }
  schema.relation_name = entry.version.segments().front();
  apply_ops(schema, revision, *entry.node);
  return schema;
}

const RelationSchema & Replayer::schema_at(const FeaturePath & revision)
{
  if (const auto it = done_.find(revision); it != done_.end()) {
    return it->second;
  }
  if (tainted_.contains(revision)) {
    if (strict_) {
      const auto it = std::find_if(cycles_.begin(), cycles_.end(), [&](const ReplayIssue & i) { return i.revision == revision; });
      ReplayIssue issue = it != cycles_.end() ? *it : ReplayIssue{ReplayIssueKind::ImportCycle, revision, {}, nullptr, nullptr, {}};
      if (it == cycles_.end()) {
        issue.import = cycles_.empty() ? nullptr : cycles_.front().import;
        issue.message = "schema of " + revision.str() + " depends on an import cycle";
      }
      throw ImportUnresolved(issue);
    }
    return placeholder_;
  }
  RelationSchema schema = schema_before_imports(revision);
  apply_imports(schema, revision);
  return done_.emplace(revision, std::move(schema)).first->second;
}

// A revision depends on its chain predecessor and on the exporters it imports
// from. Revisions on or above a dependency cycle cannot be replayed.
void Replayer::find_cycles()
{
  std::map<FeaturePath, std::vector<std::pair<FeaturePath, const CrossTreeConstraint *>>> deps;
  for (const auto & [path, entry] : entries_) {
    auto & d = deps[path];
    if (entry.index > 0) {
      d.emplace_back(chains_.at(entry.version)[entry.index - 1], nullptr);
    }
  }
  if (doc_.srfm) {
    for (const auto & c : doc_.srfm->constraints) {
      if (c.kind == ConstraintKind::Import && entries_.contains(c.source) && entries_.contains(c.target)) {
        deps[c.source].emplace_back(c.target, &c);
      }
    }
  }
  // Tarjan's SCC; revisions reaching a non-trivial component are tainted.
  std::map<FeaturePath, int> index;
  std::map<FeaturePath, int> low;
  std::map<FeaturePath, int> comp;
  std::set<FeaturePath> on_stack;
  std::vector<FeaturePath> stack;
  std::vector<std::vector<FeaturePath>> comps;
  int counter = 0;
  std::function<void(const FeaturePath &)> visit = [&](const FeaturePath & v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto & [w, _] : deps[v]) {
      if (!index.contains(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.contains(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<FeaturePath> members;
      FeaturePath w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp[w] = static_cast<int>(comps.size());
        members.push_back(w);
      } while (w != v);
      comps.push_back(std::move(members));
    }
  };
  for (const auto & path : order_) {
    if (!index.contains(path)) {
      visit(path);
    }
  }
  // One report per cycle, at the import that closes it (the last one written).
  std::set<int> reported;
  if (doc_.srfm) {
    const auto & cs = doc_.srfm->constraints;
    for (auto it = cs.rbegin(); it != cs.rend(); ++it) {
      const auto & c = *it;
      if (c.kind != ConstraintKind::Import || !comp.contains(c.source) || !comp.contains(c.target)) {
        continue;
      }
      const int k = comp[c.source];
      if (comp[c.target] != k || comps[static_cast<std::size_t>(k)].size() < 2 || !reported.insert(k).second) {
        continue;
      }
      cycles_.push_back({ReplayIssueKind::ImportCycle, c.source, {}, nullptr, &c,
                         "import of " + c.target.str() + " into " + c.source.str() +
                           " closes a cycle: each revision needs the other's schema first"});
    }
  }
  // Components come out in reverse topological order, so dependencies are
  // settled before their dependents.
  std::vector<bool> bad(comps.size(), false);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    bad[k] = comps[k].size() > 1;
    for (const auto & v : comps[k]) {
      for (const auto & [w, _] : deps[v]) {
        if (bad[static_cast<std::size_t>(comp[w])]) {
          bad[k] = true;
        }
      }
    }
    if (bad[k]) {
      tainted_.insert(comps[k].begin(), comps[k].end());
    }
  }
  if (!strict_) {
    issues_.insert(issues_.end(), cycles_.begin(), cycles_.end());
  }
}

RelationSchema materialize(const ModelDocument & doc, const FeaturePath & revision)
{
  Replayer replayer(doc, /*strict=*/true);
  return replayer.schema_at(revision);
}

}  // namespace vdfm
