// vdfm/semantics.cpp - document validation and constraint-graph construction
#include "vdfm/semantics.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "vdfm/schema.hpp"

namespace vdfm
{

std::string_view to_string(Severity severity)
{
  return severity == Severity::Error ? "error" : "warning";
}

const std::vector<std::string> & diag::all_codes()
{
  static const std::vector<std::string> codes = {
    kDuplicateName, kLayering,      kGroupArity,       kUnresolvedSource, kUnresolvedTarget,
    kEndpointDepth, kImportEndpoint, kSelfConstraint,  kImportItem,       kImportCycle,
    kReplayConflict, kFirstRevisionOp, kExcludeAncestor, kUnresolvedLocal, kDeleteUnknown,
    kImplyCycle,    kConstraintAttrs,
  };
  return codes;
}

bool ValidationReport::ok() const
{
  return error_count() == 0;
}

std::size_t ValidationReport::error_count() const
{
  return static_cast<std::size_t>(std::count_if(
    diagnostics.begin(), diagnostics.end(), [](const Diagnostic & d) { return d.severity == Severity::Error; }));
}

std::size_t ValidationReport::count(std::string_view code) const
{
  return static_cast<std::size_t>(
    std::count_if(diagnostics.begin(), diagnostics.end(), [&](const Diagnostic & d) { return d.code == code; }));
}

namespace
{

std::optional<NodeKind> expected_child(NodeKind parent)
{
  switch (parent) {
    case NodeKind::Relation: return NodeKind::Version;
    case NodeKind::Version: return NodeKind::Revision;
    default: return std::nullopt;
  }
}

class Validator
{
public:
  explicit Validator(const ModelDocument & doc) : doc_(doc) {}

  ValidationReport run()
  {
    if (doc_.kind == ModelKind::Vdfm) {
      std::set<std::string> seen;
      for (const auto & sub : doc_.sub_models) {
        if (!seen.insert(sub.name).second) {
          error(diag::kDuplicateName, "duplicate model name " + sub.name, sub.span);
        }
        auto nested = Validator(sub).run();
        for (auto & d : nested.diagnostics) {
          report_.diagnostics.push_back(std::move(d));
        }
      }
    } else {
      tree();
      locals();
      constraints();
      replay();
      imply_cycles();
    }
    std::stable_sort(report_.diagnostics.begin(), report_.diagnostics.end(), [](const Diagnostic & a, const Diagnostic & b) {
      return std::pair(a.span.line, a.span.column) < std::pair(b.span.line, b.span.column);
    });
    return std::move(report_);
  }

private:
  void error(std::string code, std::string message, SourceSpan span)
  {
    report_.diagnostics.push_back({Severity::Error, std::move(code), std::move(message), span, {}});
  }

  void warning(std::string code, std::string message, SourceSpan span)
  {
    report_.diagnostics.push_back({Severity::Warning, std::move(code), std::move(message), span, {}});
  }

  void arity(GroupKind group, std::size_t children, const std::string & what, SourceSpan span)
  {
    if (children > 0 && children < min_group_arity(group)) {
      error(
        diag::kGroupArity,
        what + " has a [" + std::string(to_string(group)) + "] group with " + std::to_string(children) +
          " child; at least " + std::to_string(min_group_arity(group)) + " required",
        span);
    }
  }

  void siblings(const std::vector<FeatureNode> & nodes, const FeaturePath & parent)
  {
    std::set<std::string> seen;
    for (const auto & n : nodes) {
      if (!seen.insert(n.name).second) {
        const auto where = parent.empty() ? std::string("the schema definition model") : parent.str();
        error(diag::kDuplicateName, "duplicate name " + n.name + " under " + where, n.span);
      }
    }
  }

  void node(const FeatureNode & n, const FeaturePath & path)
  {
    const auto expected = expected_child(n.kind);
    for (const auto & c : n.children) {
      const bool def = c.kind == NodeKind::FieldDef || c.kind == NodeKind::IcDef;
      const bool ok = n.kind == NodeKind::Revision ? def : expected && c.kind == *expected;
      if (!ok) {
        error(
          diag::kLayering,
          std::string(to_string(c.kind)) + " " + c.name + " cannot appear under " +
            std::string(to_string(n.kind)) + " " + path.str(),
          c.span);
      }
    }
    if (n.kind == NodeKind::FieldDef || n.kind == NodeKind::IcDef) {
      const auto want = n.kind == NodeKind::FieldDef ? OpTarget::Field : OpTarget::Ic;
      for (const auto & op : n.ops) {
        if (op.target != want) {
          error(
            diag::kLayering,
            std::string(op.target == OpTarget::Field ? "field" : "IC") + " operation inside " +
              std::string(to_string(n.kind)) + " " + path.str(),
            op.span);
        }
      }
    }
    siblings(n.children, path);
    arity(n.group, n.children.size(), std::string(to_string(n.kind)) + " " + path.str(), n.span);
    for (const auto & c : n.children) {
      node(c, path.child(c.name));
    }
  }

  void tree()
  {
    if (!doc_.sdfm) {
      return;
    }
    const auto & sdfm = *doc_.sdfm;
    for (const auto & rel : sdfm.relations) {
      if (rel.kind != NodeKind::Relation) {
        error(diag::kLayering, std::string(to_string(rel.kind)) + " " + rel.name + " cannot appear at the top level", rel.span);
      }
    }
    siblings(sdfm.relations, {});
    arity(sdfm.group, sdfm.relations.size(), "schema definition model " + sdfm.name, sdfm.span);
    for (const auto & rel : sdfm.relations) {
      node(rel, FeaturePath{rel.name});
    }
  }

  void locals()
  {
    std::set<FeaturePath> local_versions;
    for (const auto & l : doc_.local_versions) {
      const FeaturePath anchor = l.path.parent();
      const FeatureNode * rel = find_path(doc_, anchor);
      if (rel == nullptr || rel->kind != NodeKind::Relation) {
        error(diag::kUnresolvedLocal, "local version " + l.path.str() + ": " + anchor.str() + " is not a relation", l.node.span);
        continue;
      }
      if (rel->child(l.path.leaf()) != nullptr || !local_versions.insert(l.path).second) {
        error(diag::kDuplicateName, "duplicate name " + l.path.leaf() + " under " + anchor.str(), l.node.span);
      }
      node(l.node, l.path);
    }
    std::set<FeaturePath> local_revisions;
    for (const auto & l : doc_.local_revisions) {
      const FeaturePath anchor = l.path.parent();
      const FeatureNode * ver = find_path(doc_, anchor);
      const bool is_version = (ver != nullptr && ver->kind == NodeKind::Version) || local_versions.contains(anchor);
      if (!is_version) {
        error(diag::kUnresolvedLocal, "local revision " + l.path.str() + ": " + anchor.str() + " is not a version", l.node.span);
        continue;
      }
      bool clash = !local_revisions.insert(l.path).second;
      if (ver != nullptr && ver->child(l.path.leaf()) != nullptr) {
        clash = true;
      }
      for (const auto & v : doc_.local_versions) {
        if (v.path == anchor && v.node.child(l.path.leaf()) != nullptr) {
          clash = true;
        }
      }
      if (clash) {
        error(diag::kDuplicateName, "duplicate name " + l.path.leaf() + " under " + anchor.str(), l.node.span);
      }
      node(l.node, l.path);
    }
  }

  // Returns the resolved node kind, reporting why not otherwise.
  std::optional<NodeKind> endpoint(const FeaturePath & path, bool source, SourceSpan span)
  {
    FeaturePath prefix;
    const FeatureNode * n = find_path(doc_, path, &prefix);
    if (n == nullptr) {
      const FeaturePath missing = prefix.depth() < path.depth() ? prefix.child(path.segments()[prefix.depth()]) : path;
      error(
        source ? diag::kUnresolvedSource : diag::kUnresolvedTarget,
        std::string("unresolved ") + (source ? "source " : "target ") + path.str() + ": no feature " + missing.str(),
        span);
      return std::nullopt;
    }
    if (!is_selectable(n->kind)) {
      error(
        diag::kEndpointDepth,
        path.str() + " is a " + std::string(to_string(n->kind)) + "; constraints connect relations, versions or revisions",
        span);
      return std::nullopt;
    }
    return n->kind;
  }

  void constraints()
  {
    if (!doc_.srfm) {
      return;
    }
    for (const auto & c : doc_.srfm->constraints) {
      const auto sk = endpoint(c.source, true, c.source_span.valid() ? c.source_span : c.span);
      const auto tk = endpoint(c.target, false, c.target_span.valid() ? c.target_span : c.span);
      if (!c.attrs.empty()) {
        warning(
          diag::kConstraintAttrs,
          "attributes on " + std::string(to_string(c.kind)) + " constraints have no meaning and are ignored", c.span);
      }
      if (!sk || !tk) {
        continue;
      }
      if (c.source == c.target) {
        error(diag::kSelfConstraint, std::string(to_string(c.kind)) + " constraint connects " + c.source.str() + " to itself", c.span);
        continue;
      }
      if (c.kind == ConstraintKind::Import && (*sk != NodeKind::Revision || *tk != NodeKind::Revision)) {
        error(
          diag::kImportEndpoint,
          "import endpoints must be revisions: " + c.source.str() + " <- " + c.target.str(), c.span);
        continue;
      }
      if (c.kind == ConstraintKind::Exclude &&
          (c.source.is_ancestor_of(c.target) || c.target.is_ancestor_of(c.source))) {
        error(
          diag::kExcludeAncestor,
          "exclude between " + c.source.str() + " and " + c.target.str() +
            " can never hold: selecting the descendant selects the ancestor",
          c.span);
      }
    }
  }

  void first_revision_ops(const FeatureNode & version, const FeaturePath & path)
  {
    if (version.children.empty()) {
      return;
    }
    const auto & first = version.children.front();
    for (const auto & def : first.children) {
      for (const auto & op : def.ops) {
        if (op.action != OpAction::Add) {
          first_ops_.insert(&op);
          error(
            diag::kFirstRevisionOp,
            std::string(to_string(op.action)) + " operation in " + path.child(first.name).str() +
              ", the first revision of " + path.str() + ", has nothing to act on",
            op.span);
        }
      }
    }
  }

  void replay()
  {
    if (!doc_.sdfm) {
      return;
    }
    for (const auto & rel : doc_.sdfm->relations) {
      for (const auto & ver : rel.children) {
        if (ver.kind == NodeKind::Version) {
          first_revision_ops(ver, FeaturePath{rel.name, ver.name});
        }
      }
    }
    for (const auto & l : doc_.local_versions) {
      first_revision_ops(l.node, l.path);
    }
    Replayer replayer(doc_, /*strict=*/false);
    for (const auto & rev : replayer.revisions()) {
      replayer.schema_at(rev);
    }
    for (const auto & issue : replayer.issues()) {
      const SourceSpan span = issue.op ? issue.op->span : issue.import ? issue.import->span : SourceSpan{};
      switch (issue.kind) {
        case ReplayIssueKind::AddDuplicate:
        case ReplayIssueKind::ModifyAbsent:
          if (issue.op == nullptr || !first_ops_.contains(issue.op)) {
            error(diag::kReplayConflict, issue.message, span);
          }
          break;
        case ReplayIssueKind::DeleteAbsent:
          if (!first_ops_.contains(issue.op)) {
            warning(diag::kDeleteUnknown, issue.message, span);
          }
          break;
        case ReplayIssueKind::ImportItemMissing:
          error(diag::kImportItem, issue.message, span);
          break;
        case ReplayIssueKind::ImportCycle:
          error(diag::kImportCycle, issue.message, span);
          break;
        case ReplayIssueKind::ImportSourceMissing:
          break;  // already reported as an endpoint problem
      }
    }
  }

  void imply_cycles()
  {
    if (!doc_.srfm) {
      return;
    }
    // Tarjan over features touched by imply (and import-induced imply) edges.
    std::map<FeaturePath, std::vector<FeaturePath>> adj;
    std::vector<const CrossTreeConstraint *> edges;
    for (const auto & c : doc_.srfm->constraints) {
      if (c.kind == ConstraintKind::Exclude || c.source == c.target) {
        continue;
      }
      const FeatureNode * s = find_path(doc_, c.source);
      const FeatureNode * t = find_path(doc_, c.target);
      if (s == nullptr || t == nullptr || !is_selectable(s->kind) || !is_selectable(t->kind)) {
        continue;
      }
      adj[c.source].push_back(c.target);
      adj[c.target];
      edges.push_back(&c);
    }
    std::map<FeaturePath, int> index;
    std::map<FeaturePath, int> low;
    std::set<FeaturePath> on_stack;
    std::vector<FeaturePath> stack;
    std::map<FeaturePath, int> component;
    std::vector<std::vector<FeaturePath>> components;
    int counter = 0;
    std::function<void(const FeaturePath &)> visit = [&](const FeaturePath & v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack.insert(v);
      for (const auto & w : adj[v]) {
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
          component[w] = static_cast<int>(components.size());
          members.push_back(w);
        } while (w != v);
        std::sort(members.begin(), members.end());
        components.push_back(std::move(members));
      }
    };
    for (const auto & [v, _] : adj) {
      if (!index.contains(v)) {
        visit(v);
      }
    }
    std::set<int> reported;
    for (const auto * c : edges) {
      const int k = component[c->source];
      if (component[c->target] != k || components[k].size() < 2 || !reported.insert(k).second) {
        continue;
      }
      std::string names;
      for (const auto & m : components[k]) {
        names += (names.empty() ? "" : ", ") + m.str();
      }
      warning(diag::kImplyCycle, "imply cycle: " + names + " are selected all together or not at all", c->span);
    }
  }

  const ModelDocument & doc_;
  ValidationReport report_;
  std::set<const EvolutionOp *> first_ops_;
};

}  // namespace

ValidationReport validate(const ModelDocument & doc)
{
  return Validator(doc).run();
}

int ConstraintGraph::index_of(const FeaturePath & path) const
{
  const auto it = std::lower_bound(
    sorted_.begin(), sorted_.end(), path, [&](int i, const FeaturePath & p) { return nodes_[static_cast<std::size_t>(i)].path < p; });
  if (it == sorted_.end() || nodes_[static_cast<std::size_t>(*it)].path != path) {
    return -1;
  }
  return *it;
}

ConstraintGraph::Membership ConstraintGraph::membership(int index) const
{
  const Node & n = node(index);
  if (n.parent < 0) {
    return {root_group_, roots_};
  }
  const Node & p = node(n.parent);
  return {p.group, p.children};
}

bool ConstraintGraph::excluded(int a, int b) const
{
  if (a > b) {
    std::swap(a, b);
  }
  return std::any_of(exclude_.begin(), exclude_.end(), [&](const ExcludeEdge & e) { return e.a == a && e.b == b; });
}

std::size_t ConstraintGraph::declared_imply_count() const
{
  return static_cast<std::size_t>(
    std::count_if(imply_.begin(), imply_.end(), [](const ImplyEdge & e) { return !e.derived; }));
}

namespace
{
std::string summarize(const ValidationReport & report)
{
  std::string msg = "model has " + std::to_string(report.error_count()) + " validation error(s)";
  for (const auto & d : report.diagnostics) {
    if (d.severity == Severity::Error) {
      msg += "; first: [" + d.code + "] " + d.message;
      break;
    }
  }
  return msg;
}
}  // namespace

NotValidated::NotValidated(ValidationReport report)
: Error("NotValidated", summarize(report)), report_(std::move(report))
{
}

ConstraintGraph build_constraint_graph(const ModelDocument & doc)
{
  auto report = validate(doc);
  if (!report.ok()) {
    throw NotValidated(std::move(report));
  }
  ConstraintGraph g;
  g.model_name_ = doc.name;
  if (!doc.sdfm) {
    return g;
  }
  g.root_name_ = doc.sdfm->name;
  g.root_group_ = doc.sdfm->group;
  std::function<int(const FeatureNode &, const FeaturePath &, int)> add =
    [&](const FeatureNode & n, const FeaturePath & path, int parent) {
      const int id = static_cast<int>(g.nodes_.size());
      g.nodes_.push_back({path, n.kind, parent, n.group, {}});
      if (n.kind != NodeKind::Revision) {
        for (const auto & c : n.children) {
          const int child = add(c, path.child(c.name), id);
          g.nodes_[static_cast<std::size_t>(id)].children.push_back(child);
        }
      }
      return id;
    };
  for (const auto & rel : doc.sdfm->relations) {
    g.roots_.push_back(add(rel, FeaturePath{rel.name}, -1));
  }
  g.sorted_.resize(g.nodes_.size());
  for (std::size_t i = 0; i < g.sorted_.size(); ++i) {
    g.sorted_[i] = static_cast<int>(i);
  }
  std::sort(g.sorted_.begin(), g.sorted_.end(), [&](int a, int b) {
    return g.nodes_[static_cast<std::size_t>(a)].path < g.nodes_[static_cast<std::size_t>(b)].path;
  });
  if (!doc.srfm) {
    return g;
  }
  const auto & cs = doc.srfm->constraints;
  for (std::size_t k = 0; k < cs.size(); ++k) {
    const auto & c = cs[k];
    const int s = g.index_of(c.source);
    const int t = g.index_of(c.target);
    switch (c.kind) {
      case ConstraintKind::Imply:
        g.imply_.push_back({s, t, false, k});
        break;
      case ConstraintKind::Exclude:
        g.exclude_.push_back({std::min(s, t), std::max(s, t), k});
        break;
      case ConstraintKind::Import:
        g.import_.push_back({s, t, c.imported_items, k});
        g.imply_.push_back({s, t, true, k});
        break;
    }
  }
  return g;
}

}  // namespace vdfm
