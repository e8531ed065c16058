// vdfm/model.cpp - feature-model document types and tree navigation
#include "vdfm/model.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "vdfm/error.hpp"

namespace vdfm
{

LineIndex::LineIndex(std::string_view source)
{
  line_starts_.push_back(0);
  for (std::size_t i = 0; i < source.size(); ++i) {
    if (source[i] == '\n') {
      line_starts_.push_back(i + 1);
    }
  }
}

int LineIndex::line_of(std::size_t offset) const
{
  auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
  return static_cast<int>(it - line_starts_.begin());
}

int LineIndex::column_of(std::size_t offset) const
{
  const int line = line_of(offset);
  return static_cast<int>(offset - line_starts_[static_cast<std::size_t>(line - 1)]) + 1;
}

SourceSpan LineIndex::span(std::size_t begin, std::size_t end) const
{
  return SourceSpan{begin, end, line_of(begin), column_of(begin)};
}

std::string_view to_string(ModelKind kind)
{
  switch (kind) {
    case ModelKind::Vdfm: return "VDFM";
    case ModelKind::Vcfm: return "VCFM";
    case ModelKind::Vlfm: return "VLFM";
    case ModelKind::Vifm: return "VIFM";
  }
  return "?";
}

std::string_view to_string(NodeKind kind)
{
  switch (kind) {
    case NodeKind::Relation: return "relation";
    case NodeKind::Version: return "version";
    case NodeKind::Revision: return "revision";
    case NodeKind::FieldDef: return "field definition";
    case NodeKind::IcDef: return "IC definition";
  }
  return "?";
}

std::string_view to_string(GroupKind kind)
{
  switch (kind) {
    case GroupKind::And: return "and";
    case GroupKind::Xor: return "xor";
    case GroupKind::Or: return "or";
    case GroupKind::Mandatory: return "mandatory";
    case GroupKind::Empty: return "empty";
  }
  return "?";
}

std::string_view to_string(OpAction action)
{
  switch (action) {
    case OpAction::Add: return "Add";
    case OpAction::Delete: return "Delete";
    case OpAction::Modify: return "Modify";
  }
  return "?";
}

std::string_view to_string(ConstraintKind kind)
{
  switch (kind) {
    case ConstraintKind::Imply: return "imply";
    case ConstraintKind::Exclude: return "exclude";
    case ConstraintKind::Import: return "import";
  }
  return "?";
}

GroupKind default_group(NodeKind kind)
{
  switch (kind) {
    case NodeKind::Relation:
    case NodeKind::Version:
      return GroupKind::Xor;
    default:
      return GroupKind::And;
  }
}

std::size_t min_group_arity(GroupKind group)
{
  return (group == GroupKind::Xor || group == GroupKind::Or) ? 2 : 1;
}

bool is_selectable(NodeKind kind)
{
  return kind == NodeKind::Relation || kind == NodeKind::Version || kind == NodeKind::Revision;
}

namespace
{
bool is_ident_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
}  // namespace

bool is_identifier(std::string_view text)
{
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text.front()))) {
    return false;
  }
  for (std::size_t i = 1; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '-') {
      if (i + 1 >= text.size() || !is_ident_char(text[i + 1])) {
        return false;
      }
    } else if (!is_ident_char(c)) {
      return false;
    }
  }
  return true;
}

std::string_view EvolutionOp::attr(std::string_view attr_name) const
{
  for (const auto & a : attrs) {
    if (a.name == attr_name) {
      return a.value;
    }
  }
  return {};
}

std::string_view EvolutionOp::payload() const
{
  return attr(target == OpTarget::Field ? "type" : "expr");
}

EvolutionOp EvolutionOp::make(OpAction action, OpTarget target, std::string name, std::string payload)
{
  EvolutionOp op;
  op.action = action;
  op.target = target;
  op.attrs.push_back({"name", std::move(name)});
  if (action != OpAction::Delete) {
    op.attrs.push_back({target == OpTarget::Field ? "type" : "expr", std::move(payload)});
  }
  return op;
}

std::vector<std::string_view> required_attributes(OpAction action, OpTarget target)
{
  if (action == OpAction::Delete) {
    return {"name"};
  }
  return {"name", target == OpTarget::Field ? "type" : "expr"};
}

const FeatureNode * FeatureNode::child(std::string_view child_name) const
{
  for (const auto & c : children) {
    if (c.name == child_name) {
      return &c;
    }
  }
  return nullptr;
}

FeatureNode * FeatureNode::child(std::string_view child_name)
{
  return const_cast<FeatureNode *>(std::as_const(*this).child(child_name));
}

std::optional<FeaturePath> FeaturePath::parse(std::string_view text)
{
  std::vector<std::string> segments;
  std::size_t start = 0;
  while (true) {
    const std::size_t sep = text.find('>', start);
    std::string_view piece = text.substr(start, sep == std::string_view::npos ? sep : sep - start);
    while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front()))) {
      piece.remove_prefix(1);
    }
    while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back()))) {
      piece.remove_suffix(1);
    }
    if (!is_identifier(piece)) {
      return std::nullopt;
    }
    segments.emplace_back(piece);
    if (sep == std::string_view::npos) {
      break;
    }
    start = sep + 1;
  }
  return FeaturePath(std::move(segments));
}

FeaturePath FeaturePath::parent() const
{
  if (segments_.empty()) {
    return {};
  }
  return FeaturePath(std::vector<std::string>(segments_.begin(), segments_.end() - 1));
}

FeaturePath FeaturePath::child(std::string name) const
{
  auto segs = segments_;
  segs.push_back(std::move(name));
  return FeaturePath(std::move(segs));
}

bool FeaturePath::is_ancestor_of(const FeaturePath & other) const
{
  return segments_.size() < other.segments_.size() &&
         std::equal(segments_.begin(), segments_.end(), other.segments_.begin());
}

std::string FeaturePath::str() const
{
  std::string out;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (i > 0) {
      out += '>';
    }
    out += segments_[i];
  }
  return out;
}

UnknownPath::UnknownPath(FeaturePath path, FeaturePath resolved_prefix)
: Error(
    "UnknownPath",
    "unknown feature path " + path.str() +
      (resolved_prefix.empty() ? std::string(" (no segment resolves)")
                               : " (resolvable prefix: " + resolved_prefix.str() + ")")),
  path_(std::move(path)),
  prefix_(std::move(resolved_prefix))
{
}

std::string ModelDocument::parent_model() const
{
  return needs.empty() ? std::string() : needs.front().model;
}

const ModelDocument * ModelDocument::sub_model(std::string_view sub_name) const
{
  for (const auto & m : sub_models) {
    if (m.name == sub_name) {
      return &m;
    }
  }
  return nullptr;
}

const FeatureNode * find_path(
  const ModelDocument & doc, const FeaturePath & path, FeaturePath * resolved_prefix)
{
  if (resolved_prefix) {
    *resolved_prefix = FeaturePath();
  }
  if (!doc.sdfm || path.empty()) {
    return nullptr;
  }
  const FeatureNode * node = nullptr;
  const std::vector<FeatureNode> * level = &doc.sdfm->relations;
  std::vector<std::string> matched;
  for (const auto & seg : path.segments()) {
    const auto it = std::find_if(
      level->begin(), level->end(), [&](const FeatureNode & n) { return n.name == seg; });
    if (it == level->end()) {
      if (resolved_prefix) {
        *resolved_prefix = FeaturePath(std::move(matched));
      }
      return nullptr;
    }
    node = &*it;
    matched.push_back(seg);
    level = &node->children;
  }
  if (resolved_prefix) {
    *resolved_prefix = path;
  }
  return node;
}

const FeatureNode & resolve_path(const ModelDocument & doc, const FeaturePath & path)
{
  FeaturePath prefix;
  const FeatureNode * node = find_path(doc, path, &prefix);
  if (!node) {
    throw UnknownPath(path, prefix);
  }
  return *node;
}

namespace
{
void walk_node(
  const FeaturePath & path, const FeatureNode & node,
  const std::function<void(const FeaturePath &, const FeatureNode &)> & visit)
{
  visit(path, node);
  for (const auto & c : node.children) {
    walk_node(path.child(c.name), c, visit);
  }
}
}  // namespace

void walk(
  const ModelDocument & doc,
  const std::function<void(const FeaturePath &, const FeatureNode &)> & visit)
{
  if (!doc.sdfm) {
    return;
  }
  for (const auto & rel : doc.sdfm->relations) {
    walk_node(FeaturePath{rel.name}, rel, visit);
  }
}

std::vector<FeaturePath> enumerate_selectables(const ModelDocument & doc)
{
  std::vector<FeaturePath> out;
  walk(doc, [&](const FeaturePath & path, const FeatureNode & node) {
    if (is_selectable(node.kind)) {
      out.push_back(path);
    }
  });
  return out;
}

namespace
{
bool ops_equal(const EvolutionOp & a, const EvolutionOp & b)
{
  return a.action == b.action && a.target == b.target && a.attrs == b.attrs && a.trivia == b.trivia;
}

template <typename T, typename Eq>
bool all_equal(const std::vector<T> & a, const std::vector<T> & b, Eq eq)
{
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), eq);
}

bool constraints_equal(const CrossTreeConstraint & a, const CrossTreeConstraint & b)
{
  return a.kind == b.kind && a.source == b.source && a.target == b.target &&
         a.imported_items == b.imported_items && a.attrs == b.attrs && a.trivia == b.trivia;
}

bool local_equal(const LocalFeature & a, const LocalFeature & b)
{
  return a.path == b.path && structurally_equal(a.node, b.node);
}
}  // namespace

bool structurally_equal(const FeatureNode & a, const FeatureNode & b)
{
  return a.kind == b.kind && a.name == b.name && a.group == b.group && a.trivia == b.trivia &&
         all_equal(a.ops, b.ops, ops_equal) &&
         all_equal(a.children, b.children, [](const FeatureNode & x, const FeatureNode & y) {
           return structurally_equal(x, y);
         });
}

bool structurally_equal(const ModelDocument & a, const ModelDocument & b)
{
  if (a.kind != b.kind || a.name != b.name || a.trivia != b.trivia ||
      a.footer_trivia != b.footer_trivia || a.trailing_comments != b.trailing_comments) {
    return false;
  }
  if (!all_equal(a.sub_models, b.sub_models, [](const ModelDocument & x, const ModelDocument & y) {
        return structurally_equal(x, y);
      })) {
    return false;
  }
  if (a.sdfm.has_value() != b.sdfm.has_value() || a.srfm.has_value() != b.srfm.has_value()) {
    return false;
  }
  if (a.sdfm) {
    const auto & x = *a.sdfm;
    const auto & y = *b.sdfm;
    if (x.name != y.name || x.group != y.group || x.trivia != y.trivia ||
        x.footer_trivia != y.footer_trivia ||
        !all_equal(x.relations, y.relations, [](const FeatureNode & p, const FeatureNode & q) {
          return structurally_equal(p, q);
        })) {
      return false;
    }
  }
  if (a.srfm) {
    const auto & x = *a.srfm;
    const auto & y = *b.srfm;
    if (x.name != y.name || x.trivia != y.trivia || x.footer_trivia != y.footer_trivia ||
        !all_equal(x.constraints, y.constraints, constraints_equal)) {
      return false;
    }
  }
  const auto needs_equal = [](const NeedsClause & x, const NeedsClause & y) {
    return x.model == y.model && x.features == y.features && x.trivia == y.trivia;
  };
  return all_equal(a.needs, b.needs, needs_equal) &&
         all_equal(a.local_versions, b.local_versions, local_equal) &&
         all_equal(a.local_revisions, b.local_revisions, local_equal);
}

}  // namespace vdfm
