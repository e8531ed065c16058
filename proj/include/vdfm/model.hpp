// vdfm/model.hpp - feature-model document types and tree navigation
#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vdfm/source.hpp"

namespace vdfm
{

enum class ModelKind { Vdfm, Vcfm, Vlfm, Vifm };
enum class NodeKind { Relation, Version, Revision, FieldDef, IcDef };
enum class GroupKind { And, Xor, Or, Mandatory, Empty };
enum class OpAction { Add, Delete, Modify };
enum class OpTarget { Field, Ic };
enum class ConstraintKind { Imply, Exclude, Import };

std::string_view to_string(ModelKind kind);
std::string_view to_string(NodeKind kind);
std::string_view to_string(GroupKind kind);
std::string_view to_string(OpAction action);
std::string_view to_string(ConstraintKind kind);

/// Group relation assumed when a node header carries no `[...]` annotation.
GroupKind default_group(NodeKind kind);
/// Group relation assumed for the relations of a schema definition model.
inline constexpr GroupKind kDefaultRootGroup = GroupKind::And;

/// Minimum number of children a non-leaf node needs for `group` to be meaningful.
std::size_t min_group_arity(GroupKind group);

/// True for relation, version and revision nodes.
bool is_selectable(NodeKind kind);

/// Identifier rule: a letter, then letters, digits, `_`, or `-` (never trailing,
/// never doubled, never followed by `>`).
bool is_identifier(std::string_view text);

struct Attribute
{
  std::string name;
  std::string value;

  bool operator==(const Attribute &) const = default;
};

/// One add/delete/modify step on a field or integrity constraint.
/// Field ops carry `name` (+ `type` for add/modify); IC ops carry `name` (+ `expr`).
struct EvolutionOp
{
  OpAction action = OpAction::Add;
  OpTarget target = OpTarget::Field;
  std::vector<Attribute> attrs;
  SourceSpan span;
  Trivia trivia;

  [[nodiscard]] std::string_view attr(std::string_view attr_name) const;
  [[nodiscard]] std::string_view item_name() const { return attr("name"); }
  /// Type word for field ops, expression text for IC ops.
  [[nodiscard]] std::string_view payload() const;

  static EvolutionOp make(OpAction action, OpTarget target, std::string name, std::string payload = {});
};

/// Names of the attributes an op of this shape must carry, in canonical order.
std::vector<std::string_view> required_attributes(OpAction action, OpTarget target);

struct FeatureNode
{
  NodeKind kind = NodeKind::Relation;
  std::string name;
  GroupKind group = GroupKind::And;
  std::vector<FeatureNode> children;
  std::vector<EvolutionOp> ops;  // field-def / ic-def only
  SourceSpan span;
  Trivia trivia;

  [[nodiscard]] const FeatureNode * child(std::string_view child_name) const;
  [[nodiscard]] FeatureNode * child(std::string_view child_name);
  [[nodiscard]] bool is_leaf() const { return children.empty(); }
};

/// `>`-separated address of a feature, e.g. `Student>V1-primary>R2`.
class FeaturePath
{
public:
  FeaturePath() = default;
  explicit FeaturePath(std::vector<std::string> segments) : segments_(std::move(segments)) {}
  FeaturePath(std::initializer_list<std::string> segments) : segments_(segments) {}

  /// Parses `A>B>C`; whitespace around separators is tolerated. Returns nullopt
  /// if any segment is not an identifier.
  static std::optional<FeaturePath> parse(std::string_view text);

  [[nodiscard]] const std::vector<std::string> & segments() const { return segments_; }
  [[nodiscard]] std::size_t depth() const { return segments_.size(); }
  [[nodiscard]] bool empty() const { return segments_.empty(); }
  [[nodiscard]] const std::string & leaf() const { return segments_.back(); }
  [[nodiscard]] FeaturePath parent() const;
  [[nodiscard]] FeaturePath child(std::string name) const;
  /// True if this path is a strict prefix of `other`.
  [[nodiscard]] bool is_ancestor_of(const FeaturePath & other) const;
  [[nodiscard]] std::string str() const;

  auto operator<=>(const FeaturePath &) const = default;
  bool operator==(const FeaturePath &) const = default;

private:
  std::vector<std::string> segments_;
};

struct CrossTreeConstraint
{
  ConstraintKind kind = ConstraintKind::Imply;
  FeaturePath source;
  FeaturePath target;
  std::vector<std::string> imported_items;  // import only
  std::vector<Attribute> attrs;             // accepted on imply/exclude, ignored
  SourceSpan span;
  SourceSpan source_span;
  SourceSpan target_span;
  Trivia trivia;
};

struct SchemaDefinitionModel
{
  std::string name;
  GroupKind group = kDefaultRootGroup;
  std::vector<FeatureNode> relations;
  SourceSpan span;
  Trivia trivia;
  Trivia footer_trivia;
};

struct SchemaRelationModel
{
  std::string name;
  std::vector<CrossTreeConstraint> constraints;
  SourceSpan span;
  Trivia trivia;
  Trivia footer_trivia;
};

/// `<parent model> : feature, feature ;` line at the top of a derived model.
struct NeedsClause
{
  std::string model;
  std::vector<FeaturePath> features;
  SourceSpan span;
  Trivia trivia;
};

/// A version or revision added by hand to a derived model (`VersionLM`,
/// `Revision LM`, `Revision IVM`). `path` is the anchor plus the new node's name.
struct LocalFeature
{
  FeaturePath path;
  FeatureNode node;
};

struct ModelDocument
{
  ModelKind kind = ModelKind::Vcfm;
  std::string name;
  std::vector<ModelDocument> sub_models;  // VDFM only
  std::optional<SchemaDefinitionModel> sdfm;
  std::optional<SchemaRelationModel> srfm;
  std::vector<NeedsClause> needs;               // VLFM / VIFM only
  std::vector<LocalFeature> local_versions;     // VLFM only
  std::vector<LocalFeature> local_revisions;    // VLFM / VIFM
  SourceSpan span;
  Trivia trivia;
  Trivia footer_trivia;
  std::vector<std::string> trailing_comments;

  /// Name of the model this one was derived from, empty for VCFM/VDFM.
  [[nodiscard]] std::string parent_model() const;
  [[nodiscard]] const ModelDocument * sub_model(std::string_view sub_name) const;
};

/// Returns the node addressed by `path`. Throws UnknownPath naming the longest
/// resolvable prefix.
const FeatureNode & resolve_path(const ModelDocument & doc, const FeaturePath & path);
/// Non-throwing variant; `resolved_prefix` receives the longest matching prefix.
const FeatureNode * find_path(
  const ModelDocument & doc, const FeaturePath & path, FeaturePath * resolved_prefix = nullptr);

/// All relation, version and revision paths in pre-order.
std::vector<FeaturePath> enumerate_selectables(const ModelDocument & doc);

/// Pre-order walk over every node of the schema definition tree.
void walk(
  const ModelDocument & doc,
  const std::function<void(const FeaturePath &, const FeatureNode &)> & visit);

/// Equality ignoring spans; comments are compared.
bool structurally_equal(const ModelDocument & a, const ModelDocument & b);
bool structurally_equal(const FeatureNode & a, const FeatureNode & b);

}  // namespace vdfm
