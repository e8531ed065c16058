// vdfm/schema.hpp - replay of evolution operations into concrete relation schemas
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vdfm/error.hpp"
#include "vdfm/model.hpp"

namespace vdfm
{

enum class ItemKind { Field, Constraint };
enum class KeySuffix { Pk, Fk, Other };

/// Classifies an IC by its name suffix (`-Pk`, `-Fk`).
KeySuffix key_suffix(std::string_view ic_name);

/// The primary key a foreign-key constraint points at.
struct KeyReference
{
  std::string relation;
  std::string key;  // name of the referenced `-Pk` constraint

  bool operator==(const KeyReference &) const = default;
};

struct SchemaItem
{
  std::string name;
  ItemKind kind = ItemKind::Field;
  std::string payload;  // type word for fields, expression for constraints
  FeaturePath origin;   // revision whose op produced the current value
  std::string op;       // e.g. "Add field", "Modify IC", "Import from Course>V2>R2"
  std::optional<KeyReference> references;

  [[nodiscard]] KeySuffix suffix() const { return key_suffix(name); }
};

/// Fields and integrity constraints of one relation at one revision, in
/// first-introduction order. Field and constraint names share one namespace.
struct RelationSchema
{
  std::string relation_name;
  std::vector<SchemaItem> fields;
  std::vector<SchemaItem> constraints;

  [[nodiscard]] const SchemaItem * find(std::string_view name) const;
  [[nodiscard]] std::vector<const SchemaItem *> primary_keys() const;
};

enum class ReplayIssueKind {
  AddDuplicate,
  DeleteAbsent,
  ModifyAbsent,
  ImportSourceMissing,
  ImportItemMissing,
  ImportCycle,
};

struct ReplayIssue
{
  ReplayIssueKind kind;
  FeaturePath revision;
  std::string item;
  const EvolutionOp * op = nullptr;
  const CrossTreeConstraint * import = nullptr;
  std::string message;
};

class ReplayConflict : public Error
{
public:
  explicit ReplayConflict(const ReplayIssue & issue) : Error("ReplayConflict", issue.message, issue.op ? issue.op->span : SourceSpan{}) {}
};

class ImportUnresolved : public Error
{
public:
  explicit ImportUnresolved(const ReplayIssue & issue)
  : Error(issue.kind == ReplayIssueKind::ImportCycle ? "ImportCycle" : "ImportUnresolved", issue.message,
          issue.import ? issue.import->span : SourceSpan{})
  {
  }
};

/// Replays revision chains of one document. A version's chain is its revisions
/// in document order followed by local revisions anchored at it; each revision
/// applies its ops to the predecessor's schema, then splices the items named by
/// `Import <this> <- <exporter> (...)` constraints in constraint order.
///
/// In strict mode the first problem throws ReplayConflict / ImportUnresolved.
/// In lenient mode problems are recorded and the offending op is skipped.
class Replayer
{
public:
  Replayer(const ModelDocument & doc, bool strict);

  /// Schema after `revision` including its imports. `revision` must address a
  /// revision node (tree or local); otherwise UnknownPath is thrown.
  const RelationSchema & schema_at(const FeaturePath & revision);
  /// Schema after `revision`'s own ops, before its imports are spliced in.
  RelationSchema schema_before_imports(const FeaturePath & revision);

  [[nodiscard]] bool knows_revision(const FeaturePath & revision) const;
  /// Every revision path known to the replayer, tree revisions first.
  [[nodiscard]] std::vector<FeaturePath> revisions() const;
  [[nodiscard]] const std::vector<ReplayIssue> & issues() const { return issues_; }

private:
  struct ChainEntry
  {
    FeaturePath version;
    std::size_t index = 0;
    const FeatureNode * node = nullptr;
  };

  void find_cycles();
  void index_chain(const FeaturePath & version, const FeatureNode & node);
  void report(ReplayIssue issue);
  void apply_ops(RelationSchema & schema, const FeaturePath & revision, const FeatureNode & node);
  void apply_imports(RelationSchema & schema, const FeaturePath & revision);

  const ModelDocument & doc_;
  bool strict_;
  std::map<FeaturePath, std::vector<FeaturePath>> chains_;
  std::map<FeaturePath, ChainEntry> entries_;
  std::vector<FeaturePath> order_;
  std::map<FeaturePath, RelationSchema> done_;
  std::set<FeaturePath> tainted_;
  std::vector<ReplayIssue> cycles_;
  RelationSchema placeholder_;
  std::vector<ReplayIssue> issues_;
};

/// Concrete schema of the relation owning `revision`, after replaying its chain.
/// Throws ReplayConflict on add-duplicate or delete/modify of an absent item and
/// ImportUnresolved when an import cannot be satisfied.
RelationSchema materialize(const ModelDocument & doc, const FeaturePath & revision);

}  // namespace vdfm
