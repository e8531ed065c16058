// vdfm/semantics.hpp - document validation and constraint-graph construction
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vdfm/error.hpp"
#include "vdfm/model.hpp"

namespace vdfm
{

enum class Severity { Error, Warning };

std::string_view to_string(Severity severity);

/// Stable diagnostic codes reported by validate().
namespace diag
{
inline constexpr const char * kDuplicateName = "E-DUPLICATE-NAME";
inline constexpr const char * kLayering = "E-LAYERING";
inline constexpr const char * kGroupArity = "E-GROUP-ARITY";
inline constexpr const char * kUnresolvedSource = "E-UNRESOLVED-SOURCE";
inline constexpr const char * kUnresolvedTarget = "E-UNRESOLVED-TARGET";
inline constexpr const char * kEndpointDepth = "E-ENDPOINT-DEPTH";
inline constexpr const char * kImportEndpoint = "E-IMPORT-ENDPOINT";
inline constexpr const char * kSelfConstraint = "E-SELF-CONSTRAINT";
inline constexpr const char * kImportItem = "E-IMPORT-ITEM";
inline constexpr const char * kImportCycle = "E-IMPORT-CYCLE";
inline constexpr const char * kReplayConflict = "E-REPLAY-CONFLICT";
inline constexpr const char * kFirstRevisionOp = "E-FIRST-REVISION-OP";
inline constexpr const char * kExcludeAncestor = "E-EXCLUDE-ANCESTOR";
inline constexpr const char * kUnresolvedLocal = "E-UNRESOLVED-LOCAL";
inline constexpr const char * kDeleteUnknown = "W-DELETE-UNKNOWN";
inline constexpr const char * kImplyCycle = "W-IMPLY-CYCLE";
inline constexpr const char * kConstraintAttrs = "W-CONSTRAINT-ATTRS";

/// Every code above, errors first.
const std::vector<std::string> & all_codes();
}  // namespace diag

struct Diagnostic
{
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;
  std::vector<std::string> notes;
};

struct ValidationReport
{
  std::vector<Diagnostic> diagnostics;

  [[nodiscard]] bool ok() const;
  [[nodiscard]] std::size_t error_count() const;
  [[nodiscard]] std::size_t count(std::string_view code) const;
};

/// Runs every structural and cross-tree check over `doc` (recursing into the
/// sub-models of a VDFM). Never throws for malformed models; all findings are
/// diagnostics sorted by source position.
ValidationReport validate(const ModelDocument & doc);

/// Selectable features plus the edges derived from the group tree and the
/// schema relation model. Node indices follow pre-order.
class ConstraintGraph
{
public:
  struct Node
  {
    FeaturePath path;
    NodeKind kind = NodeKind::Relation;
    int parent = -1;
    GroupKind group = GroupKind::And;  // group over `children`
    std::vector<int> children;         // selectable children only
  };

  struct ImplyEdge
  {
    int source = -1;
    int target = -1;
    bool derived = false;  // induced by an import
    std::size_t constraint = 0;
  };

  struct ExcludeEdge
  {
    int a = -1;  // a < b
    int b = -1;
    std::size_t constraint = 0;
  };

  struct ImportEdge
  {
    int source = -1;  // importer
    int target = -1;  // exporter
    std::vector<std::string> items;
    std::size_t constraint = 0;
  };

  struct Membership
  {
    GroupKind group;
    std::vector<int> siblings;  // includes the node itself
  };

  [[nodiscard]] const std::string & model_name() const { return model_name_; }
  [[nodiscard]] const std::string & root_name() const { return root_name_; }
  [[nodiscard]] GroupKind root_group() const { return root_group_; }
  [[nodiscard]] const std::vector<int> & roots() const { return roots_; }
  [[nodiscard]] const std::vector<Node> & nodes() const { return nodes_; }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }
  [[nodiscard]] const std::vector<ImplyEdge> & imply_edges() const { return imply_; }
  [[nodiscard]] const std::vector<ExcludeEdge> & exclude_edges() const { return exclude_; }
  [[nodiscard]] const std::vector<ImportEdge> & import_edges() const { return import_; }

  /// Index of `path`, or -1.
  [[nodiscard]] int index_of(const FeaturePath & path) const;
  [[nodiscard]] const Node & node(int index) const { return nodes_.at(static_cast<std::size_t>(index)); }
  /// Group kind and sibling set the node belongs to (the root group for relations).
  [[nodiscard]] Membership membership(int index) const;
  [[nodiscard]] bool excluded(int a, int b) const;

  /// Imply edges that came straight from `Imply` constraints.
  [[nodiscard]] std::size_t declared_imply_count() const;

private:
  friend ConstraintGraph build_constraint_graph(const ModelDocument & doc);

  std::string model_name_;
  std::string root_name_;
  GroupKind root_group_ = kDefaultRootGroup;
  std::vector<int> roots_;
  std::vector<Node> nodes_;
  std::vector<ImplyEdge> imply_;
  std::vector<ExcludeEdge> exclude_;
  std::vector<ImportEdge> import_;
  std::vector<int> sorted_;  // node indices ordered by path
};

class NotValidated : public Error
{
public:
  explicit NotValidated(ValidationReport report);
  [[nodiscard]] const ValidationReport & report() const { return report_; }

private:
  ValidationReport report_;
};

/// Builds the graph for a VCFM, VLFM or VIFM. Each constraint becomes one edge;
/// every `Import A <- B` additionally yields a derived `A -> B` imply edge.
/// Throws NotValidated if validate(doc) reports errors.
ConstraintGraph build_constraint_graph(const ModelDocument & doc);

}  // namespace vdfm
