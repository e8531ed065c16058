// vdfm/configuration.hpp - selection closure, coherence, enumeration, explanations
#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "vdfm/error.hpp"
#include "vdfm/semantics.hpp"

namespace vdfm
{

enum class ReasonKind { Explicit, AncestorClosure, MandatoryClosure, ImpliedBy };

std::string_view to_string(ReasonKind kind);

/// Why a feature entered a configuration. `cause` is the feature whose
/// selection triggered the rule (empty for explicit selections and for
/// relations pulled in by the root group).
struct Reason
{
  ReasonKind kind = ReasonKind::Explicit;
  FeaturePath cause;
  bool via_import = false;  // implied-by through an import's induced edge
  bool from_root = false;   // mandatory-closure of the root group

  bool operator==(const Reason &) const = default;
};

/// `implied-by Student>V1-primary>R2`, `ancestor-closure of X`, ...
std::string describe(const Reason & reason);

struct Configuration
{
  std::string source_model;
  std::set<FeaturePath> selected;
  std::map<FeaturePath, Reason> reasons;

  [[nodiscard]] bool contains(const FeaturePath & path) const { return selected.contains(path); }
};

struct ChainLink
{
  FeaturePath feature;
  Reason reason;
};

using ReasonChain = std::vector<ChainLink>;

enum class ViolationKind { ExcludeConflict, XorOverflow, OrUnderflow, AndIncomplete, MandatoryMissing };

std::string_view to_string(ViolationKind kind);

struct Violation
{
  ViolationKind kind = ViolationKind::ExcludeConflict;
  std::vector<FeaturePath> involved;
  std::vector<ReasonChain> chains;  // one per selected involved feature
  std::size_t count = 0;            // selected children, for group violations
  std::string message;
};

struct CoherenceReport
{
  std::vector<Violation> violations;

  [[nodiscard]] bool coherent() const { return violations.empty(); }
};

/// Complete mode demands every active xor/or group be decided; partial mode
/// (used for family derivation) accepts undecided groups but still rejects
/// over-full xor groups.
enum class CoherenceMode { Complete, Partial };

/// Least fixpoint of explicit selection, ancestor closure, and/mandatory
/// propagation (including the root group once anything is selected) and imply
/// edges. Throws UnknownPath for an explicit path not in the graph.
Configuration close_selection(const ConstraintGraph & graph, const std::vector<FeaturePath> & explicit_paths);

class GraphMismatch : public Error
{
public:
  GraphMismatch(const std::string & config_model, const std::string & graph_model);
};

CoherenceReport check_coherence(
  const ConstraintGraph & graph, const Configuration & cfg, CoherenceMode mode = CoherenceMode::Complete);

class NotSelected : public Error
{
public:
  explicit NotSelected(const FeaturePath & path);
};

/// Chain from `feature` back to the explicit selection that caused it.
ReasonChain explain(const Configuration & cfg, const FeaturePath & feature);

/// Renders a chain as `A: implied-by B <- B: explicit`.
std::string render_chain(const ReasonChain & chain);

class TooLarge : public Error
{
public:
  TooLarge(std::size_t features, std::size_t cap);
};

inline constexpr std::size_t kDefaultEnumerationCap = 20;

/// Brute force: every subset of selectable features that is closed and
/// coherent (complete mode), ordered by bitmask with bit i = pre-order node i.
std::vector<Configuration> enumerate_configurations(
  const ConstraintGraph & graph, std::size_t max_features = kDefaultEnumerationCap);

/// Number of valid configurations, without materializing them.
std::size_t count_configurations(const ConstraintGraph & graph, std::size_t max_features = kDefaultEnumerationCap);

/// Features of `cfg` in graph pre-order.
std::vector<FeaturePath> ordered(const ConstraintGraph & graph, const Configuration & cfg);

}  // namespace vdfm
