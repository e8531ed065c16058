// Random model, revision-chain and document generators shared by the unit
// tests and the acceptance binary.
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "vdfm/configuration.hpp"
#include "vdfm/model.hpp"

namespace vdfm::testing
{

using Rng = std::mt19937_64;

struct ModelShape
{
  std::size_t max_features = 12;
  std::size_t max_constraints = 6;
};

/// VCFM with at most `max_features` selectable features and at most
/// `max_constraints` cross-tree constraints (imports form a DAG). Resamples
/// until validate() reports no error.
ModelDocument random_valid_model(Rng & rng, const ModelShape & shape = {});

/// One relation, one version, `length` revisions of random add/delete/modify
/// ops that always replay cleanly. Revisions are named R1..Rn.
ModelDocument random_chain(Rng & rng, std::size_t length);

/// Syntactically well-formed document of any kind (VDFM containers, derived
/// models with needs and locals, comments, quoted values). Not necessarily valid.
ModelDocument random_document(Rng & rng);

/// Re-spaces a canonical rendering without changing its meaning.
std::string perturb_layout(const std::string & canonical, Rng & rng);

std::string random_bytes(Rng & rng, std::size_t max_len);

/// Independent reference semantics over bitmasks of the graph's pre-order
/// nodes. Written directly from the closure and coherence rules; shares no code
/// with the library's enumerator.
class Oracle
{
public:
  explicit Oracle(const ConstraintGraph & graph);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] bool closed(std::uint32_t mask) const;
  [[nodiscard]] bool coherent(std::uint32_t mask) const;
  [[nodiscard]] std::set<std::uint32_t> valid() const;
  [[nodiscard]] std::uint32_t mask(const std::set<FeaturePath> & paths) const;
  [[nodiscard]] std::set<FeaturePath> paths(std::uint32_t mask) const;

private:
  struct Group
  {
    std::uint32_t members = 0;
    GroupKind kind = GroupKind::And;
    int owner = -1;  // -1 for the root group
  };

  std::size_t n_ = 0;
  std::vector<FeaturePath> paths_;
  std::vector<int> parent_;
  std::vector<Group> groups_;
  std::vector<std::pair<int, int>> implies_;
  std::vector<std::pair<int, int>> excludes_;
};

}  // namespace vdfm::testing
