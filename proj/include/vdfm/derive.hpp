// vdfm/derive.hpp - running selection programs to produce VLFM/VIFM documents
#pragma once

#include <string>
#include <vector>

#include "vdfm/configuration.hpp"
#include "vdfm/parser.hpp"

namespace vdfm
{

class Incoherent : public Error
{
public:
  explicit Incoherent(CoherenceReport report);
  [[nodiscard]] const CoherenceReport & report() const { return report_; }

private:
  CoherenceReport report_;
};

class AmbiguousInstance : public Error
{
public:
  explicit AmbiguousInstance(std::vector<std::string> relations);
  [[nodiscard]] const std::vector<std::string> & relations() const { return relations_; }

private:
  std::vector<std::string> relations_;
};

class WrongInput : public Error
{
public:
  explicit WrongInput(const std::string & message) : Error("WrongInput", message) {}
};

struct Derivation
{
  ModelDocument document;
  Configuration configuration;
};

/// VCFM + family program -> VLFM. Selected features keep only their selected
/// children; features the program leaves open keep every alternative that can
/// still be completed. Groups left with a single alternative become
/// `[mandatory]`; revisions whose predecessors were pruned carry the ops that
/// rebuild the same schema from the nearest surviving predecessor.
Derivation derive_family_detailed(const ModelDocument & vcfm, const SelectionProgram & prog);
ModelDocument derive_family(const ModelDocument & vcfm, const SelectionProgram & prog);

/// VLFM + instance program -> VIFM holding exactly one version and one
/// revision per kept relation.
Derivation derive_instance_detailed(const ModelDocument & vlfm, const SelectionProgram & prog);
ModelDocument derive_instance(const ModelDocument & vlfm, const SelectionProgram & prog);

/// Dispatches on the program kind.
Derivation derive(const ModelDocument & input, const SelectionProgram & prog);

}  // namespace vdfm
