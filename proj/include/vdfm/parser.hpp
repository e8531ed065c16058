// vdfm/parser.hpp - recursive-descent parser for models and selection programs
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vdfm/model.hpp"

namespace vdfm
{

enum class ProgramKind { Family, Instance };

std::string_view to_string(ProgramKind kind);

/// A `.vsel` script: `VLFM <output> { <input> : path, ... }` derives a family
/// model, `VIFM <output> { ... }` derives an instance model.
struct SelectionProgram
{
  ProgramKind kind = ProgramKind::Family;
  std::string output_name;
  std::string input_model;
  std::vector<FeaturePath> selections;
  std::vector<FeaturePath> rejections;
  std::vector<std::string> comments;
  SourceSpan span;
  SourceSpan selection_span;
};

/// Parses one `.vdfm` document (VDFM, VCFM, VLFM or VIFM). Stops at the first
/// error, throwing LexError or ParseError. No name resolution is performed.
ModelDocument parse_vdfm(std::string_view source);

/// Parses one `.vsel` selection program.
SelectionProgram parse_selection_program(std::string_view source);

}  // namespace vdfm
