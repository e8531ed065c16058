// vdfm/printer.hpp - canonical formatting of model documents
#pragma once

#include <string>

#include "vdfm/model.hpp"

namespace vdfm
{

/// Renders `doc` in canonical form: 4-space indentation, one feature, op or
/// constraint per line, LF line endings. Comments are kept in source order.
/// Re-parsing the output yields a structurally equal document.
std::string pretty_print(const ModelDocument & doc);

/// `Student>V1-primary` style rendering of a path list joined by ", ".
std::string join_paths(const std::vector<FeaturePath> & paths);

}  // namespace vdfm
