// Corpus access for tests.
#pragma once

#include <string>

#include "vdfm/model.hpp"
#include "vdfm/parser.hpp"

namespace vdfm::testing
{

std::string corpus_path(const std::string & relative);
std::string read_file(const std::string & path);

/// corpus/student-course.vdfm, parsed.
const ModelDocument & student_course();
SelectionProgram family_program();
SelectionProgram instance_program();

SelectionProgram program(ProgramKind kind, std::string output, std::string input, std::vector<std::string> selections);

}  // namespace vdfm::testing
