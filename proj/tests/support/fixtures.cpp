#include "fixtures.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vdfm::testing
{

std::string corpus_path(const std::string & relative)
{
  return std::string(VDFM_CORPUS_DIR) + "/" + relative;
}

std::string read_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const ModelDocument & student_course()
{
  static const ModelDocument doc = parse_vdfm(read_file(corpus_path("student-course.vdfm")));
  return doc;
}

SelectionProgram family_program()
{
  return parse_selection_program(read_file(corpus_path("programs/StV1-CsV2.vsel")));
}

SelectionProgram instance_program()
{
  return parse_selection_program(read_file(corpus_path("programs/StV1R2-CsV2R2.vsel")));
}

SelectionProgram program(ProgramKind kind, std::string output, std::string input, std::vector<std::string> selections)
{
  SelectionProgram p;
  p.kind = kind;
  p.output_name = std::move(output);
  p.input_model = std::move(input);
  for (const auto & s : selections) {
    p.selections.push_back(*FeaturePath::parse(s));
  }
  return p;
}

}  // namespace vdfm::testing
