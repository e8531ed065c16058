#include <doctest.h>

#include "fixtures.hpp"
#include "vdfm/error.hpp"
#include "vdfm/parser.hpp"

using namespace vdfm;
using namespace vdfm::testing;

namespace
{

std::string parse_error(std::string_view src)
{
  try {
    parse_vdfm(src);
  } catch (const ParseError & e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_SUITE("parser")
{
  TEST_CASE("fixture structure")
  {
    const auto & doc = student_course();
    CHECK(doc.kind == ModelKind::Vcfm);
    CHECK(doc.name == "S-C-SD");
    REQUIRE(doc.sdfm);
    REQUIRE(doc.sdfm->relations.size() == 2);
    std::size_t versions = 0, revisions = 0;
    for (const auto & r : doc.sdfm->relations) {
      versions += r.children.size();
      for (const auto & v : r.children) {
        revisions += v.children.size();
      }
    }
    CHECK(versions == 4);
    CHECK(revisions == 8);
    REQUIRE(doc.srfm->constraints.size() == 1);
    const auto & imp = doc.srfm->constraints.front();
    CHECK(imp.kind == ConstraintKind::Import);
    CHECK(imp.source.str() == "Student>V1-primary>R2");
    CHECK(imp.target.str() == "Course>V2>R2");
    CHECK(imp.imported_items == std::vector<std::string>{"Co-Id-Fk"});
  }

  TEST_CASE("minimal document on one line")
  {
    const auto doc = parse_vdfm("VCFM : M ; VSDFM : S ; end VSDFM S ; VSRFM : R ; end VSRFM R ; end VCFM M ;");
    CHECK(doc.name == "M");
    CHECK(doc.sdfm->relations.empty());
    CHECK(doc.srfm->constraints.empty());
  }

  TEST_CASE("footer name must match")
  {
    const auto msg = parse_error("VCFM : A ; VSDFM : S ; end VSDFM S ; VSRFM : R ; end VSRFM R ; end VCFM B ;");
    CHECK(msg.find("footer name B does not match header A") != std::string::npos);
  }

  TEST_CASE("error positions")
  {
    try {
      parse_vdfm("VCFM : M ;\n    VSDFM : S ;\n        Relation A ;\n");
      FAIL("expected ParseError");
    } catch (const ParseError & e) {
      CHECK(e.span().line == 3);
      CHECK(e.span().column == 18);
      CHECK(e.found() == "A");
      CHECK_FALSE(e.expected().empty());
    }
  }

  TEST_CASE("group annotations")
  {
    const auto doc = parse_vdfm(
      "VCFM : M ; VSDFM : S ; [or]\n"
      "Relation : A ; [mandatory] Version : V ; [and] Revision : R ; [empty]\n"
      "Relation : B ; Version : V ; Revision : R ;\n"
      "end VSDFM S ; VSRFM : R ; end VSRFM R ; end VCFM M ;");
    CHECK(doc.sdfm->group == GroupKind::Or);
    const auto & a = doc.sdfm->relations[0];
    CHECK(a.group == GroupKind::Mandatory);
    CHECK(a.children[0].group == GroupKind::And);
    CHECK(a.children[0].children[0].group == GroupKind::Empty);
    const auto & b = doc.sdfm->relations[1];
    CHECK(b.group == GroupKind::Xor);
    CHECK(b.children[0].children[0].group == GroupKind::And);
  }

  TEST_CASE("unknown group word")
  {
    CHECK_FALSE(parse_error("VCFM : M ; VSDFM : S ; Relation : A ; [some] end VSDFM S ; VSRFM : R ; end VSRFM R ; end VCFM M ;").empty());
  }

  TEST_CASE("operations and attributes")
  {
    const auto doc = parse_vdfm(
      "VCFM : M ; VSDFM : S ; Relation : A ; Version : V ; Revision : R ;\n"
      "Field Definition : f ; Add field (name : f, type : string) ;\n"
      "IC Definition : k-Pk ; Add IC (name : k-Pk, expr : \"x > 0\") ;\n"
      "end VSDFM S ; VSRFM : R ; end VSRFM R ; end VCFM M ;");
    const auto & rev = doc.sdfm->relations[0].children[0].children[0];
    REQUIRE(rev.children.size() == 2);
    CHECK(rev.children[0].kind == NodeKind::FieldDef);
    CHECK(rev.children[0].ops[0].payload() == "string");
    CHECK(rev.children[1].kind == NodeKind::IcDef);
    CHECK(rev.children[1].ops[0].payload() == "x > 0");
    CHECK(rev.children[1].ops[0].item_name() == "k-Pk");
  }

  TEST_CASE("missing op attribute")
  {
    CHECK_FALSE(parse_error(
      "VCFM : M ; VSDFM : S ; Relation : A ; Version : V ; Revision : R ;\n"
      "Field Definition : f ; Add field (name : f) ;\n"
      "end VSDFM S ; VSRFM : R ; end VSRFM R ; end VCFM M ;").empty());
  }

  TEST_CASE("derived model with needs and locals")
  {
    const auto doc = parse_vdfm(
      "VLFM : L ;\n"
      "    S-C-SD : Student>V1-primary, Course>V2 ;\n"
      "    VSDFM : S ; end VSDFM S ;\n"
      "    VSRFM : R ; end VSRFM R ;\n"
      "    VersionLM : Student>V3 ; [mandatory]\n"
      "        Revision : R1 ;\n"
      "            Field Definition : x ;\n"
      "                Add field (name : x, type : string) ;\n"
      "    Revision LM : Course>V2>R3 ;\n"
      "end VLFM L ;\n");
    CHECK(doc.kind == ModelKind::Vlfm);
    CHECK(doc.parent_model() == "S-C-SD");
    REQUIRE(doc.needs.size() == 1);
    CHECK(doc.needs[0].features.size() == 2);
    REQUIRE(doc.local_versions.size() == 1);
    CHECK(doc.local_versions[0].path.str() == "Student>V3");
    CHECK(doc.local_versions[0].node.children.size() == 1);
    REQUIRE(doc.local_revisions.size() == 1);
    CHECK(doc.local_revisions[0].path.str() == "Course>V2>R3");
  }

  TEST_CASE("VersionLM is not allowed in an instance model")
  {
    CHECK_FALSE(parse_error(
      "VIFM : I ; M : A ; VSDFM : S ; end VSDFM S ; VSRFM : R ; end VSRFM R ;\n"
      "VersionLM : A>V2 ; end VIFM I ;").empty());
  }

  TEST_CASE("IVFM spelling")
  {
    const auto doc = parse_vdfm("IVFM : I ; M : A ; VSDFM : S ; end VSDFM S ; VSRFM : R ; end VSRFM R ; end IVFM I ;");
    CHECK(doc.kind == ModelKind::Vifm);
  }

  TEST_CASE("container of sub-models")
  {
    const auto doc = parse_vdfm(
      "VDFM : U ;\n"
      "VCFM : M ; VSDFM : S ; end VSDFM S ; VSRFM : R ; end VSRFM R ; end VCFM M ;\n"
      "VLFM : L ; M : A ; VSDFM : S ; end VSDFM S ; VSRFM : R ; end VSRFM R ; end VLFM L ;\n"
      "end VDFM U ;");
    REQUIRE(doc.sub_models.size() == 2);
    CHECK(doc.sub_model("L") != nullptr);
    CHECK(doc.sub_model("L")->kind == ModelKind::Vlfm);
    CHECK(doc.sub_model("X") == nullptr);
  }

  TEST_CASE("nested container is rejected")
  {
    CHECK_FALSE(parse_error("VDFM : U ; VDFM : W ; end VDFM W ; end VDFM U ;").empty());
  }

  TEST_CASE("constraint forms")
  {
    const auto doc = parse_vdfm(
      "VCFM : M ; VSDFM : S ; end VSDFM S ; VSRFM : R ;\n"
      "Imply A>V1 -> B ;\n"
      "Exclude A -- B (why : \"never both\") ;\n"
      "Import A>V1>R1 <- B>V1>R1 (x, y) ;\n"
      "end VSRFM R ; end VCFM M ;");
    const auto & cs = doc.srfm->constraints;
    REQUIRE(cs.size() == 3);
    CHECK(cs[0].kind == ConstraintKind::Imply);
    CHECK(cs[1].kind == ConstraintKind::Exclude);
    CHECK(cs[1].attrs.size() == 1);
    CHECK(cs[2].imported_items.size() == 2);
    CHECK(cs[0].target_span.line == 2);
    CHECK(cs[0].target_span.column == 15);
  }

  TEST_CASE("family program")
  {
    const auto p = family_program();
    CHECK(p.kind == ProgramKind::Family);
    CHECK(p.output_name == "StV1-CsV2");
    CHECK(p.input_model == "S-C-SD");
    REQUIRE(p.selections.size() == 2);
    CHECK(p.selections[0].str() == "Student>V1-primary");
    CHECK(p.selections[1].str() == "Course>V2");
    CHECK_FALSE(p.comments.empty());
  }

  TEST_CASE("instance program")
  {
    const auto p = instance_program();
    CHECK(p.kind == ProgramKind::Instance);
    CHECK(p.output_name == "StV1R2-CsV2R2");
    CHECK(p.input_model == "StV1-CsV2");
    REQUIRE(p.selections.size() == 1);
    CHECK(p.selections[0].str() == "Student>V1-primary>R2");
  }

  TEST_CASE("program needs a selection")
  {
    try {
      parse_selection_program("VLFM X { M : }");
      FAIL("expected ParseError");
    } catch (const ParseError & e) {
      CHECK(std::string(e.what()).find("at least one selection required") != std::string::npos);
    }
  }

  TEST_CASE("program reject clause")
  {
    const auto p = parse_selection_program("VLFM X { M : A, B ; reject : A>V2 ; }");
    CHECK(p.selections.size() == 2);
    REQUIRE(p.rejections.size() == 1);
    CHECK(p.rejections[0].str() == "A>V2");
  }
}
