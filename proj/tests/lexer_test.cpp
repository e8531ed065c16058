#include <doctest.h>

#include "vdfm/error.hpp"
#include "vdfm/lexer.hpp"

using namespace vdfm;

TEST_SUITE("lexer")
{
  TEST_CASE("path tokens")
  {
    const auto t = tokenize("Student>V1-primary");
    REQUIRE(t.size() == 4);
    CHECK(t[0].kind == TokenKind::Identifier);
    CHECK(t[0].text == "Student");
    CHECK(t[1].is_punct(">"));
    CHECK(t[2].text == "V1-primary");
    CHECK(t[3].kind == TokenKind::Eof);
  }

  TEST_CASE("empty input is just eof")
  {
    const auto t = tokenize("");
    REQUIRE(t.size() == 1);
    CHECK(t[0].kind == TokenKind::Eof);
  }

  TEST_CASE("keywords and punctuation")
  {
    const auto t = tokenize("Version : V1 ;");
    REQUIRE(t.size() == 5);
    CHECK(t[0].is_keyword("Version"));
    CHECK(t[1].is_punct(":"));
    CHECK(t[2].kind == TokenKind::Identifier);
    CHECK(t[3].is_punct(";"));
  }

  TEST_CASE("arrows are single tokens")
  {
    const auto t = tokenize("A -> B -- C <- D");
    CHECK(t[1].is_punct("->"));
    CHECK(t[3].is_punct("--"));
    CHECK(t[5].is_punct("<-"));
  }

  TEST_CASE("comments run to end of line")
  {
    const auto t = tokenize("A // hello ; world\nB");
    REQUIRE(t.size() == 4);
    CHECK(t[1].kind == TokenKind::Comment);
    CHECK(t[1].text == "// hello ; world");
    CHECK(t[2].span.line == 2);
    CHECK(t[2].span.column == 1);
  }

  TEST_CASE("string literals and escapes")
  {
    const auto t = tokenize(R"(x : "say \"hi\" \\ now")");
    REQUIRE(t[2].kind == TokenKind::Literal);
    CHECK(unquote(t[2].text) == R"(say "hi" \ now)");
    CHECK(unquote(quote("a\"b\\c")) == "a\"b\\c");
  }

  TEST_CASE("unterminated literal")
  {
    CHECK_THROWS_AS(tokenize("\"open\nx"), LexError);
  }

  TEST_CASE("bytes outside the alphabet")
  {
    try {
      tokenize("Relation : A ; $");
      FAIL("expected LexError");
    } catch (const LexError & e) {
      CHECK(e.span().line == 1);
      CHECK(e.span().column == 16);
      CHECK(e.found() == "$");
    }
  }

  TEST_CASE("identifier dashes")
  {
    const auto t = tokenize("St-Nat-Id-Pk");
    REQUIRE(t.size() == 2);
    CHECK(t[0].text == "St-Nat-Id-Pk");
    CHECK(is_keyword("Revision"));
    CHECK_FALSE(is_keyword("Student"));
  }
}
