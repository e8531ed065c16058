// vdfm/lexer.cpp - tokenizer for .vdfm models and .vsel selection programs
#include "vdfm/lexer.hpp"

#include <array>
#include <cctype>

#include "vdfm/error.hpp"

namespace vdfm
{

namespace
{

constexpr std::array<std::string_view, 26> kKeywords = {
  "VDFM",   "VCFM",     "VLFM",    "VIFM",   "IVFM",   "VSDFM",     "VSRFM",
  "end",    "Relation", "Version", "Revision", "Field", "Definition", "IC",
  "Add",    "Delete",   "Modify",  "field",  "Imply",  "Exclude",   "Import",
  "VersionLM", "RevisionLM", "LM", "IVM",    "reject",
};

// Longest match first.
constexpr std::array<std::string_view, 3> kDoublePunct = {"->", "--", "<-"};
constexpr std::string_view kSinglePunct = ":;,>()[]{}.";

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_word_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }

}  // namespace

std::string_view to_string(TokenKind kind)
{
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Punct: return "punctuation";
    case TokenKind::Literal: return "literal";
    case TokenKind::Comment: return "comment";
    case TokenKind::Eof: return "end of input";
  }
  return "?";
}

bool is_keyword(std::string_view word)
{
  for (auto k : kKeywords) {
    if (k == word) {
      return true;
    }
  }
  return false;
}

std::vector<Token> tokenize(std::string_view source)
{
  const LineIndex lines(source);
  std::vector<Token> tokens;
  std::size_t pos = 0;
  const std::size_t n = source.size();

  auto emit = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    tokens.push_back(Token{kind, source.substr(begin, end - begin), lines.span(begin, end)});
  };

  while (pos < n) {
    const char c = source[pos];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++pos;
      continue;
    }
    const std::size_t begin = pos;

    if (c == '/' && pos + 1 < n && source[pos + 1] == '/') {
      while (pos < n && source[pos] != '\n' && source[pos] != '\r') {
        ++pos;
      }
      emit(TokenKind::Comment, begin, pos);
      continue;
    }

    if (c == '"') {
      ++pos;
      bool closed = false;
      while (pos < n && source[pos] != '\n') {
        if (source[pos] == '\\' && pos + 1 < n && (source[pos + 1] == '"' || source[pos + 1] == '\\')) {
          pos += 2;
          continue;
        }
        if (source[pos] == '"') {
          ++pos;
          closed = true;
          break;
        }
        ++pos;
      }
      if (!closed) {
        throw LexError(
          "unterminated string literal", lines.span(begin, pos),
          std::string(source.substr(begin, pos - begin)));
      }
      emit(TokenKind::Literal, begin, pos);
      continue;
    }

    if (is_alpha(c)) {
      ++pos;
      while (pos < n) {
        if (is_word_char(source[pos])) {
          ++pos;
        } else if (source[pos] == '-' && pos + 1 < n && is_word_char(source[pos + 1])) {
          pos += 2;
        } else {
          break;
        }
      }
      const auto word = source.substr(begin, pos - begin);
      emit(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, pos);
      continue;
    }

    bool matched = false;
    for (auto p : kDoublePunct) {
      if (source.substr(pos, 2) == p) {
        pos += 2;
        emit(TokenKind::Punct, begin, pos);
        matched = true;
        break;
      }
    }
    if (matched) {
      continue;
    }
    if (kSinglePunct.find(c) != std::string_view::npos) {
      ++pos;
      emit(TokenKind::Punct, begin, pos);
      continue;
    }

    std::string shown;
    if (std::isprint(static_cast<unsigned char>(c))) {
      shown = std::string(1, c);
    } else {
      static constexpr char kHex[] = "0123456789abcdef";
      const auto byte = static_cast<unsigned char>(c);
      shown = std::string("\\x") + kHex[byte >> 4] + kHex[byte & 0xf];
    }
    throw LexError("unexpected character '" + shown + "'", lines.span(pos, pos + 1), shown);
  }
  tokens.push_back(Token{TokenKind::Eof, source.substr(n, 0), lines.span(n, n)});
  return tokens;
}

std::string unquote(std::string_view literal)
{
  if (literal.size() < 2) {
    return std::string(literal);
  }
  std::string out;
  for (std::size_t i = 1; i + 1 < literal.size(); ++i) {
    if (literal[i] == '\\' && i + 2 < literal.size()) {
      ++i;
    }
    out += literal[i];
  }
  return out;
}

std::string quote(std::string_view value)
{
  std::string out = "\"";
  for (char c : value) {
    if (c == '"' || c == '\\') {
      out += '\\';
    }
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace vdfm
