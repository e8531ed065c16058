// vdfm/lexer.hpp - tokenizer for .vdfm models and .vsel selection programs
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "vdfm/source.hpp"

namespace vdfm
{

enum class TokenKind { Keyword, Identifier, Punct, Literal, Comment, Eof };

std::string_view to_string(TokenKind kind);

/// A lexeme. `text` views the source buffer passed to tokenize(), so tokens
/// must not outlive it. Whitespace between tokens is not tokenized.
struct Token
{
  TokenKind kind = TokenKind::Eof;
  std::string_view text;
  SourceSpan span;

  [[nodiscard]] bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  [[nodiscard]] bool is_keyword(std::string_view t) const { return is(TokenKind::Keyword, t); }
  [[nodiscard]] bool is_punct(std::string_view t) const { return is(TokenKind::Punct, t); }
};

/// Reserved words. Two-word keywords of the language (`Field Definition`,
/// `Add field`, `Revision LM`, ...) are sequences of these.
bool is_keyword(std::string_view word);

/// Splits `source` into tokens ending with Eof. Comments (`//` to end of line)
/// are returned as Comment tokens. Throws LexError on bytes outside the alphabet.
std::vector<Token> tokenize(std::string_view source);

/// Decodes a double-quoted literal token (escapes `\"` and `\\`).
std::string unquote(std::string_view literal);
/// Renders `value` as a literal token.
std::string quote(std::string_view value);

}  // namespace vdfm
