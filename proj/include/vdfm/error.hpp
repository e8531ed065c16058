// vdfm/error.hpp - exception types raised by toolchain operations
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "vdfm/model.hpp"
#include "vdfm/source.hpp"

namespace vdfm
{

/// Base for every failure an operation reports. `code()` is a stable short name
/// such as `UnknownPath` or `ReplayConflict`.
class Error : public std::runtime_error
{
public:
  Error(std::string code, const std::string & message, SourceSpan span = {})
  : std::runtime_error(message), code_(std::move(code)), span_(span)
  {
  }

  [[nodiscard]] const std::string & code() const { return code_; }
  [[nodiscard]] const SourceSpan & span() const { return span_; }

private:
  std::string code_;
  SourceSpan span_;
};

class ParseError : public Error
{
public:
  ParseError(
    const std::string & message, SourceSpan span, std::vector<std::string> expected = {},
    std::string found = {})
  : Error("ParseError", message, span), expected_(std::move(expected)), found_(std::move(found))
  {
  }

  [[nodiscard]] const std::vector<std::string> & expected() const { return expected_; }
  [[nodiscard]] const std::string & found() const { return found_; }

protected:
  ParseError(
    std::string code, const std::string & message, SourceSpan span,
    std::vector<std::string> expected, std::string found)
  : Error(std::move(code), message, span), expected_(std::move(expected)), found_(std::move(found))
  {
  }

private:
  std::vector<std::string> expected_;
  std::string found_;
};

class LexError : public ParseError
{
public:
  LexError(const std::string & message, SourceSpan span, std::string found)
  : ParseError("LexError", message, span, {}, std::move(found))
  {
  }
};

class UnknownPath : public Error
{
public:
  UnknownPath(FeaturePath path, FeaturePath resolved_prefix);

  [[nodiscard]] const FeaturePath & path() const { return path_; }
  [[nodiscard]] const FeaturePath & resolved_prefix() const { return prefix_; }

private:
  FeaturePath path_;
  FeaturePath prefix_;
};

}  // namespace vdfm
