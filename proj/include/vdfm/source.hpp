// vdfm/source.hpp - source locations and comment trivia
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace vdfm
{

/// Byte range [begin, end) into a source buffer, plus the 1-based line/column of `begin`.
struct SourceSpan
{
  std::size_t begin = 0;
  std::size_t end = 0;
  int line = 0;
  int column = 0;

  [[nodiscard]] bool valid() const { return line > 0; }
};

/// Comments attached to one printable line of a document. `leading` comments
/// print on their own lines before the element; `trailing` stays on the same line.
struct Trivia
{
  std::vector<std::string> leading;
  std::string trailing;

  [[nodiscard]] bool empty() const { return leading.empty() && trailing.empty(); }
  bool operator==(const Trivia &) const = default;
};

/// Maps byte offsets to line/column pairs.
class LineIndex
{
public:
  explicit LineIndex(std::string_view source);

  [[nodiscard]] int line_of(std::size_t offset) const;
  [[nodiscard]] int column_of(std::size_t offset) const;
  [[nodiscard]] SourceSpan span(std::size_t begin, std::size_t end) const;

private:
  std::vector<std::size_t> line_starts_;
};

}  // namespace vdfm
