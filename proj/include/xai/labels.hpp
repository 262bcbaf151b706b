#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace xai {

inline constexpr std::size_t kNumClasses = 1000;

// Class index -> human-readable name. Line i of the source file names
// class i.
class LabelTable {
 public:
  LabelTable() = default;
  explicit LabelTable(std::vector<std::string> names) : names_(std::move(names)) {}

  // Reads a UTF-8 text file with one label per line. A single trailing
  // newline is allowed; CRLF is accepted. Throws kModelMissing if the file
  // cannot be read and kLabelCount unless it has exactly `expected` lines.
  static LabelTable load(const std::filesystem::path& path,
                         std::size_t expected = kNumClasses);

  std::size_t size() const noexcept { return names_.size(); }
  // Throws kArgument when index is out of range.
  const std::string& at(int index) const;

 private:
  std::vector<std::string> names_;
};

}  // namespace xai
