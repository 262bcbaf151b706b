#include "xai/labels.hpp"

#include <fstream>

#include "xai/error.hpp"

namespace xai {

LabelTable LabelTable::load(const std::filesystem::path& path, std::size_t expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kModelMissing, "cannot read label file " + path.string());
  }
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    names.push_back(std::move(line));
  }
  if (names.size() != expected) {
    throw Error(ErrorCode::kLabelCount, "label file " + path.string() + " has " +
                                            std::to_string(names.size()) + " lines, expected " +
                                            std::to_string(expected));
  }
  return LabelTable(std::move(names));
}

const std::string& LabelTable::at(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= names_.size()) {
    throw Error(ErrorCode::kArgument, "class index " + std::to_string(index) + " out of range");
  }
  return names_[static_cast<std::size_t>(index)];
}

}  // namespace xai
