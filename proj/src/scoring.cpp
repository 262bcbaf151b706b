#include "xai/scoring.hpp"

#include <algorithm>
#include <numeric>

#include "xai/labels.hpp"

namespace xai {

std::vector<int> top_k_indices(std::span<const double> probs, int k) {
  if (k < 1 || static_cast<std::size_t>(k) > probs.size()) {
    throw Error(ErrorCode::kArgument, "k must be in [1, " + std::to_string(probs.size()) +
                                          "], got " + std::to_string(k));
  }
  std::vector<int> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](int a, int b) {
    const double pa = probs[static_cast<std::size_t>(a)];
    const double pb = probs[static_cast<std::size_t>(b)];
    return pa != pb ? pa > pb : a < b;
  });
  order.resize(static_cast<std::size_t>(k));
  return order;
}

std::vector<ClassificationResult> top_k(std::span<const double> probs, int k,
                                        const LabelTable& labels) {
  std::vector<ClassificationResult> out;
  for (const int index : top_k_indices(probs, k)) {
    out.push_back({index, labels.at(index), probs[static_cast<std::size_t>(index)]});
  }
  return out;
}

}  // namespace xai
