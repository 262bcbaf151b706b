#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xai/error.hpp"

namespace xai {

class LabelTable;

// Numerically stable softmax: exp(l_i - max) / sum_k exp(l_k - max),
// accumulated in double. Throws kNumeric on empty or non-finite input.
template <typename T>
std::vector<double> softmax(std::span<const T> logits) {
  if (logits.empty()) {
    throw Error(ErrorCode::kNumeric, "softmax of an empty vector");
  }
  double max_logit = -INFINITY;
  for (const T v : logits) {
    if (!std::isfinite(static_cast<double>(v))) {
      throw Error(ErrorCode::kNumeric, "softmax input contains a non-finite value");
    }
    max_logit = std::max(max_logit, static_cast<double>(v));
  }
  std::vector<double> probs(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(static_cast<double>(logits[i]) - max_logit);
    total += probs[i];
  }
  for (double& p : probs) p /= total;
  return probs;
}

template <typename T>
std::vector<double> softmax(const std::vector<T>& logits) {
  return softmax(std::span<const T>(logits));
}

struct ClassificationResult {
  int class_index = 0;
  std::string label;
  double confidence = 0.0;

  friend bool operator==(const ClassificationResult&,
                         const ClassificationResult&) = default;
};

// Indices of the k largest probabilities, descending; equal probabilities
// are ordered by ascending index. Throws kArgument unless 1 <= k <= size.
std::vector<int> top_k_indices(std::span<const double> probs, int k);

// top_k_indices joined with the label table. The label table must cover
// every index in probs.
std::vector<ClassificationResult> top_k(std::span<const double> probs, int k,
                                        const LabelTable& labels);

}  // namespace xai
