#include "xai/classify.hpp"

#include <chrono>

namespace xai {

std::vector<double> class_probabilities(const ModelHandle& model, const ImageBuffer& image,
                                        const PipelineOptions& options) {
  const InputTensor input = normalize(resize_to_input(image, options.resize));
  const LogitVector logits = model.infer(input);
  return softmax(logits.values());
}

ClassificationResponse classify(const ModelHandle& model, const ImageBuffer& image, int k,
                                const PipelineOptions& options) {
  if (k < 1 || static_cast<std::size_t>(k) > ModelHandle::output_length()) {
    throw Error(ErrorCode::kArgument, "k must be in [1, 1000], got " + std::to_string(k));
  }
  const auto start = std::chrono::steady_clock::now();
  const auto probs = class_probabilities(model, image, options);
  ClassificationResponse response;
  response.top = top_k(probs, k, model.labels());
  response.model_id = model.model_id();
  response.inference_millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return response;
}

}  // namespace xai
