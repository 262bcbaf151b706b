#pragma once

#include <vector>

#include "xai/image.hpp"
#include "xai/model.hpp"
#include "xai/preprocess.hpp"
#include "xai/scoring.hpp"

namespace xai {

struct ClassificationResponse {
  std::vector<ClassificationResult> top;
  std::string model_id;
  double inference_millis = 0.0;
};

// Same ranked classes, labels and confidences; timing is ignored.
inline bool same_top(const ClassificationResponse& a,
                     const ClassificationResponse& b) {
  return a.top == b.top;
}

struct PipelineOptions {
  ResizeMode resize = ResizeMode::kDirect;
};

// Full probability vector for an image at any resolution:
// resize -> normalize -> infer -> softmax.
std::vector<double> class_probabilities(const ModelHandle& model,
                                        const ImageBuffer& image,
                                        const PipelineOptions& options = {});

ClassificationResponse classify(const ModelHandle& model,
                                const ImageBuffer& image, int k,
                                const PipelineOptions& options = {});

}  // namespace xai
