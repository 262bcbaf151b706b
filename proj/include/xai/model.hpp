#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "xai/labels.hpp"
#include "xai/preprocess.hpp"

namespace xai {

// Raw pre-softmax model output: one finite value per ImageNet-1k class.
class LogitVector {
 public:
  // Throws kModelShape unless values.size() == kNumClasses and kNumeric if
  // any value is not finite.
  explicit LogitVector(std::vector<float> values);

  std::span<const float> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  float operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const LogitVector&, const LogitVector&) = default;

 private:
  std::vector<float> values_;
};

// Inference backend. Implementations must be safe to call concurrently.
class Model {
 public:
  virtual ~Model() = default;

  virtual std::string id() const = 0;
  // Raw outputs for one input; length is checked by ModelHandle.
  virtual std::vector<float> forward(const InputTensor& input) const = 0;
};

struct ModelOptions {
  // Pins the backend to one thread so repeated runs are bit-identical.
  bool single_threaded = false;
};

// ONNX network executed through OpenCV's DNN runtime. Throws kModelMissing
// if the file is absent or unreadable and kModelShape unless the network
// maps a 1x3x224x224 input to exactly 1000 outputs.
std::shared_ptr<const Model> load_onnx_model(const std::filesystem::path& path,
                                             const ModelOptions& options = {});

// Deterministic stand-in used for offline tests: the 224x224 input is cut
// into a 4x4 grid of 56x56 patches, the per-channel mean of each patch
// forms a 48-entry feature vector, and logits = W * features + b with W and
// b drawn from a seeded generator.
std::shared_ptr<const Model> make_linear_stub(std::uint64_t seed = 0);

// Returns `logits` regardless of input.
std::shared_ptr<const Model> make_fixed_logits(std::vector<float> logits);

// A loaded model paired with its label table. Immutable and shareable.
class ModelHandle {
 public:
  // Throws kLabelCount unless labels.size() == kNumClasses.
  ModelHandle(std::shared_ptr<const Model> model, LabelTable labels);

  // Throws kInference if the input holds a non-finite value or the backend
  // fails, and kModelShape if the backend returns the wrong length.
  LogitVector infer(const InputTensor& input) const;

  const std::string& model_id() const noexcept { return model_id_; }
  const LabelTable& labels() const noexcept { return labels_; }
  static constexpr std::array<int, 4> input_shape() { return InputTensor::shape(); }
  static constexpr std::size_t output_length() { return kNumClasses; }

 private:
  std::shared_ptr<const Model> model_;
  LabelTable labels_;
  std::string model_id_;
};

// `model_path` is either an .onnx file or "stub" / "stub:<seed>" for the
// linear stub. Label errors are reported before model errors.
ModelHandle load_model(const std::string& model_path,
                       const std::filesystem::path& labels_path,
                       const ModelOptions& options = {});

}  // namespace xai
