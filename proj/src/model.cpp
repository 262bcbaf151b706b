#include "xai/model.hpp"

#include <charconv>
#include <cmath>
#include <string>

namespace xai {

LogitVector::LogitVector(std::vector<float> values) : values_(std::move(values)) {
  if (values_.size() != kNumClasses) {
    throw Error(ErrorCode::kModelShape, "expected " + std::to_string(kNumClasses) +
                                            " logits, got " + std::to_string(values_.size()));
  }
  for (const float v : values_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNumeric, "non-finite logit");
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Uniform in [-1, 1), identical on every platform.
double symmetric_unit(std::uint64_t& state) {
  return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-52 - 1.0;
}

class LinearStub final : public Model {
 public:
  static constexpr int kGrid = 4;
  static constexpr int kPatch = kInputSize / kGrid;
  static constexpr int kFeatures = kGrid * kGrid * kInputChannels;

  explicit LinearStub(std::uint64_t seed) : seed_(seed) {
    std::uint64_t state = seed;
    weights_.resize(kNumClasses * kFeatures);
    for (double& w : weights_) w = 2.0 * symmetric_unit(state);
    bias_.resize(kNumClasses);
    for (double& b : bias_) b = 0.5 * symmetric_unit(state);
  }

  std::string id() const override { return "stub-linear:seed=" + std::to_string(seed_); }

  std::vector<float> forward(const InputTensor& input) const override {
    std::vector<double> features(kFeatures, 0.0);
    for (int c = 0; c < kInputChannels; ++c) {
      for (int y = 0; y < kInputSize; ++y) {
        for (int x = 0; x < kInputSize; ++x) {
          const int cell = (y / kPatch) * kGrid + (x / kPatch);
          features[static_cast<std::size_t>(c * kGrid * kGrid + cell)] += input.at(c, y, x);
        }
      }
    }
    for (double& f : features) f /= static_cast<double>(kPatch * kPatch);

    std::vector<float> logits(kNumClasses);
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      double acc = bias_[k];
      const double* row = &weights_[k * kFeatures];
      for (int f = 0; f < kFeatures; ++f) acc += row[f] * features[static_cast<std::size_t>(f)];
      logits[k] = static_cast<float>(acc);
    }
    return logits;
  }

 private:
  std::uint64_t seed_;
  std::vector<double> weights_;
  std::vector<double> bias_;
};

class FixedLogits final : public Model {
 public:
  explicit FixedLogits(std::vector<float> logits) : logits_(std::move(logits)) {}
  std::string id() const override { return "fixed-logits"; }
  std::vector<float> forward(const InputTensor&) const override { return logits_; }

 private:
  std::vector<float> logits_;
};

}  // namespace

std::shared_ptr<const Model> make_linear_stub(std::uint64_t seed) {
  return std::make_shared<LinearStub>(seed);
}

std::shared_ptr<const Model> make_fixed_logits(std::vector<float> logits) {
  return std::make_shared<FixedLogits>(std::move(logits));
}

ModelHandle::ModelHandle(std::shared_ptr<const Model> model, LabelTable labels)
    : model_(std::move(model)), labels_(std::move(labels)) {
  if (!model_) throw Error(ErrorCode::kModelMissing, "null model");
  if (labels_.size() != kNumClasses) {
    throw Error(ErrorCode::kLabelCount, "label table has " + std::to_string(labels_.size()) +
                                            " entries, expected " + std::to_string(kNumClasses));
  }
  model_id_ = model_->id();
}

LogitVector ModelHandle::infer(const InputTensor& input) const {
  if (!input.all_finite()) {
    throw Error(ErrorCode::kInference, "input tensor contains a non-finite value");
  }
  std::vector<float> raw;
  try {
    raw = model_->forward(input);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kInference, std::string("inference backend failed: ") + e.what());
  }
  try {
    return LogitVector(std::move(raw));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kNumeric) {
      throw Error(ErrorCode::kInference, std::string("backend produced ") + e.what());
    }
    throw;
  }
}

ModelHandle load_model(const std::string& model_path, const std::filesystem::path& labels_path,
                       const ModelOptions& options) {
  LabelTable labels = LabelTable::load(labels_path);
  if (model_path == "stub" || model_path.starts_with("stub:")) {
    std::uint64_t seed = 0;
    if (model_path.size() > 4) {
      const char* first = model_path.data() + 5;
      const char* last = model_path.data() + model_path.size();
      const auto [ptr, ec] = std::from_chars(first, last, seed);
      if (ec != std::errc{} || ptr != last || first == last) {
        throw Error(ErrorCode::kModelMissing, "malformed stub model name '" + model_path +
                                                  "' (expected stub or stub:<seed>)");
      }
    }
    return ModelHandle(make_linear_stub(seed), std::move(labels));
  }
  return ModelHandle(load_onnx_model(model_path, options), std::move(labels));
}

}  // namespace xai
