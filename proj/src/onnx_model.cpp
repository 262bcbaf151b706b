#include <mutex>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>
#include <opencv2/dnn/shape_utils.hpp>

#include "xai/hash.hpp"
#include "xai/model.hpp"

namespace xai {

namespace {

// cv::dnn::Net is not reentrant; forward passes are serialized.
class OnnxModel final : public Model {
 public:
  OnnxModel(cv::dnn::Net net, std::string id) : net_(std::move(net)), id_(std::move(id)) {}

  std::string id() const override { return id_; }

  std::vector<float> forward(const InputTensor& input) const override {
    const auto shape = InputTensor::shape();
    const int dims[4] = {shape[0], shape[1], shape[2], shape[3]};
    const auto values = input.values();
    // setInput copies the blob, so wrapping the const buffer is safe.
    const cv::Mat blob(4, dims, CV_32F, const_cast<float*>(values.data()));
    std::lock_guard lock(mutex_);
    try {
      net_.setInput(blob);
      cv::Mat out = net_.forward();
      out = out.reshape(1, 1);
      if (out.type() != CV_32F) out.convertTo(out, CV_32F);
      return std::vector<float>(out.begin<float>(), out.end<float>());
    } catch (const cv::Exception& e) {
      throw Error(ErrorCode::kInference, std::string("OpenCV DNN: ") + e.what());
    }
  }

 private:
  mutable std::mutex mutex_;
  mutable cv::dnn::Net net_;
  std::string id_;
};

}  // namespace

std::shared_ptr<const Model> load_onnx_model(const std::filesystem::path& path,
                                             const ModelOptions& options) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::kModelMissing, "model file not found: " + path.string());
  }
  if (options.single_threaded) cv::setNumThreads(1);

  cv::dnn::Net net;
  try {
    net = cv::dnn::readNetFromONNX(path.string());
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::kModelMissing,
                "cannot parse ONNX model " + path.string() + ": " + e.what());
  }
  if (net.empty()) throw Error(ErrorCode::kModelMissing, "empty network in " + path.string());
  net.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
  net.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);

  const auto in = InputTensor::shape();
  const cv::dnn::MatShape input_shape{in[0], in[1], in[2], in[3]};
  std::size_t outputs = 0;
  try {
    const auto out_layers = net.getUnconnectedOutLayers();
    if (out_layers.size() != 1) {
      throw Error(ErrorCode::kModelShape, "model must have exactly one output");
    }
    std::vector<cv::dnn::MatShape> in_shapes;
    std::vector<cv::dnn::MatShape> out_shapes;
    net.getLayerShapes(input_shape, out_layers[0], in_shapes, out_shapes);
    if (out_shapes.empty()) throw Error(ErrorCode::kModelShape, "model output shape unknown");
    outputs = static_cast<std::size_t>(cv::dnn::total(out_shapes[0]));
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::kModelShape,
                std::string("model does not accept a 1x3x224x224 input: ") + e.what());
  }
  if (outputs != kNumClasses) {
    throw Error(ErrorCode::kModelShape, "model produces " + std::to_string(outputs) +
                                            " outputs, expected " + std::to_string(kNumClasses));
  }
  const std::string id =
      "onnx:" + path.filename().string() + "@" + sha256_file(path).substr(0, 12);
  return std::make_shared<OnnxModel>(std::move(net), id);
}

}  // namespace xai
