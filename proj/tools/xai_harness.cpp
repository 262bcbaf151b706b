// xai-harness: batch experiments, occlusion sweeps and stroke-script
// rasterization from the command line.
//
// Exit codes: 0 success, 1 usage, 2 asset error, 3 model error.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <thread>

#include "xai/codec.hpp"
#include "xai/experiment.hpp"
#include "xai/json_io.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAsset = 2;
constexpr int kExitModel = 3;

int exit_code_for(xai::ErrorCode code) {
  using xai::ErrorCode;
  switch (code) {
    case ErrorCode::kModelMissing:
    case ErrorCode::kModelShape:
    case ErrorCode::kLabelCount:
    case ErrorCode::kInference:
    case ErrorCode::kNumeric:
      return kExitModel;
    case ErrorCode::kArgument:
    case ErrorCode::kInvalidStroke:
      return kExitUsage;
    default:
      return kExitAsset;
  }
}

xai::Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw xai::Error(xai::ErrorCode::kAsset, "cannot read " + path.string());
  return xai::Bytes(std::istreambuf_iterator<char>(in), {});
}

void write_output(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  file << text;
  if (!file) throw xai::Error(xai::ErrorCode::kAsset, "cannot write " + out);
}

struct ModelArgs {
  std::string model;
  std::string labels;
  std::string fill;
  std::string format = "md";
  std::string out;
  std::string resize = "direct";
  int threads = 0;
  bool single_threaded = false;

  void add_to(CLI::App& app) {
    app.add_option("--model", model, "ONNX file, or 'stub' / 'stub:<seed>'")
        ->envname("XAI_MODEL_PATH")
        ->required();
    auto* l = app.add_option("--labels", labels, "ImageNet label file, one name per line")
                  ->envname("XAI_LABELS_PATH");
#ifdef XAI_DEFAULT_LABELS
    labels = XAI_DEFAULT_LABELS;
    l->capture_default_str();
#else
    l->required();
#endif
    app.add_option("--format", format, "md, csv or json")
        ->check(CLI::IsMember({"md", "markdown", "csv", "json"}))
        ->capture_default_str();
    app.add_option("--out", out, "Output file (default stdout)");
    app.add_option("--resize", resize, "direct or resize256-crop224")
        ->check(CLI::IsMember({"direct", "resize256-crop224", "crop"}))
        ->capture_default_str();
    app.add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");
    app.add_flag("--single-threaded-backend", single_threaded,
                 "Pin the inference backend to one thread for bit-identical reruns");
  }

  xai::ModelHandle load() const {
    return xai::load_model(model, labels, {single_threaded});
  }

  xai::RunOptions run_options() const {
    const int n = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    return {{xai::parse_resize_mode(resize)}, std::max(n, 1)};
  }
};

int run_command(const ModelArgs& args, const std::string& manifest_path) {
  const auto start = std::chrono::steady_clock::now();
  xai::ExperimentManifest manifest = xai::load_manifest(manifest_path);
  if (!args.fill.empty()) manifest.fill = xai::parse_fill(args.fill);
  const xai::ModelHandle model = args.load();
  spdlog::info("model {} loaded; {} entries, fill {}", model.model_id(), manifest.entries.size(),
               xai::format_fill(manifest.fill));
  const xai::ExperimentReport report = xai::run_experiment(model, manifest, args.run_options());
  write_output(args.out, xai::render_report(report, xai::parse_report_format(args.format)));

  int failed = 0;
  for (const auto& row : report.rows) {
    if (row.error) {
      ++failed;
      spdlog::warn("{} / {}: {}", row.name, row.interaction, *row.error);
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  spdlog::info("{} rows ({} failed) in {:.2f} s", report.rows.size(), failed, secs);
  return kExitOk;
}

int sweep_command(const ModelArgs& args, const std::string& image_path, int patch, int stride) {
  const xai::ImageBuffer image = [&] {
    try {
      return xai::decode_image(read_file(image_path));
    } catch (const xai::Error& e) {
      if (e.code() == xai::ErrorCode::kAsset) throw;
      throw xai::Error(xai::ErrorCode::kAsset, image_path + ": " + e.what());
    }
  }();
  const xai::FillPolicy fill =
      args.fill.empty() ? xai::FillPolicy::dataset_mean() : xai::parse_fill(args.fill);
  const xai::ModelHandle model = args.load();
  const auto heatmap = xai::occlusion_sweep(model, image, patch, stride, fill, args.run_options());
  write_output(args.out, xai::render_heatmap(heatmap, xai::parse_report_format(args.format)));
  spdlog::info("{}x{} grid, baseline {} ({:.4f})", heatmap.cols, heatmap.rows,
               heatmap.baseline_label, heatmap.baseline_confidence);
  return kExitOk;
}

int rasterize_command(const std::string& script_path, const std::string& out) {
  xai::Json script;
  try {
    const auto bytes = read_file(script_path);
    script = xai::Json::parse(bytes.begin(), bytes.end());
  } catch (const xai::Json::exception& e) {
    throw xai::Error(xai::ErrorCode::kAsset, script_path + ": " + e.what());
  }
  const xai::Bytes png = xai::encode_mask(xai::replay_stroke_script(script));
  write_output(out, std::string(png.begin(), png.end()));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("xai-harness"));
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Replay masked-classification experiments and occlusion sweeps"};
  app.require_subcommand(1);

  ModelArgs run_args;
  std::string manifest;
  auto* run = app.add_subcommand("run", "Run every manifest entry and render a report");
  run->add_option("--manifest", manifest, "Experiment manifest (JSON)")->required();
  run_args.add_to(*run);
  run->add_option("--fill", run_args.fill, "mean, black, white or #RRGGBB (overrides manifest)");

  ModelArgs sweep_args;
  std::string image;
  int patch = 56;
  int stride = 56;
  auto* sweep = app.add_subcommand("sweep", "Occlude a sliding square patch and map confidence");
  sweep->add_option("--image", image, "Input image")->required();
  sweep->add_option("--patch", patch, "Patch side in image pixels")->capture_default_str();
  sweep->add_option("--stride", stride, "Step between patches")->capture_default_str();
  sweep_args.add_to(*sweep);
  sweep->add_option("--fill", sweep_args.fill, "mean, black, white or #RRGGBB")
      ->default_str("mean");

  std::string script;
  std::string mask_out;
  auto* rasterize = app.add_subcommand("rasterize", "Replay a stroke script into a mask PNG");
  rasterize->add_option("--script", script, "Stroke script (JSON)")->required();
  rasterize->add_option("--out", mask_out, "Output PNG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run) return run_command(run_args, manifest);
    if (*sweep) return sweep_command(sweep_args, image, patch, stride);
    if (*rasterize) return rasterize_command(script, mask_out);
  } catch (const xai::Error& e) {
    spdlog::error("{}: {}", xai::to_string(e.code()), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitAsset;
  }
  return kExitUsage;
}
