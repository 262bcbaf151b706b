#pragma once

// Batch replay of the mask-and-classify loop: a baseline plus a fixed list
// of masked interactions per image, read from a JSON manifest.
//
// Manifest shape (paths are relative to the manifest's directory):
//
//   {
//     "fill": "mean",                 // or "black", "#RRGGBB", {"kind": ...}
//     "k": 5,
//     "entries": [
//       {"name": "golden_retriever",
//        "image_path": "corpus/golden_retriever.jpg",
//        "interactions": [{"label": "background", "mask_path": "masks/a.png"}]}
//     ]
//   }

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "xai/classify.hpp"
#include "xai/mask.hpp"

namespace xai {

struct ManifestInteraction {
  std::string label;
  std::filesystem::path mask_path;
};

struct ManifestEntry {
  std::string name;
  std::filesystem::path image_path;
  std::vector<ManifestInteraction> interactions;
};

struct ExperimentManifest {
  std::vector<ManifestEntry> entries;
  FillPolicy fill;
  int k = 5;
};

// Throws kManifest for malformed JSON, a missing field, an empty label, a
// label repeated within one entry or k outside [1, 1000]; kAsset if the
// file cannot be read.
ExperimentManifest parse_manifest(const std::string& text,
                                  const std::filesystem::path& base_dir);
ExperimentManifest load_manifest(const std::filesystem::path& path);

inline constexpr const char* kBaselineLabel = "baseline";

struct ReportRow {
  std::string name;
  std::string interaction;  // kBaselineLabel for the unmasked run
  double coverage = 0.0;
  int class_index = -1;
  std::string class_label;
  double confidence = 0.0;
  // confidence - baseline top-1 confidence.
  double delta = 0.0;
  // Probability still assigned to the baseline's top-1 class.
  double baseline_class_confidence = 0.0;
  std::vector<ClassificationResult> top;
  // Set when this interaction could not be evaluated; the numeric fields are
  // then meaningless.
  std::optional<std::string> error;
};

struct ExperimentReport {
  std::string model_id;
  FillPolicy fill;
  ResizeMode resize = ResizeMode::kDirect;
  int k = 5;
  std::vector<ReportRow> rows;
};

struct RunOptions {
  PipelineOptions pipeline;
  // Entries evaluated concurrently. Rows keep manifest order.
  int threads = 1;
};

// Every referenced file is checked before any inference; a missing or
// undecodable file throws kAsset naming the path. A mask whose size differs
// from its image yields a row with `error` set and the run continues.
ExperimentReport run_experiment(const ModelHandle& model,
                                const ExperimentManifest& manifest,
                                const RunOptions& options = {});

enum class ReportFormat { kMarkdown, kCsv, kJson };
// "md" / "markdown", "csv", "json". Throws kArgument otherwise.
ReportFormat parse_report_format(std::string_view text);

// Deterministic: equal reports render to identical bytes.
std::string render_report(const ExperimentReport& report, ReportFormat format);

struct OcclusionHeatmap {
  int patch = 0;
  int stride = 0;
  int cols = 0;
  int rows = 0;
  int baseline_class = -1;
  std::string baseline_label;
  double baseline_confidence = 0.0;
  // Row-major, rows x cols: baseline-class confidence with the square patch
  // at (col * stride, row * stride) filled.
  std::vector<double> values;

  double at(int col, int row) const { return values[static_cast<std::size_t>(row) * cols + col]; }
};

// Square patch mask with its top-left corner at (x0, y0), clipped to the
// image.
Mask patch_mask(int width, int height, int x0, int y0, int patch);

// Patches are placed in image pixel coordinates before any resize. Throws
// kArgument if patch or stride is below 1 or the patch exceeds either image
// dimension.
OcclusionHeatmap occlusion_sweep(const ModelHandle& model, const ImageBuffer& image,
                                 int patch, int stride, const FillPolicy& fill,
                                 const RunOptions& options = {});

// Markdown grid, CSV (col,row,x,y,confidence,drop) or JSON.
std::string render_heatmap(const OcclusionHeatmap& heatmap, ReportFormat format);

}  // namespace xai
