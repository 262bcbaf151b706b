#include "xai/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <iterator>
#include <set>
#include <thread>

#include "xai/codec.hpp"
#include "xai/json_io.hpp"

namespace xai {

namespace fs = std::filesystem;

namespace {

Bytes read_asset(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kAsset, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Every index runs;
// the exception from the lowest failing index is rethrown.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string require_string(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) {
    throw Error(ErrorCode::kManifest, where + ": missing string field '" + key + "'");
  }
  return j.at(key).get<std::string>();
}

ImageBuffer load_image(const fs::path& path) {
  try {
    return decode_image(read_asset(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kAsset) throw;
    throw Error(ErrorCode::kAsset, path.string() + ": " + e.what());
  }
}

Mask load_mask(const fs::path& path) {
  try {
    return decode_mask(read_asset(path));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kAsset) throw;
    throw Error(ErrorCode::kAsset, path.string() + ": " + e.what());
  }
}

ReportRow make_row(const ModelHandle& model, const ImageBuffer& input, int k,
                   const PipelineOptions& pipeline) {
  const std::vector<double> probs = class_probabilities(model, input, pipeline);
  ReportRow row;
  row.top = top_k(probs, k, model.labels());
  row.class_index = row.top.front().class_index;
  row.class_label = row.top.front().label;
  row.confidence = row.top.front().confidence;
  row.baseline_class_confidence = row.confidence;
  return row;
}

std::vector<ReportRow> run_entry(const ModelHandle& model, const ManifestEntry& entry,
                                 const ExperimentManifest& manifest,
                                 const PipelineOptions& pipeline) {
  const ImageBuffer image = load_image(entry.image_path);
  std::vector<ReportRow> rows;

  ReportRow baseline = make_row(model, image, manifest.k, pipeline);
  baseline.name = entry.name;
  baseline.interaction = kBaselineLabel;
  rows.push_back(baseline);

  for (const auto& interaction : entry.interactions) {
    const Mask mask = load_mask(interaction.mask_path);
    if (mask.width() != image.width() || mask.height() != image.height()) {
      ReportRow failed;
      failed.name = entry.name;
      failed.interaction = interaction.label;
      failed.error = "mask " + interaction.mask_path.string() + " is " +
                     std::to_string(mask.width()) + "x" + std::to_string(mask.height()) +
                     " but the image is " + std::to_string(image.width()) + "x" +
                     std::to_string(image.height());
      rows.push_back(std::move(failed));
      continue;
    }
    const ImageBuffer masked = composite(image, mask, manifest.fill);
    const std::vector<double> probs = class_probabilities(model, masked, pipeline);
    ReportRow row;
    row.name = entry.name;
    row.interaction = interaction.label;
    row.coverage = mask_coverage(mask);
    row.top = top_k(probs, manifest.k, model.labels());
    row.class_index = row.top.front().class_index;
    row.class_label = row.top.front().label;
    row.confidence = row.top.front().confidence;
    row.delta = row.confidence - baseline.confidence;
    row.baseline_class_confidence = probs[static_cast<std::size_t>(baseline.class_index)];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string signed_fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%+.4f", v);
  // Avoid "-0.0000" for tiny negative noise.
  if (std::string(buf) == "-0.0000") return "+0.0000";
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string md_cell(const std::string& s) {
  std::string out;
  for (const char c : s) {
    if (c == '|') out += '\\';
    out += c == '\n' ? ' ' : c;
  }
  return out;
}

std::string render_csv(const ExperimentReport& report) {
  std::string out = "name,interaction,coverage,class,confidence,delta\n";
  for (const auto& row : report.rows) {
    out += csv_field(row.name) + "," + csv_field(row.interaction) + ",";
    if (row.error) {
      out += ",ERROR,,\n";
      continue;
    }
    out += fixed(row.coverage) + "," + csv_field(row.class_label) + "," + fixed(row.confidence) +
           "," + signed_fixed(row.delta) + "\n";
  }
  return out;
}

std::string render_markdown(const ExperimentReport& report) {
  std::string out = "# Interaction experiment\n\n";
  out += "- model: `" + report.model_id + "`\n";
  out += "- fill: `" + format_fill(report.fill) + "`\n";
  out += "- preprocessing: `" + std::string(to_string(report.resize)) + "`\n";
  out += "- k: " + std::to_string(report.k) + "\n\n";

  out += "| name | interaction | coverage | class | confidence | delta |\n";
  out += "|---|---|---:|---|---:|---:|\n";
  for (const auto& row : report.rows) {
    out += "| " + md_cell(row.name) + " | " + md_cell(row.interaction) + " | ";
    if (row.error) {
      out += " | error: " + md_cell(*row.error) + " |  |  |\n";
      continue;
    }
    out += fixed(row.coverage) + " | " + md_cell(row.class_label) + " | " +
           fixed(row.confidence) + " | " + signed_fixed(row.delta) + " |\n";
  }

  // One line per image, one column per interaction, as in the interaction
  // design table.
  std::vector<std::pair<std::string, std::vector<const ReportRow*>>> images;
  for (const auto& row : report.rows) {
    if (images.empty() || images.back().first != row.name) images.push_back({row.name, {}});
    images.back().second.push_back(&row);
  }
  std::size_t width = 0;
  for (const auto& [name, rows] : images) width = std::max(width, rows.size());
  if (images.empty()) return out;

  out += "\n## Per image\n\n| image |";
  for (std::size_t i = 0; i < width; ++i) {
    out += i == 0 ? " baseline |" : " interaction " + std::to_string(i) + " |";
  }
  out += "\n|---|";
  for (std::size_t i = 0; i < width; ++i) out += "---|";
  out += "\n";
  for (const auto& [name, rows] : images) {
    out += "| " + md_cell(name) + " |";
    for (std::size_t i = 0; i < width; ++i) {
      if (i >= rows.size()) {
        out += " |";
        continue;
      }
      const ReportRow& r = *rows[i];
      std::string cell = i == 0 ? "" : md_cell(r.interaction) + ": ";
      cell += r.error ? "error" : md_cell(r.class_label) + " (" + fixed(r.confidence, 2) + ")";
      out += " " + cell + " |";
    }
    out += "\n";
  }
  return out;
}

std::string render_json(const ExperimentReport& report) {
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json j = {{"name", row.name}, {"interaction", row.interaction}};
    if (row.error) {
      j["error"] = *row.error;
    } else {
      j["coverage"] = row.coverage;
      j["class"] = row.class_label;
      j["class_index"] = row.class_index;
      j["confidence"] = row.confidence;
      j["delta"] = row.delta;
      j["baseline_class_confidence"] = row.baseline_class_confidence;
      j["top"] = row.top;
      j["error"] = nullptr;
    }
    rows.push_back(std::move(j));
  }
  const Json doc = {{"environment",
                     {{"model_id", report.model_id},
                      {"fill", report.fill},
                      {"resize", std::string(to_string(report.resize))},
                      {"k", report.k}}},
                    {"rows", std::move(rows)}};
  return doc.dump(2) + "\n";
}

}  // namespace

ExperimentManifest parse_manifest(const std::string& text, const fs::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kManifest, std::string("manifest is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kManifest, "manifest must be a JSON object");

  ExperimentManifest manifest;
  try {
    if (doc.contains("fill")) manifest.fill = doc.at("fill").get<FillPolicy>();
    if (doc.contains("k")) manifest.k = doc.at("k").get<int>();
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kManifest, std::string("manifest fill/k: ") + e.what());
  }
  if (manifest.k < 1 || manifest.k > static_cast<int>(kNumClasses)) {
    throw Error(ErrorCode::kManifest, "manifest k must be in [1, 1000]");
  }
  if (!doc.contains("entries") || !doc.at("entries").is_array()) {
    throw Error(ErrorCode::kManifest, "manifest needs an 'entries' array");
  }

  const auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };
  for (const auto& e : doc.at("entries")) {
    const std::string where = "entry " + std::to_string(manifest.entries.size());
    ManifestEntry entry;
    entry.name = require_string(e, "name", where);
    entry.image_path = resolve(require_string(e, "image_path", where));
    if (!e.contains("interactions") || !e.at("interactions").is_array()) {
      throw Error(ErrorCode::kManifest, where + ": needs an 'interactions' array");
    }
    std::set<std::string> seen;
    for (const auto& i : e.at("interactions")) {
      ManifestInteraction interaction;
      interaction.label = require_string(i, "label", where);
      interaction.mask_path = resolve(require_string(i, "mask_path", where));
      if (interaction.label.empty() || interaction.label == kBaselineLabel) {
        throw Error(ErrorCode::kManifest, where + ": interaction label '" + interaction.label +
                                              "' is reserved or empty");
      }
      if (!seen.insert(interaction.label).second) {
        throw Error(ErrorCode::kManifest,
                    where + ": duplicate interaction label '" + interaction.label + "'");
      }
      entry.interactions.push_back(std::move(interaction));
    }
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

ExperimentManifest load_manifest(const fs::path& path) {
  const Bytes bytes = read_asset(path);
  return parse_manifest(std::string(bytes.begin(), bytes.end()), path.parent_path());
}

ExperimentReport run_experiment(const ModelHandle& model, const ExperimentManifest& manifest,
                                const RunOptions& options) {
  for (const auto& entry : manifest.entries) {
    std::error_code ec;
    if (!fs::is_regular_file(entry.image_path, ec)) {
      throw Error(ErrorCode::kAsset, "missing image " + entry.image_path.string());
    }
    for (const auto& interaction : entry.interactions) {
      if (!fs::is_regular_file(interaction.mask_path, ec)) {
        throw Error(ErrorCode::kAsset, "missing mask " + interaction.mask_path.string());
      }
    }
  }

  std::vector<std::vector<ReportRow>> per_entry(manifest.entries.size());
  parallel_for(manifest.entries.size(), options.threads, [&](std::size_t i) {
    per_entry[i] = run_entry(model, manifest.entries[i], manifest, options.pipeline);
  });

  ExperimentReport report;
  report.model_id = model.model_id();
  report.fill = manifest.fill;
  report.resize = options.pipeline.resize;
  report.k = manifest.k;
  for (auto& rows : per_entry) {
    for (auto& row : rows) report.rows.push_back(std::move(row));
  }
  return report;
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "md" || text == "markdown") return ReportFormat::kMarkdown;
  if (text == "csv") return ReportFormat::kCsv;
  if (text == "json") return ReportFormat::kJson;
  throw Error(ErrorCode::kArgument, "unknown report format '" + std::string(text) + "'");
}

std::string render_report(const ExperimentReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kMarkdown: return render_markdown(report);
    case ReportFormat::kCsv: return render_csv(report);
    case ReportFormat::kJson: return render_json(report);
  }
  return {};
}

Mask patch_mask(int width, int height, int x0, int y0, int patch) {
  Mask mask(width, height);
  for (int y = std::max(y0, 0); y < std::min(y0 + patch, height); ++y) {
    for (int x = std::max(x0, 0); x < std::min(x0 + patch, width); ++x) mask.set(x, y, true);
  }
  return mask;
}

OcclusionHeatmap occlusion_sweep(const ModelHandle& model, const ImageBuffer& image, int patch,
                                 int stride, const FillPolicy& fill, const RunOptions& options) {
  if (patch < 1 || stride < 1) {
    throw Error(ErrorCode::kArgument, "patch and stride must be at least 1");
  }
  if (patch > image.width() || patch > image.height()) {
    throw Error(ErrorCode::kArgument, "patch " + std::to_string(patch) + " exceeds the " +
                                          std::to_string(image.width()) + "x" +
                                          std::to_string(image.height()) + " image");
  }
  OcclusionHeatmap heatmap;
  heatmap.patch = patch;
  heatmap.stride = stride;
  heatmap.cols = (image.width() - patch) / stride + 1;
  heatmap.rows = (image.height() - patch) / stride + 1;

  const auto baseline = class_probabilities(model, image, options.pipeline);
  const int cls = top_k_indices(baseline, 1).front();
  heatmap.baseline_class = cls;
  heatmap.baseline_label = model.labels().at(static_cast<std::size_t>(cls));
  heatmap.baseline_confidence = baseline[static_cast<std::size_t>(cls)];

  heatmap.values.resize(static_cast<std::size_t>(heatmap.cols) * heatmap.rows);
  parallel_for(heatmap.values.size(), options.threads, [&](std::size_t i) {
    const int col = static_cast<int>(i % heatmap.cols);
    const int row = static_cast<int>(i / heatmap.cols);
    const Mask mask = patch_mask(image.width(), image.height(), col * stride, row * stride, patch);
    const auto probs = class_probabilities(model, composite(image, mask, fill), options.pipeline);
    heatmap.values[i] = probs[static_cast<std::size_t>(cls)];
  });
  return heatmap;
}

std::string render_heatmap(const OcclusionHeatmap& h, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv: {
      std::string out = "col,row,x,y,confidence,drop\n";
      for (int r = 0; r < h.rows; ++r) {
        for (int c = 0; c < h.cols; ++c) {
          out += std::to_string(c) + "," + std::to_string(r) + "," + std::to_string(c * h.stride) +
                 "," + std::to_string(r * h.stride) + "," + fixed(h.at(c, r), 6) + "," +
                 fixed(h.baseline_confidence - h.at(c, r), 6) + "\n";
        }
      }
      return out;
    }
    case ReportFormat::kJson: {
      const Json doc = {{"patch", h.patch},
                        {"stride", h.stride},
                        {"cols", h.cols},
                        {"rows", h.rows},
                        {"baseline_class", h.baseline_class},
                        {"baseline_label", h.baseline_label},
                        {"baseline_confidence", h.baseline_confidence},
                        {"values", h.values}};
      return doc.dump(2) + "\n";
    }
    case ReportFormat::kMarkdown: {
      std::string out = "Baseline class: " + md_cell(h.baseline_label) + " (" +
                        fixed(h.baseline_confidence) + "), patch " + std::to_string(h.patch) +
                        ", stride " + std::to_string(h.stride) + "\n\n| y \\ x |";
      for (int c = 0; c < h.cols; ++c) out += " " + std::to_string(c * h.stride) + " |";
      out += "\n|---|";
      for (int c = 0; c < h.cols; ++c) out += "---:|";
      out += "\n";
      for (int r = 0; r < h.rows; ++r) {
        out += "| " + std::to_string(r * h.stride) + " |";
        for (int c = 0; c < h.cols; ++c) out += " " + fixed(h.at(c, r)) + " |";
        out += "\n";
      }
      return out;
    }
  }
  return {};
}

}  // namespace xai
