// Acceptance suite. One line per criterion:
//
//   PASS|FAIL|SKIP  <criterion>  <seconds>s  <detail>
//
// Exit status is non-zero iff any criterion fails. Criteria that need real
// ImageNet weights read XAI_MODEL_PATH (and optionally XAI_LABELS_PATH) and
// are skipped without them.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"
#include "xai/codec.hpp"
#include "xai/experiment.hpp"
#include "xai/session.hpp"

namespace xai {
namespace {

namespace fs = std::filesystem;
using testing::Rng;
using testing::uniform_int;
using testing::uniform_real;

const fs::path kAssets = XAI_ASSETS_DIR;
const std::string kStubLabels = (kAssets / "labels/imagenet_classes.txt").string();

struct Outcome {
  enum Status { kPass, kFail, kSkip } status = kPass;
  std::string detail;
};

Outcome pass(std::string d = {}) { return {Outcome::kPass, std::move(d)}; }
Outcome fail(std::string d) { return {Outcome::kFail, std::move(d)}; }
Outcome skip(std::string d) { return {Outcome::kSkip, std::move(d)}; }

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v == nullptr ? std::string() : std::string(v);
}

Bytes slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kAsset, "cannot read " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

std::string fmt(double v, const char* format = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome softmax_suite() {
  Rng rng(1001);
  double worst_sum = 0.0;
  double worst_shift = 0.0;
  int argmax_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double scale = std::pow(10.0, uniform_real(rng, -2.0, 2.5));
    std::vector<float> logits(1000);
    for (float& l : logits) l = static_cast<float>(uniform_real(rng, -scale, scale));
    const auto p = softmax(std::span<const float>(logits));

    double sum = 0.0;
    for (double v : p) sum += v;
    worst_sum = std::max(worst_sum, std::abs(sum - 1.0));

    const double c = uniform_real(rng, -1000.0, 1000.0);
    std::vector<double> shifted(logits.begin(), logits.end());
    for (double& v : shifted) v += c;
    const auto q = softmax(std::span<const double>(shifted));
    for (std::size_t i = 0; i < p.size(); ++i) {
      worst_shift = std::max(worst_shift, std::abs(p[i] - q[i]));
    }

    const auto arg_l = std::max_element(logits.begin(), logits.end()) - logits.begin();
    const auto arg_p = std::max_element(p.begin(), p.end()) - p.begin();
    if (arg_l != arg_p) ++argmax_mismatch;
  }
  const std::string detail = "max|sum-1|=" + fmt(worst_sum) + " max shift diff=" +
                             fmt(worst_shift) + " argmax mismatches=" +
                             std::to_string(argmax_mismatch);
  if (worst_sum > 1e-6 || worst_shift > 1e-6 || argmax_mismatch != 0) return fail(detail);
  return pass(detail);
}

Outcome compositing_oracle() {
  Rng rng(1002);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int w = uniform_int(rng, 1, 64);
    const int h = uniform_int(rng, 1, 64);
    const ImageBuffer image = testing::random_image(rng, w, h);
    const Mask mask = testing::random_mask(rng, w, h, uniform_real(rng, 0.0, 1.0));
    const FillPolicy fill =
        trial % 3 == 0 ? FillPolicy::dataset_mean()
                       : FillPolicy::constant({static_cast<std::uint8_t>(uniform_int(rng, 0, 255)),
                                               static_cast<std::uint8_t>(uniform_int(rng, 0, 255)),
                                               static_cast<std::uint8_t>(uniform_int(rng, 0, 255))});
    if (!(composite(image, mask, fill) == testing::per_pixel_composite(image, mask, fill.resolve()))) {
      ++mismatches;
    }
  }
  const std::string detail = "500 cases, " + std::to_string(mismatches) + " mismatches";
  return mismatches == 0 ? pass(detail) : fail(detail);
}

Outcome stroke_oracle() {
  Rng rng(1003);
  int oracle_mismatch = 0;
  int not_idempotent = 0;
  int erase_leftovers = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Mask before = testing::random_mask(rng, 64, 64, uniform_real(rng, 0.0, 0.6));
    const StrokeMode mode = trial % 2 == 0 ? StrokeMode::kPaint : StrokeMode::kErase;
    const Stroke s = testing::random_stroke(rng, 64, 64, mode, 12.0, 16.0);
    const Mask after = apply_stroke(before, s);
    if (!(after == testing::brute_force_stroke(before, s))) ++oracle_mismatch;
    if (!(apply_stroke(after, s) == after)) ++not_idempotent;

    // Erase along the same path with a radius at least as large.
    Stroke paint = s;
    paint.mode = StrokeMode::kPaint;
    Stroke erase = s;
    erase.mode = StrokeMode::kErase;
    erase.brush_radius = s.brush_radius + static_cast<float>(uniform_real(rng, 0.0, 3.0));
    const Mask painted = apply_stroke(before, paint);
    const Mask erased = apply_stroke(painted, erase);
    for (int y = 0; y < 64; ++y) {
      for (int x = 0; x < 64; ++x) {
        if (painted.at(x, y) && !before.at(x, y) && erased.at(x, y)) ++erase_leftovers;
      }
    }
  }
  const std::string detail = "oracle mismatches=" + std::to_string(oracle_mismatch) +
                             " idempotence failures=" + std::to_string(not_idempotent) +
                             " erase leftovers=" + std::to_string(erase_leftovers);
  if (oracle_mismatch || not_idempotent || erase_leftovers) return fail(detail);
  return pass(detail);
}

Outcome mask_round_trip() {
  Rng rng(1004);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const int w = uniform_int(rng, 1, 96);
    const int h = uniform_int(rng, 1, 96);
    const Mask m = testing::random_mask(rng, w, h, uniform_real(rng, 0.0, 1.0));
    if (!(decode_mask(encode_mask(m)) == m)) ++mismatches;
  }
  const std::string detail = "500 masks, " + std::to_string(mismatches) + " mismatches";
  return mismatches == 0 ? pass(detail) : fail(detail);
}

SessionService stub_service(const fs::path& corpus) {
  return SessionService(load_model("stub", kStubLabels),
                        ImageSources{std::make_shared<LocalCorpus>(corpus), nullptr}, nullptr);
}

Outcome empty_and_full_mask_laws() {
  Rng rng(1005);
  testing::TempDir corpus;
  SessionService service = stub_service(corpus.path());
  int empty_failures = 0;
  int full_failures = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int w = uniform_int(rng, 1, 128);
    const int h = uniform_int(rng, 1, 128);
    const std::string a = "a" + std::to_string(trial);
    const std::string b = "b" + std::to_string(trial);
    testing::write_file(corpus / (a + ".png"), encode_png(testing::random_image(rng, w, h)));
    testing::write_file(corpus / (b + ".png"), encode_png(testing::random_image(rng, w, h)));
    const Session sa = service.create_session(SourceKind::kLocalCorpus, a, 10);
    const Session sb = service.create_session(SourceKind::kLocalCorpus, b, 10);

    const auto empty = service.classify_masked(sa.session_id, encode_mask(new_mask(w, h)),
                                               FillPolicy::dataset_mean(), 10);
    if (!same_top(empty.response, sa.records[0].response)) ++empty_failures;

    const FillPolicy fill = trial % 2 ? FillPolicy::dataset_mean() : FillPolicy::constant({0, 0, 0});
    const Bytes full = encode_mask(full_mask(w, h));
    const auto fa = service.classify_masked(sa.session_id, full, fill, 10);
    const auto fb = service.classify_masked(sb.session_id, full, fill, 10);
    if (!same_top(fa.response, fb.response)) ++full_failures;
  }
  const std::string detail = "20 image pairs; empty-mask failures=" +
                             std::to_string(empty_failures) +
                             " full-mask failures=" + std::to_string(full_failures);
  return empty_failures || full_failures ? fail(detail) : pass(detail);
}

Outcome harness_service_equivalence() {
  Rng rng(1006);
  testing::TempDir corpus;
  testing::TempDir work;
  SessionService service = stub_service(corpus.path());
  const ModelHandle model = load_model("stub", kStubLabels);
  int mismatches = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int w = uniform_int(rng, 1, 96);
    const int h = uniform_int(rng, 1, 96);
    const ImageBuffer image = testing::random_image(rng, w, h);
    const Mask mask = testing::random_mask(rng, w, h, uniform_real(rng, 0.0, 1.0));
    const FillPolicy fill =
        trial % 2 ? FillPolicy::dataset_mean()
                  : FillPolicy::constant({static_cast<std::uint8_t>(uniform_int(rng, 0, 255)), 0, 255});
    const int k = uniform_int(rng, 1, 10);
    const std::string name = "img" + std::to_string(trial);
    testing::write_file(corpus / (name + ".png"), encode_png(image));
    testing::write_file(work / (name + "_mask.png"), encode_mask(mask));

    const Session session = service.create_session(SourceKind::kLocalCorpus, name, k);
    const auto record = service.classify_masked(session.session_id, slurp(work / (name + "_mask.png")),
                                                fill, k);

    ExperimentManifest manifest;
    manifest.fill = fill;
    manifest.k = k;
    manifest.entries.push_back({name, corpus / (name + ".png"), {{"m", work / (name + "_mask.png")}}});
    const auto report = run_experiment(model, manifest);
    if (report.rows.size() != 2 || report.rows[0].top != session.records[0].response.top ||
        report.rows[1].top != record.response.top) {
      ++mismatches;
    }
  }
  const std::string detail = "50 pairs, " + std::to_string(mismatches) + " mismatches";
  return mismatches == 0 ? pass(detail) : fail(detail);
}

Outcome real_model_smoke() {
  const std::string model_path = env("XAI_MODEL_PATH");
  if (model_path.empty()) return skip("XAI_MODEL_PATH not set; needs ImageNet ResNet-50 weights");
  const std::string labels = env("XAI_LABELS_PATH").empty() ? kStubLabels : env("XAI_LABELS_PATH");
  const ModelHandle model = load_model(model_path, labels);

  const ImageBuffer image = decode_image(slurp(kAssets / "corpus/golden_retriever.jpg"));
  const Mask mask = decode_mask(slurp(kAssets / "masks/golden_retriever_1.png"));

  double slowest = 0.0;
  const auto timed = [&](const ImageBuffer& input) {
    const auto start = std::chrono::steady_clock::now();
    auto probs = class_probabilities(model, input);
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    return probs;
  };
  const auto base = timed(image);
  const int top = top_k_indices(base, 1)[0];
  const auto masked = timed(composite(image, mask, FillPolicy::dataset_mean()));

  // ImageNet retrievers: flat-coated, curly-coated, golden, Labrador, Chesapeake Bay.
  const bool retriever = top >= 205 && top <= 209;
  const bool decreased = masked[top] < base[top];
  const std::string detail = "top-1 " + model.labels().at(top) + " (" + std::to_string(top) +
                             ") " + fmt(base[top], "%.4f") + " -> " + fmt(masked[top], "%.4f") +
                             " after background mask; slowest inference " +
                             fmt(slowest, "%.3f") + "s";
  if (!retriever || !decreased || slowest >= 2.0) return fail(detail);
  return pass(detail);
}

// Runs a shell command and returns {exit status, stdout}.
std::pair<int, std::string> run_capture(const std::string& command) {
  std::string out;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return {-1, out};
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = ::pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

Outcome five_image_manifest() {
  const std::string real = env("XAI_MODEL_PATH");
  const std::string model = real.empty() ? "stub" : real;
  const std::string labels = env("XAI_LABELS_PATH").empty() ? kStubLabels : env("XAI_LABELS_PATH");
  const std::string command = std::string("'") + XAI_HARNESS_PATH + "' run --manifest '" +
                              (kAssets / "manifest.json").string() + "' --model '" + model +
                              "' --labels '" + labels + "' --fill mean --format csv 2>/dev/null";
  const auto start = std::chrono::steady_clock::now();
  const auto [status, csv] = run_capture(command);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  const bool header_ok = line == "name,interaction,coverage,class,confidence,delta";
  int rows = 0;
  int baselines = 0;
  while (std::getline(lines, line)) {
    ++rows;
    if (line.find(",baseline,0.0000,") != std::string::npos) ++baselines;
  }
  const std::string detail = "model=" + (real.empty() ? std::string("stub") : model) +
                             " exit=" + std::to_string(status) + " rows=" + std::to_string(rows) +
                             " baselines=" + std::to_string(baselines) + " wall=" +
                             fmt(secs, "%.2f") + "s" +
                             (real.empty() ? "; real-weight runtime not measured" : "");
  if (status != 0 || !header_ok || rows != 15 || baselines != 5 || secs >= 60.0) {
    return fail(detail);
  }
  return pass(detail);
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace xai

int main() {
  using namespace xai;
  const std::vector<Criterion> criteria = {
      {"softmax-suite", 5.0, softmax_suite},
      {"compositing-oracle", 5.0, compositing_oracle},
      {"stroke-rasterization-oracle", 10.0, stroke_oracle},
      {"mask-round-trip", 5.0, mask_round_trip},
      {"empty-full-mask-laws", 5.0, empty_and_full_mask_laws},
      {"harness-service-equivalence", 10.0, harness_service_equivalence},
      {"real-model-smoke", 1e9, real_model_smoke},
      {"five-image-manifest", 60.0, five_image_manifest},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.status != Outcome::kSkip && secs >= c.budget_seconds) {
      outcome.status = Outcome::kFail;
      outcome.detail += "; over the " + fmt(c.budget_seconds, "%.0f") + "s budget";
    }
    const char* tag = outcome.status == Outcome::kPass   ? "PASS"
                      : outcome.status == Outcome::kFail ? "FAIL"
                                                         : "SKIP";
    if (outcome.status == Outcome::kFail) ++failures;
    std::printf("%s  %-28s %7.3fs  %s\n", tag, c.name, secs, outcome.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
