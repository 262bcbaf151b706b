#pragma once

// Stateful classification sessions. Each session pins one source image;
// record 0 is the unmasked baseline and every later record is one
// mask -> classify round trip, appended in order.

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "xai/classify.hpp"
#include "xai/codec.hpp"
#include "xai/image_source.hpp"
#include "xai/mask.hpp"

namespace xai {

class SessionStore;

struct ImageRef {
  SourceKind source = SourceKind::kLocalCorpus;
  std::string selector;
  std::string locator;  // resolved file path or fetched URL
  std::string sha256;   // of the original image bytes
  int width = 0;
  int height = 0;
};

enum class RecordOrigin {
  kBaseline,    // iteration 0, unmasked
  kMask,        // mask uploaded, composited server-side
  kComposited,  // client sent an already-masked image
};

struct InteractionRecord {
  int iteration = 0;
  std::string mask_hash;  // sha256 of the canonical encoded mask
  double coverage = 0.0;
  ClassificationResponse response;
  // Unset for kComposited records, where the client chose the pixels.
  std::optional<FillPolicy> fill;
  RecordOrigin origin = RecordOrigin::kBaseline;
  std::string timestamp;  // ISO 8601 UTC
};

struct Session {
  std::string session_id;
  ImageRef image_ref;
  std::string created_at;  // ISO 8601 UTC
  std::vector<InteractionRecord> records;
};

struct ServiceConfig {
  PipelineOptions pipeline;
  int default_k = 5;
  FillPolicy baseline_fill = FillPolicy::dataset_mean();
  // Sessions older than this are treated as absent. Unset = never expire.
  std::optional<std::chrono::seconds> ttl;
};

// Thread-safe. Different sessions proceed in parallel; operations on one
// session are serialized so iteration indices follow request order.
class SessionService {
 public:
  // `store` may be null for a purely in-memory service. When present, its
  // sessions are restored immediately.
  SessionService(ModelHandle model, ImageSources sources, std::shared_ptr<SessionStore> store,
                 ServiceConfig config = {});
  ~SessionService();

  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  // Resolves the image, classifies it unmasked and stores that as record 0.
  // kNotFound for unknown selectors, kUpstream for remote failures; nothing
  // is persisted on failure. k = 0 selects the configured default.
  Session create_session(SourceKind source, std::string_view selector, int k = 0);

  // kNotFound, kParse / kInvalidMask for bad mask bytes, kShape when the
  // mask does not match the session image. The record is persisted before
  // it is returned.
  InteractionRecord classify_masked(std::string_view session_id,
                                    std::span<const std::uint8_t> mask_bytes,
                                    const FillPolicy& fill, int k = 0);

  // Accepts a full image already masked by the client. The stored mask is
  // the set of pixels that differ from the session image.
  InteractionRecord classify_composited(std::string_view session_id,
                                        std::span<const std::uint8_t> image_bytes, int k = 0);

  // Immutable snapshot; always a prefix of the records that will exist.
  Session get_history(std::string_view session_id) const;

  struct StoredImage {
    Bytes bytes;
    std::string mime_type;
  };
  StoredImage image(std::string_view session_id) const;

  bool delete_session(std::string_view session_id);

  std::vector<std::string> session_ids() const;
  const ModelHandle& model() const noexcept { return model_; }
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  struct State;

  std::shared_ptr<State> find(std::string_view session_id) const;
  InteractionRecord append(State& state, const Mask& mask, const ImageBuffer& model_input,
                           std::optional<FillPolicy> fill, RecordOrigin origin, int k);
  int resolve_k(int k) const;
  void restore();

  ModelHandle model_;
  ImageSources sources_;
  std::shared_ptr<SessionStore> store_;
  ServiceConfig config_;

  mutable std::shared_mutex sessions_mutex_;
  std::unordered_map<std::string, std::shared_ptr<State>> sessions_;
};

std::string_view to_string(RecordOrigin origin);
RecordOrigin parse_record_origin(std::string_view text);

// Current UTC time as 2024-01-02T03:04:05.678Z.
std::string utc_timestamp();
std::optional<std::chrono::system_clock::time_point> parse_utc_timestamp(std::string_view text);

}  // namespace xai
