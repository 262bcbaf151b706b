#include "xai/session.hpp"

#include <cstdio>
#include <ctime>
#include <random>

#include <spdlog/spdlog.h>

#include "xai/hash.hpp"
#include "xai/session_store.hpp"

namespace xai {

std::string_view to_string(RecordOrigin origin) {
  switch (origin) {
    case RecordOrigin::kBaseline: return "baseline";
    case RecordOrigin::kMask: return "mask";
    case RecordOrigin::kComposited: return "composited";
  }
  return "unknown";
}

RecordOrigin parse_record_origin(std::string_view text) {
  if (text == "baseline") return RecordOrigin::kBaseline;
  if (text == "mask") return RecordOrigin::kMask;
  if (text == "composited") return RecordOrigin::kComposited;
  throw Error(ErrorCode::kParse, "unknown record origin '" + std::string(text) + "'");
}

std::string utc_timestamp() {
  using namespace std::chrono;
  const auto now = system_clock::now();
  const std::time_t secs = system_clock::to_time_t(now);
  const auto millis = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  const std::size_t n = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  std::snprintf(buf + n, sizeof buf - n, ".%03dZ", static_cast<int>(millis));
  return buf;
}

std::optional<std::chrono::system_clock::time_point> parse_utc_timestamp(std::string_view text) {
  std::tm tm{};
  int millis = 0;
  const std::string s(text);
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2d.%3dZ", &tm.tm_year, &tm.tm_mon,
                  &tm.tm_mday, &tm.tm_hour, &tm.tm_min, &tm.tm_sec, &millis) != 7) {
    return std::nullopt;
  }
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return std::chrono::system_clock::from_time_t(timegm(&tm)) + std::chrono::milliseconds(millis);
}

namespace {

std::string new_session_id() {
  static std::mutex mutex;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mutex);
  char buf[33];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                static_cast<unsigned long long>(rng()));
  return buf;
}

Mask difference_mask(const ImageBuffer& original, const ImageBuffer& edited) {
  Mask mask(original.width(), original.height());
  for (int y = 0; y < original.height(); ++y) {
    for (int x = 0; x < original.width(); ++x) {
      if (!(original.at(x, y) == edited.at(x, y))) mask.set(x, y, true);
    }
  }
  return mask;
}

void check_same_size(const Mask& mask, const ImageBuffer& image, const char* what) {
  if (mask.width() != image.width() || mask.height() != image.height()) {
    throw Error(ErrorCode::kShape, std::string(what) + " is " + std::to_string(mask.width()) +
                                       "x" + std::to_string(mask.height()) +
                                       " but the session image is " +
                                       std::to_string(image.width()) + "x" +
                                       std::to_string(image.height()));
  }
}

}  // namespace

struct SessionService::State {
  mutable std::mutex mutex;
  Session session;
  ImageBuffer image;
  Bytes image_bytes;
  std::chrono::system_clock::time_point created;
};

SessionService::SessionService(ModelHandle model, ImageSources sources,
                               std::shared_ptr<SessionStore> store, ServiceConfig config)
    : model_(std::move(model)),
      sources_(std::move(sources)),
      store_(std::move(store)),
      config_(std::move(config)) {
  resolve_k(config_.default_k);
  if (store_) restore();
}

SessionService::~SessionService() = default;

int SessionService::resolve_k(int k) const {
  const int resolved = k == 0 ? config_.default_k : k;
  if (resolved < 1 || static_cast<std::size_t>(resolved) > ModelHandle::output_length()) {
    throw Error(ErrorCode::kArgument, "k must be in [1, 1000], got " + std::to_string(resolved));
  }
  return resolved;
}

void SessionService::restore() {
  auto restored = store_->restore();
  for (auto& session : restored.sessions) {
    try {
      auto state = std::make_shared<State>();
      state->image_bytes = store_->get_blob(session.image_ref.sha256);
      state->image = decode_image(state->image_bytes);
      state->created = parse_utc_timestamp(session.created_at)
                           .value_or(std::chrono::system_clock::now());
      state->session = std::move(session);
      sessions_.emplace(state->session.session_id, std::move(state));
    } catch (const std::exception& e) {
      spdlog::warn("skipping session {}: {}", session.session_id, e.what());
    }
  }
  spdlog::info("restored {} session(s) from {}", sessions_.size(), store_->root().string());
}

std::shared_ptr<SessionService::State> SessionService::find(std::string_view session_id) const {
  std::shared_lock lock(sessions_mutex_);
  const auto it = sessions_.find(std::string(session_id));
  if (it == sessions_.end()) {
    throw Error(ErrorCode::kNotFound, "no session '" + std::string(session_id) + "'");
  }
  if (config_.ttl && std::chrono::system_clock::now() - it->second->created > *config_.ttl) {
    throw Error(ErrorCode::kNotFound, "session '" + std::string(session_id) + "' has expired");
  }
  return it->second;
}

InteractionRecord SessionService::append(State& state, const Mask& mask,
                                         const ImageBuffer& model_input,
                                         std::optional<FillPolicy> fill, RecordOrigin origin,
                                         int k) {
  const Bytes mask_bytes = encode_mask(mask);
  InteractionRecord record;
  record.iteration = static_cast<int>(state.session.records.size());
  record.coverage = mask_coverage(mask);
  record.response = classify(model_, model_input, k, config_.pipeline);
  record.fill = fill;
  record.origin = origin;
  record.timestamp = utc_timestamp();
  if (store_) {
    record.mask_hash = store_->put_blob(mask_bytes);
    store_->append_record(state.session.session_id, record);
  } else {
    record.mask_hash = sha256_hex(mask_bytes);
  }
  state.session.records.push_back(record);
  return record;
}

Session SessionService::create_session(SourceKind source, std::string_view selector, int k) {
  const int top_k = resolve_k(k);
  FetchedImage fetched = sources_.get(source).fetch(selector);

  auto state = std::make_shared<State>();
  state->image = decode_image(fetched.bytes);
  state->image_bytes = std::move(fetched.bytes);
  state->created = std::chrono::system_clock::now();

  Session& session = state->session;
  session.session_id = new_session_id();
  session.created_at = utc_timestamp();
  session.image_ref = {source,
                       std::string(selector),
                       std::move(fetched.locator),
                       sha256_hex(state->image_bytes),
                       state->image.width(),
                       state->image.height()};

  const Mask empty = new_mask(state->image.width(), state->image.height());
  if (store_) {
    try {
      store_->put_blob(state->image_bytes);
      store_->create_session(session);
      append(*state, empty, state->image, config_.baseline_fill, RecordOrigin::kBaseline, top_k);
    } catch (...) {
      store_->remove_session(session.session_id);
      throw;
    }
  } else {
    append(*state, empty, state->image, config_.baseline_fill, RecordOrigin::kBaseline, top_k);
  }

  Session snapshot = session;
  std::unique_lock lock(sessions_mutex_);
  sessions_.emplace(snapshot.session_id, std::move(state));
  return snapshot;
}

InteractionRecord SessionService::classify_masked(std::string_view session_id,
                                                  std::span<const std::uint8_t> mask_bytes,
                                                  const FillPolicy& fill, int k) {
  const int top_k = resolve_k(k);
  const auto state = find(session_id);
  const Mask mask = decode_mask(mask_bytes);
  check_same_size(mask, state->image, "mask");
  std::lock_guard lock(state->mutex);
  return append(*state, mask, composite(state->image, mask, fill), fill, RecordOrigin::kMask,
                top_k);
}

InteractionRecord SessionService::classify_composited(std::string_view session_id,
                                                      std::span<const std::uint8_t> image_bytes,
                                                      int k) {
  const int top_k = resolve_k(k);
  const auto state = find(session_id);
  const ImageBuffer edited = decode_image(image_bytes);
  if (edited.width() != state->image.width() || edited.height() != state->image.height()) {
    throw Error(ErrorCode::kShape, "composited image is " + std::to_string(edited.width()) +
                                       "x" + std::to_string(edited.height()) +
                                       " but the session image is " +
                                       std::to_string(state->image.width()) + "x" +
                                       std::to_string(state->image.height()));
  }
  const Mask mask = difference_mask(state->image, edited);
  std::lock_guard lock(state->mutex);
  return append(*state, mask, edited, std::nullopt, RecordOrigin::kComposited, top_k);
}

Session SessionService::get_history(std::string_view session_id) const {
  const auto state = find(session_id);
  std::lock_guard lock(state->mutex);
  return state->session;
}

SessionService::StoredImage SessionService::image(std::string_view session_id) const {
  const auto state = find(session_id);
  return {state->image_bytes, sniff_mime_type(state->image_bytes)};
}

bool SessionService::delete_session(std::string_view session_id) {
  std::shared_ptr<State> removed;
  {
    std::unique_lock lock(sessions_mutex_);
    const auto it = sessions_.find(std::string(session_id));
    if (it == sessions_.end()) return false;
    removed = std::move(it->second);
    sessions_.erase(it);
  }
  std::lock_guard lock(removed->mutex);
  if (store_) store_->remove_session(session_id);
  return true;
}

std::vector<std::string> SessionService::session_ids() const {
  std::shared_lock lock(sessions_mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, state] : sessions_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace xai
