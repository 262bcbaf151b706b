#pragma once

// On-disk layout under the store root:
//
//   blobs/<sha256>                 content-addressed bytes (images, masks)
//   sessions/<id>/session.json     session header, written once
//   sessions/<id>/records.jsonl    one InteractionRecord per line, append-only
//   quarantine/                    sessions that failed to restore
//
// Blob and header writes go through a temporary file and rename(). Record
// appends are a single write() of one complete line followed by fsync, so a
// reader sees either the whole record or, after a crash, a trailing
// fragment without a newline; restore drops such a fragment.

#include <filesystem>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xai/codec.hpp"
#include "xai/session.hpp"

namespace xai {

class SessionStore {
 public:
  // Creates the layout if needed. Throws kStore when the root is not a
  // writable directory.
  explicit SessionStore(std::filesystem::path root);

  const std::filesystem::path& root() const noexcept { return root_; }

  // Returns the sha256 key. Idempotent.
  std::string put_blob(std::span<const std::uint8_t> bytes);
  // Throws kStore if the blob is missing or its content no longer matches
  // the key.
  Bytes get_blob(std::string_view hash) const;
  bool has_blob(std::string_view hash) const;

  // Writes the header; records are appended separately.
  void create_session(const Session& session);
  void append_record(std::string_view session_id, const InteractionRecord& record);
  void remove_session(std::string_view session_id);

  struct RestoreResult {
    std::vector<Session> sessions;
    std::vector<std::filesystem::path> quarantined;
  };
  // Loads every session. A session whose header or records are unreadable,
  // out of order, or reference missing blobs is moved to quarantine/ and
  // skipped.
  RestoreResult restore();

 private:
  std::filesystem::path session_dir(std::string_view session_id) const;
  std::filesystem::path blob_path(std::string_view hash) const;
  Session load_session(const std::filesystem::path& dir) const;

  std::filesystem::path root_;
};

}  // namespace xai
