#include "xai/session_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include <spdlog/spdlog.h>

#include "xai/hash.hpp"
#include "xai/json_io.hpp"

namespace xai {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw Error(ErrorCode::kStore, what + ": " + std::strerror(errno));
}

void write_all(int fd, const char* data, std::size_t size, const fs::path& path) {
  while (size > 0) {
    const ssize_t n = ::write(fd, data, size);
    if (n < 0) {
      if (errno == EINTR) continue;
      fail("write " + path.string());
    }
    data += n;
    size -= static_cast<std::size_t>(n);
  }
}

// Writes to a temporary sibling, fsyncs, then renames over `path`.
void write_atomically(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::string tmpl = (path.parent_path() / (".tmp." + path.filename().string() + ".XXXXXX")).string();
  const int fd = ::mkstemp(tmpl.data());
  if (fd < 0) fail("create temporary file in " + path.parent_path().string());
  try {
    write_all(fd, reinterpret_cast<const char*>(bytes.data()), bytes.size(), tmpl);
    if (::fsync(fd) != 0) fail("fsync " + tmpl);
  } catch (...) {
    ::close(fd);
    ::unlink(tmpl.c_str());
    throw;
  }
  ::close(fd);
  if (::rename(tmpl.c_str(), path.c_str()) != 0) {
    ::unlink(tmpl.c_str());
    fail("rename into " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kStore, "cannot read " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

bool valid_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  for (const char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || c == '-')) return false;
  }
  return true;
}

}  // namespace

SessionStore::SessionStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  for (const char* sub : {"blobs", "sessions", "quarantine"}) {
    fs::create_directories(root_ / sub, ec);
    if (ec) {
      throw Error(ErrorCode::kStore,
                  "cannot create store directory " + (root_ / sub).string() + ": " + ec.message());
    }
  }
  const fs::path probe = root_ / ".write-probe";
  const std::string token = "ok";
  write_atomically(probe, std::span(reinterpret_cast<const std::uint8_t*>(token.data()),
                                    token.size()));
  fs::remove(probe, ec);
}

fs::path SessionStore::session_dir(std::string_view session_id) const {
  if (!valid_id(session_id)) {
    throw Error(ErrorCode::kNotFound, "invalid session id '" + std::string(session_id) + "'");
  }
  return root_ / "sessions" / std::string(session_id);
}

fs::path SessionStore::blob_path(std::string_view hash) const {
  return root_ / "blobs" / std::string(hash);
}

std::string SessionStore::put_blob(std::span<const std::uint8_t> bytes) {
  std::string hash = sha256_hex(bytes);
  const fs::path path = blob_path(hash);
  std::error_code ec;
  if (!fs::exists(path, ec)) write_atomically(path, bytes);
  return hash;
}

bool SessionStore::has_blob(std::string_view hash) const {
  std::error_code ec;
  return fs::is_regular_file(blob_path(hash), ec);
}

Bytes SessionStore::get_blob(std::string_view hash) const {
  const std::string content = read_file(blob_path(hash));
  if (sha256_hex(content) != hash) {
    throw Error(ErrorCode::kStore, "blob " + std::string(hash) + " is corrupt");
  }
  return Bytes(content.begin(), content.end());
}

void SessionStore::create_session(const Session& session) {
  const fs::path dir = session_dir(session.session_id);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kStore, "cannot create " + dir.string() + ": " + ec.message());
  Json header = session;
  header.erase("records");
  const std::string text = header.dump(2) + "\n";
  write_atomically(dir / "session.json",
                   std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void SessionStore::append_record(std::string_view session_id, const InteractionRecord& record) {
  const fs::path path = session_dir(session_id) / "records.jsonl";
  const std::string line = Json(record).dump() + "\n";
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) fail("open " + path.string());
  try {
    write_all(fd, line.data(), line.size(), path);
    if (::fsync(fd) != 0) fail("fsync " + path.string());
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

void SessionStore::remove_session(std::string_view session_id) {
  std::error_code ec;
  fs::remove_all(session_dir(session_id), ec);
}

Session SessionStore::load_session(const fs::path& dir) const {
  Session session = Json::parse(read_file(dir / "session.json")).get<Session>();
  if (session.session_id != dir.filename().string()) {
    throw Error(ErrorCode::kStore, "session id does not match its directory");
  }
  if (!has_blob(session.image_ref.sha256)) {
    throw Error(ErrorCode::kStore, "source image blob is missing");
  }

  std::string log;
  std::error_code ec;
  if (fs::exists(dir / "records.jsonl", ec)) log = read_file(dir / "records.jsonl");
  std::size_t pos = 0;
  while (pos < log.size()) {
    const std::size_t end = log.find('\n', pos);
    if (end == std::string::npos) {
      spdlog::warn("session {}: dropping incomplete trailing record", session.session_id);
      break;
    }
    auto record = Json::parse(log.substr(pos, end - pos)).get<InteractionRecord>();
    if (record.iteration != static_cast<int>(session.records.size())) {
      throw Error(ErrorCode::kStore, "record iterations are not gapless");
    }
    if (!has_blob(record.mask_hash)) throw Error(ErrorCode::kStore, "mask blob is missing");
    session.records.push_back(std::move(record));
    pos = end + 1;
  }
  if (session.records.empty() || session.records[0].origin != RecordOrigin::kBaseline ||
      session.records[0].coverage != 0.0) {
    throw Error(ErrorCode::kStore, "session has no baseline record");
  }
  return session;
}

SessionStore::RestoreResult SessionStore::restore() {
  RestoreResult result;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root_ / "sessions", ec)) {
    if (!entry.is_directory()) continue;
    try {
      result.sessions.push_back(load_session(entry.path()));
    } catch (const std::exception& e) {
      const fs::path target =
          root_ / "quarantine" /
          (entry.path().filename().string() + "." + std::to_string(::time(nullptr)));
      spdlog::warn("quarantining corrupt session {}: {}", entry.path().string(), e.what());
      std::error_code rename_ec;
      fs::rename(entry.path(), target, rename_ec);
      if (rename_ec) {
        spdlog::error("cannot quarantine {}: {}", entry.path().string(), rename_ec.message());
      }
      result.quarantined.push_back(target);
    }
  }
  return result;
}

}  // namespace xai
