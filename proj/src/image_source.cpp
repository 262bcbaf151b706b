#include "xai/image_source.hpp"

#include <array>
#include <fstream>
#include <iterator>
#include <string>

#include <httplib.h>

#include "xai/error.hpp"

namespace xai {

std::string_view to_string(SourceKind kind) {
  return kind == SourceKind::kLocalCorpus ? "local_corpus" : "remote_api";
}

SourceKind parse_source_kind(std::string_view text) {
  if (text == "local_corpus") return SourceKind::kLocalCorpus;
  if (text == "remote_api") return SourceKind::kRemoteApi;
  throw Error(ErrorCode::kArgument,
              "unknown image source '" + std::string(text) + "' (local_corpus or remote_api)");
}

namespace {

bool valid_selector(std::string_view s) {
  if (s.empty() || s.size() > 128) return false;
  for (const char c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '-';
    if (!ok) return false;
  }
  return true;
}

}  // namespace

FetchedImage LocalCorpus::fetch(std::string_view selector) const {
  if (!valid_selector(selector)) {
    throw Error(ErrorCode::kNotFound, "no corpus image named '" + std::string(selector) + "'");
  }
  static constexpr std::array<const char*, 5> kExtensions = {".png", ".jpg", ".jpeg", ".bmp",
                                                             ".webp"};
  for (const char* ext : kExtensions) {
    const auto path = dir_ / (std::string(selector) + ext);
    std::ifstream in(path, std::ios::binary);
    if (!in) continue;
    Bytes bytes(std::istreambuf_iterator<char>(in), {});
    return {std::move(bytes), path.string()};
  }
  throw Error(ErrorCode::kNotFound, "no corpus image named '" + std::string(selector) + "'");
}

FetchedImage RemoteImageApi::fetch(std::string_view selector) const {
  const std::string url = [&] {
    std::string out = url_template_;
    const std::string encoded = httplib::detail::encode_url(std::string(selector));
    const auto pos = out.find("{selector}");
    if (pos != std::string::npos) out.replace(pos, 10, encoded);
    return out;
  }();

  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kUpstream, "malformed image API URL '" + url + "'");
  }
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  client.set_follow_location(true);
  const auto res = client.Get(path);
  if (!res) {
    throw Error(ErrorCode::kUpstream, "image API " + origin + " unreachable (" +
                                          httplib::to_string(res.error()) +
                                          "); retry later");
  }
  if (res->status == 404) {
    throw Error(ErrorCode::kNotFound, "image API has no image for '" + std::string(selector) + "'");
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kUpstream, "image API returned HTTP " + std::to_string(res->status) +
                                          "; retry later");
  }
  return {Bytes(res->body.begin(), res->body.end()), url};
}

const ImageSource& ImageSources::get(SourceKind kind) const {
  const auto& source = kind == SourceKind::kLocalCorpus ? local : remote;
  if (!source) {
    throw Error(ErrorCode::kNotFound,
                "image source " + std::string(to_string(kind)) + " is not configured");
  }
  return *source;
}

}  // namespace xai
