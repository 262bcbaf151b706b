#pragma once

#include <chrono>
#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "xai/codec.hpp"

namespace xai {

enum class SourceKind { kLocalCorpus, kRemoteApi };

std::string_view to_string(SourceKind kind);
// "local_corpus" or "remote_api"; throws kArgument.
SourceKind parse_source_kind(std::string_view text);

struct FetchedImage {
  Bytes bytes;
  std::string locator;
};

class ImageSource {
 public:
  virtual ~ImageSource() = default;
  // kNotFound when the selector names nothing; kUpstream on transport
  // failures.
  virtual FetchedImage fetch(std::string_view selector) const = 0;
};

// Bundled images in one directory: selector "golden_retriever" resolves to
// golden_retriever.{png,jpg,jpeg,bmp,webp}. Selectors are restricted to
// [A-Za-z0-9_-] so they cannot escape the directory.
class LocalCorpus final : public ImageSource {
 public:
  explicit LocalCorpus(std::filesystem::path dir) : dir_(std::move(dir)) {}
  FetchedImage fetch(std::string_view selector) const override;

 private:
  std::filesystem::path dir_;
};

// HTTP image API. "{selector}" in the URL template is replaced by the
// URL-encoded selector. One attempt per fetch, no retries.
class RemoteImageApi final : public ImageSource {
 public:
  explicit RemoteImageApi(std::string url_template,
                          std::chrono::seconds timeout = std::chrono::seconds(10))
      : url_template_(std::move(url_template)), timeout_(timeout) {}
  FetchedImage fetch(std::string_view selector) const override;

 private:
  std::string url_template_;
  std::chrono::seconds timeout_;
};

struct ImageSources {
  std::shared_ptr<const ImageSource> local;
  std::shared_ptr<const ImageSource> remote;

  // kNotFound when the requested kind is not configured.
  const ImageSource& get(SourceKind kind) const;
};

}  // namespace xai
