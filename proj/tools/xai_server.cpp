// xai-server: the session service over HTTP.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <csignal>

#include "xai/http_api.hpp"
#include "xai/session_store.hpp"

namespace {

httplib::Server* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::stderr_color_mt("xai-server"));

  CLI::App app{"Interactive masking and classification service"};
  std::string model_path;
  std::string labels_path;
  std::string corpus;
  std::string store;
  std::string remote;
  std::string host = "127.0.0.1";
  int port = 8080;
  int ttl = 0;
  int default_k = 5;
  std::string resize = "direct";
  std::string baseline_fill = "mean";
  bool single_threaded = false;

  app.add_option("--model", model_path, "ONNX file, or 'stub' / 'stub:<seed>'")
      ->envname("XAI_MODEL_PATH")
      ->required();
  auto* labels = app.add_option("--labels", labels_path, "ImageNet label file")
                     ->envname("XAI_LABELS_PATH");
#ifdef XAI_DEFAULT_LABELS
  labels_path = XAI_DEFAULT_LABELS;
  labels->capture_default_str();
#else
  labels->required();
#endif
  auto* corpus_opt = app.add_option("--corpus", corpus, "Directory of local images")
                         ->envname("XAI_CORPUS_DIR");
#ifdef XAI_DEFAULT_CORPUS
  corpus = XAI_DEFAULT_CORPUS;
  corpus_opt->capture_default_str();
#endif
  app.add_option("--store", store, "Session store directory (omit for in-memory sessions)")
      ->envname("XAI_STORE_DIR");
  app.add_option("--remote-url", remote,
                 "Remote image API URL template containing {selector}")
      ->envname("XAI_REMOTE_URL");
  app.add_option("--host", host, "Bind address")->envname("XAI_HOST")->capture_default_str();
  app.add_option("--port", port, "Bind port (0 = any)")->envname("XAI_PORT")->capture_default_str();
  app.add_option("--ttl", ttl, "Session lifetime in seconds (0 = unlimited)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--k", default_k, "Default top-k")->check(CLI::Range(1, 1000))
      ->capture_default_str();
  app.add_option("--resize", resize, "direct or resize256-crop224")
      ->check(CLI::IsMember({"direct", "resize256-crop224", "crop"}))
      ->capture_default_str();
  app.add_option("--baseline-fill", baseline_fill,
                 "Fill recorded on baseline records (mean, black, #RRGGBB)")
      ->capture_default_str();
  app.add_flag("--single-threaded-backend", single_threaded,
               "Pin the inference backend to one thread");
  CLI11_PARSE(app, argc, argv);

  try {
    xai::ServiceConfig config;
    config.pipeline.resize = xai::parse_resize_mode(resize);
    config.default_k = default_k;
    config.baseline_fill = xai::parse_fill(baseline_fill);
    if (ttl > 0) config.ttl = std::chrono::seconds(ttl);

    xai::ImageSources sources;
    if (!corpus.empty()) sources.local = std::make_shared<xai::LocalCorpus>(corpus);
    if (!remote.empty()) sources.remote = std::make_shared<xai::RemoteImageApi>(remote);
    auto session_store = store.empty() ? nullptr : std::make_shared<xai::SessionStore>(store);

    xai::SessionService service(xai::load_model(model_path, labels_path, {single_threaded}),
                                sources, session_store, config);
    spdlog::info("model {}", service.model().model_id());

    httplib::Server server;
    xai::register_routes(server, service);
    server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
      spdlog::info("{} {} -> {}", req.method, req.path, res.status);
    });
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    const int bound = port == 0 ? server.bind_to_any_port(host) : port;
    if (port != 0 && !server.bind_to_port(host, port)) {
      spdlog::error("cannot bind {}:{}", host, port);
      return 1;
    }
    spdlog::info("listening on http://{}:{}", host, bound);
    server.listen_after_bind();
  } catch (const xai::Error& e) {
    spdlog::error("{}: {}", xai::to_string(e.code()), e.what());
    return 1;
  }
  return 0;
}
