#include "xai/http_api.hpp"

#include <spdlog/spdlog.h>

#include "xai/json_io.hpp"

namespace xai {

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kShape: return 422;
    case ErrorCode::kUpstream: return 502;
    case ErrorCode::kParse:
    case ErrorCode::kInvalidMask:
    case ErrorCode::kInvalidStroke:
    case ErrorCode::kInvalidDimension:
    case ErrorCode::kDecode:
    case ErrorCode::kArgument:
    case ErrorCode::kManifest: return 400;
    default: return 500;
  }
}

namespace {

constexpr const char* kJson = "application/json";

void send_json(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& msg) {
  send_json(res, status, Json{{"error", code}, {"message", msg}});
}

// Runs a handler, turning exceptions into JSON error responses.
template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, http_status_for(e.code()), to_string(e.code()), e.what());
    } catch (const Json::exception& e) {
      send_error(res, 400, "parse", std::string("malformed JSON: ") + e.what());
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", req.method, req.path, e.what());
      send_error(res, 500, "internal", e.what());
    }
  };
}

struct RequestOptions {
  FillPolicy fill = FillPolicy::dataset_mean();
  int k = 0;
};

RequestOptions parse_options(const httplib::Request& req) {
  RequestOptions out;
  for (const char* name : {"options", "json"}) {
    if (!req.has_file(name)) continue;
    const Json j = Json::parse(req.get_file_value(name).content);
    if (j.contains("fill") && !j["fill"].is_null()) out.fill = j["fill"].get<FillPolicy>();
    if (j.contains("k") && !j["k"].is_null()) out.k = j["k"].get<int>();
    break;
  }
  return out;
}

std::span<const std::uint8_t> file_bytes(const httplib::Request& req, const char* name) {
  if (!req.is_multipart_form_data()) {
    throw Error(ErrorCode::kParse, "expected multipart/form-data");
  }
  if (!req.has_file(name)) {
    throw Error(ErrorCode::kParse, std::string("missing multipart part '") + name + "'");
  }
  const auto& it = req.files.find(name)->second;
  return {reinterpret_cast<const std::uint8_t*>(it.content.data()), it.content.size()};
}

}  // namespace

void register_routes(httplib::Server& server, SessionService& service) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
  server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  server.Get("/healthz", guarded([&service](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200,
              Json{{"model_id", service.model().model_id()},
                   {"sessions", service.session_ids().size()}});
  }));

  server.Post("/sessions", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    const Json body = Json::parse(req.body);
    const Json& source = body.at("source");
    const std::string kind =
        source.is_object() ? source.at("kind").get<std::string>() : source.get<std::string>();
    const int k = body.value("k", 0);
    const Session s = service.create_session(parse_source_kind(kind),
                                             body.at("selector").get<std::string>(), k);
    send_json(res, 201,
              Json{{"session_id", s.session_id},
                   {"image_url", "/sessions/" + s.session_id + "/image"},
                   {"width", s.image_ref.width},
                   {"height", s.image_ref.height},
                   {"baseline", s.records.front().response}});
  }));

  server.Get("/sessions/:id", guarded([&service](const httplib::Request& req, httplib::Response& res) {
    send_json(res, 200, Json(service.get_history(req.path_params.at("id"))));
  }));

  server.Delete("/sessions/:id",
                guarded([&service](const httplib::Request& req, httplib::Response& res) {
                  if (!service.delete_session(req.path_params.at("id"))) {
                    throw Error(ErrorCode::kNotFound, "no such session");
                  }
                  res.status = 204;
                }));

  server.Get("/sessions/:id/image",
             guarded([&service](const httplib::Request& req, httplib::Response& res) {
               const auto image = service.image(req.path_params.at("id"));
               res.set_content(reinterpret_cast<const char*>(image.bytes.data()),
                               image.bytes.size(), image.mime_type);
             }));

  server.Post("/sessions/:id/classify",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const auto mask = file_bytes(req, "mask");
                const RequestOptions opts = parse_options(req);
                send_json(res, 200,
                          Json(service.classify_masked(req.path_params.at("id"), mask, opts.fill,
                                                       opts.k)));
              }));

  server.Post("/sessions/:id/classify-composited",
              guarded([&service](const httplib::Request& req, httplib::Response& res) {
                const auto image = file_bytes(req, "image");
                const RequestOptions opts = parse_options(req);
                send_json(res, 200,
                          Json(service.classify_composited(req.path_params.at("id"), image,
                                                           opts.k)));
              }));
}

}  // namespace xai
