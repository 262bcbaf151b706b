#pragma once

// HTTP/JSON front of SessionService:
//
//   POST   /sessions                          {source, selector, k?} -> 201
//   GET    /sessions/{id}                     Session JSON
//   GET    /sessions/{id}/image               original image bytes
//   POST   /sessions/{id}/classify            multipart: mask + options -> record
//   POST   /sessions/{id}/classify-composited multipart: image + options -> record
//   DELETE /sessions/{id}                     204
//   GET    /healthz                           {model_id, sessions}
//
// "options" is a JSON part: {"fill": {...}, "k": n}; both fields optional.
// Errors are {"error": "<code>", "message": "..."} with a matching status.

#include <httplib.h>

#include "xai/error.hpp"
#include "xai/session.hpp"

namespace xai {

int http_status_for(ErrorCode code);

void register_routes(httplib::Server& server, SessionService& service);

}  // namespace xai
