#pragma once

// JSON shapes shared by the HTTP API, the session store and the reports.
// Confidences are fractions in [0, 1].

#include <json.hpp>

#include "xai/classify.hpp"
#include "xai/mask.hpp"
#include "xai/session.hpp"

namespace xai {

using Json = nlohmann::json;

void to_json(Json& j, const Rgb& c);
void from_json(const Json& j, Rgb& c);

// {"kind": "dataset_mean"} or {"kind": "constant_color", "color": [r, g, b]}.
// from_json also accepts the CLI spellings as a bare string ("mean",
// "black", "#RRGGBB") and "color" given as "#RRGGBB".
void to_json(Json& j, const FillPolicy& f);
void from_json(const Json& j, FillPolicy& f);

// {"mode": "paint" | "erase", "brush_radius": r, "points": [[x, y], ...]}.
// Points may also be {"x": .., "y": ..}; brush_radius defaults to 12.
void to_json(Json& j, const Point& p);
void from_json(const Json& j, Point& p);
void to_json(Json& j, const Stroke& s);
void from_json(const Json& j, Stroke& s);

// A scripted gesture sequence: {"width": w, "height": h, "strokes": [...]}.
// Replays the strokes in order onto an empty mask. Throws kParse for a
// malformed script.
Mask replay_stroke_script(const Json& script);

void to_json(Json& j, const ClassificationResult& r);
void from_json(const Json& j, ClassificationResult& r);
void to_json(Json& j, const ClassificationResponse& r);
void from_json(const Json& j, ClassificationResponse& r);

void to_json(Json& j, const ImageRef& r);
void from_json(const Json& j, ImageRef& r);
void to_json(Json& j, const InteractionRecord& r);
void from_json(const Json& j, InteractionRecord& r);
void to_json(Json& j, const Session& s);
void from_json(const Json& j, Session& s);

}  // namespace xai
