#include "xai/json_io.hpp"

namespace xai {

void to_json(Json& j, const Rgb& c) { j = Json::array({c.r, c.g, c.b}); }

void from_json(const Json& j, Rgb& c) {
  if (j.is_string()) {
    const FillPolicy f = parse_fill(j.get<std::string>());
    c = f.resolve();
    return;
  }
  if (!j.is_array() || j.size() != 3) {
    throw Error(ErrorCode::kArgument, "color must be [r, g, b] or \"#RRGGBB\"");
  }
  const auto channel = [](const Json& v) {
    const int i = v.get<int>();
    if (i < 0 || i > 255) throw Error(ErrorCode::kArgument, "color channel out of range");
    return static_cast<std::uint8_t>(i);
  };
  c = {channel(j[0]), channel(j[1]), channel(j[2])};
}

void to_json(Json& j, const FillPolicy& f) {
  if (f.kind == FillKind::kDatasetMean) {
    j = Json{{"kind", "dataset_mean"}};
  } else {
    j = Json{{"kind", "constant_color"}, {"color", f.color}};
  }
}

void from_json(const Json& j, FillPolicy& f) {
  if (j.is_string()) {
    f = parse_fill(j.get<std::string>());
    return;
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "dataset_mean") {
    f = FillPolicy::dataset_mean();
  } else if (kind == "constant_color") {
    f = FillPolicy::constant(j.at("color").get<Rgb>());
  } else {
    throw Error(ErrorCode::kArgument, "unknown fill kind '" + kind + "'");
  }
}

void to_json(Json& j, const Point& p) { j = Json::array({p.x, p.y}); }

void from_json(const Json& j, Point& p) {
  if (j.is_array() && j.size() == 2) {
    p = {j[0].get<float>(), j[1].get<float>()};
  } else if (j.is_object()) {
    p = {j.at("x").get<float>(), j.at("y").get<float>()};
  } else {
    throw Error(ErrorCode::kParse, "point must be [x, y] or {\"x\", \"y\"}");
  }
}

void to_json(Json& j, const Stroke& s) {
  j = Json{{"mode", s.mode == StrokeMode::kPaint ? "paint" : "erase"},
           {"brush_radius", s.brush_radius},
           {"points", s.points}};
}

void from_json(const Json& j, Stroke& s) {
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "paint") {
    s.mode = StrokeMode::kPaint;
  } else if (mode == "erase") {
    s.mode = StrokeMode::kErase;
  } else {
    throw Error(ErrorCode::kParse, "stroke mode must be paint or erase, got '" + mode + "'");
  }
  s.brush_radius = j.value("brush_radius", kDefaultBrushRadius);
  s.points = j.at("points").get<std::vector<Point>>();
}

Mask replay_stroke_script(const Json& script) {
  int width = 0;
  int height = 0;
  std::vector<Stroke> strokes;
  try {
    width = script.at("width").get<int>();
    height = script.at("height").get<int>();
    strokes = script.at("strokes").get<std::vector<Stroke>>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParse, std::string("bad stroke script: ") + e.what());
  }
  Mask mask = new_mask(width, height);
  for (const Stroke& s : strokes) apply_stroke_inplace(mask, s);
  return mask;
}

void to_json(Json& j, const ClassificationResult& r) {
  j = Json{{"class_index", r.class_index}, {"label", r.label}, {"confidence", r.confidence}};
}

void from_json(const Json& j, ClassificationResult& r) {
  j.at("class_index").get_to(r.class_index);
  j.at("label").get_to(r.label);
  j.at("confidence").get_to(r.confidence);
}

void to_json(Json& j, const ClassificationResponse& r) {
  j = Json{{"top", r.top}, {"model_id", r.model_id}, {"inference_millis", r.inference_millis}};
}

void from_json(const Json& j, ClassificationResponse& r) {
  j.at("top").get_to(r.top);
  j.at("model_id").get_to(r.model_id);
  j.at("inference_millis").get_to(r.inference_millis);
}

void to_json(Json& j, const ImageRef& r) {
  j = Json{{"source", to_string(r.source)}, {"selector", r.selector}, {"locator", r.locator},
           {"sha256", r.sha256},           {"width", r.width},       {"height", r.height}};
}

void from_json(const Json& j, ImageRef& r) {
  r.source = parse_source_kind(j.at("source").get<std::string>());
  j.at("selector").get_to(r.selector);
  j.at("locator").get_to(r.locator);
  j.at("sha256").get_to(r.sha256);
  j.at("width").get_to(r.width);
  j.at("height").get_to(r.height);
}

void to_json(Json& j, const InteractionRecord& r) {
  j = Json{{"iteration", r.iteration},
           {"mask_hash", r.mask_hash},
           {"coverage", r.coverage},
           {"response", r.response},
           {"fill", r.fill ? Json(*r.fill) : Json(nullptr)},
           {"origin", to_string(r.origin)},
           {"timestamp", r.timestamp}};
}

void from_json(const Json& j, InteractionRecord& r) {
  j.at("iteration").get_to(r.iteration);
  j.at("mask_hash").get_to(r.mask_hash);
  j.at("coverage").get_to(r.coverage);
  j.at("response").get_to(r.response);
  const Json& fill = j.at("fill");
  r.fill = fill.is_null() ? std::nullopt : std::optional<FillPolicy>(fill.get<FillPolicy>());
  r.origin = parse_record_origin(j.at("origin").get<std::string>());
  j.at("timestamp").get_to(r.timestamp);
}

void to_json(Json& j, const Session& s) {
  j = Json{{"session_id", s.session_id},
           {"image_ref", s.image_ref},
           {"created_at", s.created_at},
           {"records", s.records}};
}

void from_json(const Json& j, Session& s) {
  j.at("session_id").get_to(s.session_id);
  j.at("image_ref").get_to(s.image_ref);
  j.at("created_at").get_to(s.created_at);
  s.records = j.value("records", std::vector<InteractionRecord>{});
}

}  // namespace xai
