// Copyright 2026 The dsatms Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON scene and model files.
//
// Scene: [{"id": "A", "cx": 0, "cy": 2.9, "w": 0.6, "h": 0.6, "angle": 1.5708}, ...]
// Angles are radians, either numbers or strings such as "pi/4", "7pi/4", "-pi".

#include <cmath>
#include <numbers>
#include <string>

#include "dsatms/error.hpp"
#include "dsatms/recognition.hpp"
#include "json.hpp"

namespace dsatms::recognition {

using Json = nlohmann::json;

namespace detail {

inline double angle_value(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw ParseError("angle must be a number or a multiple of pi");
  std::string s = j.get<std::string>();
  auto at = s.find("pi");
  if (at == std::string::npos) throw ParseError("invalid angle '" + s + "'");
  std::string coef = s.substr(0, at), rest = s.substr(at + 2);
  double k = 1.0;
  try {
    if (coef == "-") k = -1.0;
    else if (!coef.empty()) {
      std::size_t used = 0;
      k = std::stod(coef, &used);
      if (used != coef.size()) throw ParseError("invalid angle '" + s + "'");
    }
    double d = 1.0;
    if (!rest.empty()) {
      if (rest[0] != '/') throw ParseError("invalid angle '" + s + "'");
      std::size_t used = 0;
      d = std::stod(rest.substr(1), &used);
      if (used != rest.size() - 1 || d == 0.0) throw ParseError("invalid angle '" + s + "'");
    }
    return k * std::numbers::pi / d;
  } catch (const std::logic_error&) {
    throw ParseError("invalid angle '" + s + "'");
  }
}

inline double number(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) throw ParseError(std::string("missing number '") + key + "'");
  return obj[key].get<double>();
}

inline FilterKind filter_kind(const std::string& s) {
  if (s == "angle-of-overlap") return FilterKind::angle_of_overlap;
  if (s == "relative-area") return FilterKind::relative_area;
  if (s == "relative-overlap-area") return FilterKind::relative_overlap_area;
  if (s == "axial-ratio") return FilterKind::axial_ratio;
  throw ParseError("unknown filter kind '" + s + "'");
}

inline std::vector<Interval> intervals(const Json& j, FilterKind kind) {
  std::vector<Interval> out;
  if (j.is_null()) return out;
  if (!j.is_array()) throw ParseError("bands must be a list of [lo, hi] pairs");
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) throw ParseError("bands must be a list of [lo, hi] pairs");
    if (kind == FilterKind::angle_of_overlap) {
      out.push_back({angle_value(pair[0]), angle_value(pair[1])});
    } else {
      if (!pair[0].is_number() || !pair[1].is_number()) throw ParseError("ratio bounds must be numbers");
      out.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
  }
  return out;
}

inline FilterSpec filter(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ParseError("filter needs a 'kind'");
  FilterSpec f;
  f.kind = filter_kind(j["kind"].get<std::string>());
  f.high = intervals(j.value("high", Json()), f.kind);
  f.low = intervals(j.value("low", Json()), f.kind);
  std::string ref = j.value("relative_to", std::string("child"));
  if (ref == "child") f.relative_to = Reference::child;
  else if (ref == "parent") f.relative_to = Reference::parent;
  else throw ParseError("relative_to must be 'child' or 'parent'");
  return f;
}

inline SeedRule seed(const Json& j) {
  if (!j.is_object() || !j.contains("part") || !j["part"].is_string()) throw ParseError("seed rule needs a 'part'");
  SeedRule s;
  s.part = j["part"].get<std::string>();
  if (j.contains("min_smaller_overlaps")) s.min_smaller_overlaps = j["min_smaller_overlaps"].get<int>();
  s.largest_among_overlaps = j.value("largest_among_overlaps", false);
  if (j.contains("overlap_count")) s.overlap_count = j["overlap_count"].get<int>();
  s.neighbor_larger = j.value("neighbor_larger", false);
  if (j.contains("neighbor_overlaps_seed")) s.neighbor_overlaps_seed = j["neighbor_overlaps_seed"].get<std::string>();
  s.neighbor_end_fraction = j.value("neighbor_end_fraction", 0.5);
  return s;
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

}  // namespace detail

inline Scene parse_scene(const std::string& text) {
  return detail::guarded([&] {
    Json j = Json::parse(text);
    if (!j.is_array()) throw ParseError("scene must be a JSON array of rectangles");
    Scene scene;
    for (const auto& r : j) {
      if (!r.is_object() || !r.contains("id") || !r["id"].is_string()) throw ParseError("rectangle needs an 'id'");
      Rectangle rect;
      rect.id = r["id"].get<std::string>();
      rect.center = {detail::number(r, "cx"), detail::number(r, "cy")};
      rect.width = detail::number(r, "w");
      rect.height = detail::number(r, "h");
      rect.angle = r.contains("angle") ? detail::angle_value(r["angle"]) : 0.0;
      scene.push_back(std::move(rect));
    }
    validate_scene(scene);
    return scene;
  });
}

inline PuppetModel parse_model(const std::string& text) {
  return detail::guarded([&] {
    Json j = Json::parse(text);
    if (!j.is_object()) throw ParseError("model must be a JSON object");
    PuppetModel m;
    m.parts = j.at("parts").get<std::vector<std::string>>();
    for (const auto& a : j.at("attachments")) {
      Attachment att{a.at("parent").get<std::string>(), a.at("child").get<std::string>(), {}};
      for (const auto& f : a.at("filters")) att.filters.push_back(detail::filter(f));
      m.attachments.push_back(std::move(att));
    }
    for (const auto& s : j.at("seeds")) m.seeds.push_back(detail::seed(s));
    if (j.contains("weights")) {
      const auto& w = j["weights"];
      m.weights.p_high = w.value("p_high", m.weights.p_high);
      m.weights.p_low = w.value("p_low", m.weights.p_low);
      m.weights.seed_weight = w.value("seed_weight", m.weights.seed_weight);
    }
    m.interpretation_limit = j.value("interpretation_limit", m.interpretation_limit);
    m.search_node_limit = j.value("search_node_limit", m.search_node_limit);
    m.validate();
    return m;
  });
}

}  // namespace dsatms::recognition
