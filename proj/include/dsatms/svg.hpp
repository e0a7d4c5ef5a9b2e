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

// SVG 1.1 rendering of a scene, optionally shading one interpretation.

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "dsatms/recognition.hpp"

namespace dsatms::recognition {

struct Assignment {
  std::string rect;
  std::string part;
};

inline std::vector<Assignment> assignments(const Analysis& an, const Interpretation& it) {
  std::vector<Assignment> out;
  for (const auto& h : it.hypotheses) out.push_back({an.scene[h.rect].id, an.model.parts[h.part]});
  return out;
}

namespace detail {

inline std::string fixed3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string render_svg(const Scene& scene, const std::vector<Assignment>& shaded = {}) {
  constexpr double scale = 40.0, margin = 20.0;
  double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x, min_y = min_x, max_y = -min_x;
  for (const auto& r : scene)
    for (const auto& c : r.corners()) {
      min_x = std::min(min_x, c.x);
      max_x = std::max(max_x, c.x);
      min_y = std::min(min_y, c.y);
      max_y = std::max(max_y, c.y);
    }
  if (scene.empty()) min_x = max_x = min_y = max_y = 0.0;
  const double width = (max_x - min_x) * scale + 2 * margin;
  const double height = (max_y - min_y) * scale + 2 * margin;
  auto px = [&](geometry::Point p) {
    return detail::fixed3((p.x - min_x) * scale + margin) + "," + detail::fixed3((max_y - p.y) * scale + margin);
  };

  std::map<std::string, std::string> part_of;
  for (const auto& a : shaded) part_of[a.rect] = a.part;

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + detail::fixed3(width) +
         "\" height=\"" + detail::fixed3(height) + "\" viewBox=\"0 0 " + detail::fixed3(width) + " " +
         detail::fixed3(height) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + detail::fixed3(width) + "\" height=\"" + detail::fixed3(height) +
         "\" fill=\"white\"/>\n";
  for (const auto& r : scene) {
    std::string points;
    for (const auto& c : r.corners()) points += (points.empty() ? "" : " ") + px(c);
    auto it = part_of.find(r.id);
    if (it == part_of.end()) {
      out += "<polygon class=\"outline\" points=\"" + points + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\">";
    } else {
      out += "<polygon class=\"part\" points=\"" + points +
             "\" fill=\"#9ecae1\" fill-opacity=\"0.7\" stroke=\"black\" stroke-width=\"1\">";
    }
    out += "<title>" + detail::xml_escape(r.id) + "</title></polygon>\n";
  }
  for (const auto& r : scene) {
    auto it = part_of.find(r.id);
    if (it == part_of.end()) continue;
    auto at = px(r.center);
    auto comma = at.find(',');
    out += "<text x=\"" + at.substr(0, comma) + "\" y=\"" + at.substr(comma + 1) +
           "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">" +
           detail::xml_escape(r.id + ":" + it->second) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace dsatms::recognition
