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

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace dsatms::geometry {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }

// Width runs along the direction `angle` (radians); height is perpendicular.
struct Rectangle {
  std::string id;
  Point center;
  double width = 1.0;
  double height = 1.0;
  double angle = 0.0;

  double area() const { return width * height; }
  Point axis() const { return {std::cos(angle), std::sin(angle)}; }

  // Counter-clockwise.
  std::array<Point, 4> corners() const {
    Point u = (width / 2) * axis();
    Point v = (height / 2) * Point{-std::sin(angle), std::cos(angle)};
    return {center - u - v, center + u - v, center + u + v, center - u + v};
  }
};

inline double normalize_angle(double a) {
  constexpr double two_pi = 2 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  if (a >= two_pi) a = 0.0;
  return a;
}

using Polygon = std::vector<Point>;

// Shoelace formula; absolute value so vertex order does not matter.
inline double area(const Polygon& p) {
  double twice = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) twice += cross(p[i], p[(i + 1) % p.size()]);
  return std::abs(twice) / 2;
}

// Sutherland-Hodgman clipping of `subject` against a convex counter-clockwise `clip`.
inline Polygon clip_convex(Polygon subject, const Polygon& clip) {
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    Point a = clip[e], b = clip[(e + 1) % clip.size()];
    auto side = [&](Point p) { return cross(b - a, p - a); };
    Polygon out;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      Point cur = subject[i], prev = subject[(i + subject.size() - 1) % subject.size()];
      double sc = side(cur), sp = side(prev);
      if (sc >= 0) {
        if (sp < 0) out.push_back(prev + (sp / (sp - sc)) * (cur - prev));
        out.push_back(cur);
      } else if (sp >= 0) {
        out.push_back(prev + (sp / (sp - sc)) * (cur - prev));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

inline double overlap_area(const Rectangle& a, const Rectangle& b) {
  auto ca = a.corners(), cb = b.corners();
  return area(clip_convex(Polygon(ca.begin(), ca.end()), Polygon(cb.begin(), cb.end())));
}

// Positive-area intersection, ignoring contacts along an edge or corner.
inline bool overlaps(const Rectangle& a, const Rectangle& b, double min_area = 1e-9) {
  return overlap_area(a, b) > min_area;
}

}  // namespace dsatms::geometry
