#pragma once

#include <vector>

#include "gaugelab/types.hpp"

namespace gaugelab::detail {

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double point_segment_distance(const Vec2& x, const Vec2& a, const Vec2& b);
bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2);
/// Interiors cross transversally (touching and collinear overlap excluded).
bool segments_cross_properly(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2,
                             double tol);
double segment_distance(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2);
double signed_area(const std::vector<Vec2>& v);
bool point_in_polygon(const Vec2& x, const std::vector<Vec2>& v);
std::vector<Vec2> polygon_edges_to_ccw(std::vector<Vec2> v);

}  // namespace gaugelab::detail
