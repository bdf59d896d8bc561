#ifndef PWLAB_POLYGON_HPP
#define PWLAB_POLYGON_HPP

#include <vector>

#include "pwlab/common.hpp"

namespace pwlab {

using Polygon = std::vector<Vec2>;  // counterclockwise

double signed_area(const Polygon& p);
Vec2 centroid(const Polygon& p);

// Strictly convex, counterclockwise, no repeated vertices.
bool is_strictly_convex_ccw(const Polygon& p);

// Open-set membership for a convex ccw polygon.
bool polygon_contains(const Polygon& p, Vec2 x);

// Sutherland-Hodgman: clip `subject` against a convex ccw `clip` polygon.
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

double distance_to_segment(Vec2 x, Vec2 a, Vec2 b);
double distance_to_polygon_boundary(const Polygon& p, Vec2 x);

// Monotone chain; returns ccw hull without collinear points.
Polygon convex_hull(std::vector<Vec2> pts);

Polygon minkowski_sum(const Polygon& a, const Polygon& b);

// Separating-axis test for two convex polygons (touching counts as disjoint
// up to `tol`).
bool convex_intersect(const Polygon& a, const Polygon& b, double tol = 0.0);

Polygon scaled(const Polygon& p, double s);
Polygon translated(const Polygon& p, Vec2 t);

}  // namespace pwlab

#endif
