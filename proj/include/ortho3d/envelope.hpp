#pragma once

#include <string>
#include <vector>

#include "ortho3d/geom.hpp"
#include "ortho3d/harris.hpp"
#include "ortho3d/image.hpp"

namespace ortho3d {

// First-angle orthographic views. Image (u, v) maps to world coordinates:
//   FRONT     (u, v) -> (x = u s, z = -v s), extruded along y
//   TOP       (u, v) -> (x = u s, y =  v s), extruded along z
//   LEFT_SIDE (u, v) -> (y = u s, z = -v s), extruded along x
// with s the world-units-per-pixel scale. Rows grow downward, hence the
// negated v wherever the image axis runs against the world axis. The top
// view measures depth y downward from the shared fold line, matching the
// side view's y along its u axis; see README for the unfolding argument.
enum class ViewKind { Front, Top, LeftSide };

enum class Axis3 { X = 0, Y = 1, Z = 2 };

const char* view_name(ViewKind kind);

// World axis perpendicular to the view plane.
Axis3 extrusion_axis(ViewKind kind);

// Image pixel -> 2D world coordinates in the view's plane.
// Plane coordinate pairs: FRONT (x, z), TOP (x, y), LEFT_SIDE (y, z).
Vec2 view_to_world(ViewKind kind, double u, double v, double scale);
Vec2 world_to_view(ViewKind kind, Vec2 plane_point, double scale);

// Closed counterclockwise polygon in world units, one per orthographic view.
struct ViewRegion {
    ViewKind kind = ViewKind::Front;
    std::vector<Vec2> polygon;
    double scale = 1.0;
    Box2 bbox;
};

// A view region extruded to an infinite prism along its perpendicular axis.
struct Envelope {
    ViewRegion region;
    Axis3 axis = Axis3::Y;

    // Drops the axis coordinate and tests the remaining two against the region.
    bool contains(const Vec3& p) const;
};

// Otsu's threshold over a 256-bin histogram of the intensities.
double otsu_threshold(const GrayImage& img);

// Checks all non-adjacent edge pairs for crossings or collinear overlap.
bool polygon_self_intersects(const std::vector<Vec2>& poly);

double polygon_signed_area(const std::vector<Vec2>& poly);

// Traces the largest silhouette component (marching squares at the Otsu
// threshold), simplifies with Douglas-Peucker (1.5 px), snaps simplified
// vertices to control points within 3 px, and maps to world coordinates.
ViewRegion build_view_region(const GrayImage& img, const ControlPointSet& cps, ViewKind kind, double scale,
                             bool invert = false);

// Even-odd ray casting; points exactly on an edge count as inside.
bool point_in_region(const ViewRegion& region, Vec2 p);

Envelope extrude(const ViewRegion& region);

// Polygon CSV dump: "x,y" world coordinates, counterclockwise.
void dump_region(const ViewRegion& region, const std::string& path);

} // namespace ortho3d
