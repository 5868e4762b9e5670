#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ortho3d/errors.hpp"
#include "ortho3d/geom.hpp"

namespace ortho3d {

enum class Orientation { Positive, Negative, Degenerate };
enum class SphereSide { Inside, Outside, On };

inline constexpr double kOrientEps = 1e-12; // relative to scale^3
inline constexpr double kSphereEps = 1e-10; // relative to radius

// Sign of det[b-a; c-a; d-a]; Degenerate within kOrientEps * scale^3 where
// scale is the largest coordinate magnitude among the inputs.
Orientation orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

struct Sphere {
    Vec3 center;
    double radius = 0.0;
};

// Center equidistant from the four points. Throws DegenerateTetrahedron
// when orient3d(a, b, c, d) is Degenerate.
Sphere circumsphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

// Compares |p - center| against the radius with tolerance kSphereEps * radius.
SphereSide side_of_sphere(const Sphere& s, const Vec3& p);

struct TriangulateOptions {
    std::uint64_t jitter_seed = 0;
    // Magnitude of the per-point displacement used to break lattice
    // degeneracies; 0 disables jitter. Outputs always report original
    // coordinates.
    double jitter_magnitude = 0.0;
};

// Delaunay tetrahedralization built by incremental Bowyer-Watson insertion
// inside an enclosing super-tetrahedron. Immutable once built.
struct Tetrahedralization {
    std::vector<Vec3> vertices;            // original input coordinates
    std::vector<Vec3> work_points;         // jittered coordinates the tets were built from
    std::vector<std::array<int, 4>> tets;  // positively oriented w.r.t. work_points
    std::vector<std::array<int, 4>> adjacency; // neighbor across face opposite v[i]; -1 = hull
    std::vector<Sphere> circumspheres;     // cached per tet, from work_points
    std::vector<std::vector<int>> vertex_tets; // incident tet indices per vertex

    std::size_t tet_count() const { return tets.size(); }

    SphereSide in_sphere(int tet, const Vec3& p) const { return side_of_sphere(circumspheres[tet], p); }

    // Face opposite v[i], ordered so its normal points out of the tet.
    std::array<int, 3> outward_face(int tet, int i) const;

    bool tet_on_hull(int tet) const;
    bool vertex_on_hull(int v) const;

    double tet_volume(int tet) const; // from work_points

    // Debug dump: one "i j k l" line per tet.
    void dump_tets(const std::string& path) const;
};

// Requires >= 4 points, not all coplanar, no exact duplicates (after
// jitter). Insertion happens in lexicographic order internally; the result
// does not depend on the caller's point order beyond index labels.
Tetrahedralization triangulate(const std::vector<Vec3>& points, const TriangulateOptions& opts = {});

// splitmix64; used for the deterministic jitter streams.
std::uint64_t hash_u64(std::uint64_t x);

} // namespace ortho3d
