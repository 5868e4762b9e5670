#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ortho3d/carve.hpp"
#include "ortho3d/delaunay.hpp"
#include "ortho3d/mesh.hpp"

namespace ortho3d {

// Poles of one sample: the farthest vertex of its Voronoi cell (p_plus) and
// the farthest one in the opposite half-space (p_minus). Hull samples have
// an unbounded cell, so p_plus is synthesized along the average outward
// normal of the incident hull facets at 10x the cloud diameter.
struct Pole {
    Vec3 p_plus;
    Vec3 p_minus;
    bool has_plus = false;
    bool has_minus = false; // false when no Voronoi vertex satisfies the dot rule
    bool hull_flag = false;
};

struct PoleSet {
    std::vector<Pole> poles; // one entry per sample
};

struct CrustOptions {
    // Pole subsets kept in the union triangulation; both on for the real
    // algorithm, either can be dropped to measure its filtering effect.
    bool include_plus_poles = true;
    bool include_minus_poles = true;
    std::uint64_t jitter_seed = 0;
    // Displacement for degeneracy breaking; < 0 picks a spacing-derived
    // default, 0 disables.
    double jitter_magnitude = -1.0;
    int workers = 1;
};

// Vertices of Vor(s): circumcenters of the tets incident to sample s.
// Throws VertexNotInTriangulation when s is out of range or unused.
std::vector<Vec3> voronoi_vertices(const Tetrahedralization& tri, int s);

PoleSet compute_poles(const Tetrahedralization& tri, int workers = 1);

// Full pipeline: Delaunay of S, poles P, Delaunay of union(S, P), then every
// tet face whose 3 vertices are samples. Triangles are deduplicated and
// sorted; vertex coordinates are the original cloud points. poles_out, when
// given, receives the pole set of the first triangulation.
TriangleMesh crust_extract(const PointCloud3D& cloud, const CrustOptions& opts = {},
                           PoleSet* poles_out = nullptr);

// One "s_index p+x p+y p+z p-x p-y p-z hull_flag" line per sample; absent
// poles print as zeros.
void dump_poles(const PoleSet& poles, const std::string& path);

} // namespace ortho3d
