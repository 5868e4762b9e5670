#pragma once

#include <string>
#include <vector>

#include "ortho3d/envelope.hpp"
#include "ortho3d/geom.hpp"

namespace ortho3d {

// Shared-extent comparison between two envelopes along one world axis.
struct AxisMatch {
    Axis3 axis = Axis3::X;
    ViewKind view_a = ViewKind::Front;
    ViewKind view_b = ViewKind::Top;
    double extent_a = 0.0;
    double extent_b = 0.0;
    double ratio = 0.0; // |a - b| / max(a, b)
};

struct ConsistencyReport {
    std::vector<AxisMatch> matches;

    double worst_ratio() const;
};

// Uniform sampling grid over the intersection of the envelope bounding
// prisms, padded by one cell on every side.
struct CarveGrid {
    int nx = 0, ny = 0, nz = 0;
    Vec3 origin;        // min corner of the padded box
    double cell = 0.0;  // world units per cell
    int resolution = 0;     // requested cells along the longest axis
    int envelope_count = 0;
    std::vector<uint8_t> occupancy; // x fastest, then y, then z

    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * ny + j) * nx + i;
    }
    bool occupied(int i, int j, int k) const {
        if (i < 0 || i >= nx || j < 0 || j >= ny || k < 0 || k >= nz) return false;
        return occupancy[index(i, j, k)] != 0;
    }
    Vec3 center(int i, int j, int k) const {
        return {origin.x + (i + 0.5) * cell, origin.y + (j + 0.5) * cell, origin.z + (k + 0.5) * cell};
    }
    std::size_t occupied_count() const;
};

// The boundary sample set S produced by envelope intersection.
struct PointCloud3D {
    std::vector<Vec3> points; // lexicographically sorted, no duplicates
    int resolution = 0;
    int envelope_count = 0;
};

struct CarveOptions {
    int resolution = 64;          // cells along the longest axis, >= 4
    int workers = 1;
    bool allow_inconsistent = false; // skip the 5% mismatch gate
    double mismatch_gate = 0.05;
};

// Compares shared extents between every envelope pair; requires 2 or 3
// envelopes with pairwise-distinct axes.
ConsistencyReport check_consistency(const std::vector<Envelope>& envelopes);

// Marks every grid cell whose center lies inside all envelopes.
CarveGrid carve(const std::vector<Envelope>& envelopes, const CarveOptions& opts);

// Occupied cells with at least one of their 6 face neighbors unoccupied or
// outside the grid, emitted as cell centers.
PointCloud3D extract_boundary(const CarveGrid& grid, int workers = 1);

// ASCII "x y z" lines (6 significant digits) or packed little-endian f64
// triples when binary is set.
void dump_point_cloud(const PointCloud3D& cloud, const std::string& path, bool binary = false);

} // namespace ortho3d
