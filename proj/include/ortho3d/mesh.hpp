#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "ortho3d/geom.hpp"

namespace ortho3d {

struct StageTiming {
    std::string name;
    double seconds = 0.0;
};

struct MeshStats {
    std::size_t n_points = 0;      // vertices in the container
    std::size_t n_points_used = 0; // vertices referenced by a triangle
    std::size_t n_triangles = 0;
    std::size_t n_edges = 0; // unique unordered vertex pairs
    long long euler_characteristic = 0; // n_points_used - n_edges + n_triangles
    std::size_t boundary_edges = 0;    // exactly 1 incident triangle
    std::size_t nonmanifold_edges = 0; // 3 or more incident triangles
    std::vector<StageTiming> stage_times;
    double total_time_minutes = 0.0;
};

struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    MeshStats stats;
};

} // namespace ortho3d
