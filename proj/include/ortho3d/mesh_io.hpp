#pragma once

#include <string>
#include <vector>

#include "ortho3d/mesh.hpp"

namespace ortho3d {

// ASCII OBJ: "v x y z" lines at 9 significant digits in vertex order, then
// "f i j k" lines with 1-based indices. LF endings, no header.
void write_obj(const TriangleMesh& mesh, const std::string& path);

// Binary little-endian PLY: vertex = 3 x float64, face = uchar count + 3 x
// int32. Body size is exactly V*24 + F*13 bytes.
void write_ply(const TriangleMesh& mesh, const std::string& path);

// Counts unique unordered edges over the triangles and classifies them by
// incident-triangle count (1 boundary, 2 manifold, >= 3 non-manifold).
// Timings are carried through; total time is their sum in minutes.
MeshStats compute_stats(const TriangleMesh& mesh, const std::vector<StageTiming>& timings = {});

enum class ReportFormat { Text, Json };

// Text: a Points / Triangles / Time(min) table row. Json: object with keys
// n_points, n_triangles, time_minutes, stage_times, euler_characteristic,
// boundary_edges, nonmanifold_edges.
std::string report(const MeshStats& stats, ReportFormat format);

} // namespace ortho3d
