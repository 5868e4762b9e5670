#pragma once

#include <cstdint>
#include <string>

#include "ortho3d/errors.hpp"
#include "ortho3d/harris.hpp"
#include "ortho3d/mesh_io.hpp"

namespace ortho3d {

enum class MeshFormat { Obj, Ply };

struct PipelineConfig {
    // View image paths; empty means the view is absent. At least two views.
    std::string front;
    std::string top;
    std::string side;
    double scale_front = 1.0; // world units per pixel
    double scale_top = 1.0;
    double scale_side = 1.0;
    HarrisParams harris;
    int resolution = 64; // carve cells along the longest axis
    bool invert = false; // silhouette darker than background
    std::string out = "model.obj";
    MeshFormat format = MeshFormat::Obj;
    ReportFormat report_format = ReportFormat::Text;
    bool dump_corners = false;
    bool dump_polygons = false;
    bool dump_points = false;
    bool dump_poles = false;
    int workers = 0; // 0 = hardware concurrency
    std::uint64_t jitter_seed = 0;
    bool allow_inconsistent = false;

    void validate() const; // throws ConfigError
};

// Process exit code for a failed stage: 2 config, 3 image, 4 envelope,
// 5 carve, 6 reconstruction, 7 io.
int exit_code(Errc code);

// load -> corners -> envelopes -> carve -> boundary -> reconstruct ->
// export. Each stage is timed; a stage failure rethrows with the stage
// name prefixed to the message.
MeshStats run_pipeline(const PipelineConfig& cfg);

} // namespace ortho3d
