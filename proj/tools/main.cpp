#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "ortho3d/pipeline.hpp"

int main(int argc, char** argv) {
    ortho3d::PipelineConfig cfg;
    std::string format = "obj";
    std::string report_format = "text";

    CLI::App app{"Reconstructs a 3D triangle mesh from 2-3 orthographic view images"};
    app.set_config("--config", "", "Config file with key = value lines; flags win");
    app.add_option("--front", cfg.front, "Front view image (PNG or PGM)");
    app.add_option("--top", cfg.top, "Top view image");
    app.add_option("--side", cfg.side, "Left side view image");
    app.add_option("--scale-front", cfg.scale_front, "World units per pixel in the front view");
    app.add_option("--scale-top", cfg.scale_top, "World units per pixel in the top view");
    app.add_option("--scale-side", cfg.scale_side, "World units per pixel in the side view");
    app.add_option("--sigma", cfg.harris.sigma, "Gaussian smoothing scale");
    app.add_option("--harris-k", cfg.harris.k, "Cornerness constant k");
    app.add_option("--threshold", cfg.harris.rel_threshold,
                   "Corner threshold as a fraction of the maximum response");
    app.add_option("--nms-radius", cfg.harris.nms_radius, "Non-max suppression radius in pixels");
    app.add_option("--resolution", cfg.resolution, "Carve grid cells along the longest axis");
    app.add_flag("--invert", cfg.invert, "Treat dark pixels as the object");
    app.add_option("--out", cfg.out, "Output mesh path");
    app.add_option("--format", format, "Mesh format: obj or ply")
        ->check(CLI::IsMember({"obj", "ply"}));
    app.add_option("--report", report_format, "Report format: text or json")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_flag("--dump-corners", cfg.dump_corners, "Write per-view corner CSVs");
    app.add_flag("--dump-polygons", cfg.dump_polygons, "Write per-view region polygon CSVs");
    app.add_flag("--dump-points", cfg.dump_points, "Write the carved boundary point cloud");
    app.add_flag("--dump-poles", cfg.dump_poles, "Write the pole set of the reconstruction");
    app.add_option("--workers", cfg.workers, "Worker threads, 0 = hardware concurrency")
        ->envname("ORTHO3D_WORKERS");
    app.add_option("--seed", cfg.jitter_seed, "Seed for the degeneracy-breaking jitter");
    app.add_flag("--allow-inconsistent", cfg.allow_inconsistent,
                 "Proceed despite mismatched shared extents between views");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    cfg.format = format == "ply" ? ortho3d::MeshFormat::Ply : ortho3d::MeshFormat::Obj;
    cfg.report_format =
        report_format == "json" ? ortho3d::ReportFormat::Json : ortho3d::ReportFormat::Text;

    try {
        const ortho3d::MeshStats stats = ortho3d::run_pipeline(cfg);
        std::fputs(ortho3d::report(stats, cfg.report_format).c_str(), stdout);
        return 0;
    } catch (const ortho3d::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return ortho3d::exit_code(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
