#include "ortho3d/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "ortho3d/carve.hpp"
#include "ortho3d/crust.hpp"
#include "ortho3d/envelope.hpp"
#include "ortho3d/parallel.hpp"

namespace ortho3d {

namespace {

template <typename F>
void run_stage(std::vector<StageTiming>& log, const char* name, F&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn();
    } catch (const Error& e) {
        throw Error(e.code(), std::string(name) + ": " + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    log.push_back({name, seconds});
}

// model.obj + "points.xyz" -> model.points.xyz
std::string dump_path(const std::string& out, const std::string& suffix) {
    const auto dot = out.find_last_of('.');
    const auto slash = out.find_last_of('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? out.substr(0, dot) : out) + "." + suffix;
}

} // namespace

void PipelineConfig::validate() const {
    int n_views = 0;
    n_views += !front.empty();
    n_views += !top.empty();
    n_views += !side.empty();
    if (n_views < 2)
        throw Error(Errc::ConfigError, "at least two views are required (got " +
                                           std::to_string(n_views) + ")");
    if (resolution < 4) throw Error(Errc::ConfigError, "resolution must be >= 4");
    for (double s : {scale_front, scale_top, scale_side})
        if (!(s > 0.0) || !std::isfinite(s))
            throw Error(Errc::ConfigError, "view scale must be > 0");
    if (workers < 0) throw Error(Errc::ConfigError, "workers must be >= 0");
    if (!(harris.sigma > 0.0) || !std::isfinite(harris.sigma))
        throw Error(Errc::ConfigError, "sigma must be > 0");
    if (!(harris.k > 0.0)) throw Error(Errc::ConfigError, "harris k must be > 0");
    if (!(harris.rel_threshold > 0.0 && harris.rel_threshold <= 1.0))
        throw Error(Errc::ConfigError, "threshold must be in (0, 1]");
    if (harris.nms_radius < 1) throw Error(Errc::ConfigError, "nms-radius must be >= 1");
    if (out.empty()) throw Error(Errc::ConfigError, "output path is empty");
}

int exit_code(Errc code) {
    switch (code) {
        case Errc::ConfigError:
            return 2;
        case Errc::FileNotFound:
        case Errc::UnsupportedFormat:
        case Errc::CorruptImage:
        case Errc::InvalidSigma:
        case Errc::ImageTooSmall:
        case Errc::DimensionMismatch:
        case Errc::NoCornersFound:
            return 3;
        case Errc::NoSilhouette:
        case Errc::SelfIntersectingContour:
        case Errc::TooFewVertices:
            return 4;
        case Errc::DuplicateAxis:
        case Errc::TooFewEnvelopes:
        case Errc::InconsistentViews:
        case Errc::EmptyIntersection:
        case Errc::EmptyGrid:
            return 5;
        case Errc::TooFewPoints:
        case Errc::AllCoplanar:
        case Errc::NumericalFailure:
        case Errc::DegenerateTetrahedron:
        case Errc::VertexNotInTriangulation:
        case Errc::EmptyCrust:
            return 6;
        case Errc::IoError:
            return 7;
    }
    return 1;
}

MeshStats run_pipeline(const PipelineConfig& cfg) {
    cfg.validate();
    const int workers = resolve_workers(cfg.workers);

    struct View {
        ViewKind kind;
        std::string path;
        double scale;
    };
    std::vector<View> views;
    if (!cfg.front.empty()) views.push_back({ViewKind::Front, cfg.front, cfg.scale_front});
    if (!cfg.top.empty()) views.push_back({ViewKind::Top, cfg.top, cfg.scale_top});
    if (!cfg.side.empty()) views.push_back({ViewKind::LeftSide, cfg.side, cfg.scale_side});
    if (views.size() == 2)
        std::fprintf(stderr, "warning: only two views given; carving intersects two envelopes\n");

    std::vector<StageTiming> times;

    std::vector<GrayImage> images(views.size());
    run_stage(times, "load", [&] {
        for (std::size_t i = 0; i < views.size(); ++i) images[i] = load_image(views[i].path);
    });

    std::vector<ControlPointSet> corners(views.size());
    run_stage(times, "corners", [&] {
        for (std::size_t i = 0; i < views.size(); ++i) {
            corners[i] = detect_corners(images[i], cfg.harris, workers);
            corners[i].view_id = view_name(views[i].kind);
            if (cfg.dump_corners)
                dump_control_points(
                    corners[i], dump_path(cfg.out, "corners." + corners[i].view_id + ".csv"));
        }
    });

    std::vector<Envelope> envelopes;
    run_stage(times, "envelopes", [&] {
        for (std::size_t i = 0; i < views.size(); ++i) {
            ViewRegion region = build_view_region(images[i], corners[i], views[i].kind,
                                                  views[i].scale, cfg.invert);
            if (cfg.dump_polygons)
                dump_region(region,
                            dump_path(cfg.out, "polygon." + std::string(view_name(region.kind)) + ".csv"));
            envelopes.push_back(extrude(region));
        }
    });

    CarveGrid grid;
    run_stage(times, "carve", [&] {
        CarveOptions copts;
        copts.resolution = cfg.resolution;
        copts.workers = workers;
        copts.allow_inconsistent = cfg.allow_inconsistent;
        grid = carve(envelopes, copts);
    });

    PointCloud3D cloud;
    run_stage(times, "boundary", [&] {
        cloud = extract_boundary(grid, workers);
        if (cfg.dump_points) dump_point_cloud(cloud, dump_path(cfg.out, "points.xyz"));
    });

    TriangleMesh mesh;
    run_stage(times, "reconstruct", [&] {
        CrustOptions xopts;
        xopts.jitter_seed = cfg.jitter_seed;
        xopts.workers = workers;
        PoleSet poles;
        mesh = crust_extract(cloud, xopts, cfg.dump_poles ? &poles : nullptr);
        if (cfg.dump_poles) dump_poles(poles, dump_path(cfg.out, "poles.txt"));
    });

    run_stage(times, "export", [&] {
        if (cfg.format == MeshFormat::Obj) write_obj(mesh, cfg.out);
        else write_ply(mesh, cfg.out);
    });

    return compute_stats(mesh, times);
}

} // namespace ortho3d
