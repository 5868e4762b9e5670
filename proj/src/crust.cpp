#include "ortho3d/crust.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <mutex>

#include "ortho3d/mesh_io.hpp"
#include "ortho3d/parallel.hpp"

namespace ortho3d {

std::vector<Vec3> voronoi_vertices(const Tetrahedralization& tri, int s) {
    if (s < 0 || s >= static_cast<int>(tri.vertices.size()) || tri.vertex_tets[s].empty())
        throw Error(Errc::VertexNotInTriangulation,
                    "voronoi_vertices: no vertex " + std::to_string(s));
    std::vector<Vec3> out;
    out.reserve(tri.vertex_tets[s].size());
    for (int t : tri.vertex_tets[s]) out.push_back(tri.circumspheres[t].center);
    return out;
}

PoleSet compute_poles(const Tetrahedralization& tri, int workers) {
    const std::size_t n = tri.vertices.size();
    Vec3 lo = tri.work_points[0], hi = tri.work_points[0];
    for (const Vec3& p : tri.work_points) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        lo.z = std::min(lo.z, p.z);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
        hi.z = std::max(hi.z, p.z);
    }
    const double diameter = norm(hi - lo);

    PoleSet ps;
    ps.poles.resize(n);
    parallel_for(n, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            Pole& pole = ps.poles[i];
            const Vec3 s = tri.work_points[i];
            const auto& incident = tri.vertex_tets[i];
            if (incident.empty()) {
                pole.hull_flag = true;
                continue;
            }
            pole.hull_flag = tri.vertex_on_hull(static_cast<int>(i));
            if (pole.hull_flag) {
                Vec3 normal_sum{};
                Vec3 first_normal{};
                for (int t : incident) {
                    for (int f = 0; f < 4; ++f) {
                        if (tri.adjacency[t][f] >= 0 || tri.tets[t][f] == static_cast<int>(i))
                            continue;
                        const auto fv = tri.outward_face(t, f);
                        const Vec3 fn = normalized(
                            cross(tri.work_points[fv[1]] - tri.work_points[fv[0]],
                                  tri.work_points[fv[2]] - tri.work_points[fv[0]]));
                        if (norm2(first_normal) == 0.0) first_normal = fn;
                        normal_sum = normal_sum + fn;
                    }
                }
                Vec3 nbar = normalized(normal_sum);
                if (norm2(nbar) == 0.0) nbar = first_normal;
                if (norm2(nbar) > 0.0) {
                    pole.p_plus = s + nbar * (10.0 * diameter);
                    pole.has_plus = true;
                }
            } else {
                double best = -1.0;
                for (int t : incident) {
                    const Vec3& c = tri.circumspheres[t].center;
                    const double d = norm2(c - s);
                    if (d > best) {
                        best = d;
                        pole.p_plus = c;
                    }
                }
                pole.has_plus = true;
            }
            if (!pole.has_plus) continue;
            const Vec3 dir = pole.p_plus - s;
            double best = -1.0;
            for (int t : incident) {
                const Vec3& c = tri.circumspheres[t].center;
                if (dot(c - s, dir) >= 0.0) continue;
                const double d = norm2(c - s);
                if (d > best) {
                    best = d;
                    pole.p_minus = c;
                    pole.has_minus = true;
                }
            }
        }
    });
    return ps;
}

TriangleMesh crust_extract(const PointCloud3D& cloud, const CrustOptions& opts, PoleSet* poles_out) {
    const std::vector<Vec3>& samples = cloud.points;
    const int n = static_cast<int>(samples.size());
    if (n < 4) throw Error(Errc::TooFewPoints, "crust_extract: need at least 4 samples");

    double magnitude = opts.jitter_magnitude;
    if (magnitude < 0.0) {
        Vec3 lo = samples[0], hi = samples[0];
        for (const Vec3& p : samples) {
            lo.x = std::min(lo.x, p.x);
            lo.y = std::min(lo.y, p.y);
            lo.z = std::min(lo.z, p.z);
            hi.x = std::max(hi.x, p.x);
            hi.y = std::max(hi.y, p.y);
            hi.z = std::max(hi.z, p.z);
        }
        // ~1e-6 of the typical sample spacing; breaks lattice co-sphericity
        // without moving anything a measurable distance.
        magnitude = 1e-6 * norm(hi - lo) / std::cbrt(static_cast<double>(n));
    }
    TriangulateOptions topt;
    topt.jitter_seed = opts.jitter_seed;
    topt.jitter_magnitude = magnitude;

    const Tetrahedralization first = triangulate(samples, topt);
    const PoleSet poles = compute_poles(first, opts.workers);
    if (poles_out) *poles_out = poles;

    std::vector<Vec3> with_poles = samples;
    std::size_t n_plus = 0, n_minus = 0, n_hull = 0;
    for (const Pole& p : poles.poles) {
        if (p.hull_flag) ++n_hull;
        if (opts.include_plus_poles && p.has_plus) {
            with_poles.push_back(p.p_plus);
            ++n_plus;
        }
        if (opts.include_minus_poles && p.has_minus) {
            with_poles.push_back(p.p_minus);
            ++n_minus;
        }
    }
    const Tetrahedralization second = triangulate(with_poles, topt);

    std::vector<std::array<int, 3>> faces;
    std::mutex mu;
    parallel_for(second.tets.size(), opts.workers, [&](std::size_t begin, std::size_t end) {
        std::vector<std::array<int, 3>> local;
        for (std::size_t t = begin; t < end; ++t) {
            for (int f = 0; f < 4; ++f) {
                std::array<int, 3> fv = second.outward_face(static_cast<int>(t), f);
                if (fv[0] >= n || fv[1] >= n || fv[2] >= n) continue;
                std::sort(fv.begin(), fv.end());
                local.push_back(fv);
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        faces.insert(faces.end(), local.begin(), local.end());
    });
    std::sort(faces.begin(), faces.end());
    faces.erase(std::unique(faces.begin(), faces.end()), faces.end());
    if (faces.empty())
        throw Error(Errc::EmptyCrust,
                    "crust_extract: no sample-only triangle (samples=" + std::to_string(n) +
                        ", plus=" + std::to_string(n_plus) + ", minus=" + std::to_string(n_minus) +
                        ", hull=" + std::to_string(n_hull) + ")");

    TriangleMesh mesh;
    mesh.vertices = samples;
    mesh.triangles = std::move(faces);
    mesh.stats = compute_stats(mesh, {});
    return mesh;
}

void dump_poles(const PoleSet& poles, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error(Errc::IoError, "cannot open " + path);
    for (std::size_t i = 0; i < poles.poles.size(); ++i) {
        const Pole& p = poles.poles[i];
        const Vec3 minus = p.has_minus ? p.p_minus : Vec3{};
        std::fprintf(f, "%zu %.9g %.9g %.9g %.9g %.9g %.9g %d\n", i, p.p_plus.x, p.p_plus.y,
                     p.p_plus.z, minus.x, minus.y, minus.z, p.hull_flag ? 1 : 0);
    }
    std::fclose(f);
}

} // namespace ortho3d
