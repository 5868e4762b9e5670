#include "ortho3d/carve.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <limits>

#include "ortho3d/parallel.hpp"

namespace ortho3d {

double ConsistencyReport::worst_ratio() const {
    double worst = 0.0;
    for (const AxisMatch& m : matches) worst = std::max(worst, m.ratio);
    return worst;
}

namespace {

// Which world axes a view's region plane spans, and the extent along each.
// FRONT plane is (x, z); TOP is (x, y); LEFT_SIDE is (y, z).
std::pair<Axis3, Axis3> plane_axes(ViewKind kind) {
    switch (kind) {
    case ViewKind::Front: return {Axis3::X, Axis3::Z};
    case ViewKind::Top: return {Axis3::X, Axis3::Y};
    case ViewKind::LeftSide: return {Axis3::Y, Axis3::Z};
    }
    return {Axis3::X, Axis3::Z};
}

struct AxisRange {
    double min = std::numeric_limits<double>::lowest();
    double max = std::numeric_limits<double>::max();
    bool bounded = false;
};

// Bounding prism of one envelope: region bbox along its two plane axes,
// unbounded along the extrusion axis.
std::array<AxisRange, 3> bounding_prism(const Envelope& e) {
    std::array<AxisRange, 3> r;
    auto [u_axis, v_axis] = plane_axes(e.region.kind);
    r[static_cast<int>(u_axis)] = {e.region.bbox.min.x, e.region.bbox.max.x, true};
    r[static_cast<int>(v_axis)] = {e.region.bbox.min.y, e.region.bbox.max.y, true};
    return r;
}

double extent_along(const Envelope& e, Axis3 axis) {
    auto [u_axis, v_axis] = plane_axes(e.region.kind);
    if (axis == u_axis) return e.region.bbox.max.x - e.region.bbox.min.x;
    if (axis == v_axis) return e.region.bbox.max.y - e.region.bbox.min.y;
    return 0.0;
}

} // namespace

ConsistencyReport check_consistency(const std::vector<Envelope>& envelopes) {
    if (envelopes.size() < 2)
        throw Error(Errc::TooFewEnvelopes, "at least two mutually perpendicular envelopes are required");
    if (envelopes.size() > 3)
        throw Error(Errc::ConfigError, "at most three envelopes are supported");
    for (std::size_t i = 0; i < envelopes.size(); ++i)
        for (std::size_t j = i + 1; j < envelopes.size(); ++j)
            if (envelopes[i].axis == envelopes[j].axis)
                throw Error(Errc::DuplicateAxis, "two envelopes share the same extrusion axis");

    ConsistencyReport report;
    for (std::size_t i = 0; i < envelopes.size(); ++i) {
        for (std::size_t j = i + 1; j < envelopes.size(); ++j) {
            auto [ai_u, ai_v] = plane_axes(envelopes[i].region.kind);
            auto [aj_u, aj_v] = plane_axes(envelopes[j].region.kind);
            for (Axis3 axis : {ai_u, ai_v}) {
                if (axis != aj_u && axis != aj_v) continue;
                AxisMatch m;
                m.axis = axis;
                m.view_a = envelopes[i].region.kind;
                m.view_b = envelopes[j].region.kind;
                m.extent_a = extent_along(envelopes[i], axis);
                m.extent_b = extent_along(envelopes[j], axis);
                double hi = std::max(m.extent_a, m.extent_b);
                m.ratio = hi > 0.0 ? std::abs(m.extent_a - m.extent_b) / hi : 0.0;
                report.matches.push_back(m);
            }
        }
    }
    return report;
}

CarveGrid carve(const std::vector<Envelope>& envelopes, const CarveOptions& opts) {
    if (opts.resolution < 4) throw Error(Errc::ConfigError, "carve resolution must be >= 4");
    ConsistencyReport report = check_consistency(envelopes);
    if (!opts.allow_inconsistent && report.worst_ratio() > opts.mismatch_gate) {
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "view extents disagree by %.1f%% (gate %.1f%%); check per-view scales or override",
                      report.worst_ratio() * 100.0, opts.mismatch_gate * 100.0);
        throw Error(Errc::InconsistentViews, msg);
    }

    std::array<AxisRange, 3> bounds;
    for (const Envelope& e : envelopes) {
        auto prism = bounding_prism(e);
        for (int a = 0; a < 3; ++a) {
            if (!prism[a].bounded) continue;
            if (!bounds[a].bounded) {
                bounds[a] = prism[a];
            } else {
                bounds[a].min = std::max(bounds[a].min, prism[a].min);
                bounds[a].max = std::min(bounds[a].max, prism[a].max);
            }
        }
    }
    for (int a = 0; a < 3; ++a) {
        if (!bounds[a].bounded)
            throw Error(Errc::EmptyIntersection, "envelopes leave a world axis unbounded");
        if (bounds[a].min >= bounds[a].max)
            throw Error(Errc::EmptyIntersection, "envelope bounding prisms do not overlap");
    }

    double longest = 0.0;
    for (int a = 0; a < 3; ++a) longest = std::max(longest, bounds[a].max - bounds[a].min);
    CarveGrid grid;
    grid.resolution = opts.resolution;
    grid.envelope_count = static_cast<int>(envelopes.size());
    grid.cell = longest / opts.resolution;
    auto cells_for = [&](double lo, double hi) {
        return static_cast<int>(std::ceil((hi - lo) / grid.cell - 1e-9)) + 2; // +1 pad per side
    };
    grid.nx = cells_for(bounds[0].min, bounds[0].max);
    grid.ny = cells_for(bounds[1].min, bounds[1].max);
    grid.nz = cells_for(bounds[2].min, bounds[2].max);
    grid.origin = {bounds[0].min - grid.cell, bounds[1].min - grid.cell, bounds[2].min - grid.cell};
    grid.occupancy.assign(static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz, 0);

    // Membership depends on two coordinates only, so precompute one 2D mask
    // per envelope. Cell (i,j,k) then reduces to three mask lookups that use
    // the exact same point_in_region evaluations a direct sweep would make.
    struct PlaneMask {
        Axis3 u, v;
        int nu = 0, nv = 0;
        std::vector<uint8_t> in;
    };
    auto axis_count = [&](Axis3 a) {
        switch (a) {
        case Axis3::X: return grid.nx;
        case Axis3::Y: return grid.ny;
        default: return grid.nz;
        }
    };
    auto axis_origin = [&](Axis3 a) {
        switch (a) {
        case Axis3::X: return grid.origin.x;
        case Axis3::Y: return grid.origin.y;
        default: return grid.origin.z;
        }
    };
    std::vector<PlaneMask> masks;
    for (const Envelope& e : envelopes) {
        PlaneMask m;
        std::tie(m.u, m.v) = plane_axes(e.region.kind);
        m.nu = axis_count(m.u);
        m.nv = axis_count(m.v);
        m.in.assign(static_cast<std::size_t>(m.nu) * m.nv, 0);
        parallel_for(static_cast<std::size_t>(m.nv), opts.workers, [&](std::size_t v0, std::size_t v1) {
            for (std::size_t jv = v0; jv < v1; ++jv) {
                double pv = axis_origin(m.v) + (static_cast<double>(jv) + 0.5) * grid.cell;
                for (int iu = 0; iu < m.nu; ++iu) {
                    double pu = axis_origin(m.u) + (iu + 0.5) * grid.cell;
                    m.in[jv * m.nu + iu] = point_in_region(e.region, {pu, pv}) ? 1 : 0;
                }
            }
        });
        masks.push_back(std::move(m));
    }

    auto mask_at = [](const PlaneMask& m, int i, int j, int k) {
        int iu = m.u == Axis3::X ? i : (m.u == Axis3::Y ? j : k);
        int iv = m.v == Axis3::X ? i : (m.v == Axis3::Y ? j : k);
        return m.in[static_cast<std::size_t>(iv) * m.nu + iu] != 0;
    };

    parallel_for(static_cast<std::size_t>(grid.nz), opts.workers, [&](std::size_t k0, std::size_t k1) {
        for (std::size_t k = k0; k < k1; ++k) {
            for (int j = 0; j < grid.ny; ++j) {
                for (int i = 0; i < grid.nx; ++i) {
                    bool inside = true;
                    for (const PlaneMask& m : masks) {
                        if (!mask_at(m, i, j, static_cast<int>(k))) {
                            inside = false;
                            break;
                        }
                    }
                    if (inside) grid.occupancy[grid.index(i, j, static_cast<int>(k))] = 1;
                }
            }
        }
    });

    if (grid.occupied_count() == 0)
        throw Error(Errc::EmptyIntersection, "no grid cell lies inside all envelopes");
    return grid;
}

std::size_t CarveGrid::occupied_count() const {
    std::size_t n = 0;
    for (uint8_t v : occupancy) n += v;
    return n;
}

PointCloud3D extract_boundary(const CarveGrid& grid, int workers) {
    if (grid.occupancy.empty() || grid.occupied_count() == 0)
        throw Error(Errc::EmptyGrid, "carve grid has no occupied cells");

    std::vector<std::vector<Vec3>> slices(static_cast<std::size_t>(grid.nz));
    parallel_for(static_cast<std::size_t>(grid.nz), workers, [&](std::size_t k0, std::size_t k1) {
        for (std::size_t k = k0; k < k1; ++k) {
            for (int j = 0; j < grid.ny; ++j)
                for (int i = 0; i < grid.nx; ++i) {
                    int ik = static_cast<int>(k);
                    if (!grid.occupied(i, j, ik)) continue;
                    bool boundary = !grid.occupied(i - 1, j, ik) || !grid.occupied(i + 1, j, ik) ||
                                    !grid.occupied(i, j - 1, ik) || !grid.occupied(i, j + 1, ik) ||
                                    !grid.occupied(i, j, ik - 1) || !grid.occupied(i, j, ik + 1);
                    if (boundary) slices[k].push_back(grid.center(i, j, ik));
                }
        }
    });

    PointCloud3D cloud;
    cloud.resolution = grid.resolution;
    cloud.envelope_count = grid.envelope_count;
    for (auto& s : slices) cloud.points.insert(cloud.points.end(), s.begin(), s.end());
    std::sort(cloud.points.begin(), cloud.points.end(), lex_less);
    cloud.points.erase(std::unique(cloud.points.begin(), cloud.points.end()), cloud.points.end());
    return cloud;
}

void dump_point_cloud(const PointCloud3D& cloud, const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw Error(Errc::IoError, path + ": cannot open for writing");
    if (binary) {
        for (const Vec3& p : cloud.points) {
            for (double c : {p.x, p.y, p.z}) {
                auto bits = std::bit_cast<std::uint64_t>(c);
                unsigned char bytes[8];
                for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
                out.write(reinterpret_cast<const char*>(bytes), 8);
            }
        }
    } else {
        char line[128];
        for (const Vec3& p : cloud.points) {
            std::snprintf(line, sizeof(line), "%.6g %.6g %.6g\n", p.x, p.y, p.z);
            out << line;
        }
    }
    if (!out) throw Error(Errc::IoError, path + ": write failed");
}

} // namespace ortho3d
