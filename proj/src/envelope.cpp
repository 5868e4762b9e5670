#include "ortho3d/envelope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <queue>

namespace ortho3d {

const char* view_name(ViewKind kind) {
    switch (kind) {
    case ViewKind::Front: return "front";
    case ViewKind::Top: return "top";
    case ViewKind::LeftSide: return "side";
    }
    return "?";
}

Axis3 extrusion_axis(ViewKind kind) {
    switch (kind) {
    case ViewKind::Front: return Axis3::Y;
    case ViewKind::Top: return Axis3::Z;
    case ViewKind::LeftSide: return Axis3::X;
    }
    return Axis3::Y;
}

Vec2 view_to_world(ViewKind kind, double u, double v, double scale) {
    switch (kind) {
    case ViewKind::Front: return {u * scale, -v * scale};   // (x, z)
    case ViewKind::Top: return {u * scale, v * scale};      // (x, y)
    case ViewKind::LeftSide: return {u * scale, -v * scale}; // (y, z)
    }
    return {};
}

Vec2 world_to_view(ViewKind kind, Vec2 plane_point, double scale) {
    switch (kind) {
    case ViewKind::Front: return {plane_point.x / scale, -plane_point.y / scale};
    case ViewKind::Top: return {plane_point.x / scale, plane_point.y / scale};
    case ViewKind::LeftSide: return {plane_point.x / scale, -plane_point.y / scale};
    }
    return {};
}

bool Envelope::contains(const Vec3& p) const {
    Vec2 q;
    switch (axis) {
    case Axis3::Y: q = {p.x, p.z}; break; // front plane (x, z)
    case Axis3::Z: q = {p.x, p.y}; break; // top plane (x, y)
    case Axis3::X: q = {p.y, p.z}; break; // side plane (y, z)
    }
    return point_in_region(region, q);
}

double otsu_threshold(const GrayImage& img) {
    constexpr int bins = 256;
    std::array<std::size_t, bins> hist{};
    for (double v : img.data) {
        int b = std::clamp(static_cast<int>(v * (bins - 1) + 0.5), 0, bins - 1);
        ++hist[b];
    }
    const double total = static_cast<double>(img.data.size());
    double sum_all = 0.0;
    for (int b = 0; b < bins; ++b) sum_all += b * static_cast<double>(hist[b]);

    double best_var = -1.0;
    int best_bin = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 0; t < bins - 1; ++t) {
        w0 += static_cast<double>(hist[t]);
        if (w0 == 0.0) continue;
        double w1 = total - w0;
        if (w1 == 0.0) break;
        sum0 += t * static_cast<double>(hist[t]);
        double mu0 = sum0 / w0;
        double mu1 = (sum_all - sum0) / w1;
        double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (between > best_var) {
            best_var = between;
            best_bin = t;
        }
    }
    return (best_bin + 0.5) / (bins - 1);
}

namespace {

struct Mask {
    int width = 0;
    int height = 0;
    std::vector<uint8_t> on;

    bool at(int x, int y) const {
        if (x < 0 || x >= width || y < 0 || y >= height) return false;
        return on[static_cast<std::size_t>(y) * width + x] != 0;
    }
};

// Largest 8-connected foreground component; others are dropped (logged).
Mask largest_component(const GrayImage& img, double threshold, bool invert, std::size_t& pixel_count) {
    const int w = img.width, h = img.height;
    std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
    int n_components = 0;
    std::vector<std::size_t> sizes;

    auto fg = [&](int x, int y) {
        double v = img.at(x, y);
        return invert ? v < threshold : v > threshold;
    };

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (label[idx] >= 0 || !fg(x, y)) continue;
            int id = n_components++;
            sizes.push_back(0);
            std::queue<std::pair<int, int>> q;
            q.push({x, y});
            label[idx] = id;
            while (!q.empty()) {
                auto [cx, cy] = q.front();
                q.pop();
                ++sizes[id];
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                        std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                        if (label[nidx] < 0 && fg(nx, ny)) {
                            label[nidx] = id;
                            q.push({nx, ny});
                        }
                    }
            }
        }
    }

    Mask mask;
    mask.width = w;
    mask.height = h;
    mask.on.assign(static_cast<std::size_t>(w) * h, 0);
    pixel_count = 0;
    if (n_components == 0) return mask;

    int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    pixel_count = sizes[best];
    if (n_components > 1)
        std::cerr << "ortho3d: silhouette has " << n_components << " components, keeping the largest ("
                  << pixel_count << " px)\n";
    for (std::size_t i = 0; i < label.size(); ++i)
        if (label[i] == best) mask.on[i] = 1;
    return mask;
}

// Key for contour chaining: marching-squares vertices sit on half-integer
// coordinates, so doubling gives exact integer keys.
std::pair<int, int> point_key(Vec2 p) {
    return {static_cast<int>(std::lround(p.x * 2.0)), static_cast<int>(std::lround(p.y * 2.0))};
}

// Marching squares on a binary mask (iso 0.5, pixel centers as samples).
// Returns all closed contours; saddles connect the background diagonally,
// matching 8-connected foreground components.
std::vector<std::vector<Vec2>> marching_squares(const Mask& mask) {
    std::map<std::pair<int, int>, std::vector<std::pair<int, int>>> adj;
    auto add_segment = [&](Vec2 a, Vec2 b) {
        adj[point_key(a)].push_back(point_key(b));
        adj[point_key(b)].push_back(point_key(a));
    };

    for (int cy = -1; cy < mask.height; ++cy) {
        for (int cx = -1; cx < mask.width; ++cx) {
            int code = (mask.at(cx, cy) ? 1 : 0) | (mask.at(cx + 1, cy) ? 2 : 0) |
                       (mask.at(cx + 1, cy + 1) ? 4 : 0) | (mask.at(cx, cy + 1) ? 8 : 0);
            if (code == 0 || code == 15) continue;
            Vec2 top{cx + 0.5, static_cast<double>(cy)};
            Vec2 right{cx + 1.0, cy + 0.5};
            Vec2 bottom{cx + 0.5, cy + 1.0};
            Vec2 left{static_cast<double>(cx), cy + 0.5};
            switch (code) {
            case 1: case 14: add_segment(left, top); break;
            case 2: case 13: add_segment(top, right); break;
            case 3: case 12: add_segment(left, right); break;
            case 4: case 11: add_segment(right, bottom); break;
            case 6: case 9: add_segment(top, bottom); break;
            case 7: case 8: add_segment(left, bottom); break;
            case 5: // foreground at TL+BR: keep them separate
                add_segment(left, top);
                add_segment(right, bottom);
                break;
            case 10: // foreground at TR+BL
                add_segment(top, right);
                add_segment(left, bottom);
                break;
            }
        }
    }

    std::vector<std::vector<Vec2>> contours;
    std::map<std::pair<int, int>, bool> used;
    for (auto& [start, nbrs] : adj) {
        (void)nbrs;
        if (used[start]) continue;
        std::vector<std::pair<int, int>> loop;
        auto prev = start;
        auto cur = start;
        do {
            used[cur] = true;
            loop.push_back(cur);
            auto& cands = adj[cur];
            std::pair<int, int> next{};
            bool found = false;
            for (auto& c : cands) {
                if (c != prev && !used[c]) {
                    next = c;
                    found = true;
                    break;
                }
            }
            if (!found) {
                // close the loop: fall back to any neighbor that is the start
                for (auto& c : cands)
                    if (c == start && loop.size() > 2) { found = true; next = start; break; }
                if (!found) break;
            }
            prev = cur;
            cur = next;
        } while (cur != start);
        if (loop.size() >= 3) {
            std::vector<Vec2> pts;
            pts.reserve(loop.size());
            for (auto& k : loop) pts.push_back({k.first / 2.0, k.second / 2.0});
            contours.push_back(std::move(pts));
        }
    }
    return contours;
}

double point_segment_distance(Vec2 p, Vec2 a, Vec2 b) {
    Vec2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0) return norm(p - a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return norm(p - (a + ab * t));
}

void douglas_peucker(const std::vector<Vec2>& pts, std::size_t lo, std::size_t hi, double tol,
                     std::vector<bool>& keep) {
    if (hi <= lo + 1) return;
    double max_d = -1.0;
    std::size_t max_i = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
        if (d > max_d) {
            max_d = d;
            max_i = i;
        }
    }
    if (max_d > tol) {
        keep[max_i] = true;
        douglas_peucker(pts, lo, max_i, tol, keep);
        douglas_peucker(pts, max_i, hi, tol, keep);
    }
}

// Closed-polygon simplification: anchor at vertex 0 and the vertex farthest
// from it, simplify both chains.
std::vector<Vec2> simplify_closed(const std::vector<Vec2>& pts, double tol) {
    if (pts.size() <= 3) return pts;
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        double d = norm(pts[i] - pts[0]);
        if (d > far_d) {
            far_d = d;
            far = i;
        }
    }
    std::vector<bool> keep(pts.size(), false);
    keep[0] = keep[far] = true;
    douglas_peucker(pts, 0, far, tol, keep);
    // wrap-around chain far -> end -> 0: append the closing vertex once
    std::vector<Vec2> tail(pts.begin() + static_cast<std::ptrdiff_t>(far), pts.end());
    tail.push_back(pts[0]);
    std::vector<bool> keep_tail(tail.size(), false);
    keep_tail.front() = keep_tail.back() = true;
    douglas_peucker(tail, 0, tail.size() - 1, tol, keep_tail);
    for (std::size_t i = 1; i + 1 < tail.size(); ++i)
        if (keep_tail[i]) keep[far + i] = true;

    std::vector<Vec2> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (keep[i]) out.push_back(pts[i]);
    return out;
}

bool on_segment_collinear(Vec2 p, Vec2 a, Vec2 b) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

bool segments_intersect(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
    double d1 = cross(b - a, c - a);
    double d2 = cross(b - a, d - a);
    double d3 = cross(d - c, a - c);
    double d4 = cross(d - c, b - c);
    if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0)
        return true;
    if (d1 == 0 && on_segment_collinear(c, a, b)) return true;
    if (d2 == 0 && on_segment_collinear(d, a, b)) return true;
    if (d3 == 0 && on_segment_collinear(a, c, d)) return true;
    if (d4 == 0 && on_segment_collinear(b, c, d)) return true;
    return false;
}

} // namespace

double polygon_signed_area(const std::vector<Vec2>& poly) {
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[(i + 1) % poly.size()];
        s += cross(a, b);
    }
    return s / 2.0;
}

bool polygon_self_intersects(const std::vector<Vec2>& poly) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // skip the shared-endpoint pairs (adjacent edges)
            if (j == i || (j + 1) % n == i || (i + 1) % n == j) continue;
            if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) return true;
        }
    }
    return false;
}

ViewRegion build_view_region(const GrayImage& img, const ControlPointSet& cps, ViewKind kind, double scale,
                             bool invert) {
    double threshold = otsu_threshold(img);
    std::size_t pixel_count = 0;
    Mask mask = largest_component(img, threshold, invert, pixel_count);
    if (pixel_count < 16) throw Error(Errc::NoSilhouette, "no foreground component of at least 16 px");
    if (cps.points.size() < 3)
        throw Error(Errc::NoCornersFound, "a closed region needs at least 3 control points, got " +
                                              std::to_string(cps.points.size()));

    auto contours = marching_squares(mask);
    if (contours.empty()) throw Error(Errc::NoSilhouette, "silhouette produced no contour");
    // outer boundary = contour with the largest absolute area (holes are smaller)
    auto outer = std::max_element(contours.begin(), contours.end(),
                                  [](const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
                                      return std::abs(polygon_signed_area(a)) < std::abs(polygon_signed_area(b));
                                  });
    if (contours.size() > 1)
        std::cerr << "ortho3d: silhouette has " << contours.size() - 1
                  << " inner contour(s); solids only, keeping the outer boundary\n";

    std::vector<Vec2> simplified = simplify_closed(*outer, 1.5);

    // snap to the nearest control point within 3 px
    for (Vec2& v : simplified) {
        double best = 3.0;
        const ControlPoint* hit = nullptr;
        for (const ControlPoint& cp : cps.points) {
            double d = norm(Vec2{static_cast<double>(cp.x), static_cast<double>(cp.y)} - v);
            if (d <= best) {
                best = d;
                hit = &cp;
            }
        }
        if (hit) v = {static_cast<double>(hit->x), static_cast<double>(hit->y)};
    }
    // snapping can merge neighbors; drop consecutive duplicates
    std::vector<Vec2> dedup;
    for (const Vec2& v : simplified)
        if (dedup.empty() || !(dedup.back() == v)) dedup.push_back(v);
    while (dedup.size() > 1 && dedup.front() == dedup.back()) dedup.pop_back();

    if (dedup.size() < 3) throw Error(Errc::TooFewVertices, "silhouette collapsed below 3 vertices");
    if (polygon_self_intersects(dedup))
        throw Error(Errc::SelfIntersectingContour, "contour self-intersects after snapping");

    ViewRegion region;
    region.kind = kind;
    region.scale = scale;
    region.polygon.reserve(dedup.size());
    for (const Vec2& v : dedup) region.polygon.push_back(view_to_world(kind, v.x, v.y, scale));
    if (polygon_signed_area(region.polygon) < 0.0)
        std::reverse(region.polygon.begin(), region.polygon.end());

    region.bbox.min = {std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    region.bbox.max = {std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
    for (const Vec2& v : region.polygon) {
        region.bbox.min.x = std::min(region.bbox.min.x, v.x);
        region.bbox.min.y = std::min(region.bbox.min.y, v.y);
        region.bbox.max.x = std::max(region.bbox.max.x, v.x);
        region.bbox.max.y = std::max(region.bbox.max.y, v.y);
    }
    return region;
}

bool point_in_region(const ViewRegion& region, Vec2 p) {
    if (!region.bbox.contains(p)) return false;
    const auto& poly = region.polygon;
    const std::size_t n = poly.size();

    // on-edge counts as inside
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = poly[i], b = poly[(i + 1) % n];
        if (cross(b - a, p - a) == 0.0 && on_segment_collinear(p, a, b)) return true;
    }

    bool inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 a = poly[i], b = poly[(i + 1) % n];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x_int = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x_int) inside = !inside;
        }
    }
    return inside;
}

Envelope extrude(const ViewRegion& region) { return {region, extrusion_axis(region.kind)}; }

void dump_region(const ViewRegion& region, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IoError, path + ": cannot open for writing");
    char line[96];
    for (const Vec2& v : region.polygon) {
        std::snprintf(line, sizeof(line), "%.6g,%.6g\n", v.x, v.y);
        out << line;
    }
    if (!out) throw Error(Errc::IoError, path + ": write failed");
}

} // namespace ortho3d
