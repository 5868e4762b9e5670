#pragma once

// Independent oracles and fixture builders shared by the test binaries.
// Everything here is written as plainly as possible (straight loops, no
// shortcuts) so it can arbitrate the library implementations.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ortho3d/carve.hpp"
#include "ortho3d/delaunay.hpp"
#include "ortho3d/envelope.hpp"
#include "ortho3d/image.hpp"

namespace testsupport {

using namespace ortho3d;

// ----- images -----

inline GrayImage make_image(int w, int h, double fill = 0.0) {
    GrayImage img;
    img.width = w;
    img.height = h;
    img.data.assign(static_cast<std::size_t>(w) * h, fill);
    return img;
}

inline void fill_rect(GrayImage& img, int x0, int y0, int w, int h, double v) {
    for (int y = y0; y < y0 + h; ++y)
        for (int x = x0; x < x0 + w; ++x) img.at(x, y) = v;
}

inline void fill_disk(GrayImage& img, double cx, double cy, double r, double v) {
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) img.at(x, y) = v;
}

inline void write_pgm8(const GrayImage& img, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    std::fprintf(f, "P5\n%d %d\n255\n", img.width, img.height);
    for (double v : img.data) {
        const int byte = static_cast<int>(std::lround(v * 255.0));
        std::fputc(byte < 0 ? 0 : (byte > 255 ? 255 : byte), f);
    }
    std::fclose(f);
}

// ----- naive image pipeline (convolution / gradients / Harris) -----

inline ScalarField naive_convolve(const ScalarField& in, const Kernel& k) {
    ScalarField out = ScalarField::zeros(in.width, in.height);
    for (int y = 0; y < in.height; ++y) {
        for (int x = 0; x < in.width; ++x) {
            double acc = 0.0;
            for (int dy = -k.radius; dy <= k.radius; ++dy) {
                for (int dx = -k.radius; dx <= k.radius; ++dx) {
                    int sx = x + dx;
                    int sy = y + dy;
                    if (sx < 0) sx = 0;
                    if (sx >= in.width) sx = in.width - 1;
                    if (sy < 0) sy = 0;
                    if (sy >= in.height) sy = in.height - 1;
                    acc += in.at(sx, sy) * k.at(dx, dy);
                }
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

inline Kernel naive_gaussian(double sigma) {
    Kernel k;
    k.radius = static_cast<int>(std::ceil(3.0 * sigma));
    const int side = 2 * k.radius + 1;
    k.weights.assign(static_cast<std::size_t>(side) * side, 0.0);
    double sum = 0.0;
    for (int y = -k.radius; y <= k.radius; ++y)
        for (int x = -k.radius; x <= k.radius; ++x) {
            const double w = 1.0 / (2.0 * std::numbers::pi * sigma * sigma) *
                             std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
            k.weights[static_cast<std::size_t>(y + k.radius) * side + (x + k.radius)] = w;
            sum += w;
        }
    for (double& w : k.weights) w /= sum;
    return k;
}

inline void naive_gradients(const GrayImage& img, ScalarField& ix, ScalarField& iy) {
    ix = ScalarField::zeros(img.width, img.height);
    iy = ScalarField::zeros(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            if (x == 0) ix.at(x, y) = img.at(1, y) - img.at(0, y);
            else if (x == img.width - 1) ix.at(x, y) = img.at(x, y) - img.at(x - 1, y);
            else ix.at(x, y) = (img.at(x + 1, y) - img.at(x - 1, y)) / 2.0;
            if (y == 0) iy.at(x, y) = img.at(x, 1) - img.at(x, 0);
            else if (y == img.height - 1) iy.at(x, y) = img.at(x, y) - img.at(x, y - 1);
            else iy.at(x, y) = (img.at(x, y + 1) - img.at(x, y - 1)) / 2.0;
        }
    }
}

// Per-pixel cornerness with the products-then-smooth assembly, all in
// straight loops.
inline ScalarField naive_harris_response(const GrayImage& img, double sigma, double k) {
    ScalarField ix, iy;
    naive_gradients(img, ix, iy);
    const Kernel g = naive_gaussian(sigma);
    ScalarField xx = ScalarField::zeros(img.width, img.height);
    ScalarField xy = ScalarField::zeros(img.width, img.height);
    ScalarField yy = ScalarField::zeros(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            xx.at(x, y) = ix.at(x, y) * ix.at(x, y);
            xy.at(x, y) = ix.at(x, y) * iy.at(x, y);
            yy.at(x, y) = iy.at(x, y) * iy.at(x, y);
        }
    const ScalarField a = naive_convolve(xx, g);
    const ScalarField b = naive_convolve(xy, g);
    const ScalarField c = naive_convolve(yy, g);
    ScalarField r = ScalarField::zeros(img.width, img.height);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            const double av = a.at(x, y), bv = b.at(x, y), cv = c.at(x, y);
            r.at(x, y) = (av * cv - bv * bv) - k * (av + cv) * (av + cv);
        }
    return r;
}

// ----- polygons -----

// Winding number by summed signed crossings; nonzero means inside.
inline bool winding_inside(const std::vector<Vec2>& poly, Vec2 p) {
    int winding = 0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        if (a.y <= p.y) {
            if (b.y > p.y && cross(b - a, p - a) > 0.0) ++winding;
        } else {
            if (b.y <= p.y && cross(b - a, p - a) < 0.0) --winding;
        }
    }
    return winding != 0;
}

// ----- carving -----

inline std::vector<uint8_t> brute_occupancy(const CarveGrid& grid,
                                            const std::vector<Envelope>& envelopes) {
    std::vector<uint8_t> occ(static_cast<std::size_t>(grid.nx) * grid.ny * grid.nz, 0);
    for (int k = 0; k < grid.nz; ++k)
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                const Vec3 c = grid.center(i, j, k);
                bool inside = true;
                for (const Envelope& e : envelopes)
                    if (!e.contains(c)) {
                        inside = false;
                        break;
                    }
                occ[grid.index(i, j, k)] = inside ? 1 : 0;
            }
    return occ;
}

inline std::vector<Vec3> brute_boundary(const CarveGrid& grid) {
    std::vector<Vec3> pts;
    for (int k = 0; k < grid.nz; ++k)
        for (int j = 0; j < grid.ny; ++j)
            for (int i = 0; i < grid.nx; ++i) {
                if (!grid.occupied(i, j, k)) continue;
                const bool surface = !grid.occupied(i - 1, j, k) || !grid.occupied(i + 1, j, k) ||
                                     !grid.occupied(i, j - 1, k) || !grid.occupied(i, j + 1, k) ||
                                     !grid.occupied(i, j, k - 1) || !grid.occupied(i, j, k + 1);
                if (surface) pts.push_back(grid.center(i, j, k));
            }
    std::sort(pts.begin(), pts.end(), lex_less);
    return pts;
}

// ----- Delaunay -----

using TetKey = std::array<int, 4>;

inline TetKey tet_key(const std::array<int, 4>& t) {
    TetKey k = t;
    std::sort(k.begin(), k.end());
    return k;
}

// Every 4-subset with a nonempty interior whose circumsphere holds no other
// point strictly inside (relative slack 1e-9).
inline std::set<TetKey> brute_delaunay(const std::vector<Vec3>& pts) {
    std::set<TetKey> out;
    const int n = static_cast<int>(pts.size());
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    if (orient3d(pts[a], pts[b], pts[c], pts[d]) == Orientation::Degenerate)
                        continue;
                    const Sphere s = circumsphere(pts[a], pts[b], pts[c], pts[d]);
                    bool empty = true;
                    for (int e = 0; e < n && empty; ++e) {
                        if (e == a || e == b || e == c || e == d) continue;
                        if (norm(pts[e] - s.center) < s.radius * (1.0 - 1e-9)) empty = false;
                    }
                    if (empty) out.insert({a, b, c, d});
                }
    return out;
}

// Counts (tet, vertex) pairs violating the empty-circumsphere property.
inline int empty_sphere_violations(const Tetrahedralization& t, double rel_tol = 1e-9) {
    int violations = 0;
    for (std::size_t i = 0; i < t.tets.size(); ++i) {
        const Sphere& s = t.circumspheres[i];
        for (std::size_t v = 0; v < t.work_points.size(); ++v) {
            if (v == static_cast<std::size_t>(t.tets[i][0]) ||
                v == static_cast<std::size_t>(t.tets[i][1]) ||
                v == static_cast<std::size_t>(t.tets[i][2]) ||
                v == static_cast<std::size_t>(t.tets[i][3]))
                continue;
            if (norm(t.work_points[v] - s.center) < s.radius * (1.0 - rel_tol)) ++violations;
        }
    }
    return violations;
}

// Hull volume by the divergence theorem over the boundary faces.
inline double hull_volume_oracle(const Tetrahedralization& t) {
    double vol = 0.0;
    for (std::size_t i = 0; i < t.tets.size(); ++i)
        for (int f = 0; f < 4; ++f) {
            if (t.adjacency[i][f] >= 0) continue;
            const auto fv = t.outward_face(static_cast<int>(i), f);
            const Vec3& a = t.work_points[fv[0]];
            const Vec3& b = t.work_points[fv[1]];
            const Vec3& c = t.work_points[fv[2]];
            vol += dot(a, cross(b, c)) / 6.0;
        }
    return vol;
}

// ----- icosphere -----

inline std::vector<Vec3> icosphere(int subdivisions) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {{-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
                               {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
                               {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1}};
    for (Vec3& v : verts) v = normalized(v);
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int step = 0; step < subdivisions; ++step) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            verts.push_back(normalized((verts[a] + verts[b]) * 0.5));
            const int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = mid(f[0], f[1]);
            const int bc = mid(f[1], f[2]);
            const int ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    return verts;
}

// ----- mesh readers -----

struct ParsedMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
};

inline ParsedMesh read_obj(const std::string& path) {
    ParsedMesh m;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag;
        ss >> tag;
        if (tag == "v") {
            Vec3 v;
            ss >> v.x >> v.y >> v.z;
            m.vertices.push_back(v);
        } else if (tag == "f") {
            int a, b, c;
            ss >> a >> b >> c;
            m.triangles.push_back({a - 1, b - 1, c - 1});
        }
    }
    return m;
}

inline ParsedMesh read_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::size_t nv = 0, nf = 0;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tag, what;
        ss >> tag >> what;
        if (tag == "element" && what == "vertex") ss >> nv;
        if (tag == "element" && what == "face") ss >> nf;
        if (tag == "end_header") break;
    }
    auto read_f64 = [&]() {
        unsigned char b[8];
        in.read(reinterpret_cast<char*>(b), 8);
        std::uint64_t bits = 0;
        for (int i = 7; i >= 0; --i) bits = (bits << 8) | b[i];
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    };
    auto read_i32 = [&]() {
        unsigned char b[4];
        in.read(reinterpret_cast<char*>(b), 4);
        std::uint32_t bits = 0;
        for (int i = 3; i >= 0; --i) bits = (bits << 8) | b[i];
        return static_cast<std::int32_t>(bits);
    };
    ParsedMesh m;
    for (std::size_t i = 0; i < nv; ++i) {
        Vec3 v;
        v.x = read_f64();
        v.y = read_f64();
        v.z = read_f64();
        m.vertices.push_back(v);
    }
    for (std::size_t i = 0; i < nf; ++i) {
        char count;
        in.get(count);
        m.triangles.push_back({read_i32(), read_i32(), read_i32()});
    }
    return m;
}

// ----- misc -----

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Three synthetic first-angle views of an axis-aligned box of the given
// world dimensions, rendered at pixel offset (16, 16), scale 1. Corners sit
// on pixel centers, so a dx-unit edge spans dx+1 foreground pixels and the
// corner pixels recovered from the views describe a region of extent exactly
// dx. World box: x in [16, 16+dx], y in [16, 16+dy], z in [-(16+dz), -16].
struct BoxViews {
    GrayImage front; // dx wide, dz tall
    GrayImage top;   // dx wide, dy tall
    GrayImage side;  // dy wide, dz tall
};

inline BoxViews box_views(int image_size, int dx, int dy, int dz) {
    BoxViews v;
    v.front = make_image(image_size, image_size, 0.0);
    fill_rect(v.front, 16, 16, dx + 1, dz + 1, 1.0);
    v.top = make_image(image_size, image_size, 0.0);
    fill_rect(v.top, 16, 16, dx + 1, dy + 1, 1.0);
    v.side = make_image(image_size, image_size, 0.0);
    fill_rect(v.side, 16, 16, dy + 1, dz + 1, 1.0);
    return v;
}

} // namespace testsupport
