#include "ortho3d/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <utility>

namespace ortho3d {

Orientation orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    const Vec3 u = b - a, v = c - a, w = d - a;
    const double det = dot(u, cross(v, w));
    double scale = 0.0;
    for (const Vec3* p : {&a, &b, &c, &d})
        scale = std::max({scale, std::fabs(p->x), std::fabs(p->y), std::fabs(p->z)});
    const double eps = kOrientEps * scale * scale * scale;
    if (std::fabs(det) <= eps) return Orientation::Degenerate;
    return det > 0.0 ? Orientation::Positive : Orientation::Negative;
}

Sphere circumsphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
    if (orient3d(a, b, c, d) == Orientation::Degenerate)
        throw Error(Errc::DegenerateTetrahedron, "circumsphere: flat tetrahedron");
    // Solve 2 (q - a) . y = |q - a|^2 for q in {b, c, d}; center = a + y.
    const Vec3 r1 = b - a, r2 = c - a, r3 = d - a;
    const double h1 = 0.5 * dot(r1, r1);
    const double h2 = 0.5 * dot(r2, r2);
    const double h3 = 0.5 * dot(r3, r3);
    const double det = dot(r1, cross(r2, r3));
    const Vec3 y{(h1 * (r2.y * r3.z - r2.z * r3.y) - h2 * (r1.y * r3.z - r1.z * r3.y) +
                  h3 * (r1.y * r2.z - r1.z * r2.y)) /
                     det,
                 (-h1 * (r2.x * r3.z - r2.z * r3.x) + h2 * (r1.x * r3.z - r1.z * r3.x) -
                  h3 * (r1.x * r2.z - r1.z * r2.x)) /
                     det,
                 (h1 * (r2.x * r3.y - r2.y * r3.x) - h2 * (r1.x * r3.y - r1.y * r3.x) +
                  h3 * (r1.x * r2.y - r1.y * r2.x)) /
                     det};
    return Sphere{a + y, norm(y)};
}

SphereSide side_of_sphere(const Sphere& s, const Vec3& p) {
    const double d = norm(p - s.center);
    const double tol = kSphereEps * s.radius;
    if (d < s.radius - tol) return SphereSide::Inside;
    if (d > s.radius + tol) return SphereSide::Outside;
    return SphereSide::On;
}

std::uint64_t hash_u64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

double unit_jitter(std::uint64_t seed, std::uint64_t idx, std::uint64_t axis) {
    const std::uint64_t h = hash_u64(seed ^ hash_u64(idx * 3 + axis));
    // 53 mantissa bits -> [0, 1), then shift to [-1, 1).
    const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
    return 2.0 * u - 1.0;
}

struct TripleProduct {
    double value;
    double magnitude; // sum of |term| products, basis for the rounding filter
};

TripleProduct triple(const Vec3& u, const Vec3& v, const Vec3& w) {
    const double t0 = u.x * v.y * w.z, t1 = u.x * v.z * w.y;
    const double t2 = u.y * v.z * w.x, t3 = u.y * v.x * w.z;
    const double t4 = u.z * v.x * w.y, t5 = u.z * v.y * w.x;
    return {(t0 - t1) + (t2 - t3) + (t4 - t5),
            std::fabs(t0) + std::fabs(t1) + std::fabs(t2) + std::fabs(t3) + std::fabs(t4) +
                std::fabs(t5)};
}

// In-circumsphere test as the 4x4 determinant with rows (q - e, |q - e|^2),
// q in {a, b, c, d}. For a positively oriented tet the determinant is negative
// exactly when e lies strictly inside. Deciding on the determinant sign is far
// better conditioned than comparing |e - center| against the radius: near-flat
// tets put catastrophic cancellation into the computed center, and samples of
// a smooth surface produce exactly such tets. The magnitude-weighted band
// absorbs rounding; genuinely cospherical configurations land On.
SphereSide insphere_side(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                         const Vec3& e) {
    const Vec3 A = a - e, B = b - e, C = c - e, D = d - e;
    const double la = norm2(A), lb = norm2(B), lc = norm2(C), ld = norm2(D);
    const TripleProduct bcd = triple(B, C, D);
    const TripleProduct acd = triple(A, C, D);
    const TripleProduct abd = triple(A, B, D);
    const TripleProduct abc = triple(A, B, C);
    const double det = (lb * acd.value - la * bcd.value) + (ld * abc.value - lc * abd.value);
    const double tol =
        1e-14 * (la * bcd.magnitude + lb * acd.magnitude + lc * abd.magnitude + ld * abc.magnitude);
    if (det < -tol) return SphereSide::Inside;
    if (det > tol) return SphereSide::Outside;
    return SphereSide::On;
}

// Outward-oriented face opposite corner i of a positively oriented tet:
// orient3d(face, v[i]) is Negative for each row.
constexpr int kFace[4][3] = {{1, 2, 3}, {0, 3, 2}, {0, 1, 3}, {0, 2, 1}};

struct BwTet {
    std::array<int, 4> v;
    std::array<int, 4> adj; // across face opposite v[i]; -1 = none
    Sphere sphere;
    bool alive = true;
};

class Builder {
public:
    Builder(std::vector<Vec3> pts, int n_input) : pts_(std::move(pts)), n_input_(n_input) {}

    std::vector<Vec3> pts_;
    int n_input_;
    std::vector<BwTet> tets_;
    int last_ = 0;

    Orientation face_orient(int t, int f, const Vec3& p) const {
        const auto& tv = tets_[t].v;
        return orient3d(pts_[tv[kFace[f][0]]], pts_[tv[kFace[f][1]]], pts_[tv[kFace[f][2]]], p);
    }

    SphereSide tet_side(int t, const Vec3& p) const {
        const auto& tv = tets_[t].v;
        return insphere_side(pts_[tv[0]], pts_[tv[1]], pts_[tv[2]], pts_[tv[3]], p);
    }

    int make_super() {
        Vec3 lo = pts_[0], hi = pts_[0];
        for (int i = 1; i < n_input_; ++i) {
            lo.x = std::min(lo.x, pts_[i].x);
            lo.y = std::min(lo.y, pts_[i].y);
            lo.z = std::min(lo.z, pts_[i].z);
            hi.x = std::max(hi.x, pts_[i].x);
            hi.y = std::max(hi.y, pts_[i].y);
            hi.z = std::max(hi.z, pts_[i].z);
        }
        const Vec3 c = (lo + hi) * 0.5;
        const double r = 100.0 * norm(hi - lo) + 1.0;
        pts_.push_back(c + Vec3{r, r, r});
        pts_.push_back(c + Vec3{r, -r, -r});
        pts_.push_back(c + Vec3{-r, -r, r});
        pts_.push_back(c + Vec3{-r, r, -r});
        const int s = n_input_;
        BwTet t;
        t.v = {s, s + 1, s + 2, s + 3};
        if (orient3d(pts_[s], pts_[s + 1], pts_[s + 2], pts_[s + 3]) != Orientation::Positive)
            std::swap(t.v[2], t.v[3]);
        t.adj = {-1, -1, -1, -1};
        t.sphere = circumsphere(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], pts_[t.v[3]]);
        tets_.push_back(t);
        return 0;
    }

    // Walks from the hint toward p; falls back to a scan when the walk cycles.
    int locate(const Vec3& p, int hint, int pid) const {
        int cur = hint;
        const int limit = static_cast<int>(tets_.size()) * 4 + 64;
        for (int step = 0; step < limit; ++step) {
            int next = -1;
            for (int f = 0; f < 4; ++f) {
                if (face_orient(cur, f, p) == Orientation::Positive) {
                    next = tets_[cur].adj[f];
                    break;
                }
            }
            if (next == -1) return cur;
            cur = next;
        }
        for (int t = 0; t < static_cast<int>(tets_.size()); ++t) {
            if (!tets_[t].alive) continue;
            bool inside = true;
            for (int f = 0; f < 4 && inside; ++f)
                if (face_orient(t, f, p) == Orientation::Positive) inside = false;
            if (inside) return t;
        }
        for (int t = 0; t < static_cast<int>(tets_.size()); ++t)
            if (tets_[t].alive && tet_side(t, p) != SphereSide::Outside) return t;
        throw Error(Errc::NumericalFailure,
                    "point location failed at insertion " + std::to_string(pid));
    }

    // Collects the face-connected set of tets whose circumsphere contains p.
    // include_on widens the test to the tolerance band.
    std::vector<int> grow_cavity(const Vec3& p, int seed, bool include_on) const {
        auto admits = [&](int t) {
            const SphereSide s = tet_side(t, p);
            return s == SphereSide::Inside || (include_on && s == SphereSide::On);
        };
        std::vector<int> cavity;
        if (!admits(seed)) return cavity;
        std::vector<int> stack{seed};
        std::vector<char> seen(tets_.size(), 0);
        seen[seed] = 1;
        while (!stack.empty()) {
            const int t = stack.back();
            stack.pop_back();
            cavity.push_back(t);
            for (int f = 0; f < 4; ++f) {
                const int n = tets_[t].adj[f];
                if (n < 0 || seen[n] || !tets_[n].alive) continue;
                seen[n] = 1;
                if (admits(n)) stack.push_back(n);
            }
        }
        std::sort(cavity.begin(), cavity.end());
        return cavity;
    }

    struct BoundaryFace {
        std::array<int, 3> v; // outward from the cavity
        int outside;          // external neighbor tet, -1 on hull
        int outside_slot;     // face index in the neighbor pointing back
    };

    // Makes the cavity star-shaped around p and collects its boundary: any
    // boundary face that does not see p strictly is dissolved by absorbing the
    // tet behind it. Earlier insertions that resolved a tolerance-band tie can
    // leave the complex locally off-Delaunay, and then a later strict conflict
    // region need not be star-shaped on its own. Absorption only ever grows
    // the cavity, so the loop terminates. Returns false when the offending
    // face has no neighbor (p would have to escape the super tetrahedron).
    bool star_shape(const Vec3& p, std::vector<int>& cavity, std::vector<char>& in_cav,
                    std::vector<BoundaryFace>& out) const {
        for (;;) {
            out.clear();
            int grow = -1;
            for (std::size_t i = 0; i < cavity.size() && grow < 0; ++i) {
                const int t = cavity[i];
                for (int f = 0; f < 4; ++f) {
                    const int n = tets_[t].adj[f];
                    if (n >= 0 && in_cav[n]) continue;
                    BoundaryFace bf;
                    bf.v = {tets_[t].v[kFace[f][0]], tets_[t].v[kFace[f][1]],
                            tets_[t].v[kFace[f][2]]};
                    if (orient3d(pts_[bf.v[0]], pts_[bf.v[1]], pts_[bf.v[2]], p) !=
                        Orientation::Negative) {
                        if (n < 0) return false;
                        grow = n;
                        break;
                    }
                    bf.outside = n;
                    bf.outside_slot = -1;
                    if (n >= 0) {
                        for (int g = 0; g < 4; ++g)
                            if (tets_[n].adj[g] == t) bf.outside_slot = g;
                    }
                    out.push_back(bf);
                }
            }
            if (grow < 0) return true;
            in_cav[grow] = 1;
            cavity.push_back(grow);
        }
    }

    // Seed for the cavity flood: the located tet when it admits p, otherwise
    // the first alive tet that does (the walk can stop one tet short when a
    // face test lands in the degeneracy band).
    int find_admitting(const Vec3& p, int hint, bool include_on) const {
        auto admits = [&](int t) {
            const SphereSide s = tet_side(t, p);
            return s == SphereSide::Inside || (include_on && s == SphereSide::On);
        };
        if (tets_[hint].alive && admits(hint)) return hint;
        for (int t = 0; t < static_cast<int>(tets_.size()); ++t)
            if (tets_[t].alive && admits(t)) return t;
        return -1;
    }

    void insert(int pid) {
        const Vec3& p = pts_[pid];
        const int start = locate(p, last_, pid);
        std::vector<int> cavity;
        std::vector<BoundaryFace> boundary;
        bool ok = false;
        for (bool include_on : {false, true}) {
            const int seed = find_admitting(p, start, include_on);
            if (seed < 0) continue;
            cavity = grow_cavity(p, seed, include_on);
            if (cavity.empty()) continue;
            std::vector<char> in_cav(tets_.size(), 0);
            for (int t : cavity) in_cav[t] = 1;
            ok = star_shape(p, cavity, in_cav, boundary);
            if (ok) break;
        }
        if (!ok)
            throw Error(Errc::NumericalFailure,
                        "no valid cavity at insertion " + std::to_string(pid));

        // One new tet per boundary face: (a, c, b, p) is positively oriented
        // because the face is outward and p lies strictly inside the cavity.
        std::vector<int> fresh;
        fresh.reserve(boundary.size());
        std::map<std::pair<int, int>, std::pair<int, int>> half; // horizon edge -> (tet, slot)
        for (const BoundaryFace& bf : boundary) {
            const int a = bf.v[0], b = bf.v[1], c = bf.v[2];
            BwTet nt;
            nt.v = {a, c, b, pid};
            nt.sphere = circumsphere(pts_[a], pts_[c], pts_[b], pts_[pid]);
            nt.adj = {-1, -1, -1, -1};
            const int id = static_cast<int>(tets_.size());
            nt.adj[3] = bf.outside;
            tets_.push_back(nt);
            fresh.push_back(id);
            if (bf.outside >= 0) tets_[bf.outside].adj[bf.outside_slot] = id;
            // Faces through p, keyed by the horizon edge they contain:
            // slot 0 (opposite a) <-> {b, c}, slot 1 (opposite c) <-> {a, b},
            // slot 2 (opposite b) <-> {a, c}.
            const std::pair<int, int> keys[3] = {{std::min(b, c), std::max(b, c)},
                                                 {std::min(a, b), std::max(a, b)},
                                                 {std::min(a, c), std::max(a, c)}};
            for (int slot = 0; slot < 3; ++slot) {
                auto it = half.find(keys[slot]);
                if (it == half.end()) {
                    half.emplace(keys[slot], std::make_pair(id, slot));
                } else {
                    tets_[id].adj[slot] = it->second.first;
                    tets_[it->second.first].adj[it->second.second] = id;
                    half.erase(it);
                }
            }
        }
        if (!half.empty())
            throw Error(Errc::NumericalFailure,
                        "open cavity at insertion " + std::to_string(pid));
        for (int t : cavity) tets_[t].alive = false;
        last_ = fresh.back();
    }
};

} // namespace

Tetrahedralization triangulate(const std::vector<Vec3>& points, const TriangulateOptions& opts) {
    const int n = static_cast<int>(points.size());
    if (n < 4) throw Error(Errc::TooFewPoints, "triangulate: need at least 4 points");

    // Coplanarity screen on the raw input: pick a far pair, widest triangle,
    // then the point of largest tetrahedron volume.
    {
        int p1 = -1;
        double best = 0.0;
        for (int i = 1; i < n; ++i) {
            const double d = norm2(points[i] - points[0]);
            if (d > best) { best = d; p1 = i; }
        }
        int p2 = -1;
        best = 0.0;
        if (p1 >= 0) {
            for (int i = 1; i < n; ++i) {
                const double a = norm2(cross(points[p1] - points[0], points[i] - points[0]));
                if (a > best) { best = a; p2 = i; }
            }
        }
        bool solid = false;
        if (p2 >= 0) {
            int p3 = -1;
            best = 0.0;
            for (int i = 1; i < n; ++i) {
                const double v =
                    std::fabs(dot(points[p1] - points[0],
                                  cross(points[p2] - points[0], points[i] - points[0])));
                if (v > best) { best = v; p3 = i; }
            }
            solid = p3 >= 0 &&
                    orient3d(points[0], points[p1], points[p2], points[p3]) != Orientation::Degenerate;
        }
        if (!solid) throw Error(Errc::AllCoplanar, "triangulate: points are coplanar");
    }

    std::vector<Vec3> work = points;
    if (opts.jitter_magnitude > 0.0) {
        for (int i = 0; i < n; ++i) {
            work[i].x += opts.jitter_magnitude * unit_jitter(opts.jitter_seed, i, 0);
            work[i].y += opts.jitter_magnitude * unit_jitter(opts.jitter_seed, i, 1);
            work[i].z += opts.jitter_magnitude * unit_jitter(opts.jitter_seed, i, 2);
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return lex_less(work[a], work[b]); });
    for (int i = 1; i < n; ++i) {
        const Vec3& a = work[order[i - 1]];
        const Vec3& b = work[order[i]];
        if (a.x == b.x && a.y == b.y && a.z == b.z)
            throw Error(Errc::NumericalFailure,
                        "duplicate point at index " + std::to_string(order[i]));
    }

    Builder bw(std::move(work), n);
    bw.make_super();
    for (int idx : order) bw.insert(idx);

    Tetrahedralization out;
    out.vertices = points;
    out.work_points.assign(bw.pts_.begin(), bw.pts_.begin() + n);
    for (const BwTet& t : bw.tets_) {
        if (!t.alive) continue;
        if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n || t.v[3] >= n) continue;
        out.tets.push_back(t.v);
        out.circumspheres.push_back(t.sphere);
    }
    if (out.tets.empty())
        throw Error(Errc::AllCoplanar, "triangulate: no interior tetrahedra");

    // Adjacency over the kept tets only; shared faces pair up, the rest are hull.
    std::map<std::array<int, 3>, std::pair<int, int>> face_map;
    out.adjacency.assign(out.tets.size(), {-1, -1, -1, -1});
    for (int t = 0; t < static_cast<int>(out.tets.size()); ++t) {
        for (int f = 0; f < 4; ++f) {
            std::array<int, 3> key = {out.tets[t][kFace[f][0]], out.tets[t][kFace[f][1]],
                                      out.tets[t][kFace[f][2]]};
            std::sort(key.begin(), key.end());
            auto it = face_map.find(key);
            if (it == face_map.end()) {
                face_map.emplace(key, std::make_pair(t, f));
            } else {
                out.adjacency[t][f] = it->second.first;
                out.adjacency[it->second.first][it->second.second] = t;
                face_map.erase(it);
            }
        }
    }

    out.vertex_tets.assign(n, {});
    for (int t = 0; t < static_cast<int>(out.tets.size()); ++t)
        for (int v : out.tets[t]) out.vertex_tets[v].push_back(t);
    return out;
}

std::array<int, 3> Tetrahedralization::outward_face(int tet, int i) const {
    return {tets[tet][kFace[i][0]], tets[tet][kFace[i][1]], tets[tet][kFace[i][2]]};
}

bool Tetrahedralization::tet_on_hull(int tet) const {
    const auto& a = adjacency[tet];
    return a[0] < 0 || a[1] < 0 || a[2] < 0 || a[3] < 0;
}

bool Tetrahedralization::vertex_on_hull(int v) const {
    for (int t : vertex_tets[v])
        for (int f = 0; f < 4; ++f)
            if (adjacency[t][f] < 0 && tets[t][f] != v) return true;
    return false;
}

double Tetrahedralization::tet_volume(int tet) const {
    const auto& tv = tets[tet];
    const Vec3& a = work_points[tv[0]];
    return dot(work_points[tv[1]] - a,
               cross(work_points[tv[2]] - a, work_points[tv[3]] - a)) /
           6.0;
}

void Tetrahedralization::dump_tets(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw Error(Errc::IoError, "cannot open " + path);
    for (const auto& t : tets) std::fprintf(f, "%d %d %d %d\n", t[0], t[1], t[2], t[3]);
    std::fclose(f);
}

} // namespace ortho3d
