#include "ortho3d/mesh_io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <unordered_map>

#include <json.hpp>

#include "ortho3d/errors.hpp"

namespace ortho3d {

namespace {

struct FileCloser {
    std::FILE* f;
    ~FileCloser() {
        if (f) std::fclose(f);
    }
};

std::FILE* open_or_throw(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error(Errc::IoError, "cannot open " + path + " for writing");
    return f;
}

void finish_or_throw(std::FILE*& f, const std::string& path) {
    const int rc = std::fclose(f);
    f = nullptr;
    if (rc != 0) throw Error(Errc::IoError, "write failed for " + path);
}

void put_f64_le(std::string& buf, double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

void put_i32_le(std::string& buf, std::int32_t v) {
    const auto bits = static_cast<std::uint32_t>(v);
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

} // namespace

void write_obj(const TriangleMesh& mesh, const std::string& path) {
    std::FILE* f = open_or_throw(path);
    FileCloser guard{f};
    for (const Vec3& v : mesh.vertices)
        std::fprintf(f, "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
    for (const auto& t : mesh.triangles)
        std::fprintf(f, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
    guard.f = nullptr;
    finish_or_throw(f, path);
}

void write_ply(const TriangleMesh& mesh, const std::string& path) {
    std::FILE* f = open_or_throw(path);
    FileCloser guard{f};
    std::fprintf(f,
                 "ply\n"
                 "format binary_little_endian 1.0\n"
                 "element vertex %zu\n"
                 "property double x\n"
                 "property double y\n"
                 "property double z\n"
                 "element face %zu\n"
                 "property list uchar int vertex_indices\n"
                 "end_header\n",
                 mesh.vertices.size(), mesh.triangles.size());
    std::string body;
    body.reserve(mesh.vertices.size() * 24 + mesh.triangles.size() * 13);
    for (const Vec3& v : mesh.vertices) {
        put_f64_le(body, v.x);
        put_f64_le(body, v.y);
        put_f64_le(body, v.z);
    }
    for (const auto& t : mesh.triangles) {
        body.push_back(static_cast<char>(3));
        put_i32_le(body, t[0]);
        put_i32_le(body, t[1]);
        put_i32_le(body, t[2]);
    }
    if (!body.empty() && std::fwrite(body.data(), 1, body.size(), f) != body.size())
        throw Error(Errc::IoError, "write failed for " + path);
    guard.f = nullptr;
    finish_or_throw(f, path);
}

MeshStats compute_stats(const TriangleMesh& mesh, const std::vector<StageTiming>& timings) {
    MeshStats st;
    st.n_points = mesh.vertices.size();
    st.n_triangles = mesh.triangles.size();

    std::vector<char> used(mesh.vertices.size(), 0);
    std::unordered_map<std::uint64_t, int> edges;
    edges.reserve(mesh.triangles.size() * 3);
    const auto key = [](int a, int b) {
        if (a > b) std::swap(a, b);
        return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
    };
    for (const auto& t : mesh.triangles) {
        used[t[0]] = used[t[1]] = used[t[2]] = 1;
        ++edges[key(t[0], t[1])];
        ++edges[key(t[1], t[2])];
        ++edges[key(t[0], t[2])];
    }
    for (char u : used) st.n_points_used += u;
    st.n_edges = edges.size();
    for (const auto& [k, count] : edges) {
        (void)k;
        if (count == 1) ++st.boundary_edges;
        else if (count >= 3) ++st.nonmanifold_edges;
    }
    st.euler_characteristic = static_cast<long long>(st.n_points_used) -
                              static_cast<long long>(st.n_edges) +
                              static_cast<long long>(st.n_triangles);
    st.stage_times = timings;
    double total = 0.0;
    for (const StageTiming& t : timings) total += t.seconds;
    st.total_time_minutes = total / 60.0;
    return st;
}

std::string report(const MeshStats& stats, ReportFormat format) {
    if (format == ReportFormat::Text) {
        char row[128];
        std::snprintf(row, sizeof(row), "%zu  %zu  %.3f", stats.n_points, stats.n_triangles,
                      stats.total_time_minutes);
        return std::string("Points  Triangles  Time(min)\n") + row + "\n";
    }
    nlohmann::json j;
    j["n_points"] = stats.n_points;
    j["n_triangles"] = stats.n_triangles;
    j["time_minutes"] = stats.total_time_minutes;
    j["euler_characteristic"] = stats.euler_characteristic;
    j["boundary_edges"] = stats.boundary_edges;
    j["nonmanifold_edges"] = stats.nonmanifold_edges;
    nlohmann::json stages = nlohmann::json::object();
    for (const StageTiming& t : stats.stage_times) stages[t.name] = t.seconds;
    j["stage_times"] = stages;
    return j.dump(2) + "\n";
}

} // namespace ortho3d
