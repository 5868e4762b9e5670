#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <json.hpp>

#include "ortho3d/mesh_io.hpp"
#include "support.hpp"

using namespace ortho3d;
using namespace testsupport;

namespace {

TriangleMesh single_triangle() {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    m.triangles = {{0, 1, 2}};
    return m;
}

TriangleMesh octahedron() {
    TriangleMesh m;
    m.vertices = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    m.triangles = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                   {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    return m;
}

TriangleMesh random_mesh(int n_vertices, int n_triangles, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(-150.0, 150.0);
    std::uniform_int_distribution<int> idx(0, n_vertices - 1);
    TriangleMesh m;
    for (int i = 0; i < n_vertices; ++i) m.vertices.push_back({uni(rng), uni(rng), uni(rng)});
    while (static_cast<int>(m.triangles.size()) < n_triangles) {
        int a = idx(rng), b = idx(rng), c = idx(rng);
        if (a == b || b == c || a == c) continue;
        m.triangles.push_back({a, b, c});
    }
    return m;
}

} // namespace

TEST_CASE("single triangle obj has the exact expected bytes") {
    write_obj(single_triangle(), "tri.obj");
    CHECK(slurp("tri.obj") == "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
}

TEST_CASE("empty mesh writes an empty obj") {
    write_obj(TriangleMesh{}, "empty.obj");
    CHECK(slurp("empty.obj").empty());
}

TEST_CASE("obj round trip preserves geometry and indices") {
    const TriangleMesh m = random_mesh(60, 100, 17);
    write_obj(m, "random.obj");
    const ParsedMesh back = read_obj("random.obj");
    REQUIRE(back.vertices.size() == m.vertices.size());
    REQUIRE(back.triangles.size() == m.triangles.size());
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        CHECK(std::fabs(back.vertices[i].x - m.vertices[i].x) <=
              1e-8 * std::max(1.0, std::fabs(m.vertices[i].x)));
        CHECK(std::fabs(back.vertices[i].y - m.vertices[i].y) <=
              1e-8 * std::max(1.0, std::fabs(m.vertices[i].y)));
        CHECK(std::fabs(back.vertices[i].z - m.vertices[i].z) <=
              1e-8 * std::max(1.0, std::fabs(m.vertices[i].z)));
    }
    CHECK(back.triangles == m.triangles);
}

TEST_CASE("ply header and body are laid out as promised") {
    TriangleMesh cube;
    cube.vertices = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                     {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    cube.triangles = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
                      {2, 3, 7}, {2, 7, 6}, {1, 2, 6}, {1, 6, 5}, {0, 4, 7}, {0, 7, 3}};
    write_ply(cube, "cube.ply");

    const std::string bytes = slurp("cube.ply");
    CHECK(bytes.find("ply\nformat binary_little_endian 1.0\n") == 0);
    CHECK(bytes.find("element vertex 8\n") != std::string::npos);
    CHECK(bytes.find("element face 12\n") != std::string::npos);
    CHECK(bytes.find("property list uchar int vertex_indices\n") != std::string::npos);
    const std::size_t marker = bytes.find("end_header\n");
    REQUIRE(marker != std::string::npos);
    CHECK(bytes.size() - (marker + 11) == 8u * 24u + 12u * 13u);

    const ParsedMesh back = read_ply("cube.ply");
    REQUIRE(back.vertices.size() == 8);
    REQUIRE(back.triangles.size() == 12);
    for (std::size_t i = 0; i < cube.vertices.size(); ++i)
        CHECK(back.vertices[i] == cube.vertices[i]); // f64 payload is exact
    CHECK(back.triangles == cube.triangles);
}

TEST_CASE("obj and ply agree on the same mesh") {
    const TriangleMesh m = random_mesh(40, 70, 23);
    write_obj(m, "both.obj");
    write_ply(m, "both.ply");
    const ParsedMesh a = read_obj("both.obj");
    const ParsedMesh b = read_ply("both.ply");
    REQUIRE(a.vertices.size() == b.vertices.size());
    CHECK(a.triangles == b.triangles);
    for (std::size_t i = 0; i < a.vertices.size(); ++i)
        CHECK(norm(a.vertices[i] - b.vertices[i]) <= 1e-6);
}

TEST_CASE("writers reject an unwritable path") {
    try {
        write_obj(single_triangle(), "no_such_dir/out.obj");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IoError);
    }
    try {
        write_ply(single_triangle(), "no_such_dir/out.ply");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IoError);
    }
}

TEST_CASE("stats of a lone triangle") {
    const MeshStats st = compute_stats(single_triangle());
    CHECK(st.n_points == 3);
    CHECK(st.n_points_used == 3);
    CHECK(st.n_triangles == 1);
    CHECK(st.n_edges == 3);
    CHECK(st.euler_characteristic == 1);
    CHECK(st.boundary_edges == 3);
    CHECK(st.nonmanifold_edges == 0);
    CHECK(st.total_time_minutes == 0.0);
}

TEST_CASE("stats of a closed tetrahedron surface") {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    m.triangles = {{0, 2, 1}, {0, 1, 3}, {1, 2, 3}, {0, 3, 2}};
    const MeshStats st = compute_stats(m);
    CHECK(st.n_points_used == 4);
    CHECK(st.n_edges == 6);
    CHECK(st.n_triangles == 4);
    CHECK(st.euler_characteristic == 2);
    CHECK(st.boundary_edges == 0);
    CHECK(st.nonmanifold_edges == 0);
}

TEST_CASE("stats of an octahedron and the E = 3F/2 relation") {
    const MeshStats st = compute_stats(octahedron());
    CHECK(st.n_points_used == 6);
    CHECK(st.n_edges == 12);
    CHECK(st.n_triangles == 8);
    CHECK(st.euler_characteristic == 2);
    CHECK(st.n_edges * 2 == st.n_triangles * 3);
    CHECK(st.boundary_edges == 0);
    CHECK(st.nonmanifold_edges == 0);
}

TEST_CASE("three triangles on one edge are flagged non-manifold") {
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, -1, 0}};
    m.triangles = {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}};
    const MeshStats st = compute_stats(m);
    CHECK(st.n_points_used == 5);
    CHECK(st.n_edges == 7);
    CHECK(st.nonmanifold_edges == 1);
    CHECK(st.boundary_edges == 6);
    CHECK(st.euler_characteristic == 1);
}

TEST_CASE("unreferenced vertices are counted but not used") {
    TriangleMesh m = single_triangle();
    m.vertices.push_back({9, 9, 9});
    const MeshStats st = compute_stats(m);
    CHECK(st.n_points == 4);
    CHECK(st.n_points_used == 3);
    CHECK(st.euler_characteristic == 1);
}

TEST_CASE("timings pass through and sum to minutes") {
    const std::vector<StageTiming> times = {{"load", 1.5}, {"carve", 12.0}, {"reconstruct", 46.5}};
    const MeshStats st = compute_stats(single_triangle(), times);
    REQUIRE(st.stage_times.size() == 3);
    CHECK(st.stage_times[1].name == "carve");
    CHECK(st.stage_times[1].seconds == 12.0);
    CHECK(st.total_time_minutes == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("text report matches the reference table row") {
    MeshStats st;
    st.n_points = 42401;
    st.n_triangles = 246631;
    st.total_time_minutes = 82.68 / 60.0; // 1.378 minutes
    CHECK(report(st, ReportFormat::Text) == "Points  Triangles  Time(min)\n42401  246631  1.378\n");

    CHECK(report(MeshStats{}, ReportFormat::Text) == "Points  Triangles  Time(min)\n0  0  0.000\n");
}

TEST_CASE("json report round trips through a parser") {
    MeshStats st = compute_stats(octahedron(), {{"load", 3.0}, {"export", 6.0}});
    const std::string text = report(st, ReportFormat::Json);
    const nlohmann::json j = nlohmann::json::parse(text);
    CHECK(j.at("n_points").get<std::size_t>() == 6);
    CHECK(j.at("n_triangles").get<std::size_t>() == 8);
    CHECK(j.at("euler_characteristic").get<long long>() == 2);
    CHECK(j.at("boundary_edges").get<std::size_t>() == 0);
    CHECK(j.at("nonmanifold_edges").get<std::size_t>() == 0);
    CHECK(j.at("time_minutes").get<double>() == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(j.at("stage_times").at("load").get<double>() == 3.0);
    CHECK(j.at("stage_times").at("export").get<double>() == 6.0);
}
