#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "oracles.hpp"
#include "p3nc/mesh.hpp"

using namespace p3nc;

TEST_CASE("single-cube mesh entity counts") {
    const TetMesh mesh = build_cube_mesh(1);
    CHECK(mesh.tets.size() == 12);
    CHECK(mesh.vertices.size() == 9);  // 8 corners + 1 center
    CHECK(mesh.edges.size() == 26);
    CHECK(mesh.faces.size() == 30);
    CHECK(mesh.n_boundary_faces() == 12);
    CHECK(mesh.n_interior_faces() == 18);

    // Brute-force census from the raw tet list agrees.
    const auto counts = oracles::count_entities(mesh);
    CHECK(counts.faces == 30);
    CHECK(counts.boundary_faces == 12);
    CHECK(counts.edges == 26);
}

TEST_CASE("refined meshes: counts, volumes, orientation") {
    for (int n : {1, 2, 3}) {
        const TetMesh mesh = build_cube_mesh(n);
        CHECK(static_cast<int>(mesh.tets.size()) == 12 * n * n * n);
        CHECK(mesh.volume() == Catch::Approx(1.0).margin(1e-13));
        for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t)
            CHECK(mesh.tet_volume(t) > 0.0);
        CHECK(validate(mesh).empty());
    }
}

TEST_CASE("n = 0 is rejected") { CHECK_THROWS_AS(build_cube_mesh(0), std::invalid_argument); }

TEST_CASE("interior faces have exactly two tets on opposite sides") {
    const TetMesh mesh = build_cube_mesh(2);
    int interior = 0;
    for (const Face& f : mesh.faces) {
        if (f.boundary) {
            CHECK(f.n_adjacent == 1);
            continue;
        }
        ++interior;
        CHECK(f.n_adjacent == 2);
        // Antiparallel outward normals == tets on opposite sides.
        Vec3 normals[2];
        for (int side = 0; side < 2; ++side) {
            const auto& tv = mesh.tets[f.tets[side]].v;
            int opposite = -1;
            for (int vid : tv)
                if (vid != f.v[0] && vid != f.v[1] && vid != f.v[2]) opposite = vid;
            Vec3 nrm = cross(mesh.vertices[f.v[1]] - mesh.vertices[f.v[0]],
                             mesh.vertices[f.v[2]] - mesh.vertices[f.v[0]]);
            if (dot(nrm, mesh.vertices[opposite] - mesh.vertices[f.v[0]]) > 0.0) nrm = -1.0 * nrm;
            normals[side] = nrm;
        }
        CHECK(dot(normals[0], normals[1]) < 0.0);
    }
    CHECK(interior == mesh.n_interior_faces());
}

TEST_CASE("single tet connectivity") {
    TetMesh mesh;
    mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    mesh.tets = {{{0, 1, 2, 3}}};
    derive_connectivity(mesh);
    CHECK(mesh.faces.size() == 4);
    CHECK(mesh.n_boundary_faces() == 4);
    CHECK(mesh.edges.size() == 6);
    for (const Edge& e : mesh.edges) CHECK(e.boundary);
}

TEST_CASE("two tets sharing a face") {
    TetMesh mesh;
    mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}};
    mesh.tets = {{{0, 1, 2, 3}}, {{1, 2, 3, 4}}};
    derive_connectivity(mesh);
    CHECK(mesh.faces.size() == 7);
    CHECK(mesh.n_interior_faces() == 1);
    CHECK(mesh.n_boundary_faces() == 6);
}

TEST_CASE("validate flags a reversed tet") {
    TetMesh mesh = build_cube_mesh(1);
    std::swap(mesh.tets[0].v[0], mesh.tets[0].v[1]);
    const auto violations = validate(mesh);
    bool found = false;
    for (const auto& v : violations)
        if (v.find("non-positive signed volume") != std::string::npos) found = true;
    CHECK(found);
}

TEST_CASE("validate flags a duplicated tet as non-manifold") {
    TetMesh mesh = build_cube_mesh(1);
    mesh.tets.push_back(mesh.tets[0]);
    const auto violations = validate(mesh);
    bool found = false;
    for (const auto& v : violations)
        if (v.find("non-manifold") != std::string::npos) found = true;
    CHECK(found);
    // and derive_connectivity refuses it outright
    CHECK_THROWS_AS(derive_connectivity(mesh), std::runtime_error);
}

TEST_CASE("text format round trip") {
    const TetMesh mesh = build_cube_mesh(2);
    std::stringstream stream;
    save_mesh(mesh, stream);
    const TetMesh loaded = load_mesh(stream);
    REQUIRE(loaded.vertices.size() == mesh.vertices.size());
    REQUIRE(loaded.tets.size() == mesh.tets.size());
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        CHECK(norm(loaded.vertices[v] - mesh.vertices[v]) == 0.0);
    for (std::size_t t = 0; t < mesh.tets.size(); ++t) CHECK(loaded.tets[t].v == mesh.tets[t].v);
    CHECK(loaded.faces.size() == mesh.faces.size());
}

TEST_CASE("truncated mesh file is rejected") {
    std::stringstream stream("4\n0 0 0\n1 0 0\n");
    CHECK_THROWS_AS(load_mesh(stream), std::runtime_error);
}

TEST_CASE("shared cell faces are split the same way from both sides") {
    // If neighboring cells chose different diagonals, a face of one tet
    // would be missing its partner and show up as an interior boundary.
    const TetMesh mesh = build_cube_mesh(3);
    for (const Face& f : mesh.faces) {
        const Vec3 c = (mesh.vertices[f.v[0]] + mesh.vertices[f.v[1]] + mesh.vertices[f.v[2]]) *
                       (1.0 / 3.0);
        const bool on_hull = c.x < 1e-12 || c.x > 1 - 1e-12 || c.y < 1e-12 || c.y > 1 - 1e-12 ||
                             c.z < 1e-12 || c.z > 1 - 1e-12;
        CHECK(f.boundary == on_hull);
    }
}
