#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "p3nc/dofs.hpp"
#include "p3nc/lagrange_p3.hpp"
#include "p3nc/mesh.hpp"

using namespace p3nc;

TEST_CASE("velocity dof counts on the single-cube mesh") {
    const TetMesh mesh = build_cube_mesh(1);
    const VelocityDofMap vmap = build_velocity_dofs(mesh);
    // N_c = 9 vertices + 30 faces + 2*26 edges = 91
    CHECK(vmap.n_scalar == 91);
    CHECK(vmap.n_conforming == 273);
    CHECK(vmap.total == 273 + 108);
}

TEST_CASE("velocity dof count formula on refined meshes") {
    for (int n : {1, 2, 3}) {
        const TetMesh mesh = build_cube_mesh(n);
        const VelocityDofMap vmap = build_velocity_dofs(mesh);
        const int expected = 3 * (static_cast<int>(mesh.vertices.size()) +
                                  static_cast<int>(mesh.faces.size()) +
                                  2 * static_cast<int>(mesh.edges.size())) +
                             9 * static_cast<int>(mesh.tets.size());
        CHECK(vmap.total == expected);
    }
}

TEST_CASE("single tet: 20 conforming nodes, 69 local dofs") {
    TetMesh mesh;
    mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    mesh.tets = {{{0, 1, 2, 3}}};
    derive_connectivity(mesh);
    const VelocityDofMap vmap = build_velocity_dofs(mesh);
    CHECK(vmap.n_scalar == 20);  // 4 + 4 + 2*6
    CHECK(vmap.total == 69);
    // every conforming node constrained, bubbles free
    CHECK(vmap.boundary.size() == 60);
    for (int d : vmap.boundary) CHECK(d < vmap.n_conforming);
}

TEST_CASE("local nodes map to consistent global positions across elements") {
    const TetMesh mesh = build_cube_mesh(2);
    const VelocityDofMap vmap = build_velocity_dofs(mesh);
    const auto& lag = LagrangeP3::instance();
    // For every tet and local node, the Lagrange node mapped to physical
    // coordinates must equal the stored position of its global node.
    // Shared nodes therefore agree from all adjacent elements.
    for (int t = 0; t < static_cast<int>(mesh.tets.size()); ++t) {
        const auto verts = mesh.tet_vertices(t);
        for (int n = 0; n < LagrangeP3::kNodes; ++n) {
            Vec3 pos{0, 0, 0};
            for (int k = 0; k < 4; ++k)
                pos += to_double(lag.node_barycentrics()[n][k]) * verts[k];
            const int node = vmap.tet_nodes[t][n];
            CHECK(norm(pos - vmap.node_positions[node]) <= 1e-13);
        }
    }
}

TEST_CASE("every scalar node is referenced by some element") {
    const TetMesh mesh = build_cube_mesh(2);
    const VelocityDofMap vmap = build_velocity_dofs(mesh);
    std::set<int> seen;
    for (const auto& nodes : vmap.tet_nodes)
        for (int n : nodes) seen.insert(n);
    CHECK(static_cast<int>(seen.size()) == vmap.n_scalar);
}

TEST_CASE("boundary nodes match the geometric predicate") {
    const TetMesh mesh = build_cube_mesh(1);
    const VelocityDofMap vmap = build_velocity_dofs(mesh);
    auto on_hull = [](const Vec3& p) {
        const double eps = 1e-12;
        return p.x < eps || p.x > 1 - eps || p.y < eps || p.y > 1 - eps || p.z < eps ||
               p.z > 1 - eps;
    };
    int boundary_nodes = 0;
    for (int node = 0; node < vmap.n_scalar; ++node) {
        CHECK(vmap.node_boundary[node] == on_hull(vmap.node_positions[node]));
        if (vmap.node_boundary[node]) ++boundary_nodes;
    }
    CHECK(static_cast<int>(vmap.boundary.size()) == 3 * boundary_nodes);
    // 8 cube corners on the boundary, the center vertex interior
    for (int v = 0; v < 9; ++v) {
        const bool is_center = norm(vmap.node_positions[v] - Vec3{0.5, 0.5, 0.5}) < 1e-12;
        CHECK(vmap.node_boundary[v] == !is_center);
    }
}

TEST_CASE("pressure dofs and the mean functional") {
    const TetMesh mesh = build_cube_mesh(1);
    const PressureDofMap pmap = build_pressure_dofs(mesh);
    CHECK(pmap.total == 120);
    CHECK(pmap.domain_volume == Catch::Approx(1.0).margin(1e-13));

    // constant pressure 1: constant modal coefficient on every tet
    std::vector<double> ones(pmap.total, 0.0);
    for (int t = 0; t < pmap.n_tets; ++t) ones[pmap.dof(t, 0)] = 1.0;
    CHECK(pmap.mean(ones) == Catch::Approx(1.0).margin(1e-13));

    // p = x: represent exactly per element through the inverse map
    std::vector<double> px(pmap.total, 0.0);
    for (int t = 0; t < pmap.n_tets; ++t) {
        const auto verts = mesh.tet_vertices(t);
        const Vec3 col0 = verts[1] - verts[0];
        const Vec3 col1 = verts[2] - verts[0];
        const Vec3 col2 = verts[3] - verts[0];
        px[pmap.dof(t, 0)] = verts[0].x;
        px[pmap.dof(t, 1)] = col0.x;
        px[pmap.dof(t, 2)] = col1.x;
        px[pmap.dof(t, 3)] = col2.x;
    }
    CHECK(pmap.mean(px) == Catch::Approx(0.5).margin(1e-13));

    // projection kills the mean
    std::vector<double> p = px;
    pmap.project_zero_mean(p);
    CHECK(std::abs(pmap.mean(p)) <= 1e-14);
}
