#pragma once

#include <vector>

#include "lagrange_p3.hpp"
#include "mesh.hpp"
#include "pressure_basis.hpp"

namespace p3nc {

/// Global numbering of the enriched velocity space.
///
/// Scalar conforming nodes (shared across elements):
///   vertices            [0, V)
///   edge nodes          V + 2e + slot, slot 0 at parameter 1/3 from the
///                       edge's smaller-id endpoint, slot 1 at 2/3
///   face barycenters    V + 2E + f
/// Each scalar node carries 3 velocity components: dof = 3*node + comp.
/// Bubbles follow the conforming block: dof = 3*N_c + 9*t + i.
struct VelocityDofMap {
    int n_scalar = 0;      // N_c = #vertices + #faces + 2 #edges
    int n_conforming = 0;  // 3 N_c
    int n_tets = 0;
    int total = 0;         // n_conforming + 9 #tets

    std::vector<std::array<int, 20>> tet_nodes;  // local Lagrange node -> scalar node
    std::vector<Vec3> node_positions;
    std::vector<bool> node_boundary;
    std::vector<int> boundary;  // constrained velocity dofs, ascending

    int velocity_dof(int scalar_node, int comp) const { return 3 * scalar_node + comp; }
    int bubble_dof(int tet, int i) const { return n_conforming + 9 * tet + i; }
};

inline VelocityDofMap build_velocity_dofs(const TetMesh& mesh) {
    if (!mesh.has_connectivity)
        throw std::runtime_error("build_velocity_dofs: connectivity not derived");
    VelocityDofMap map;
    const int nv = static_cast<int>(mesh.vertices.size());
    const int ne = static_cast<int>(mesh.edges.size());
    const int nf = static_cast<int>(mesh.faces.size());
    map.n_tets = static_cast<int>(mesh.tets.size());
    map.n_scalar = nv + nf + 2 * ne;
    map.n_conforming = 3 * map.n_scalar;
    map.total = map.n_conforming + 9 * map.n_tets;

    auto edge_node = [&](int e, int slot) { return nv + 2 * e + slot; };
    auto face_node = [&](int f) { return nv + 2 * ne + f; };

    map.node_positions.resize(map.n_scalar);
    map.node_boundary.assign(map.n_scalar, false);
    for (int v = 0; v < nv; ++v) {
        map.node_positions[v] = mesh.vertices[v];
        map.node_boundary[v] = mesh.vertex_boundary[v];
    }
    for (int e = 0; e < ne; ++e) {
        const Vec3 lo = mesh.vertices[mesh.edges[e].v[0]];
        const Vec3 hi = mesh.vertices[mesh.edges[e].v[1]];
        for (int slot = 0; slot < 2; ++slot) {
            map.node_positions[edge_node(e, slot)] = lo + (hi - lo) * ((slot + 1) / 3.0);
            map.node_boundary[edge_node(e, slot)] = mesh.edges[e].boundary;
        }
    }
    for (int f = 0; f < nf; ++f) {
        const auto& fv = mesh.faces[f].v;
        map.node_positions[face_node(f)] =
            (mesh.vertices[fv[0]] + mesh.vertices[fv[1]] + mesh.vertices[fv[2]]) * (1.0 / 3.0);
        map.node_boundary[face_node(f)] = mesh.faces[f].boundary;
    }

    map.tet_nodes.resize(map.n_tets);
    for (int t = 0; t < map.n_tets; ++t) {
        const auto& tv = mesh.tets[t].v;
        auto& nodes = map.tet_nodes[t];
        int n = 0;
        for (int k = 0; k < 4; ++k) nodes[n++] = tv[k];
        for (int le = 0; le < 6; ++le) {
            const auto [a, b] = LagrangeP3::kEdges[le];
            const int e = mesh.tet_edges[t][le];
            const int lo = mesh.edges[e].v[0];
            for (int which = 0; which < 2; ++which) {
                const int near = which == 0 ? tv[a] : tv[b];
                nodes[n++] = edge_node(e, near == lo ? 0 : 1);
            }
        }
        for (int lf = 0; lf < 4; ++lf) nodes[n++] = face_node(mesh.tet_faces[t][lf]);
    }

    for (int node = 0; node < map.n_scalar; ++node)
        if (map.node_boundary[node])
            for (int c = 0; c < 3; ++c) map.boundary.push_back(map.velocity_dof(node, c));
    return map;
}

/// Discontinuous P2 pressure numbering: 10 modal dofs per tet,
/// dof = 10*t + a in the modal order of ModalP2. The zero-mean convention
/// is enforced by projection with the stored mean weights, not by
/// eliminating a dof.
struct PressureDofMap {
    int n_tets = 0;
    int total = 0;
    std::vector<double> mean_weights;  // w[dof] = integral of that basis function
    double domain_volume = 0.0;

    int dof(int tet, int a) const { return ModalP2::kDim * tet + a; }

    /// Mean value of the represented pressure over the domain.
    double mean(const std::vector<double>& p) const {
        double s = 0.0;
        for (int i = 0; i < total; ++i) s += mean_weights[i] * p[i];
        return s / domain_volume;
    }

    /// Subtract the mean: afterwards mean(p) == 0 (the constant function
    /// is the first modal basis function on every tet).
    void project_zero_mean(std::vector<double>& p) const {
        const double m = mean(p);
        for (int t = 0; t < n_tets; ++t) p[dof(t, 0)] -= m;
    }
};

inline PressureDofMap build_pressure_dofs(const TetMesh& mesh) {
    PressureDofMap map;
    map.n_tets = static_cast<int>(mesh.tets.size());
    map.total = ModalP2::kDim * map.n_tets;
    map.mean_weights.assign(map.total, 0.0);
    const auto& integrals = ModalP2::instance().reference_integrals();
    for (int t = 0; t < map.n_tets; ++t) {
        const double jac = 6.0 * mesh.tet_volume(t);  // |det J| for positive tets
        for (int a = 0; a < ModalP2::kDim; ++a)
            map.mean_weights[map.dof(t, a)] = jac * to_double(integrals[a]);
        map.domain_volume += map.mean_weights[map.dof(t, 0)];
    }
    return map;
}

}  // namespace p3nc
