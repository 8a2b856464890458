#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geometry.hpp"

namespace p3nc {

struct Tetrahedron {
    std::array<int, 4> v;
};

struct Face {
    std::array<int, 3> v;           // canonically sorted vertex ids
    std::array<int, 2> tets{-1, -1};
    int n_adjacent = 0;
    bool boundary = false;
};

struct Edge {
    std::array<int, 2> v;  // sorted
    bool boundary = false;
};

/// Tetrahedral mesh. Vertices and tets are primary data; faces, edges,
/// adjacency and boundary flags are filled by derive_connectivity().
/// Immutable once built, safe to read concurrently.
struct TetMesh {
    std::vector<Vec3> vertices;
    std::vector<Tetrahedron> tets;

    std::vector<Face> faces;
    std::vector<Edge> edges;
    std::vector<std::array<int, 4>> tet_faces;  // face id opposite local vertex k
    std::vector<std::array<int, 6>> tet_edges;  // local edge order (0,1),(0,2),(0,3),(1,2),(1,3),(2,3)
    std::vector<bool> vertex_boundary;
    bool has_connectivity = false;

    std::array<Vec3, 4> tet_vertices(int t) const {
        const auto& tv = tets[t].v;
        return {vertices[tv[0]], vertices[tv[1]], vertices[tv[2]], vertices[tv[3]]};
    }

    double tet_volume(int t) const {
        const auto p = tet_vertices(t);
        return signed_volume(p[0], p[1], p[2], p[3]);
    }

    double volume() const {
        double v = 0.0;
        for (std::size_t t = 0; t < tets.size(); ++t) v += tet_volume(static_cast<int>(t));
        return v;
    }

    int n_interior_faces() const {
        int n = 0;
        for (const auto& f : faces) n += f.boundary ? 0 : 1;
        return n;
    }
    int n_boundary_faces() const { return static_cast<int>(faces.size()) - n_interior_faces(); }
};

namespace detail {

inline std::array<int, 3> sorted_face(int a, int b, int c) {
    std::array<int, 3> f = {a, b, c};
    std::sort(f.begin(), f.end());
    return f;
}

// Local edge pairs matching the cubic Lagrange layout.
inline constexpr std::array<std::array<int, 2>, 6> kLocalEdges = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// The three local vertices of the face opposite local vertex k.
inline constexpr std::array<std::array<int, 3>, 4> kLocalFaces = {
    {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}}};

}  // namespace detail

/// Populate faces, edges, adjacency and boundary flags. Throws on
/// non-manifold input (a face shared by more than two tets).
inline void derive_connectivity(TetMesh& mesh) {
    const int nt = static_cast<int>(mesh.tets.size());
    for (const auto& t : mesh.tets)
        for (int vid : t.v)
            if (vid < 0 || vid >= static_cast<int>(mesh.vertices.size()))
                throw std::out_of_range("derive_connectivity: tet references invalid vertex");

    mesh.faces.clear();
    mesh.edges.clear();
    mesh.tet_faces.assign(nt, {-1, -1, -1, -1});
    mesh.tet_edges.assign(nt, {-1, -1, -1, -1, -1, -1});

    std::map<std::array<int, 3>, int> face_ids;
    for (int t = 0; t < nt; ++t) {
        const auto& tv = mesh.tets[t].v;
        for (int k = 0; k < 4; ++k) {
            const auto& lf = detail::kLocalFaces[k];
            const auto key = detail::sorted_face(tv[lf[0]], tv[lf[1]], tv[lf[2]]);
            auto [it, inserted] = face_ids.emplace(key, static_cast<int>(mesh.faces.size()));
            if (inserted) mesh.faces.push_back(Face{key, {t, -1}, 1, false});
            else {
                Face& f = mesh.faces[it->second];
                if (f.n_adjacent >= 2)
                    throw std::runtime_error("derive_connectivity: non-manifold face (" +
                                             std::to_string(key[0]) + "," + std::to_string(key[1]) +
                                             "," + std::to_string(key[2]) + ")");
                f.tets[1] = t;
                ++f.n_adjacent;
            }
            mesh.tet_faces[t][k] = it->second;
        }
    }
    for (Face& f : mesh.faces) f.boundary = (f.n_adjacent == 1);

    std::map<std::array<int, 2>, int> edge_ids;
    for (int t = 0; t < nt; ++t) {
        const auto& tv = mesh.tets[t].v;
        for (int k = 0; k < 6; ++k) {
            std::array<int, 2> key = {tv[detail::kLocalEdges[k][0]], tv[detail::kLocalEdges[k][1]]};
            if (key[0] > key[1]) std::swap(key[0], key[1]);
            if (key[0] == key[1])
                throw std::runtime_error("derive_connectivity: degenerate edge in tet " +
                                         std::to_string(t));
            auto [it, inserted] = edge_ids.emplace(key, static_cast<int>(mesh.edges.size()));
            if (inserted) mesh.edges.push_back(Edge{key, false});
            mesh.tet_edges[t][k] = it->second;
        }
    }

    // Boundary flags propagate from boundary faces to their edges/vertices.
    mesh.vertex_boundary.assign(mesh.vertices.size(), false);
    for (const Face& f : mesh.faces) {
        if (!f.boundary) continue;
        for (int vid : f.v) mesh.vertex_boundary[vid] = true;
        for (int a = 0; a < 3; ++a)
            for (int b = a + 1; b < 3; ++b) {
                std::array<int, 2> key = {f.v[a], f.v[b]};
                auto it = edge_ids.find(key);
                if (it != edge_ids.end()) mesh.edges[it->second].boundary = true;
            }
    }
    mesh.has_connectivity = true;
}

/// Diagnostic invariant scan; returns one message per violation. Works
/// from the raw vertex/tet data so it can be used on meshes that fail
/// derive_connectivity.
inline std::vector<std::string> validate(const TetMesh& mesh) {
    std::vector<std::string> bad;
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        const Vec3& p = mesh.vertices[v];
        if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
            bad.push_back("vertex " + std::to_string(v) + ": non-finite coordinates");
    }
    for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
        if (mesh.tet_volume(static_cast<int>(t)) <= 0.0)
            bad.push_back("tet " + std::to_string(t) + ": non-positive signed volume");
    }

    // Independent face census.
    std::map<std::array<int, 3>, std::vector<int>> adjacency;
    for (std::size_t t = 0; t < mesh.tets.size(); ++t) {
        const auto& tv = mesh.tets[t].v;
        for (const auto& lf : detail::kLocalFaces)
            adjacency[detail::sorted_face(tv[lf[0]], tv[lf[1]], tv[lf[2]])].push_back(
                static_cast<int>(t));
    }
    for (const auto& [key, tets] : adjacency) {
        if (tets.size() > 2)
            bad.push_back("face (" + std::to_string(key[0]) + "," + std::to_string(key[1]) + "," +
                          std::to_string(key[2]) + "): non-manifold, " +
                          std::to_string(tets.size()) + " adjacent tets");
    }

    if (mesh.has_connectivity) {
        if (mesh.faces.size() != adjacency.size())
            bad.push_back("face list: " + std::to_string(mesh.faces.size()) + " stored vs " +
                          std::to_string(adjacency.size()) + " distinct tet faces");
        for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
            const Face& face = mesh.faces[f];
            auto it = adjacency.find(face.v);
            const int count = it == adjacency.end() ? 0 : static_cast<int>(it->second.size());
            if (count != face.n_adjacent || face.boundary != (count == 1))
                bad.push_back("face " + std::to_string(f) + ": stored adjacency inconsistent");
            // Interior faces: the two outward normals must be antiparallel.
            if (face.n_adjacent == 2 && count == 2) {
                Vec3 normals[2];
                for (int side = 0; side < 2; ++side) {
                    const int t = face.tets[side];
                    const auto& tv = mesh.tets[t].v;
                    int opposite = -1;
                    for (int vid : tv)
                        if (vid != face.v[0] && vid != face.v[1] && vid != face.v[2]) opposite = vid;
                    Vec3 n = cross(mesh.vertices[face.v[1]] - mesh.vertices[face.v[0]],
                                   mesh.vertices[face.v[2]] - mesh.vertices[face.v[0]]);
                    if (dot(n, mesh.vertices[opposite] - mesh.vertices[face.v[0]]) > 0.0)
                        n = -1.0 * n;
                    normals[side] = n;
                }
                if (dot(normals[0], normals[1]) >= 0.0)
                    bad.push_back("face " + std::to_string(f) +
                                  ": adjacent tets lie on the same side");
            }
        }
        for (std::size_t e = 0; e < mesh.edges.size(); ++e)
            if (mesh.edges[e].v[0] == mesh.edges[e].v[1])
                bad.push_back("edge " + std::to_string(e) + ": identical endpoints");
    }
    return bad;
}

/// Structured mesh of the unit cube: n^3 cells, each split into 12 tets
/// by coning the two triangles of every cell face to the cell center.
/// The splitting diagonal of a face is the one through its
/// lexicographically smallest corner, so neighboring cells agree.
inline TetMesh build_cube_mesh(int n) {
    if (n < 1) throw std::invalid_argument("build_cube_mesh: need n >= 1");
    TetMesh mesh;
    const int m = n + 1;
    auto grid_id = [m](int i, int j, int k) { return (i * m + j) * m + k; };
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                mesh.vertices.push_back(
                    {static_cast<double>(i) / n, static_cast<double>(j) / n,
                     static_cast<double>(k) / n});
    const int center_base = m * m * m;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                mesh.vertices.push_back(
                    {(i + 0.5) / n, (j + 0.5) / n, (k + 0.5) / n});

    auto lex_less = [&](int a, int b) {
        const Vec3& p = mesh.vertices[a];
        const Vec3& q = mesh.vertices[b];
        if (p.x != q.x) return p.x < q.x;
        if (p.y != q.y) return p.y < q.y;
        return p.z < q.z;
    };

    // Cell faces as corner quadruples in cyclic order, in cell-local
    // (di,dj,dk) offsets.
    static constexpr int kQuad[6][4][3] = {
        {{0, 0, 0}, {0, 1, 0}, {0, 1, 1}, {0, 0, 1}},  // i = lo
        {{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}},  // i = hi
        {{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}},  // j = lo
        {{0, 1, 0}, {1, 1, 0}, {1, 1, 1}, {0, 1, 1}},  // j = hi
        {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}},  // k = lo
        {{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}},  // k = hi
    };

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const int center = center_base + (i * n + j) * n + k;
                for (const auto& quad : kQuad) {
                    std::array<int, 4> c;
                    for (int q = 0; q < 4; ++q)
                        c[q] = grid_id(i + quad[q][0], j + quad[q][1], k + quad[q][2]);
                    int smallest = 0;
                    for (int q = 1; q < 4; ++q)
                        if (lex_less(c[q], c[smallest])) smallest = q;
                    // Diagonal through the smallest corner: rotate so it is c[0].
                    if (smallest % 2 == 1) std::rotate(c.begin(), c.begin() + 1, c.end());
                    const std::array<std::array<int, 3>, 2> tris = {
                        {{c[0], c[1], c[2]}, {c[0], c[2], c[3]}}};
                    for (const auto& tri : tris) {
                        Tetrahedron tet{{tri[0], tri[1], tri[2], center}};
                        if (signed_volume(mesh.vertices[tet.v[0]], mesh.vertices[tet.v[1]],
                                          mesh.vertices[tet.v[2]],
                                          mesh.vertices[tet.v[3]]) < 0.0)
                            std::swap(tet.v[1], tet.v[2]);
                        mesh.tets.push_back(tet);
                    }
                }
            }
    derive_connectivity(mesh);
    return mesh;
}

/// Plain-text mesh format: vertex count, one "x y z" line per vertex,
/// tet count, one "a b c d" line per tet.
inline void save_mesh(const TetMesh& mesh, std::ostream& out) {
    out.precision(17);
    out << mesh.vertices.size() << "\n";
    for (const Vec3& p : mesh.vertices) out << p.x << " " << p.y << " " << p.z << "\n";
    out << mesh.tets.size() << "\n";
    for (const auto& t : mesh.tets)
        out << t.v[0] << " " << t.v[1] << " " << t.v[2] << " " << t.v[3] << "\n";
}

inline TetMesh load_mesh(std::istream& in) {
    TetMesh mesh;
    std::size_t nv = 0, nt = 0;
    if (!(in >> nv)) throw std::runtime_error("load_mesh: missing vertex count");
    mesh.vertices.resize(nv);
    for (auto& p : mesh.vertices)
        if (!(in >> p.x >> p.y >> p.z)) throw std::runtime_error("load_mesh: bad vertex line");
    if (!(in >> nt)) throw std::runtime_error("load_mesh: missing tet count");
    mesh.tets.resize(nt);
    for (auto& t : mesh.tets)
        if (!(in >> t.v[0] >> t.v[1] >> t.v[2] >> t.v[3]))
            throw std::runtime_error("load_mesh: bad tet line");
    derive_connectivity(mesh);
    return mesh;
}

}  // namespace p3nc
