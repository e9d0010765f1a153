#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "xr2mesh/common.hpp"

namespace xrm::geom {

using Face = std::array<std::int32_t, 3>;

// Indexed triangle mesh. Coordinates are millimeters for clinical-frame
// meshes and dimensionless after unit-box normalization.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;

    std::size_t vertex_count() const { return vertices.size(); }
    std::size_t face_count() const { return faces.size(); }
    bool empty() const { return faces.empty(); }

    // Throws InputError on out-of-range indices or degenerate index triples.
    void validate() const;

    Vec3 bbox_min() const;
    Vec3 bbox_max() const;
};

// Unit-length face normals following the face winding (right-hand rule).
// Throws DegenerateGeometryError naming the face index on zero-area faces.
std::vector<Vec3> face_normals(const TriMesh& mesh);

double face_area(const TriMesh& mesh, std::size_t f);
double total_surface_area(const TriMesh& mesh);

// True iff every undirected edge is shared by exactly two faces with
// opposite directed orientation. Multiple closed components qualify.
bool is_watertight(const TriMesh& mesh);

// Euler characteristic V - E + F over the whole mesh.
long euler_characteristic(const TriMesh& mesh);

// Concatenate b onto a, reindexing b's faces.
void append_mesh(TriMesh& a, const TriMesh& b);

// Connected components over the face-adjacency (shared vertex) graph;
// returns per-vertex component id and the component count.
std::pair<std::vector<int>, int> vertex_components(const TriMesh& mesh);

}  // namespace xrm::geom
