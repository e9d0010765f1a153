#include "xr2mesh/geom/mesh.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>

namespace xrm::geom {

void TriMesh::validate() const {
    const auto n = static_cast<std::int32_t>(vertices.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        for (int k = 0; k < 3; ++k) {
            if (t[k] < 0 || t[k] >= n) {
                throw InputError("face " + std::to_string(f) + " references vertex " +
                                 std::to_string(t[k]) + " outside [0, " + std::to_string(n) + ")");
            }
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw InputError("face " + std::to_string(f) + " has repeated vertex indices");
        }
    }
}

Vec3 TriMesh::bbox_min() const {
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::max());
    for (const Vec3& v : vertices) lo = lo.cwiseMin(v);
    return lo;
}

Vec3 TriMesh::bbox_max() const {
    Vec3 hi = Vec3::Constant(std::numeric_limits<double>::lowest());
    for (const Vec3& v : vertices) hi = hi.cwiseMax(v);
    return hi;
}

std::vector<Vec3> face_normals(const TriMesh& mesh) {
    std::vector<Vec3> normals;
    normals.reserve(mesh.faces.size());
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& t = mesh.faces[f];
        const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
        const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
        Vec3 n = e1.cross(e2);
        const double len = n.norm();
        if (len <= 0.0) {
            throw DegenerateGeometryError("zero-area face at index " + std::to_string(f));
        }
        normals.push_back(n / len);
    }
    return normals;
}

double face_area(const TriMesh& mesh, std::size_t f) {
    const Face& t = mesh.faces[f];
    const Vec3 e1 = mesh.vertices[t[1]] - mesh.vertices[t[0]];
    const Vec3 e2 = mesh.vertices[t[2]] - mesh.vertices[t[0]];
    return 0.5 * e1.cross(e2).norm();
}

double total_surface_area(const TriMesh& mesh) {
    double a = 0.0;
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) a += face_area(mesh, f);
    return a;
}

namespace {

// Map undirected edge -> (count seen as (lo,hi) ordered, count seen reversed).
struct EdgeUse {
    int forward = 0;
    int backward = 0;
};

std::map<std::pair<std::int32_t, std::int32_t>, EdgeUse> edge_uses(const TriMesh& mesh) {
    std::map<std::pair<std::int32_t, std::int32_t>, EdgeUse> uses;
    for (const Face& t : mesh.faces) {
        for (int k = 0; k < 3; ++k) {
            const std::int32_t a = t[k];
            const std::int32_t b = t[(k + 1) % 3];
            if (a < b) {
                uses[{a, b}].forward++;
            } else {
                uses[{b, a}].backward++;
            }
        }
    }
    return uses;
}

}  // namespace

bool is_watertight(const TriMesh& mesh) {
    if (mesh.faces.empty()) return false;
    for (const auto& [edge, use] : edge_uses(mesh)) {
        // Each undirected edge must appear once in each direction: two
        // incident faces with opposite orientation.
        if (use.forward != 1 || use.backward != 1) return false;
    }
    return true;
}

long euler_characteristic(const TriMesh& mesh) {
    const auto uses = edge_uses(mesh);
    return static_cast<long>(mesh.vertices.size()) - static_cast<long>(uses.size()) +
           static_cast<long>(mesh.faces.size());
}

void append_mesh(TriMesh& a, const TriMesh& b) {
    const auto offset = static_cast<std::int32_t>(a.vertices.size());
    a.vertices.insert(a.vertices.end(), b.vertices.begin(), b.vertices.end());
    a.faces.reserve(a.faces.size() + b.faces.size());
    for (const Face& t : b.faces) {
        a.faces.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
    }
}

std::pair<std::vector<int>, int> vertex_components(const TriMesh& mesh) {
    const int n = static_cast<int>(mesh.vertices.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int> rank(n, 0);

    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank[a] < rank[b]) std::swap(a, b);
        parent[b] = a;
        if (rank[a] == rank[b]) rank[a]++;
    };

    for (const Face& t : mesh.faces) {
        unite(t[0], t[1]);
        unite(t[1], t[2]);
    }

    std::vector<int> comp(n, -1);
    int count = 0;
    for (int v = 0; v < n; ++v) {
        const int root = find(v);
        if (comp[root] < 0) comp[root] = count++;
        comp[v] = comp[root];
    }
    return {comp, count};
}

}  // namespace xrm::geom
