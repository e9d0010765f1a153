#pragma once

// Shared procedural test meshes and scratch-directory helpers.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <string>

#include "xr2mesh/geom/mesh.hpp"

namespace fixtures {

using xrm::Vec3;
using xrm::geom::Face;
using xrm::geom::TriMesh;

// Axis-aligned box [lo, hi] as 12 outward-wound triangles.
inline TriMesh make_box(const Vec3& lo, const Vec3& hi) {
    TriMesh m;
    m.vertices = {
        {lo.x(), lo.y(), lo.z()}, {hi.x(), lo.y(), lo.z()}, {hi.x(), hi.y(), lo.z()},
        {lo.x(), hi.y(), lo.z()}, {lo.x(), lo.y(), hi.z()}, {hi.x(), lo.y(), hi.z()},
        {hi.x(), hi.y(), hi.z()}, {lo.x(), hi.y(), hi.z()},
    };
    m.faces = {{0, 2, 1}, {0, 3, 2}, {4, 5, 6}, {4, 6, 7}, {0, 1, 5}, {0, 5, 4},
               {2, 3, 7}, {2, 7, 6}, {0, 4, 7}, {0, 7, 3}, {1, 2, 6}, {1, 6, 5}};
    return m;
}

inline TriMesh make_cube(double edge = 1.0, const Vec3& center = Vec3::Zero()) {
    const Vec3 h = Vec3::Constant(edge / 2.0);
    return make_box(center - h, center + h);
}

// Icosphere: icosahedron subdivided `depth` times, projected to the sphere.
// Face count is 20 * 4^depth (depth 3 -> 1280).
inline TriMesh make_icosphere(double radius, const Vec3& center, int depth) {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh m;
    m.vertices = {{-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
                  {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
                  {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1}};
    m.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (int it = 0; it < depth; ++it) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto found = midpoint.find(key);
            if (found != midpoint.end()) return found->second;
            const int idx = static_cast<int>(m.vertices.size());
            m.vertices.push_back(0.5 * (m.vertices[a] + m.vertices[b]));
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<Face> next;
        next.reserve(m.faces.size() * 4);
        for (const Face& f : m.faces) {
            const int ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        m.faces = std::move(next);
    }
    for (Vec3& v : m.vertices) v = center + radius * v.normalized();
    return m;
}

inline TriMesh make_torus(double ring_radius, double tube_radius, int nu, int nv,
                          const Vec3& center = Vec3::Zero()) {
    TriMesh m;
    for (int i = 0; i < nu; ++i) {
        const double u = 2.0 * M_PI * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double v = 2.0 * M_PI * j / nv;
            const double r = ring_radius + tube_radius * std::cos(v);
            m.vertices.push_back(center + Vec3(r * std::cos(u), r * std::sin(u),
                                               tube_radius * std::sin(v)));
        }
    }
    auto idx = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const int a = idx(i, j), b = idx(i + 1, j), c = idx(i + 1, j + 1), d = idx(i, j + 1);
            m.faces.push_back({a, b, c});
            m.faces.push_back({a, c, d});
        }
    }
    return m;
}

// Closed cylinder along `axis_dir` with fan caps.
inline TriMesh make_cylinder(const Vec3& base, const Vec3& axis_dir, double length, double radius,
                             int segments = 24, int slices = 8) {
    const Vec3 w = axis_dir.normalized();
    Vec3 u = std::abs(w.z()) < 0.9 ? w.cross(Vec3::UnitZ()).normalized()
                                   : w.cross(Vec3::UnitX()).normalized();
    const Vec3 v = w.cross(u);

    TriMesh m;
    // rings from base to top
    for (int s = 0; s <= slices; ++s) {
        const Vec3 c = base + w * (length * s / slices);
        for (int k = 0; k < segments; ++k) {
            const double a = 2.0 * M_PI * k / segments;
            m.vertices.push_back(c + radius * (std::cos(a) * u + std::sin(a) * v));
        }
    }
    const int bottom_center = static_cast<int>(m.vertices.size());
    m.vertices.push_back(base);
    const int top_center = bottom_center + 1;
    m.vertices.push_back(base + w * length);

    auto ring = [&](int s, int k) { return s * segments + (k % segments); };
    for (int s = 0; s < slices; ++s) {
        for (int k = 0; k < segments; ++k) {
            const int a = ring(s, k), b = ring(s, k + 1), c = ring(s + 1, k + 1),
                      d = ring(s + 1, k);
            m.faces.push_back({a, b, c});
            m.faces.push_back({a, c, d});
        }
    }
    for (int k = 0; k < segments; ++k) {
        m.faces.push_back({bottom_center, ring(0, k + 1), ring(0, k)});
        m.faces.push_back({top_center, ring(slices, k), ring(slices, k + 1)});
    }
    return m;
}

// Surface of revolution about z with pole caps: profile_radius(t) > 0 for
// t in (0,1), zero at the poles. Used for the dumbbell kernel fixture.
inline TriMesh make_revolution(const std::function<double(double)>& profile_radius, double z0,
                               double z1, int n_rings, int segments) {
    TriMesh m;
    m.vertices.push_back(Vec3(0, 0, z0));  // south pole
    for (int s = 1; s < n_rings; ++s) {
        const double t = static_cast<double>(s) / n_rings;
        const double z = z0 + (z1 - z0) * t;
        const double r = profile_radius(t);
        for (int k = 0; k < segments; ++k) {
            const double a = 2.0 * M_PI * k / segments;
            m.vertices.push_back(Vec3(r * std::cos(a), r * std::sin(a), z));
        }
    }
    const int north = static_cast<int>(m.vertices.size());
    m.vertices.push_back(Vec3(0, 0, z1));

    auto ring = [&](int s, int k) { return 1 + (s - 1) * segments + (k % segments); };
    for (int k = 0; k < segments; ++k) {
        m.faces.push_back({0, ring(1, k + 1), ring(1, k)});
        m.faces.push_back({north, ring(n_rings - 1, k), ring(n_rings - 1, k + 1)});
    }
    for (int s = 1; s + 1 < n_rings; ++s) {
        for (int k = 0; k < segments; ++k) {
            const int a = ring(s, k), b = ring(s, k + 1), c = ring(s + 1, k + 1),
                      d = ring(s + 1, k);
            m.faces.push_back({a, b, c});
            m.faces.push_back({a, c, d});
        }
    }
    return m;
}

inline TriMesh make_dumbbell(int n_rings = 40, int segments = 24) {
    // Two bulbs joined by a thin neck; strong metric curvature.
    auto profile = [](double t) {
        const double bulbs = std::sin(M_PI * t);
        const double neck = 1.0 - 0.85 * std::exp(-std::pow((t - 0.5) / 0.09, 2.0));
        return 0.3 * bulbs * neck + 1e-4;
    };
    return make_revolution(profile, -0.45, 0.45, n_rings, segments);
}

// Scratch directory removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        dir_ = std::filesystem::temp_directory_path() /
               ("xrm_" + tag + "_" + std::to_string(std::rand()));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    const std::filesystem::path& dir() const { return dir_; }

  private:
    std::filesystem::path dir_;
};

}  // namespace fixtures
