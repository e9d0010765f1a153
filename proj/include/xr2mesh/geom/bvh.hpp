#pragma once

#include <vector>

#include "xr2mesh/geom/mesh.hpp"

namespace xrm::geom {

// Axis-aligned BVH over mesh triangles supporting ray enumeration and
// closest-point queries. Build once, then read-only (thread-safe queries).
class TriangleBvh {
  public:
    explicit TriangleBvh(const TriMesh& mesh);

    struct RayHit {
        double t;
        int face;
        // Hit landed within 1e-12 of a triangle edge/vertex in barycentric
        // coordinates, or nearly parallel: parity from this ray is unreliable.
        bool suspect;
    };

    // All intersections with the ray origin + t*dir for t > t_min,
    // unsorted. dir need not be normalized.
    void ray_hits(const Vec3& origin, const Vec3& dir, std::vector<RayHit>& out,
                  double t_min = 0.0) const;

    // First intersection along the segment p0 -> p1, or miss.
    bool segment_hits_any(const Vec3& p0, const Vec3& p1) const;

    struct ClosestPoint {
        double dist2;
        int face;
        Vec3 point;
    };
    ClosestPoint closest_point(const Vec3& query) const;

    std::size_t triangle_count() const { return tris_.size(); }

  private:
    struct Node {
        Vec3 lo, hi;
        int left = -1;       // internal: child index; leaf: -1
        int right = -1;
        int first = 0, count = 0;  // leaf triangle range in order_
    };
    struct Tri {
        Vec3 a, b, c;
        int face;
    };

    int build(std::vector<int>& order, int first, int count, std::vector<Vec3>& centroids);

    std::vector<Tri> tris_;     // in BVH leaf order
    std::vector<Node> nodes_;
};

// Closest point on a single triangle (Ericson's method).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

}  // namespace xrm::geom
