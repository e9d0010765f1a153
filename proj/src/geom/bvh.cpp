#include "xr2mesh/geom/bvh.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace xrm::geom {

namespace {

constexpr int kLeafSize = 4;
constexpr double kInf = std::numeric_limits<double>::infinity();

inline void grow(Vec3& lo, Vec3& hi, const Vec3& p) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
}

// Slab test; returns true when [t0, t1] overlaps the box.
inline bool ray_box(const Vec3& o, const Vec3& inv_d, const Vec3& lo, const Vec3& hi, double t0,
                    double t1) {
    for (int k = 0; k < 3; ++k) {
        double ta = (lo[k] - o[k]) * inv_d[k];
        double tb = (hi[k] - o[k]) * inv_d[k];
        if (inv_d[k] < 0.0) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

inline double box_dist2(const Vec3& p, const Vec3& lo, const Vec3& hi) {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double d = std::max({lo[k] - p[k], 0.0, p[k] - hi[k]});
        d2 += d * d;
    }
    return d2;
}

}  // namespace

TriangleBvh::TriangleBvh(const TriMesh& mesh) {
    const int n = static_cast<int>(mesh.faces.size());
    tris_.reserve(n);
    std::vector<Vec3> centroids(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) {
        const Face& f = mesh.faces[i];
        tris_.push_back({mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]], i});
        centroids[i] = (tris_[i].a + tris_[i].b + tris_[i].c) / 3.0;
        order[i] = i;
    }
    if (n == 0) return;
    nodes_.reserve(2 * n);
    build(order, 0, n, centroids);

    // Reorder triangle storage to match leaf ranges.
    std::vector<Tri> sorted(n);
    for (int i = 0; i < n; ++i) sorted[i] = tris_[order[i]];
    tris_ = std::move(sorted);
}

int TriangleBvh::build(std::vector<int>& order, int first, int count,
                       std::vector<Vec3>& centroids) {
    Node node;
    node.lo = Vec3::Constant(kInf);
    node.hi = Vec3::Constant(-kInf);
    for (int i = first; i < first + count; ++i) {
        const Tri& t = tris_[order[i]];
        grow(node.lo, node.hi, t.a);
        grow(node.lo, node.hi, t.b);
        grow(node.lo, node.hi, t.c);
    }

    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back(node);

    if (count <= kLeafSize) {
        nodes_[index].first = first;
        nodes_[index].count = count;
        return index;
    }

    Vec3 clo = Vec3::Constant(kInf), chi = Vec3::Constant(-kInf);
    for (int i = first; i < first + count; ++i) grow(clo, chi, centroids[order[i]]);
    int axis = 0;
    (chi - clo).maxCoeff(&axis);

    const int mid = first + count / 2;
    std::nth_element(order.begin() + first, order.begin() + mid, order.begin() + first + count,
                     [&](int a, int b) { return centroids[a][axis] < centroids[b][axis]; });

    const int left = build(order, first, count / 2, centroids);
    const int right = build(order, mid, count - count / 2, centroids);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
}

void TriangleBvh::ray_hits(const Vec3& origin, const Vec3& dir, std::vector<RayHit>& out,
                           double t_min) const {
    out.clear();
    if (nodes_.empty()) return;

    const Vec3 inv_d(1.0 / dir.x(), 1.0 / dir.y(), 1.0 / dir.z());
    int stack[64];
    int top = 0;
    stack[top++] = 0;

    constexpr double kBaryTol = 1e-12;

    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!ray_box(origin, inv_d, node.lo, node.hi, t_min, kInf)) continue;
        if (node.left < 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const Tri& tri = tris_[i];
                // Moller-Trumbore
                const Vec3 e1 = tri.b - tri.a;
                const Vec3 e2 = tri.c - tri.a;
                const Vec3 pvec = dir.cross(e2);
                const double det = e1.dot(pvec);
                if (std::abs(det) < 1e-14) continue;
                const double inv_det = 1.0 / det;
                const Vec3 tvec = origin - tri.a;
                const double u = tvec.dot(pvec) * inv_det;
                if (u < -kBaryTol || u > 1.0 + kBaryTol) continue;
                const Vec3 qvec = tvec.cross(e1);
                const double v = dir.dot(qvec) * inv_det;
                if (v < -kBaryTol || u + v > 1.0 + kBaryTol) continue;
                const double t = e2.dot(qvec) * inv_det;
                if (t <= t_min) continue;
                const double w = 1.0 - u - v;
                const bool suspect = u < kBaryTol || v < kBaryTol || w < kBaryTol ||
                                     std::abs(t - t_min) < kBaryTol;
                if (u < 0.0 || v < 0.0 || w < 0.0) {
                    // Outside but within tolerance: report as suspect only so the
                    // caller can retry; do not count it as a crossing.
                    out.push_back({t, tri.face, true});
                } else {
                    out.push_back({t, tri.face, suspect});
                }
            }
        } else {
            stack[top++] = node.left;
            stack[top++] = node.right;
        }
    }
}

bool TriangleBvh::segment_hits_any(const Vec3& p0, const Vec3& p1) const {
    std::vector<RayHit> hits;
    ray_hits(p0, p1 - p0, hits, 0.0);
    for (const RayHit& h : hits) {
        if (h.t <= 1.0) return true;
    }
    return false;
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
    }

    const double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

TriangleBvh::ClosestPoint TriangleBvh::closest_point(const Vec3& query) const {
    ClosestPoint best{kInf, -1, Vec3::Zero()};
    if (nodes_.empty()) return best;

    // Best-first traversal ordered by node box distance.
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    heap.push({box_dist2(query, nodes_[0].lo, nodes_[0].hi), 0});

    while (!heap.empty()) {
        const auto [d2, idx] = heap.top();
        heap.pop();
        if (d2 >= best.dist2) break;
        const Node& node = nodes_[idx];
        if (node.left < 0) {
            for (int i = node.first; i < node.first + node.count; ++i) {
                const Tri& tri = tris_[i];
                const Vec3 q = closest_point_on_triangle(query, tri.a, tri.b, tri.c);
                const double dd = (q - query).squaredNorm();
                if (dd < best.dist2) best = {dd, tri.face, q};
            }
        } else {
            heap.push({box_dist2(query, nodes_[node.left].lo, nodes_[node.left].hi), node.left});
            heap.push({box_dist2(query, nodes_[node.right].lo, nodes_[node.right].hi), node.right});
        }
    }
    return best;
}

}  // namespace xrm::geom
