#include "xr2mesh/geom/normalize.hpp"

namespace xrm::geom {

std::pair<TriMesh, UnitBoxTransform> normalize_to_unit_box(const TriMesh& mesh, double pad) {
    if (mesh.vertices.empty()) throw InputError("normalize_to_unit_box: empty mesh");
    if (!(pad >= 0.0 && pad < 0.5)) throw ConfigError("normalize_to_unit_box: pad must be in [0, 0.5)");

    const Vec3 lo = mesh.bbox_min();
    const Vec3 hi = mesh.bbox_max();
    const Vec3 extent = hi - lo;
    const double longest = extent.maxCoeff();
    if (longest <= 0.0) {
        throw DegenerateGeometryError("normalize_to_unit_box: mesh has zero extent");
    }

    UnitBoxTransform t;
    t.scale = (1.0 - 2.0 * pad) / longest;
    const Vec3 center = 0.5 * (lo + hi);
    t.translation = -t.scale * center;

    TriMesh out = mesh;
    for (Vec3& v : out.vertices) v = t.apply(v);
    return {out, t};
}

}  // namespace xrm::geom
