#pragma once

#include "xr2mesh/geom/mesh.hpp"

namespace xrm::geom {

// Isotropic scale + translation mapping original coordinates into the
// centered unit box.
struct UnitBoxTransform {
    double scale = 1.0;
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& p) const { return scale * p + translation; }
    Vec3 invert(const Vec3& p) const { return (p - translation) / scale; }
};

// Center the mesh at the origin and scale so the longest bounding-box edge
// equals 1 - 2*pad. Aspect ratio is preserved. Throws
// DegenerateGeometryError when the mesh has zero extent.
std::pair<TriMesh, UnitBoxTransform> normalize_to_unit_box(const TriMesh& mesh,
                                                           double pad = 0.05);

}  // namespace xrm::geom
