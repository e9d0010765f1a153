#pragma once

#include <string>
#include <vector>

#include "xr2mesh/common.hpp"

namespace xrm::geom {

// Regular scalar grid of attenuation values. `values` is x-fastest:
// index = ix + nx * (iy + ny * iz). `origin` is the corner of voxel (0,0,0).
struct Volume3D {
    Vec3i dims = Vec3i::Zero();
    Vec3 spacing = Vec3::Ones();
    Vec3 origin = Vec3::Zero();
    std::vector<float> values;

    std::size_t voxel_count() const {
        return static_cast<std::size_t>(dims.x()) * dims.y() * dims.z();
    }
    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(dims.x()) *
                   (static_cast<std::size_t>(iy) + static_cast<std::size_t>(dims.y()) * iz);
    }
    float at(int ix, int iy, int iz) const { return values[index(ix, iy, iz)]; }
    float& at(int ix, int iy, int iz) { return values[index(ix, iy, iz)]; }

    // Physical center of voxel (ix, iy, iz).
    Vec3 voxel_center(int ix, int iy, int iz) const {
        return origin + Vec3((ix + 0.5) * spacing.x(), (iy + 0.5) * spacing.y(),
                             (iz + 0.5) * spacing.z());
    }
    Vec3 physical_extent() const { return spacing.cwiseProduct(dims.cast<double>()); }
    Vec3 center() const { return origin + 0.5 * physical_extent(); }

    // Throws InputError when dims/spacing/values are inconsistent.
    void validate() const;
};

// Raw little-endian float32 blob (x-fastest) plus a JSON sidecar
// `{dims, spacing, origin}` at `<path>.json`.
void save_volume(const Volume3D& volume, const std::string& path);
Volume3D load_volume(const std::string& path);

}  // namespace xrm::geom
