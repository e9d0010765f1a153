#pragma once

#include <string>
#include <vector>

#include "xr2mesh/geom/volume.hpp"

namespace xrm::drr {

// Point-source projection geometry. detector_u / detector_v are orthonormal
// in-plane axes; pixels are square with pitch in mm.
struct ProjectionCamera {
    Vec3 source = Vec3::Zero();
    Vec3 detector_center = Vec3::Zero();
    Vec3 detector_u = Vec3::UnitX();
    Vec3 detector_v = Vec3::UnitZ();
    double pixel_pitch = 1.0;
    int width = 0;
    int height = 0;

    // Physical position of the center of pixel (i, j); i indexes columns
    // along detector_u, j rows along detector_v.
    Vec3 pixel_center(int i, int j) const {
        const double du = (i + 0.5 - 0.5 * width) * pixel_pitch;
        const double dv = (j + 0.5 - 0.5 * height) * pixel_pitch;
        return detector_center + du * detector_u + dv * detector_v;
    }

    // Throws ConfigError on non-orthonormal axes, nonpositive pitch/size,
    // or a source lying on the detector plane.
    void validate() const;
};

struct DrrImage {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // row-major, j * width + i

    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; }
};

// Radiological path: sum over traversed voxels of value * intersection
// length (mm) along the segment p0 -> p1, by sorted axis-crossing
// parameters. A segment missing the volume integrates to 0.
double siddon_path_integral(const geom::Volume3D& volume, const Vec3& p0, const Vec3& p1);

// Raw line-integral image: pixel (i,j) integrates source -> pixel center.
DrrImage render_drr(const geom::Volume3D& volume, const ProjectionCamera& camera);

// Min-max rescale to [0, 1]; constant images map to 0.
DrrImage normalize_display(const DrrImage& image);

// Contrast-limited adaptive histogram equalization. 256 internal bins,
// per-tile histogram clipping at clip_limit * mean bin count with uniform
// redistribution, bilinear blending of the four neighboring tile mappings.
// Output values lie in [0, 1].
DrrImage clahe(const DrrImage& image, int tiles_x = 8, int tiles_y = 8, double clip_limit = 2.0);

// Source on a circle of radius source_distance about `center` in the axial
// (z = const) plane; detector opposite at detector_distance. Angle 0 looks
// from -y toward +y (anterior-posterior); angle 90 from +x.
ProjectionCamera camera_for_view(double angle_deg, double source_distance_mm,
                                 double detector_distance_mm, int width, int height,
                                 double pixel_pitch_mm, const Vec3& center = Vec3::Zero());

// 16-bit binary PGM, values rescaled by max (lossless for zero images).
void save_pgm16(const DrrImage& image, const std::string& path);
DrrImage load_pgm16(const std::string& path);

// 8-bit grayscale PNG of a [0,1] display image.
void save_png8(const DrrImage& image, const std::string& path);

}  // namespace xrm::drr
