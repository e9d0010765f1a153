#include <algorithm>
#include <cmath>

#include "xr2mesh/drr/drr.hpp"

namespace xrm::drr {

void ProjectionCamera::validate() const {
    if (width <= 0 || height <= 0) throw ConfigError("camera: image size must be positive");
    if (pixel_pitch <= 0.0) throw ConfigError("camera: pixel pitch must be positive");
    if (std::abs(detector_u.norm() - 1.0) > 1e-9 || std::abs(detector_v.norm() - 1.0) > 1e-9) {
        throw ConfigError("camera: detector axes must be unit length");
    }
    if (std::abs(detector_u.dot(detector_v)) > 1e-9) {
        throw ConfigError("camera: detector axes must be orthogonal");
    }
    const Vec3 n = detector_u.cross(detector_v);
    if (std::abs((source - detector_center).dot(n)) < 1e-9) {
        throw ConfigError("camera: source lies on the detector plane");
    }
}

DrrImage render_drr(const geom::Volume3D& volume, const ProjectionCamera& camera) {
    camera.validate();
    volume.validate();

    DrrImage img;
    img.width = camera.width;
    img.height = camera.height;
    img.values.assign(static_cast<std::size_t>(camera.width) * camera.height, 0.0);

    // Each pixel is independent and written exactly once, so this loop can
    // be partitioned across threads without changing the result.
    for (int j = 0; j < camera.height; ++j) {
        for (int i = 0; i < camera.width; ++i) {
            img.at(i, j) = siddon_path_integral(volume, camera.source, camera.pixel_center(i, j));
        }
    }
    return img;
}

DrrImage normalize_display(const DrrImage& image) {
    DrrImage out = image;
    if (image.values.empty()) return out;
    const auto [lo_it, hi_it] = std::minmax_element(image.values.begin(), image.values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (hi > lo) {
        for (double& v : out.values) v = (v - lo) / (hi - lo);
    } else {
        for (double& v : out.values) v = 0.0;
    }
    return out;
}

ProjectionCamera camera_for_view(double angle_deg, double source_distance_mm,
                                 double detector_distance_mm, int width, int height,
                                 double pixel_pitch_mm, const Vec3& center) {
    if (source_distance_mm <= 0.0 || detector_distance_mm <= 0.0) {
        throw ConfigError("camera_for_view: distances must be positive");
    }
    const double a = angle_deg * M_PI / 180.0;
    // angle 0: source at -y (anterior-posterior); angle 90: source at +x
    const Vec3 toward_source(std::sin(a), -std::cos(a), 0.0);

    ProjectionCamera cam;
    cam.source = center + source_distance_mm * toward_source;
    cam.detector_center = center - detector_distance_mm * toward_source;
    const Vec3 beam = -toward_source;  // source -> center
    cam.detector_v = Vec3::UnitZ();
    cam.detector_u = beam.cross(cam.detector_v).normalized();
    cam.pixel_pitch = pixel_pitch_mm;
    cam.width = width;
    cam.height = height;
    cam.validate();
    return cam;
}

}  // namespace xrm::drr
