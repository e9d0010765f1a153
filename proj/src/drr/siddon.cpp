#include <algorithm>
#include <array>
#include <cmath>

#include "xr2mesh/drr/drr.hpp"

namespace xrm::drr {

namespace {

struct CrossingRange {
    double alpha0 = 0.0;  // entry parameter
    double alpha1 = 1.0;  // exit parameter
    bool hit = true;
};

// Parameter window over which the segment lies inside the volume box.
CrossingRange clip_to_volume(const geom::Volume3D& vol, const Vec3& p0, const Vec3& d) {
    CrossingRange r;
    const Vec3 lo = vol.origin;
    const Vec3 hi = vol.origin + vol.physical_extent();
    for (int k = 0; k < 3; ++k) {
        if (d[k] != 0.0) {
            double a = (lo[k] - p0[k]) / d[k];
            double b = (hi[k] - p0[k]) / d[k];
            if (a > b) std::swap(a, b);
            r.alpha0 = std::max(r.alpha0, a);
            r.alpha1 = std::min(r.alpha1, b);
        } else if (p0[k] < lo[k] || p0[k] > hi[k]) {
            r.hit = false;
            return r;
        }
    }
    r.hit = r.alpha0 < r.alpha1;
    return r;
}

}  // namespace

double siddon_path_integral(const geom::Volume3D& volume, const Vec3& p0, const Vec3& p1) {
    const Vec3 d = p1 - p0;
    const double seg_len = d.norm();
    if (seg_len <= 0.0) throw InputError("siddon_path_integral: p0 == p1");

    const CrossingRange range = clip_to_volume(volume, p0, d);
    if (!range.hit) return 0.0;

    // All plane-crossing parameters within the window, per axis, then a
    // three-way merge while walking voxel by voxel.
    std::array<std::vector<double>, 3> crossings;
    for (int k = 0; k < 3; ++k) {
        if (d[k] == 0.0) continue;
        const double inv = 1.0 / d[k];
        const double a_at_0 = (volume.origin[k] - p0[k]) * inv;
        const double step = volume.spacing[k] * inv;  // alpha per plane index
        // plane index i has alpha = a_at_0 + i * step; find i range inside window
        double i_lo = (range.alpha0 - a_at_0) / step;
        double i_hi = (range.alpha1 - a_at_0) / step;
        if (i_lo > i_hi) std::swap(i_lo, i_hi);
        const int first = static_cast<int>(std::ceil(i_lo - 1e-12));
        const int last = static_cast<int>(std::floor(i_hi + 1e-12));
        auto& v = crossings[k];
        v.reserve(std::max(0, last - first + 1));
        for (int i = first; i <= last; ++i) {
            const double a = a_at_0 + i * step;
            if (a > range.alpha0 && a < range.alpha1) v.push_back(a);
        }
        if (step < 0.0) std::reverse(v.begin(), v.end());
    }

    std::vector<double> alphas;
    alphas.reserve(crossings[0].size() + crossings[1].size() + crossings[2].size() + 2);
    alphas.push_back(range.alpha0);
    for (int k = 0; k < 3; ++k) {
        alphas.insert(alphas.end(), crossings[k].begin(), crossings[k].end());
    }
    alphas.push_back(range.alpha1);
    std::sort(alphas.begin(), alphas.end());

    double integral = 0.0;
    for (std::size_t s = 0; s + 1 < alphas.size(); ++s) {
        const double da = alphas[s + 1] - alphas[s];
        if (da <= 1e-14) continue;
        const double mid = 0.5 * (alphas[s] + alphas[s + 1]);
        const Vec3 p = p0 + mid * d;
        int idx[3];
        bool in = true;
        for (int k = 0; k < 3; ++k) {
            idx[k] = static_cast<int>(std::floor((p[k] - volume.origin[k]) / volume.spacing[k]));
            if (idx[k] < 0 || idx[k] >= volume.dims[k]) in = false;
        }
        if (!in) continue;
        integral += volume.at(idx[0], idx[1], idx[2]) * da * seg_len;
    }
    return integral;
}

}  // namespace xrm::drr
