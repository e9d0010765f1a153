#include <algorithm>
#include <cmath>
#include <limits>

#include "xr2mesh/drr/drr.hpp"

namespace xrm::drr {

namespace {

constexpr int kBins = 256;

}  // namespace

DrrImage clahe(const DrrImage& image, int tiles_x, int tiles_y, double clip_limit) {
    if (tiles_x < 1 || tiles_y < 1) throw ConfigError("clahe: tile grid must be >= 1x1");
    if (tiles_x > image.width || tiles_y > image.height) {
        throw ConfigError("clahe: more tiles than pixels along an axis");
    }
    if (clip_limit <= 0.0) throw ConfigError("clahe: clip limit must be positive");

    const int w = image.width, h = image.height;
    DrrImage out;
    out.width = w;
    out.height = h;
    out.values.assign(image.values.size(), 0.0);

    const auto [lo_it, hi_it] = std::minmax_element(image.values.begin(), image.values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) {
        // Degenerate histogram: every pixel in one bin maps to the top of
        // its (flat) CDF.
        for (double& v : out.values) v = 1.0;
        return out;
    }

    auto bin_of = [&](double v) {
        int b = static_cast<int>((v - lo) / (hi - lo) * kBins);
        return std::clamp(b, 0, kBins - 1);
    };

    // Tile edges by even partition; centers used for the bilinear blend.
    std::vector<int> x0(tiles_x), x1(tiles_x), y0(tiles_y), y1(tiles_y);
    for (int t = 0; t < tiles_x; ++t) {
        x0[t] = t * w / tiles_x;
        x1[t] = (t + 1) * w / tiles_x;
    }
    for (int t = 0; t < tiles_y; ++t) {
        y0[t] = t * h / tiles_y;
        y1[t] = (t + 1) * h / tiles_y;
    }

    // Per-tile clipped CDF mapping bin -> [0, 1].
    std::vector<std::vector<double>> maps(static_cast<std::size_t>(tiles_x) * tiles_y);
    for (int ty = 0; ty < tiles_y; ++ty) {
        for (int tx = 0; tx < tiles_x; ++tx) {
            std::vector<double> hist(kBins, 0.0);
            const double count = static_cast<double>(x1[tx] - x0[tx]) * (y1[ty] - y0[ty]);
            for (int j = y0[ty]; j < y1[ty]; ++j) {
                for (int i = x0[tx]; i < x1[tx]; ++i) hist[bin_of(image.at(i, j))] += 1.0;
            }

            if (std::isfinite(clip_limit)) {
                const double limit = clip_limit * count / kBins;
                double excess = 0.0;
                for (double& c : hist) {
                    if (c > limit) {
                        excess += c - limit;
                        c = limit;
                    }
                }
                const double share = excess / kBins;
                for (double& c : hist) c += share;
            }

            std::vector<double>& map = maps[static_cast<std::size_t>(ty) * tiles_x + tx];
            map.resize(kBins);
            double cdf = 0.0;
            for (int b = 0; b < kBins; ++b) {
                cdf += hist[b];
                map[b] = cdf / count;
            }
        }
    }

    auto tile_center_x = [&](int t) { return 0.5 * (x0[t] + x1[t] - 1); };
    auto tile_center_y = [&](int t) { return 0.5 * (y0[t] + y1[t] - 1); };

    for (int j = 0; j < h; ++j) {
        // Bracketing tile rows for this pixel row.
        int ty0 = 0;
        while (ty0 + 1 < tiles_y && tile_center_y(ty0 + 1) <= j) ++ty0;
        int ty1 = std::min(ty0 + 1, tiles_y - 1);
        if (j < tile_center_y(ty0)) ty1 = ty0;
        double fy = 0.0;
        if (ty1 != ty0) {
            fy = (j - tile_center_y(ty0)) / (tile_center_y(ty1) - tile_center_y(ty0));
            fy = std::clamp(fy, 0.0, 1.0);
        }

        for (int i = 0; i < w; ++i) {
            int tx0 = 0;
            while (tx0 + 1 < tiles_x && tile_center_x(tx0 + 1) <= i) ++tx0;
            int tx1 = std::min(tx0 + 1, tiles_x - 1);
            if (i < tile_center_x(tx0)) tx1 = tx0;
            double fx = 0.0;
            if (tx1 != tx0) {
                fx = (i - tile_center_x(tx0)) / (tile_center_x(tx1) - tile_center_x(tx0));
                fx = std::clamp(fx, 0.0, 1.0);
            }

            const int b = bin_of(image.at(i, j));
            const double m00 = maps[static_cast<std::size_t>(ty0) * tiles_x + tx0][b];
            const double m10 = maps[static_cast<std::size_t>(ty0) * tiles_x + tx1][b];
            const double m01 = maps[static_cast<std::size_t>(ty1) * tiles_x + tx0][b];
            const double m11 = maps[static_cast<std::size_t>(ty1) * tiles_x + tx1][b];
            out.at(i, j) = (1.0 - fy) * ((1.0 - fx) * m00 + fx * m10) +
                           fy * ((1.0 - fx) * m01 + fx * m11);
        }
    }
    return out;
}

}  // namespace xrm::drr
