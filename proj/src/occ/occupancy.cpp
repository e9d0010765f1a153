#include "xr2mesh/occ/occupancy.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace xrm::occ {

namespace {

Vec3 random_unit_vector(Rng& rng) {
    // Rejection sample in the unit ball, then normalize.
    while (true) {
        const Vec3 v = rng.uniform_vec3(-1.0, 1.0);
        const double n2 = v.squaredNorm();
        if (n2 > 1e-4 && n2 <= 1.0) return v / std::sqrt(n2);
    }
}

}  // namespace

InsideTester::InsideTester(const geom::TriMesh& mesh, bool check_watertight)
    : bvh_([&]() -> const geom::TriMesh& {
          if (check_watertight && !geom::is_watertight(mesh)) {
              throw PreconditionError("inside test requires a watertight mesh");
          }
          return mesh;
      }()) {
    bbox_lo_ = mesh.bbox_min();
    bbox_hi_ = mesh.bbox_max();
}

bool InsideTester::inside(const Vec3& p) const {
    if ((p.array() < bbox_lo_.array()).any() || (p.array() > bbox_hi_.array()).any()) {
        return false;
    }

    int votes = 0;
    std::vector<geom::TriangleBvh::RayHit> hits;
    for (int d = 0; d < 3; ++d) {
        Rng dir_rng(0xD1CEull * 31 + static_cast<std::uint64_t>(d));
        bool parity = false;
        for (int attempt = 0; attempt < 8; ++attempt) {
            const Vec3 dir = random_unit_vector(dir_rng);
            bvh_.ray_hits(p, dir, hits, 0.0);
            bool suspect = false;
            int crossings = 0;
            for (const auto& h : hits) {
                suspect = suspect || h.suspect;
                if (!h.suspect) ++crossings;
            }
            parity = (crossings % 2) == 1;
            if (!suspect) break;
        }
        if (parity) ++votes;
    }
    return votes >= 2;
}

bool point_inside(const geom::TriMesh& mesh, const Vec3& p) {
    return InsideTester(mesh).inside(p);
}

double OccupancySampleSet::inside_fraction() const {
    if (labels.empty()) return 0.0;
    const auto n_in = std::count(labels.begin(), labels.end(), std::uint8_t{1});
    return static_cast<double>(n_in) / static_cast<double>(labels.size());
}

OccupancySampleSet sample_uniform_occupancy(const geom::TriMesh& mesh, std::size_t n,
                                            std::uint64_t seed) {
    return sample_uniform_occupancy(InsideTester(mesh), n, seed);
}

OccupancySampleSet sample_uniform_occupancy(const InsideTester& tester, std::size_t n,
                                            std::uint64_t seed) {
    OccupancySampleSet out;
    out.seed = seed;
    out.points.reserve(n);
    out.labels.reserve(n);
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        out.points.push_back(rng.uniform_vec3(-0.5, 0.5));
    }
    for (std::size_t i = 0; i < n; ++i) {
        out.labels.push_back(tester.inside(out.points[i]) ? 1 : 0);
    }
    return out;
}

bool triangle_intersects_box(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& box_center,
                             const Vec3& box_half) {
    // Akenine-Moller separating axis test in box-local coordinates.
    const Vec3 v0 = a - box_center, v1 = b - box_center, v2 = c - box_center;
    const Vec3 e0 = v1 - v0, e1 = v2 - v1, e2 = v0 - v2;
    const Vec3& h = box_half;

    auto axis_test = [&](const Vec3& axis) {
        const double p0 = v0.dot(axis);
        const double p1 = v1.dot(axis);
        const double p2 = v2.dot(axis);
        const double r = h.x() * std::abs(axis.x()) + h.y() * std::abs(axis.y()) +
                         h.z() * std::abs(axis.z());
        const double mn = std::min({p0, p1, p2});
        const double mx = std::max({p0, p1, p2});
        return !(mn > r || mx < -r);
    };

    // 9 cross-product axes
    const Vec3 axes[3] = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    for (const Vec3& e : {e0, e1, e2}) {
        for (const Vec3& u : axes) {
            const Vec3 cr = u.cross(e);
            if (cr.squaredNorm() > 1e-30) {
                if (!axis_test(cr)) return false;
            }
        }
    }

    // box face normals
    for (int k = 0; k < 3; ++k) {
        const double mn = std::min({v0[k], v1[k], v2[k]});
        const double mx = std::max({v0[k], v1[k], v2[k]});
        if (mn > h[k] || mx < -h[k]) return false;
    }

    // triangle plane
    const Vec3 n = e0.cross(e1);
    return axis_test(n);
}

VoxelGrid voxel_occupancy_grid(const geom::TriMesh& mesh, int res) {
    if (res < 2) throw ConfigError("voxel_occupancy_grid: res must be >= 2");
    InsideTester tester(mesh);

    VoxelGrid grid;
    grid.res = res;
    grid.occupied.assign(static_cast<std::size_t>(res) * res * res, 0);

    const double h = 1.0 / res;
    const Vec3 box_half = Vec3::Constant(0.5 * h);

    // surface pass: mark voxels whose box a triangle touches
    std::vector<std::uint8_t> surface(grid.occupied.size(), 0);
    for (const geom::Face& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        Vec3 lo = a.cwiseMin(b).cwiseMin(c);
        Vec3 hi = a.cwiseMax(b).cwiseMax(c);
        int i0[3], i1[3];
        for (int k = 0; k < 3; ++k) {
            i0[k] = std::clamp(static_cast<int>(std::floor((lo[k] + 0.5) / h)), 0, res - 1);
            i1[k] = std::clamp(static_cast<int>(std::floor((hi[k] + 0.5) / h)), 0, res - 1);
        }
        for (int iz = i0[2]; iz <= i1[2]; ++iz) {
            for (int iy = i0[1]; iy <= i1[1]; ++iy) {
                for (int ix = i0[0]; ix <= i1[0]; ++ix) {
                    const std::size_t idx = grid.index(ix, iy, iz);
                    if (surface[idx]) continue;
                    const Vec3 center(-0.5 + (ix + 0.5) * h, -0.5 + (iy + 0.5) * h,
                                      -0.5 + (iz + 0.5) * h);
                    if (triangle_intersects_box(a, b, c, center, box_half)) surface[idx] = 1;
                }
            }
        }
    }

    // Interior pass. Non-surface voxels are uniformly in or out, so flood
    // the outside from parity-verified boundary voxels and parity-test only
    // what the flood cannot reach.
    std::vector<std::int8_t> state(grid.occupied.size(), -1);  // -1 unknown, 0 out, 1 in
    auto center_of = [&](int ix, int iy, int iz) {
        return Vec3(-0.5 + (ix + 0.5) * h, -0.5 + (iy + 0.5) * h, -0.5 + (iz + 0.5) * h);
    };

    std::deque<std::array<int, 3>> frontier;
    auto seed_boundary = [&](int ix, int iy, int iz) {
        const std::size_t idx = grid.index(ix, iy, iz);
        if (surface[idx] || state[idx] != -1) return;
        state[idx] = tester.inside(center_of(ix, iy, iz)) ? 1 : 0;
        if (state[idx] == 0) frontier.push_back({ix, iy, iz});
    };
    for (int a = 0; a < res; ++a) {
        for (int b = 0; b < res; ++b) {
            seed_boundary(0, a, b);
            seed_boundary(res - 1, a, b);
            seed_boundary(a, 0, b);
            seed_boundary(a, res - 1, b);
            seed_boundary(a, b, 0);
            seed_boundary(a, b, res - 1);
        }
    }
    const int dx[6] = {1, -1, 0, 0, 0, 0};
    const int dy[6] = {0, 0, 1, -1, 0, 0};
    const int dz[6] = {0, 0, 0, 0, 1, -1};
    while (!frontier.empty()) {
        const auto [ix, iy, iz] = frontier.front();
        frontier.pop_front();
        for (int d = 0; d < 6; ++d) {
            const int jx = ix + dx[d], jy = iy + dy[d], jz = iz + dz[d];
            if (jx < 0 || jy < 0 || jz < 0 || jx >= res || jy >= res || jz >= res) continue;
            const std::size_t idx = grid.index(jx, jy, jz);
            if (surface[idx] || state[idx] != -1) continue;
            state[idx] = 0;
            frontier.push_back({jx, jy, jz});
        }
    }

    for (int iz = 0; iz < res; ++iz) {
        for (int iy = 0; iy < res; ++iy) {
            for (int ix = 0; ix < res; ++ix) {
                const std::size_t idx = grid.index(ix, iy, iz);
                if (surface[idx]) {
                    grid.occupied[idx] = 1;
                    continue;
                }
                if (state[idx] == -1) {
                    state[idx] = tester.inside(center_of(ix, iy, iz)) ? 1 : 0;
                }
                grid.occupied[idx] = state[idx] == 1 ? 1 : 0;
            }
        }
    }
    return grid;
}

std::size_t VoxelGrid::occupied_count() const {
    return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), std::uint8_t{1}));
}

MiniBatch minibatch(const OccupancySampleSet& samples, std::size_t T, std::uint64_t seed,
                    std::uint64_t call_index) {
    if (T > samples.size()) {
        throw InputError("minibatch: T=" + std::to_string(T) + " exceeds sample count " +
                         std::to_string(samples.size()));
    }
    Rng rng(mix_seed(seed, call_index));
    std::vector<std::uint32_t> idx(samples.size());
    std::iota(idx.begin(), idx.end(), 0u);
    // Partial Fisher-Yates: the first T entries are a uniform subset.
    for (std::size_t i = 0; i < T; ++i) {
        const std::size_t j = i + rng.uniform_index(idx.size() - i);
        std::swap(idx[i], idx[j]);
    }
    MiniBatch batch;
    batch.points.reserve(T);
    batch.labels.reserve(T);
    for (std::size_t i = 0; i < T; ++i) {
        batch.points.push_back(samples.points[idx[i]]);
        batch.labels.push_back(samples.labels[idx[i]]);
    }
    return batch;
}

void save_samples(const OccupancySampleSet& samples, const std::string& path,
                  const std::string& mesh_id) {
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write sample file: " + path);
        for (const Vec3& p : samples.points) {
            const float xyz[3] = {static_cast<float>(p.x()), static_cast<float>(p.y()),
                                  static_cast<float>(p.z())};
            out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
        }
        out.write(reinterpret_cast<const char*>(samples.labels.data()),
                  static_cast<std::streamsize>(samples.labels.size()));
        if (!out) throw IoError("write failed: " + path);
    }
    nlohmann::json j;
    j["count"] = samples.size();
    j["seed"] = samples.seed;
    j["mesh_id"] = mesh_id;
    std::ofstream side(path + ".json");
    if (!side) throw IoError("cannot write sample header: " + path + ".json");
    side << j.dump(2) << '\n';
}

OccupancySampleSet load_samples(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw IoError("cannot open sample header: " + path + ".json");
    nlohmann::json j;
    try {
        side >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("sample header " + path + ".json: " + e.what());
    }
    const auto count = j.at("count").get<std::size_t>();

    OccupancySampleSet out;
    out.seed = j.at("seed").get<std::uint64_t>();
    out.points.resize(count);
    out.labels.resize(count);

    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open sample file: " + path);
    for (std::size_t i = 0; i < count; ++i) {
        float xyz[3];
        in.read(reinterpret_cast<char*>(xyz), sizeof(xyz));
        out.points[i] = Vec3(xyz[0], xyz[1], xyz[2]);
    }
    in.read(reinterpret_cast<char*>(out.labels.data()), static_cast<std::streamsize>(count));
    if (!in) throw ParseError("sample file " + path + " shorter than header implies");
    return out;
}

}  // namespace xrm::occ
