#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "xr2mesh/geom/bvh.hpp"
#include "xr2mesh/geom/mesh.hpp"

namespace xrm::occ {

// Inside/outside oracle for a watertight mesh. Parity of ray crossings,
// majority-voted over three fixed pseudo-random directions with retry on
// near-degenerate intersections. Throws PreconditionError when the mesh is
// not watertight.
class InsideTester {
  public:
    explicit InsideTester(const geom::TriMesh& mesh, bool check_watertight = true);

    bool inside(const Vec3& p) const;

    const geom::TriangleBvh& bvh() const { return bvh_; }

  private:
    geom::TriangleBvh bvh_;
    Vec3 bbox_lo_, bbox_hi_;
};

bool point_inside(const geom::TriMesh& mesh, const Vec3& p);

// 3D points in the normalized sampling box with binary inside labels.
struct OccupancySampleSet {
    std::vector<Vec3> points;
    std::vector<std::uint8_t> labels;
    std::uint64_t seed = 0;

    std::size_t size() const { return points.size(); }
    double inside_fraction() const;
};

// n points uniform in [-0.5, 0.5]^3 labeled by the parity test;
// deterministic per seed.
OccupancySampleSet sample_uniform_occupancy(const geom::TriMesh& mesh, std::size_t n,
                                            std::uint64_t seed);
OccupancySampleSet sample_uniform_occupancy(const InsideTester& tester, std::size_t n,
                                            std::uint64_t seed);

// Dense res^3 occupancy over [-0.5, 0.5]^3: voxel occupied iff its center is
// inside or a triangle intersects its axis-aligned box. x-fastest layout.
struct VoxelGrid {
    int res = 0;
    std::vector<std::uint8_t> occupied;

    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(res) *
                   (static_cast<std::size_t>(iy) + static_cast<std::size_t>(res) * iz);
    }
    bool at(int ix, int iy, int iz) const { return occupied[index(ix, iy, iz)] != 0; }
    std::size_t occupied_count() const;
};

VoxelGrid voxel_occupancy_grid(const geom::TriMesh& mesh, int res = 32);

// Triangle vs axis-aligned box separating-axis test (used by the voxelizer
// and exposed for the brute-force oracle in tests).
bool triangle_intersects_box(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& box_center,
                             const Vec3& box_half);

struct MiniBatch {
    std::vector<Vec3> points;
    std::vector<std::uint8_t> labels;
};

// Uniform subset of size T without replacement; deterministic per
// (seed, call_index). Throws InputError when T exceeds the parent size.
MiniBatch minibatch(const OccupancySampleSet& samples, std::size_t T, std::uint64_t seed,
                    std::uint64_t call_index = 0);

// Flat binary file: float32 xyz triples then uint8 labels, plus a JSON
// header at `<path>.json` with {count, seed, mesh_id}.
void save_samples(const OccupancySampleSet& samples, const std::string& path,
                  const std::string& mesh_id);
OccupancySampleSet load_samples(const std::string& path);

}  // namespace xrm::occ
