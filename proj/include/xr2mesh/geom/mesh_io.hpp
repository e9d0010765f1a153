#pragma once

#include <string>

#include "xr2mesh/geom/mesh.hpp"

namespace xrm::geom {

// ASCII mesh readers/writers. Format chosen by extension: .off, .obj, .ply.
// Vertex order is preserved. Parse failures name the offending line.
TriMesh load_mesh(const std::string& path);
void save_mesh(const TriMesh& mesh, const std::string& path);

}  // namespace xrm::geom
