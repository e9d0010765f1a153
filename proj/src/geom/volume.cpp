#include "xr2mesh/geom/volume.hpp"

#include <fstream>

#include <json.hpp>

namespace xrm::geom {

void Volume3D::validate() const {
    if (dims.minCoeff() <= 0) throw InputError("volume dims must be positive");
    if (spacing.minCoeff() <= 0.0) throw InputError("volume spacing must be positive");
    if (values.size() != voxel_count()) {
        throw InputError("volume value count " + std::to_string(values.size()) +
                         " does not match dims product " + std::to_string(voxel_count()));
    }
}

void save_volume(const Volume3D& volume, const std::string& path) {
    volume.validate();
    {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write volume file: " + path);
        out.write(reinterpret_cast<const char*>(volume.values.data()),
                  static_cast<std::streamsize>(volume.values.size() * sizeof(float)));
        if (!out) throw IoError("write failed: " + path);
    }
    nlohmann::json j;
    j["dims"] = {volume.dims.x(), volume.dims.y(), volume.dims.z()};
    j["spacing"] = {volume.spacing.x(), volume.spacing.y(), volume.spacing.z()};
    j["origin"] = {volume.origin.x(), volume.origin.y(), volume.origin.z()};
    std::ofstream side(path + ".json");
    if (!side) throw IoError("cannot write volume sidecar: " + path + ".json");
    side << j.dump(2) << '\n';
}

Volume3D load_volume(const std::string& path) {
    std::ifstream side(path + ".json");
    if (!side) throw IoError("cannot open volume sidecar: " + path + ".json");
    nlohmann::json j;
    try {
        side >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("volume sidecar " + path + ".json: " + e.what());
    }

    Volume3D v;
    try {
        v.dims = Vec3i(j.at("dims")[0].get<int>(), j.at("dims")[1].get<int>(),
                       j.at("dims")[2].get<int>());
        v.spacing = Vec3(j.at("spacing")[0].get<double>(), j.at("spacing")[1].get<double>(),
                         j.at("spacing")[2].get<double>());
        v.origin = Vec3(j.at("origin")[0].get<double>(), j.at("origin")[1].get<double>(),
                        j.at("origin")[2].get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("volume sidecar " + path + ".json: " + e.what());
    }

    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open volume file: " + path);
    v.values.resize(v.voxel_count());
    in.read(reinterpret_cast<char*>(v.values.data()),
            static_cast<std::streamsize>(v.values.size() * sizeof(float)));
    if (in.gcount() != static_cast<std::streamsize>(v.values.size() * sizeof(float))) {
        throw ParseError("volume file " + path + " shorter than dims imply");
    }
    v.validate();
    return v;
}

}  // namespace xrm::geom
