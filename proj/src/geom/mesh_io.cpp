#include "xr2mesh/geom/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace xrm::geom {

namespace {

std::string lower_extension(const std::string& path) {
    const auto dot = path.rfind('.');
    if (dot == std::string::npos) return "";
    std::string ext = path.substr(dot + 1);
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

[[noreturn]] void fail_parse(const std::string& path, int line, const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line) + ": " + what);
}

struct LineReader {
    std::istream& in;
    int line_no = 0;

    // Next non-empty, non-comment line. Returns false at EOF.
    bool next(std::string& out, char comment) {
        std::string raw;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto pos = raw.find_first_not_of(" \t\r\n");
            if (pos == std::string::npos) continue;
            if (raw[pos] == comment) continue;
            out = raw;
            return true;
        }
        return false;
    }
};

TriMesh load_off(std::istream& in, const std::string& path) {
    LineReader reader{in};
    std::string line;
    if (!reader.next(line, '#')) fail_parse(path, reader.line_no, "empty OFF file");

    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != "OFF") fail_parse(path, reader.line_no, "missing OFF header");

    std::size_t nv = 0, nf = 0, ne = 0;
    // Counts may share the header line or follow on their own line.
    if (!(header >> nv >> nf >> ne)) {
        if (!reader.next(line, '#')) fail_parse(path, reader.line_no, "missing OFF counts");
        std::istringstream counts(line);
        if (!(counts >> nv >> nf >> ne)) fail_parse(path, reader.line_no, "malformed OFF counts");
    }

    TriMesh mesh;
    mesh.vertices.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        if (!reader.next(line, '#')) fail_parse(path, reader.line_no, "unexpected EOF in vertices");
        std::istringstream ls(line);
        Vec3 v;
        if (!(ls >> v.x() >> v.y() >> v.z())) fail_parse(path, reader.line_no, "malformed vertex");
        mesh.vertices.push_back(v);
    }
    mesh.faces.reserve(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        if (!reader.next(line, '#')) fail_parse(path, reader.line_no, "unexpected EOF in faces");
        std::istringstream ls(line);
        int arity = 0;
        if (!(ls >> arity)) fail_parse(path, reader.line_no, "malformed face");
        if (arity != 3) fail_parse(path, reader.line_no, "only triangle faces supported");
        Face f{};
        if (!(ls >> f[0] >> f[1] >> f[2])) fail_parse(path, reader.line_no, "malformed face indices");
        mesh.faces.push_back(f);
    }
    mesh.validate();
    return mesh;
}

TriMesh load_obj(std::istream& in, const std::string& path) {
    TriMesh mesh;
    std::string raw;
    int line_no = 0;
    bool saw_content = false;
    while (std::getline(in, raw)) {
        ++line_no;
        std::istringstream ls(raw);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "#") continue;
        if (tag == "v") {
            saw_content = true;
            Vec3 v;
            if (!(ls >> v.x() >> v.y() >> v.z())) fail_parse(path, line_no, "malformed vertex");
            mesh.vertices.push_back(v);
        } else if (tag == "f") {
            saw_content = true;
            Face f{};
            for (int k = 0; k < 3; ++k) {
                std::string tok;
                if (!(ls >> tok)) fail_parse(path, line_no, "face needs three indices");
                // "i", "i/t", "i//n", "i/t/n" all start with the vertex index
                const std::string head = tok.substr(0, tok.find('/'));
                long idx = 0;
                try {
                    idx = std::stol(head);
                } catch (const std::exception&) {
                    fail_parse(path, line_no, "malformed face index '" + tok + "'");
                }
                if (idx == 0) fail_parse(path, line_no, "OBJ face index 0 (indices are 1-based)");
                if (idx < 0) idx = static_cast<long>(mesh.vertices.size()) + 1 + idx;
                f[k] = static_cast<std::int32_t>(idx - 1);
            }
            std::string extra;
            if (ls >> extra) fail_parse(path, line_no, "only triangle faces supported");
            mesh.faces.push_back(f);
        }
    }
    if (!saw_content) fail_parse(path, line_no, "no geometry in OBJ file");
    mesh.validate();
    return mesh;
}

TriMesh load_ply(std::istream& in, const std::string& path) {
    LineReader reader{in};
    std::string line;
    if (!reader.next(line, '\0') || line.rfind("ply", 0) != 0) {
        fail_parse(path, reader.line_no, "missing ply header");
    }

    std::size_t nv = 0, nf = 0;
    bool in_vertex = false;
    std::vector<std::string> vertex_props;
    while (true) {
        if (!reader.next(line, '\0')) fail_parse(path, reader.line_no, "unexpected EOF in header");
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "comment") continue;
        if (tag == "format") {
            std::string fmt;
            ls >> fmt;
            if (fmt != "ascii") throw FormatError(path + ": only ascii PLY supported");
        } else if (tag == "element") {
            std::string name;
            std::size_t count = 0;
            ls >> name >> count;
            if (name == "vertex") {
                nv = count;
                in_vertex = true;
            } else if (name == "face") {
                nf = count;
                in_vertex = false;
            } else {
                in_vertex = false;
                if (count != 0) fail_parse(path, reader.line_no, "unsupported element " + name);
            }
        } else if (tag == "property") {
            if (in_vertex) {
                std::string type, name;
                ls >> type >> name;
                vertex_props.push_back(name);
            }
        } else if (tag == "end_header") {
            break;
        }
    }

    int ix = -1, iy = -1, iz = -1;
    for (std::size_t i = 0; i < vertex_props.size(); ++i) {
        if (vertex_props[i] == "x") ix = static_cast<int>(i);
        if (vertex_props[i] == "y") iy = static_cast<int>(i);
        if (vertex_props[i] == "z") iz = static_cast<int>(i);
    }
    if (ix < 0 || iy < 0 || iz < 0) throw ParseError(path + ": vertex element lacks x/y/z");

    TriMesh mesh;
    mesh.vertices.reserve(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        if (!reader.next(line, '\0')) fail_parse(path, reader.line_no, "unexpected EOF in vertices");
        std::istringstream ls(line);
        std::vector<double> vals(vertex_props.size(), 0.0);
        for (double& v : vals) {
            if (!(ls >> v)) fail_parse(path, reader.line_no, "malformed vertex");
        }
        mesh.vertices.emplace_back(vals[ix], vals[iy], vals[iz]);
    }
    for (std::size_t i = 0; i < nf; ++i) {
        if (!reader.next(line, '\0')) fail_parse(path, reader.line_no, "unexpected EOF in faces");
        std::istringstream ls(line);
        int arity = 0;
        if (!(ls >> arity)) fail_parse(path, reader.line_no, "malformed face");
        if (arity != 3) fail_parse(path, reader.line_no, "only triangle faces supported");
        Face f{};
        if (!(ls >> f[0] >> f[1] >> f[2])) fail_parse(path, reader.line_no, "malformed face indices");
        mesh.faces.push_back(f);
    }
    mesh.validate();
    return mesh;
}

}  // namespace

TriMesh load_mesh(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file: " + path);
    const std::string ext = lower_extension(path);
    if (ext == "off") return load_off(in, path);
    if (ext == "obj") return load_obj(in, path);
    if (ext == "ply") return load_ply(in, path);
    throw FormatError("unsupported mesh extension '" + ext + "' for " + path);
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
    mesh.validate();
    std::ofstream out(path);
    if (!out) throw IoError("cannot write mesh file: " + path);
    out << std::setprecision(17);

    const std::string ext = lower_extension(path);
    if (ext == "off") {
        out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.faces.size() << " 0\n";
        for (const Vec3& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
        for (const Face& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    } else if (ext == "obj") {
        for (const Vec3& v : mesh.vertices) {
            out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
        }
        for (const Face& f : mesh.faces) {
            out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
        }
    } else if (ext == "ply") {
        out << "ply\nformat ascii 1.0\n";
        out << "element vertex " << mesh.vertices.size() << '\n';
        out << "property double x\nproperty double y\nproperty double z\n";
        out << "element face " << mesh.faces.size() << '\n';
        out << "property list uchar int vertex_indices\nend_header\n";
        for (const Vec3& v : mesh.vertices) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
        for (const Face& f : mesh.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    } else {
        throw FormatError("unsupported mesh extension '" + ext + "' for " + path);
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace xrm::geom
