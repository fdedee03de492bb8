#include <antgen/geometry.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#ifndef ANTGEN_ASSET_DIR
#define ANTGEN_ASSET_DIR "assets"
#endif

namespace antgen {

using Eigen::Vector3d;
using Eigen::Vector3i;

namespace {

constexpr std::array<std::string_view, kAllShapes.size()> kShapeNames = {
    "cuboid", "isospheroid", "pyramid", "l_block",  "t_block", "spheroid",
    "cone",   "capsule",     "cylinder", "torus", "teapot",  "suzanne",
};

// Flat-shaded mesh assembled polygon by polygon; every polygon gets its own
// vertices so the face normal is exact.
class FlatBuilder
{
public:
    void add_polygon(const std::vector<Vector3d>& corners)
    {
        const Vector3d normal = polygon_normal(corners);
        const int base = static_cast<int>(mesh_.vertices.size());
        for (const auto& c : corners) {
            mesh_.vertices.push_back(c);
            mesh_.normals.push_back(normal);
        }
        for (int i = 1; i + 1 < static_cast<int>(corners.size()); ++i)
            mesh_.triangles.emplace_back(base, base + i, base + i + 1);
    }

    // Flip to outward if the polygon normal points toward the origin. Valid
    // for shapes that are star-shaped about the origin.
    void add_convex_polygon(std::vector<Vector3d> corners)
    {
        Vector3d centroid = Vector3d::Zero();
        for (const auto& c : corners)
            centroid += c;
        if (polygon_normal(corners).dot(centroid) < 0.0)
            std::reverse(corners.begin(), corners.end());
        add_polygon(corners);
    }

    Mesh finish()
    {
        mesh_.update_bounds();
        return std::move(mesh_);
    }

private:
    static Vector3d polygon_normal(const std::vector<Vector3d>& corners)
    {
        // Newell's method: robust for any planar polygon.
        Vector3d n = Vector3d::Zero();
        for (std::size_t i = 0; i < corners.size(); ++i)
            n += corners[i].cross(corners[(i + 1) % corners.size()]);
        return n.normalized();
    }

    Mesh mesh_;
};

// Axis-aligned voxel union with interior faces dropped. Cells are integer
// (x, y, z) triples of side `side`; the result is centred on its bbox.
Mesh voxel_mesh(const std::vector<Vector3i>& cells, double side)
{
    auto occupied = [&](const Vector3i& c) { return std::find(cells.begin(), cells.end(), c) != cells.end(); };

    Vector3i lo = cells.front(), hi = cells.front();
    for (const auto& c : cells) {
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
    }
    const Vector3d centre = 0.5 * (lo.cast<double>() + (hi + Vector3i::Ones()).cast<double>()) * side;

    FlatBuilder builder;
    for (const auto& cell : cells) {
        for (int axis = 0; axis < 3; ++axis) {
            for (int sign : {-1, 1}) {
                Vector3i neighbour = cell;
                neighbour[axis] += sign;
                if (occupied(neighbour))
                    continue;
                const int u = (axis + 1) % 3;
                const int w = (axis + 2) % 3;
                std::vector<Vector3d> quad;
                for (auto [du, dw] : {std::pair{0, 0}, {1, 0}, {1, 1}, {0, 1}}) {
                    Vector3d p = cell.cast<double>();
                    p[axis] += sign > 0 ? 1.0 : 0.0;
                    p[u] += du;
                    p[w] += dw;
                    quad.push_back(p * side - centre);
                }
                // e_u x e_w = e_axis, so this order faces +axis.
                if (sign < 0)
                    std::reverse(quad.begin(), quad.end());
                builder.add_polygon(quad);
            }
        }
    }
    return builder.finish();
}

Mesh make_pyramid()
{
    const std::array<Vector3d, 4> base = {Vector3d(-0.5, -0.5, -0.5), Vector3d(0.5, -0.5, -0.5),
                                          Vector3d(0.5, -0.5, 0.5), Vector3d(-0.5, -0.5, 0.5)};
    const Vector3d apex(0.0, 0.5, 0.0);
    FlatBuilder builder;
    builder.add_convex_polygon({base.begin(), base.end()});
    for (std::size_t i = 0; i < base.size(); ++i)
        builder.add_convex_polygon({base[i], base[(i + 1) % base.size()], apex});
    return builder.finish();
}

// Flip every triangle if the mesh came out inside-out.
void orient_outward(Mesh& mesh)
{
    if (signed_volume(mesh) >= 0.0)
        return;
    for (auto& t : mesh.triangles)
        std::swap(t[1], t[2]);
}

// Smooth surface of revolution about +Y from a (radius, height) profile
// ordered bottom to top. Zero-radius profile points become single poles.
Mesh revolve(const std::vector<std::pair<double, double>>& profile, int segments)
{
    Mesh mesh;
    std::vector<std::vector<int>> rings;
    for (auto [radius, height] : profile) {
        std::vector<int> ring;
        if (radius == 0.0) {
            ring.push_back(static_cast<int>(mesh.vertices.size()));
            mesh.vertices.emplace_back(0.0, height, 0.0);
        } else {
            for (int j = 0; j < segments; ++j) {
                const double theta = 2.0 * std::numbers::pi * j / segments;
                ring.push_back(static_cast<int>(mesh.vertices.size()));
                mesh.vertices.emplace_back(radius * std::cos(theta), height, radius * std::sin(theta));
            }
        }
        rings.push_back(std::move(ring));
    }
    for (std::size_t r = 0; r + 1 < rings.size(); ++r) {
        const auto& a = rings[r];
        const auto& b = rings[r + 1];
        for (int j = 0; j < segments; ++j) {
            const int j1 = (j + 1) % segments;
            const auto at = [&](const std::vector<int>& ring, int k) { return ring.size() == 1 ? ring[0] : ring[k]; };
            if (a.size() > 1)
                mesh.triangles.emplace_back(at(a, j), at(b, j), at(a, j1));
            if (b.size() > 1)
                mesh.triangles.emplace_back(at(a, j1), at(b, j), at(b, j1));
        }
    }
    return mesh;
}

// Flat disc at height y closing a surface of revolution; its rim duplicates
// the side vertices so the cap keeps a crisp normal.
void add_cap(Mesh& mesh, double radius, double height, int segments, bool facing_up)
{
    const int centre = static_cast<int>(mesh.vertices.size());
    const Vector3d normal(0.0, facing_up ? 1.0 : -1.0, 0.0);
    mesh.vertices.emplace_back(0.0, height, 0.0);
    mesh.normals.push_back(normal);
    for (int j = 0; j < segments; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / segments;
        mesh.vertices.emplace_back(radius * std::cos(theta), height, radius * std::sin(theta));
        mesh.normals.push_back(normal);
    }
    for (int j = 0; j < segments; ++j) {
        const int a = centre + 1 + j;
        const int b = centre + 1 + (j + 1) % segments;
        // Angle increases from +X toward +Z, which is clockwise seen from +Y.
        if (facing_up)
            mesh.triangles.emplace_back(centre, b, a);
        else
            mesh.triangles.emplace_back(centre, a, b);
    }
}

// Orient the revolved side, then give its vertices averaged normals. Caps are
// appended afterwards with their own normals.
void finish_smooth(Mesh& mesh)
{
    orient_outward(mesh);
    mesh.normals = vertex_normals(mesh.vertices, mesh.triangles);
}

Mesh make_uv_sphere(double radius, int segments)
{
    const int rings = std::max(2, segments / 2);
    std::vector<std::pair<double, double>> profile;
    for (int i = 0; i <= rings; ++i) {
        const double phi = std::numbers::pi * i / rings;
        const double r = i == 0 || i == rings ? 0.0 : radius * std::sin(phi);
        profile.emplace_back(r, -radius * std::cos(phi));
    }
    Mesh mesh = revolve(profile, segments);
    finish_smooth(mesh);
    mesh.update_bounds();
    return mesh;
}

Mesh make_capsule(double radius, double half_length, int segments)
{
    const int cap_rings = std::max(2, segments / 4);
    std::vector<std::pair<double, double>> profile;
    for (int i = 0; i <= cap_rings; ++i) {
        const double phi = 0.5 * std::numbers::pi * i / cap_rings;
        profile.emplace_back(i == 0 ? 0.0 : radius * std::sin(phi), -half_length - radius * std::cos(phi));
    }
    for (int i = cap_rings; i >= 0; --i) {
        const double phi = 0.5 * std::numbers::pi * i / cap_rings;
        profile.emplace_back(i == 0 ? 0.0 : radius * std::sin(phi), half_length + radius * std::cos(phi));
    }
    Mesh mesh = revolve(profile, segments);
    finish_smooth(mesh);
    mesh.update_bounds();
    return mesh;
}

Mesh make_cone(double radius, double height, int segments)
{
    Mesh mesh = revolve({{radius, -0.5 * height}, {0.0, 0.5 * height}}, segments);
    finish_smooth(mesh);
    add_cap(mesh, radius, -0.5 * height, segments, false);
    orient_outward(mesh);
    mesh.update_bounds();
    return mesh;
}

Mesh make_cylinder(double radius, double height, int segments)
{
    Mesh mesh = revolve({{radius, -0.5 * height}, {radius, 0.5 * height}}, segments);
    finish_smooth(mesh);
    add_cap(mesh, radius, -0.5 * height, segments, false);
    add_cap(mesh, radius, 0.5 * height, segments, true);
    mesh.update_bounds();
    return mesh;
}

Mesh make_flat_icosphere(int subdivisions)
{
    const Mesh smooth = make_icosphere(subdivisions, 0.5);
    FlatBuilder builder;
    for (const auto& t : smooth.triangles)
        builder.add_convex_polygon({smooth.vertices[t[0]], smooth.vertices[t[1]], smooth.vertices[t[2]]});
    return builder.finish();
}

} // namespace

std::string_view shape_name(ShapeId shape) noexcept
{
    return kShapeNames[static_cast<std::size_t>(shape)];
}

std::optional<ShapeId> parse_shape_name(std::string_view name) noexcept
{
    for (std::size_t i = 0; i < kShapeNames.size(); ++i)
        if (kShapeNames[i] == name)
            return kAllShapes[i];
    return std::nullopt;
}

void Mesh::update_bounds()
{
    bounding_radius = 0.0;
    for (const auto& v : vertices)
        bounding_radius = std::max(bounding_radius, v.norm());
}

std::vector<Vector3d> vertex_normals(const std::vector<Vector3d>& vertices, const std::vector<Vector3i>& triangles)
{
    std::vector<Vector3d> normals(vertices.size(), Vector3d::Zero());
    for (const auto& t : triangles) {
        // Unnormalised cross product = twice the area times the unit normal.
        const Vector3d n = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
        for (int k = 0; k < 3; ++k)
            normals[t[k]] += n;
    }
    for (auto& n : normals) {
        const double len = n.norm();
        n = len > 0.0 ? Vector3d(n / len) : Vector3d::UnitY();
    }
    return normals;
}

double signed_volume(const Mesh& mesh)
{
    double volume = 0.0;
    for (const auto& t : mesh.triangles)
        volume += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
    return volume / 6.0;
}

Mesh make_icosphere(int subdivisions, double radius)
{
    if (subdivisions < 0)
        throw std::invalid_argument("icosphere subdivisions must be >= 0");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vector3d> verts = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    std::vector<Vector3i> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1},
    };
    for (auto& v : verts)
        v.normalize();

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoints;
        auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            if (auto it = midpoints.find(key); it != midpoints.end())
                return it->second;
            verts.push_back((verts[a] + verts[b]).normalized());
            const int id = static_cast<int>(verts.size()) - 1;
            midpoints.emplace(key, id);
            return id;
        };
        std::vector<Vector3i> next;
        next.reserve(tris.size() * 4);
        for (const auto& tri : tris) {
            const int ab = midpoint(tri[0], tri[1]);
            const int bc = midpoint(tri[1], tri[2]);
            const int ca = midpoint(tri[2], tri[0]);
            next.emplace_back(tri[0], ab, ca);
            next.emplace_back(tri[1], bc, ab);
            next.emplace_back(tri[2], ca, bc);
            next.emplace_back(ab, bc, ca);
        }
        tris = std::move(next);
    }

    Mesh mesh;
    mesh.normals = verts;
    for (auto& v : verts)
        v *= radius;
    mesh.vertices = std::move(verts);
    mesh.triangles = std::move(tris);
    orient_outward(mesh);
    mesh.update_bounds();
    return mesh;
}

Mesh make_torus(double major_radius, double minor_radius, int major_segments, int minor_segments)
{
    if (major_segments < 3 || minor_segments < 3)
        throw std::invalid_argument("torus needs at least 3 segments per direction");
    Mesh mesh;
    for (int i = 0; i < major_segments; ++i) {
        const double u = 2.0 * std::numbers::pi * i / major_segments;
        for (int j = 0; j < minor_segments; ++j) {
            const double v = 2.0 * std::numbers::pi * j / minor_segments;
            const double ring = major_radius + minor_radius * std::cos(v);
            mesh.vertices.emplace_back(ring * std::cos(u), minor_radius * std::sin(v), ring * std::sin(u));
        }
    }
    const auto index = [&](int i, int j) { return (i % major_segments) * minor_segments + (j % minor_segments); };
    for (int i = 0; i < major_segments; ++i) {
        for (int j = 0; j < minor_segments; ++j) {
            mesh.triangles.emplace_back(index(i, j), index(i, j + 1), index(i + 1, j));
            mesh.triangles.emplace_back(index(i + 1, j), index(i, j + 1), index(i + 1, j + 1));
        }
    }
    orient_outward(mesh);
    mesh.normals = vertex_normals(mesh.vertices, mesh.triangles);
    mesh.update_bounds();
    return mesh;
}

Mesh generate_primitive(ShapeId shape, const Tessellation& tess)
{
    const int n = tess.segments;
    const bool curved = shape == ShapeId::spheroid || shape == ShapeId::cone || shape == ShapeId::capsule ||
                        shape == ShapeId::cylinder || shape == ShapeId::torus;
    if (curved && n < 3)
        throw std::invalid_argument("tessellation must be >= 3 for curved shapes");

    switch (shape) {
    case ShapeId::cuboid:
        return voxel_mesh({Vector3i(0, 0, 0)}, 1.0);
    case ShapeId::isospheroid:
        return make_flat_icosphere(tess.subdivisions);
    case ShapeId::pyramid:
        return make_pyramid();
    case ShapeId::l_block:
        return voxel_mesh({{0, 0, 0}, {0, 1, 0}, {0, 2, 0}, {1, 0, 0}}, 0.45);
    case ShapeId::t_block:
        return voxel_mesh({{0, 1, 0}, {1, 1, 0}, {2, 1, 0}, {1, 0, 0}}, 0.45);
    case ShapeId::spheroid:
        return make_uv_sphere(0.5, n);
    case ShapeId::cone:
        return make_cone(0.5, 1.0, n);
    case ShapeId::capsule:
        return make_capsule(0.25, 0.25, n);
    case ShapeId::cylinder:
        return make_cylinder(0.5, 1.0, n);
    case ShapeId::torus:
        return make_torus(0.35, 0.15, n, n);
    case ShapeId::teapot:
    case ShapeId::suzanne:
        break;
    }
    throw std::invalid_argument("shape '" + std::string(shape_name(shape)) + "' has no procedural generator");
}

// ---------------------------------------------------------------------------
// OBJ

namespace {

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

double parse_real(std::string_view token, std::size_t line)
{
    if (!token.empty() && token.front() == '+')
        token.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(value))
        throw ObjParseError(line, "malformed number '" + std::string(token) + "'");
    return value;
}

// 1-based or negative OBJ index into a list of `count` entries.
int resolve_index(std::string_view token, std::size_t count, std::size_t line)
{
    long long raw = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), raw);
    if (ec != std::errc() || ptr != token.data() + token.size())
        throw ObjParseError(line, "malformed index '" + std::string(token) + "'");
    const long long resolved = raw > 0 ? raw - 1 : static_cast<long long>(count) + raw;
    if (raw == 0 || resolved < 0 || resolved >= static_cast<long long>(count))
        throw ObjParseError(line, "index " + std::to_string(raw) + " out of range");
    return static_cast<int>(resolved);
}

} // namespace

Mesh load_obj(std::string_view text)
{
    std::vector<Vector3d> positions;
    std::vector<Vector3d> file_normals;
    // Corner = (position index, normal index or -1).
    std::vector<std::array<std::pair<int, int>, 3>> corners;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        const auto tokens = split_ws(line);
        if (tokens.empty())
            continue;

        const std::string_view kind = tokens[0];
        if (kind == "v" || kind == "vn") {
            if (tokens.size() < 4)
                throw ObjParseError(line_no, "'" + std::string(kind) + "' needs three coordinates");
            const Vector3d xyz(parse_real(tokens[1], line_no), parse_real(tokens[2], line_no),
                               parse_real(tokens[3], line_no));
            (kind == "v" ? positions : file_normals).push_back(xyz);
        } else if (kind == "f") {
            if (tokens.size() < 4)
                throw ObjParseError(line_no, "face with fewer than 3 vertices");
            std::vector<std::pair<int, int>> face;
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                const std::string_view corner = tokens[i];
                const auto slash1 = corner.find('/');
                const int v = resolve_index(corner.substr(0, slash1), positions.size(), line_no);
                int n = -1;
                if (slash1 != std::string_view::npos) {
                    const auto slash2 = corner.find('/', slash1 + 1);
                    if (slash2 != std::string_view::npos && slash2 + 1 < corner.size())
                        n = resolve_index(corner.substr(slash2 + 1), file_normals.size(), line_no);
                }
                face.emplace_back(v, n);
            }
            for (std::size_t i = 1; i + 1 < face.size(); ++i)
                corners.push_back({face[0], face[i], face[i + 1]});
        }
        if (end == text.size())
            break;
    }

    if (positions.empty() || corners.empty())
        throw ObjParseError(line_no, "no geometry");

    // Area-weighted normals over position indices, for corners without vn.
    std::vector<Vector3i> position_tris;
    position_tris.reserve(corners.size());
    for (const auto& c : corners)
        position_tris.emplace_back(c[0].first, c[1].first, c[2].first);
    const auto computed = vertex_normals(positions, position_tris);

    Mesh mesh;
    std::map<std::pair<int, int>, int> remap;
    const bool any_normals = !file_normals.empty();
    for (const auto& c : corners) {
        Vector3i tri;
        for (int k = 0; k < 3; ++k) {
            auto key = c[k];
            if (!any_normals) {
                // Keep file order when every normal is computed.
                tri[k] = key.first;
                continue;
            }
            auto [it, inserted] = remap.try_emplace(key, static_cast<int>(mesh.vertices.size()));
            if (inserted) {
                mesh.vertices.push_back(positions[key.first]);
                Vector3d n = key.second >= 0 ? file_normals[key.second] : computed[key.first];
                n = n.norm() > 0.0 ? Vector3d(n.normalized()) : computed[key.first];
                mesh.normals.push_back(n);
            }
            tri[k] = it->second;
        }
        mesh.triangles.push_back(tri);
    }
    if (!any_normals) {
        mesh.vertices = positions;
        mesh.normals = computed;
    }

    Vector3d lo = mesh.vertices.front(), hi = mesh.vertices.front();
    for (const auto& v : mesh.vertices) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
    const Vector3d centre = 0.5 * (lo + hi);
    double radius = 0.0;
    for (auto& v : mesh.vertices) {
        v -= centre;
        radius = std::max(radius, v.norm());
    }
    if (radius > 0.0)
        for (auto& v : mesh.vertices)
            v /= radius;
    mesh.update_bounds();
    return mesh;
}

Mesh load_obj_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open OBJ file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return load_obj(buffer.str());
    } catch (const ObjParseError& e) {
        throw ObjParseError(e.line(), path.string() + ": " + e.what());
    }
}

std::string write_obj(const Mesh& mesh)
{
    std::string out;
    char buf[128];
    for (const auto& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
        out += buf;
    }
    for (const auto& n : mesh.normals) {
        std::snprintf(buf, sizeof buf, "vn %.17g %.17g %.17g\n", n.x(), n.y(), n.z());
        out += buf;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "f %d//%d %d//%d %d//%d\n", t[0] + 1, t[0] + 1, t[1] + 1, t[1] + 1, t[2] + 1,
                      t[2] + 1);
        out += buf;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Surface noise

Vector3d NoiseField::sample(const Vector3d& position, const Vector3d& normal) const
{
    if (texels.empty())
        return Vector3d::Zero();
    int axis = 0;
    normal.cwiseAbs().maxCoeff(&axis);
    const auto texel_coord = [this](double c) {
        const int i = static_cast<int>(std::floor((c + 1.0) * 0.5 * resolution));
        return std::clamp(i, 0, resolution - 1);
    };
    const int u = texel_coord(position[(axis + 1) % 3]);
    const int w = texel_coord(position[(axis + 2) % 3]);
    return texels[static_cast<std::size_t>(w) * resolution + u].cast<double>();
}

NoiseField build_noise_field(double amplitude, SeededRng& rng, int resolution)
{
    if (!(amplitude >= 0.0))
        throw std::invalid_argument("noise amplitude must be >= 0");
    if (resolution < 1)
        throw std::invalid_argument("noise resolution must be >= 1");
    NoiseField field;
    field.resolution = resolution;
    field.amplitude = amplitude;
    field.texels.resize(static_cast<std::size_t>(resolution) * resolution);
    for (auto& t : field.texels) {
        if (amplitude == 0.0) {
            t.setZero();
            continue;
        }
        for (int k = 0; k < 3; ++k)
            t[k] = static_cast<float>(rng.normal(0.0, amplitude));
    }
    return field;
}

AssetPaths AssetPaths::bundled()
{
    const std::filesystem::path dir = ANTGEN_ASSET_DIR;
    return {(dir / "teapot.obj").lexically_normal(), (dir / "suzanne.obj").lexically_normal()};
}

MeshLibrary::MeshLibrary(const Tessellation& tess, const AssetPaths& assets)
{
    for (ShapeId shape : kAllShapes) {
        auto& slot = meshes_[static_cast<std::size_t>(shape)];
        if (shape == ShapeId::teapot)
            slot = load_obj_file(assets.teapot);
        else if (shape == ShapeId::suzanne)
            slot = load_obj_file(assets.suzanne);
        else
            slot = generate_primitive(shape, tess);
    }
}

} // namespace antgen
