#pragma once

#include <antgen/rng.hpp>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace antgen {

enum class ShapeId
{
    cuboid,
    isospheroid,
    pyramid,
    l_block,
    t_block,
    spheroid,
    cone,
    capsule,
    cylinder,
    torus,
    teapot,
    suzanne,
};

inline constexpr std::array<ShapeId, 12> kAllShapes = {
    ShapeId::cuboid, ShapeId::isospheroid, ShapeId::pyramid, ShapeId::l_block,  ShapeId::t_block, ShapeId::spheroid,
    ShapeId::cone,   ShapeId::capsule,     ShapeId::cylinder, ShapeId::torus, ShapeId::teapot,  ShapeId::suzanne,
};

std::string_view shape_name(ShapeId shape) noexcept;
std::optional<ShapeId> parse_shape_name(std::string_view name) noexcept;

/// True for the two classes backed by bundled OBJ assets.
constexpr bool is_asset_shape(ShapeId shape) noexcept
{
    return shape == ShapeId::teapot || shape == ShapeId::suzanne;
}

/// Indexed triangle mesh in object space. Triangles wind counter-clockwise
/// seen from outside (positive signed volume).
struct Mesh
{
    std::vector<Eigen::Vector3d> vertices;
    std::vector<Eigen::Vector3d> normals;
    std::vector<Eigen::Vector3i> triangles;
    double bounding_radius = 0.0;

    /// Recompute bounding_radius as the max vertex norm.
    void update_bounds();
};

struct Tessellation
{
    int segments = 24;    // around-axis and ring count for curved shapes
    int subdivisions = 2; // icosphere refinement level
};

/// Procedural mesh for every class except the OBJ-backed teapot and suzanne.
/// Throws std::invalid_argument for asset shapes or too-coarse tessellation.
Mesh generate_primitive(ShapeId shape, const Tessellation& tess = {});

/// Torus with explicit radii and ring counts.
Mesh make_torus(double major_radius, double minor_radius, int major_segments, int minor_segments);

/// Icosahedron refined `subdivisions` times and projected to a sphere of the given radius.
Mesh make_icosphere(int subdivisions, double radius = 0.5);

/// Area-weighted per-vertex normals.
std::vector<Eigen::Vector3d> vertex_normals(const std::vector<Eigen::Vector3d>& vertices,
                                            const std::vector<Eigen::Vector3i>& triangles);

/// Signed volume by the divergence theorem; positive for outward winding.
double signed_volume(const Mesh& mesh);

class ObjParseError : public std::runtime_error
{
public:
    ObjParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Wavefront OBJ subset: v, vn, f (3+ corners, fan-triangulated; v, v/vt,
/// v/vt/vn and v//vn forms; negative indices relative). Other records are
/// skipped. The result is recentred on its bounding-box centre and scaled so
/// the farthest vertex lies on the unit sphere.
Mesh load_obj(std::string_view text);
Mesh load_obj_file(const std::filesystem::path& path);

/// Serialise as v / vn / f v//vn records (no rescaling on output).
std::string write_obj(const Mesh& mesh);

/// Static per-agent normal-perturbation texture. One res x res grid of
/// 3-vectors, addressed by projecting the object-space position onto the
/// plane orthogonal to the dominant normal axis.
struct NoiseField
{
    int resolution = 0;
    double amplitude = 0.0;
    std::vector<Eigen::Vector3f> texels;

    [[nodiscard]] Eigen::Vector3d sample(const Eigen::Vector3d& position, const Eigen::Vector3d& normal) const;
};

/// Texels drawn i.i.d. from N(0, amplitude) per component.
NoiseField build_noise_field(double amplitude, SeededRng& rng, int resolution = 64);

struct AssetPaths
{
    std::filesystem::path teapot;
    std::filesystem::path suzanne;

    /// Paths of the OBJ files bundled with the source tree.
    static AssetPaths bundled();
    bool operator==(const AssetPaths&) const = default;
};

/// One immutable mesh per shape class, built once and shared by renders.
class MeshLibrary
{
public:
    MeshLibrary(const Tessellation& tess, const AssetPaths& assets);

    [[nodiscard]] const Mesh& mesh(ShapeId shape) const { return meshes_[static_cast<std::size_t>(shape)]; }
    [[nodiscard]] double bounding_radius(ShapeId shape) const { return mesh(shape).bounding_radius; }

private:
    std::array<Mesh, kAllShapes.size()> meshes_;
};

} // namespace antgen
