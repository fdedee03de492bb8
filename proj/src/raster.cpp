#include <antgen/raster.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <thread>

namespace antgen {

using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

constexpr int kSubpixelBits = 8;
constexpr double kSubpixelScale = 1 << kSubpixelBits;
// Beyond this many pixels from the origin the fixed-point edge products could
// overflow; such slivers are dropped.
constexpr double kGuardBand = 1 << 20;

struct ClipVertex
{
    Vector3d camera;   // camera-space position
    Vector3d object;   // object-space position, for the noise lookup
    Vector3d normal;   // object-space normal
};

struct RasterVertex
{
    std::int64_t x = 0;
    std::int64_t y = 0;
    double inv_z = 0.0;
    Vector3d object_over_z;
    Vector3d normal_over_z;
};

// Edge function of a -> b at p; positive on the interior of a
// positively-oriented triangle.
std::int64_t edge(const RasterVertex& a, const RasterVertex& b, std::int64_t px, std::int64_t py)
{
    return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// Top-left rule in y-down screen space for positively-oriented triangles.
bool is_top_left(const RasterVertex& a, const RasterVertex& b)
{
    const std::int64_t dy = b.y - a.y;
    const std::int64_t dx = b.x - a.x;
    return dy < 0 || (dy == 0 && dx > 0);
}

// Sutherland-Hodgman against z >= near; at most 4 output vertices.
int clip_near(const std::array<ClipVertex, 3>& in, double near, std::array<ClipVertex, 4>& out)
{
    int count = 0;
    for (int i = 0; i < 3; ++i) {
        const ClipVertex& a = in[i];
        const ClipVertex& b = in[(i + 1) % 3];
        const bool a_in = a.camera.z() >= near;
        const bool b_in = b.camera.z() >= near;
        if (a_in)
            out[count++] = a;
        if (a_in != b_in) {
            const double t = (near - a.camera.z()) / (b.camera.z() - a.camera.z());
            ClipVertex c;
            c.camera = a.camera + t * (b.camera - a.camera);
            c.camera.z() = near;
            c.object = a.object + t * (b.object - a.object);
            c.normal = a.normal + t * (b.normal - a.normal);
            out[count++] = c;
        }
    }
    return count;
}

struct AgentShading
{
    const Agent* agent;
    Matrix3d normal_matrix; // R S^-1
    std::uint32_t id;
};

class FrameRasterizer
{
public:
    FrameRasterizer(FrameSet& frame, const SceneConfig& config)
        : frame_(frame), camera_(config.camera), render_(config.render), fog_target_(config.render.resolved_fog_target())
    {
    }

    void draw_triangle(const std::array<ClipVertex, 3>& tri, const AgentShading& shading)
    {
        std::array<ClipVertex, 4> clipped;
        const int n = clip_near(tri, camera_.near, clipped);
        for (int i = 1; i + 1 < n; ++i)
            draw_clipped(clipped[0], clipped[i], clipped[i + 1], shading);
    }

private:
    std::optional<RasterVertex> to_raster(const ClipVertex& v) const
    {
        const ScreenPoint s = project(v.camera, camera_);
        if (!(std::abs(s.x) < kGuardBand && std::abs(s.y) < kGuardBand))
            return std::nullopt;
        RasterVertex r;
        r.x = std::llround(s.x * kSubpixelScale);
        r.y = std::llround(s.y * kSubpixelScale);
        r.inv_z = 1.0 / v.camera.z();
        r.object_over_z = v.object * r.inv_z;
        r.normal_over_z = v.normal * r.inv_z;
        return r;
    }

    void draw_clipped(const ClipVertex& c0, const ClipVertex& c1, const ClipVertex& c2, const AgentShading& shading)
    {
        auto r0 = to_raster(c0);
        auto r1 = to_raster(c1);
        auto r2 = to_raster(c2);
        if (!r0 || !r1 || !r2)
            return;
        std::array<RasterVertex, 3> v = {*r0, *r1, *r2};
        std::int64_t area = edge(v[0], v[1], v[2].x, v[2].y);
        if (area == 0)
            return;
        if (area < 0) {
            std::swap(v[1], v[2]);
            area = -area;
        }

        const auto [min_x, max_x] = std::minmax({v[0].x, v[1].x, v[2].x});
        const auto [min_y, max_y] = std::minmax({v[0].y, v[1].y, v[2].y});
        const auto to_pixel = [](std::int64_t fixed) { return fixed >> kSubpixelBits; };
        const int x0 = static_cast<int>(std::max<std::int64_t>(0, to_pixel(min_x)));
        const int x1 = static_cast<int>(std::min<std::int64_t>(frame_.width() - 1, to_pixel(max_x)));
        const int y0 = static_cast<int>(std::max<std::int64_t>(0, to_pixel(min_y)));
        const int y1 = static_cast<int>(std::min<std::int64_t>(frame_.height() - 1, to_pixel(max_y)));
        if (x0 > x1 || y0 > y1)
            return;

        const bool tl0 = is_top_left(v[1], v[2]);
        const bool tl1 = is_top_left(v[2], v[0]);
        const bool tl2 = is_top_left(v[0], v[1]);
        const double inv_area = 1.0 / static_cast<double>(area);
        constexpr std::int64_t kHalf = 1 << (kSubpixelBits - 1);

        for (int py = y0; py <= y1; ++py) {
            const std::int64_t sy = (static_cast<std::int64_t>(py) << kSubpixelBits) + kHalf;
            for (int px = x0; px <= x1; ++px) {
                const std::int64_t sx = (static_cast<std::int64_t>(px) << kSubpixelBits) + kHalf;
                const std::int64_t w0 = edge(v[1], v[2], sx, sy);
                const std::int64_t w1 = edge(v[2], v[0], sx, sy);
                const std::int64_t w2 = edge(v[0], v[1], sx, sy);
                if (w0 < 0 || w1 < 0 || w2 < 0)
                    continue;
                if ((w0 == 0 && !tl0) || (w1 == 0 && !tl1) || (w2 == 0 && !tl2))
                    continue;
                const double l0 = w0 * inv_area;
                const double l1 = w1 * inv_area;
                const double l2 = w2 * inv_area;
                const double inv_z = l0 * v[0].inv_z + l1 * v[1].inv_z + l2 * v[2].inv_z;
                const double depth = 1.0 / inv_z;
                if (depth > camera_.far || !(depth < frame_.depth(py, px)))
                    continue;
                const Vector3d object =
                    (l0 * v[0].object_over_z + l1 * v[1].object_over_z + l2 * v[2].object_over_z) * depth;
                const Vector3d normal =
                    (l0 * v[0].normal_over_z + l1 * v[1].normal_over_z + l2 * v[2].normal_over_z) * depth;
                frame_.depth(py, px) = depth;
                frame_.agent_id(py, px) = shading.id;
                frame_.intensity(py, px) = shade(object, normal, depth, shading);
            }
        }
    }

    double shade(const Vector3d& object, const Vector3d& normal, double depth, const AgentShading& shading) const
    {
        Vector3d n = normal.norm() > 1e-12 ? Vector3d(normal.normalized()) : Vector3d::UnitZ();
        if (shading.agent->noise) {
            const Vector3d perturbed = n + shading.agent->noise->sample(object, n);
            if (perturbed.norm() > 1e-12)
                n = perturbed.normalized();
        }
        const Vector3d world = (shading.normal_matrix * n).normalized();
        const double lambert = std::max(0.0, world.dot(render_.light_direction));
        const double lit = std::clamp(render_.ambient + (1.0 - render_.ambient) * lambert, 0.0, 1.0);
        const double attenuation = std::exp(-render_.fog_density * depth);
        return std::clamp(fog_target_ + (lit - fog_target_) * attenuation, 0.0, 1.0);
    }

    FrameSet& frame_;
    const CameraConfig& camera_;
    const RenderConfig& render_;
    double fog_target_;
};

} // namespace

FrameSet background_frame(const CameraConfig& camera, const RenderConfig& render, SeededRng& rng)
{
    FrameSet frame;
    const int w = camera.width;
    const int h = camera.height;
    frame.intensity = IntensityGrid::Constant(h, w, std::clamp(render.background_mean, 0.0, 1.0));
    if (render.background_sigma > 0.0) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x)
                frame.intensity(y, x) =
                    std::clamp(render.background_mean + render.background_sigma * rng.standard_normal(), 0.0, 1.0);
    }
    frame.agent_id = IdGrid::Zero(h, w);
    frame.depth = DepthGrid::Constant(h, w, std::numeric_limits<double>::infinity());
    return frame;
}

FrameSet rasterize_scene(const SceneState& state, const MeshLibrary& meshes, const SceneConfig& config,
                         SeededRng& frame_rng)
{
    FrameSet frame = background_frame(config.camera, config.render, frame_rng);
    FrameRasterizer raster(frame, config);

    std::vector<const Agent*> order;
    order.reserve(state.agents.size());
    for (const auto& a : state.agents)
        order.push_back(&a);
    std::sort(order.begin(), order.end(), [](const Agent* a, const Agent* b) { return a->id < b->id; });

    std::vector<Vector3d> camera_space;
    for (const Agent* agent : order) {
        const Mesh& mesh = meshes.mesh(config.classes[agent->class_index].shape);
        const Matrix3d rotation = agent->rotation_matrix();
        const Matrix3d model = rotation * agent->scale.asDiagonal();
        const AgentShading shading{agent, rotation * agent->scale.cwiseInverse().asDiagonal(), agent->id};

        camera_space.resize(mesh.vertices.size());
        for (std::size_t i = 0; i < mesh.vertices.size(); ++i)
            camera_space[i] = model * mesh.vertices[i] + agent->position;

        for (const auto& t : mesh.triangles) {
            std::array<ClipVertex, 3> tri;
            for (int k = 0; k < 3; ++k)
                tri[k] = {camera_space[t[k]], mesh.vertices[t[k]], mesh.normals[t[k]]};
            if (tri[0].camera.z() < config.camera.near && tri[1].camera.z() < config.camera.near &&
                tri[2].camera.z() < config.camera.near)
                continue;
            raster.draw_triangle(tri, shading);
        }
    }
    return frame;
}

FrameSet render_frame(const SceneState& state, const MeshLibrary& meshes, const SceneConfig& config)
{
    SeededRng rng(config.seed, "bg", static_cast<std::uint64_t>(state.frame_index));
    return rasterize_scene(state, meshes, config, rng);
}

std::vector<FrameSet> render_sequence(std::span<const SceneState> states, const MeshLibrary& meshes,
                                      const SceneConfig& config, int threads)
{
    std::vector<FrameSet> frames(states.size());
    const int workers = std::clamp(threads, 1, std::max(1, static_cast<int>(states.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < states.size(); ++i)
            frames[i] = render_frame(states[i], meshes, config);
        return frames;
    }
    std::atomic<std::size_t> cursor{0};
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = cursor++; i < states.size(); i = cursor++)
                    frames[i] = render_frame(states[i], meshes, config);
            });
        }
    }
    return frames;
}

} // namespace antgen
