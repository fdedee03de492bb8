#include <antgen/raster.hpp>

#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <memory>

using namespace antgen;
using Eigen::Matrix3d;
using Eigen::Vector3d;

namespace {

const MeshLibrary& meshes()
{
    static const MeshLibrary lib(Tessellation{}, AssetPaths::bundled());
    return lib;
}

SceneConfig render_config(int width = 346, int height = 260, double fov = 60.0)
{
    SceneConfig c;
    c.seed = 5;
    c.classes = {AgentClassConfig{}};
    c.classes[0].shape = ShapeId::cuboid;
    c.camera.width = width;
    c.camera.height = height;
    c.camera.fov_degrees = fov;
    c.render.background_sigma = 0.0;
    return c;
}

Agent rigid(std::uint32_t id, const Vector3d& position, const Vector3d& rotation = Vector3d::Zero(),
            double scale = 1.0, int class_index = 0)
{
    Agent a;
    a.id = id;
    a.class_index = class_index;
    a.position = position;
    a.rotation = rotation;
    a.scale = Vector3d::Constant(scale);
    return a;
}

struct PixelBox
{
    int min_x = std::numeric_limits<int>::max();
    int min_y = std::numeric_limits<int>::max();
    int max_x = -1;
    int max_y = -1;
    long count = 0;
};

PixelBox box_of(const IdGrid& ids, std::uint32_t id)
{
    PixelBox b;
    for (int y = 0; y < ids.rows(); ++y)
        for (int x = 0; x < ids.cols(); ++x)
            if (ids(y, x) == id) {
                b.min_x = std::min(b.min_x, x);
                b.max_x = std::max(b.max_x, x);
                b.min_y = std::min(b.min_y, y);
                b.max_y = std::max(b.max_y, y);
                ++b.count;
            }
    return b;
}

// Analytic extent of the 8 projected corners of a unit cube agent.
void corner_extent(const Agent& a, const CameraConfig& cam, double& x0, double& x1, double& y0, double& y1)
{
    x0 = y0 = std::numeric_limits<double>::infinity();
    x1 = y1 = -std::numeric_limits<double>::infinity();
    const Matrix3d r = a.rotation_matrix();
    for (int i = 0; i < 8; ++i) {
        const Vector3d c((i & 1) ? 0.5 : -0.5, (i & 2) ? 0.5 : -0.5, (i & 4) ? 0.5 : -0.5);
        const Vector3d w = r * (a.scale.cwiseProduct(c)) + a.position;
        const auto p = oracle::pinhole(w.x(), w.y(), w.z(), cam.width, cam.height, cam.fov_degrees);
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
}

// Brute-force ray cast through a pixel position; returns the nearest agent id
// (lowest id on ties) or 0.
std::uint32_t ray_cast(const SceneState& state, const SceneConfig& cfg, double sx, double sy)
{
    const double f = cfg.camera.focal_length();
    const Vector3d d((sx - cfg.camera.width / 2.0) / f, -(sy - cfg.camera.height / 2.0) / f, 1.0);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t id = 0;
    for (const auto& a : state.agents) {
        const Mesh& mesh = meshes().mesh(cfg.classes[a.class_index].shape);
        const Matrix3d m = a.rotation_matrix() * a.scale.asDiagonal();
        for (const auto& t : mesh.triangles) {
            const Vector3d v0 = m * mesh.vertices[t[0]] + a.position;
            const Vector3d v1 = m * mesh.vertices[t[1]] + a.position;
            const Vector3d v2 = m * mesh.vertices[t[2]] + a.position;
            const Vector3d e1 = v1 - v0;
            const Vector3d e2 = v2 - v0;
            const Vector3d p = d.cross(e2);
            const double det = e1.dot(p);
            if (std::abs(det) < 1e-14)
                continue;
            const double u = v0.dot(p) * -1.0 / det;
            const Vector3d q = (-v0).cross(e1);
            const double v = d.dot(q) / det;
            if (u < 0 || v < 0 || u + v > 1)
                continue;
            const double z = e2.dot(q) / det; // d.z = 1, so t is depth
            if (z >= cfg.camera.near && z < best) {
                best = z;
                id = a.id;
            }
        }
    }
    return id;
}

} // namespace

TEST_CASE("project: pinhole examples")
{
    CameraConfig cam;
    for (double d : {0.5, 3.0, 90.0}) {
        const auto p = project({0.0, 0.0, d}, cam);
        CHECK(p.x == cam.width / 2.0);
        CHECK(p.y == cam.height / 2.0);
        CHECK(p.depth == d);
    }
    cam.fov_degrees = 90.0;
    CHECK(project({0.0, 4.0, 4.0}, cam).y == doctest::Approx(0.0).epsilon(1e-12));
    const auto near = project({1.0, 0.5, 2.0}, cam);
    const auto far = project({1.0, 0.5, 4.0}, cam);
    CHECK(far.x - cam.width / 2.0 == doctest::Approx((near.x - cam.width / 2.0) / 2));
    CHECK(far.y - cam.height / 2.0 == doctest::Approx((near.y - cam.height / 2.0) / 2));

    oracle::Gen gen(2);
    CameraConfig c;
    for (int i = 0; i < 200; ++i) {
        const Vector3d v(gen.uniform(-3, 3), gen.uniform(-3, 3), gen.uniform(0.2, 50));
        const auto p = project(v, c);
        const auto q = oracle::pinhole(v.x(), v.y(), v.z(), c.width, c.height, c.fov_degrees);
        CHECK(p.x == doctest::Approx(q.x).epsilon(1e-12));
        CHECK(p.y == doctest::Approx(q.y).epsilon(1e-12));
    }
}

TEST_CASE("empty scene renders the background")
{
    const auto cfg = render_config();
    const FrameSet f = render_frame(SceneState{}, meshes(), cfg);
    CHECK(f.width() == 346);
    CHECK(f.height() == 260);
    CHECK((f.intensity == cfg.render.background_mean).all());
    CHECK((f.agent_id == 0u).all());
    CHECK(f.depth.isInf().all());
}

TEST_CASE("background noise is per frame and clamped")
{
    auto cfg = render_config(80, 60);
    cfg.render.background_sigma = 0.5;
    SceneState s0;
    SceneState s1;
    s1.frame_index = 1;
    const FrameSet a = render_frame(s0, meshes(), cfg);
    const FrameSet b = render_frame(s1, meshes(), cfg);
    CHECK((a.intensity >= 0.0).all());
    CHECK((a.intensity <= 1.0).all());
    CHECK_FALSE((a.intensity == b.intensity).all());
    CHECK((render_frame(s0, meshes(), cfg).intensity == a.intensity).all());
}

TEST_CASE("unit cube bounding box matches the corner projection")
{
    const auto cfg = render_config();
    SceneState s;
    s.agents = {rigid(1, {0.0, 0.0, 5.0})};
    const FrameSet f = render_frame(s, meshes(), cfg);
    const PixelBox b = box_of(f.agent_id, 1);
    double x0, x1, y0, y1;
    corner_extent(s.agents[0], cfg.camera, x0, x1, y0, y1);
    CHECK(std::abs(b.min_x - x0) <= 1.0);
    CHECK(std::abs(b.max_x + 1 - x1) <= 1.0);
    CHECK(std::abs(b.min_y - y0) <= 1.0);
    CHECK(std::abs(b.max_y + 1 - y1) <= 1.0);
}

TEST_CASE("rotated cubes: bounding boxes match the corner projection")
{
    const auto cfg = render_config(160, 120);
    oracle::Gen gen(44);
    for (int trial = 0; trial < 60; ++trial) {
        SceneState s;
        s.agents = {rigid(1, {gen.uniform(-0.8, 0.8), gen.uniform(-0.6, 0.6), gen.uniform(4.0, 9.0)},
                          {gen.uniform(-180, 180), gen.uniform(-180, 180), gen.uniform(-180, 180)},
                          gen.uniform(0.5, 1.5))};
        const FrameSet f = render_frame(s, meshes(), cfg);
        const PixelBox b = box_of(f.agent_id, 1);
        double x0, x1, y0, y1;
        corner_extent(s.agents[0], cfg.camera, x0, x1, y0, y1);
        REQUIRE(b.count > 0);
        CHECK(std::abs(b.min_x - x0) <= 1.0);
        CHECK(std::abs(b.max_x + 1 - x1) <= 1.0);
        CHECK(std::abs(b.min_y - y0) <= 1.0);
        CHECK(std::abs(b.max_y + 1 - y1) <= 1.0);
    }
}

TEST_CASE("top-left rule: shared edges through pixel centres neither gap nor overlap")
{
    // 65x65 at 90 degrees: f = 32.5 and the cube's front face lands exactly on
    // pixel centres 28.5 and 36.5 in both axes, as does its diagonal.
    auto cfg = render_config(65, 65, 90.0);
    cfg.render.fog_density = 0.0;
    SceneState s;
    s.agents = {rigid(1, {0.0, 0.0, 4.5625})};
    const FrameSet f = render_frame(s, meshes(), cfg);
    const PixelBox b = box_of(f.agent_id, 1);
    CHECK(b.count == 64);
    CHECK(b.min_x == 28);
    CHECK(b.max_x == 35);
    CHECK(b.min_y == 28);
    CHECK(b.max_y == 35);
}

TEST_CASE("depth test agrees with a ray-cast oracle")
{
    auto cfg = render_config(96, 72);
    oracle::Gen gen(12);
    const double jitter = 0.02;
    for (int trial = 0; trial < 12; ++trial) {
        SceneState s;
        for (std::uint32_t id = 1; id <= 3; ++id)
            s.agents.push_back(rigid(id, {gen.uniform(-0.6, 0.6), gen.uniform(-0.5, 0.5), gen.uniform(3.0, 6.0)},
                                     {gen.uniform(-90, 90), gen.uniform(-90, 90), gen.uniform(-90, 90)},
                                     gen.uniform(0.6, 1.4)));
        const FrameSet f = render_frame(s, meshes(), cfg);
        long compared = 0;
        for (int y = 0; y < cfg.camera.height; ++y) {
            for (int x = 0; x < cfg.camera.width; ++x) {
                const double cx = x + 0.5;
                const double cy = y + 0.5;
                const std::uint32_t expect = ray_cast(s, cfg, cx, cy);
                bool ambiguous = false;
                for (auto [dx, dy] : {std::pair{jitter, 0.0}, {-jitter, 0.0}, {0.0, jitter}, {0.0, -jitter}})
                    ambiguous |= ray_cast(s, cfg, cx + dx, cy + dy) != expect;
                if (ambiguous)
                    continue;
                ++compared;
                REQUIRE(f.agent_id(y, x) == expect);
                if (expect != 0)
                    REQUIRE(std::isfinite(f.depth(y, x)));
            }
        }
        CHECK(compared > cfg.camera.width * cfg.camera.height * 9 / 10);
    }
}

TEST_CASE("equal depth keeps the lower id")
{
    auto cfg = render_config(64, 48);
    SceneState s;
    s.agents = {rigid(7, {0.0, 0.0, 5.0}), rigid(3, {0.0, 0.0, 5.0})};
    const FrameSet f = render_frame(s, meshes(), cfg);
    CHECK(box_of(f.agent_id, 3).count > 0);
    CHECK(box_of(f.agent_id, 7).count == 0);
}

TEST_CASE("near-plane clipping keeps geometry in front of the camera")
{
    auto cfg = render_config(80, 60);
    SceneState s;
    s.agents = {rigid(1, {0.2, 0.0, 0.3}, {10, 20, 30})};
    const FrameSet f = render_frame(s, meshes(), cfg);
    const PixelBox b = box_of(f.agent_id, 1);
    CHECK(b.count > 0);
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x)
            if (f.agent_id(y, x) != 0)
                CHECK(f.depth(y, x) >= cfg.camera.near - 1e-12);
    // Fully behind the camera: nothing drawn.
    s.agents = {rigid(1, {0.0, 0.0, -3.0})};
    CHECK((render_frame(s, meshes(), cfg).agent_id == 0u).all());
}

TEST_CASE("shading bounds and id consistency")
{
    auto cfg = render_config(120, 90);
    cfg.render.fog_density = 0.0;
    cfg.render.ambient = 0.25;
    cfg.classes.clear();
    for (ShapeId shape : kAllShapes) {
        AgentClassConfig c;
        c.shape = shape;
        cfg.classes.push_back(c);
    }
    oracle::Gen gen(99);
    SceneState s;
    for (std::uint32_t id = 1; id <= 12; ++id) {
        Agent a = rigid(id, {gen.uniform(-1.5, 1.5), gen.uniform(-1, 1), gen.uniform(4, 8)},
                        {gen.uniform(-180, 180), gen.uniform(-180, 180), gen.uniform(-180, 180)}, 1.0,
                        static_cast<int>(id - 1));
        SeededRng noise(1, "noise", id);
        a.noise = std::make_shared<const NoiseField>(build_noise_field(0.3, noise, 16));
        s.agents.push_back(a);
    }
    const FrameSet f = render_frame(s, meshes(), cfg);
    const FrameSet empty = render_frame(SceneState{}, meshes(), cfg);
    long covered = 0;
    for (int y = 0; y < f.height(); ++y) {
        for (int x = 0; x < f.width(); ++x) {
            const double v = f.intensity(y, x);
            REQUIRE(v >= 0.0);
            REQUIRE(v <= 1.0);
            if (f.agent_id(y, x) != 0) {
                ++covered;
                REQUIRE(std::isfinite(f.depth(y, x)));
                REQUIRE(v >= cfg.render.ambient - 1e-12);
            } else {
                REQUIRE(v == empty.intensity(y, x));
                REQUIRE(std::isinf(f.depth(y, x)));
            }
        }
    }
    CHECK(covered > 0);
}

TEST_CASE("dense fog drives covered pixels to the fog target")
{
    auto cfg = render_config(64, 48);
    cfg.render.fog_density = 1000.0;
    cfg.render.fog_target = 0.8;
    SceneState s;
    s.agents = {rigid(1, {0.0, 0.0, 5.0})};
    const FrameSet f = render_frame(s, meshes(), cfg);
    long covered = 0;
    for (int y = 0; y < f.height(); ++y)
        for (int x = 0; x < f.width(); ++x)
            if (f.agent_id(y, x) != 0) {
                ++covered;
                CHECK(f.intensity(y, x) == doctest::Approx(0.8).epsilon(1e-12));
            }
    CHECK(covered > 0);
}

TEST_CASE("Lambert shading of a face turned to the light")
{
    auto cfg = render_config(64, 48);
    cfg.render.fog_density = 0.0;
    cfg.render.ambient = 0.1;
    cfg.render.light_direction = {0.0, 0.0, -1.0}; // toward the camera
    SceneState s;
    s.agents = {rigid(1, {0.0, 0.0, 5.0})};
    const FrameSet f = render_frame(s, meshes(), cfg);
    // The front face normal is -z, fully lit.
    CHECK(f.intensity(24, 32) == doctest::Approx(1.0).epsilon(1e-12));
    cfg.render.light_direction = {0.0, 0.0, 1.0};
    CHECK(render_frame(s, meshes(), cfg).intensity(24, 32) == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("render_sequence is thread-count independent")
{
    auto cfg = render_config(120, 90);
    cfg.render.background_sigma = 0.02;
    cfg.agent_count = 6;
    cfg.frame_count = 9;
    cfg.stats.z = 1.0;
    cfg.classes[0].shape = ShapeId::torus;
    auto lib = std::make_shared<const MeshLibrary>(Tessellation{}, AssetPaths::bundled());
    const auto states = run_simulation(cfg, lib);
    const auto one = render_sequence(states, *lib, cfg, 1);
    const auto four = render_sequence(states, *lib, cfg, 4);
    REQUIRE(one.size() == states.size());
    REQUIRE(four.size() == states.size());
    for (std::size_t i = 0; i < one.size(); ++i) {
        CHECK((one[i].intensity == four[i].intensity).all());
        CHECK((one[i].agent_id == four[i].agent_id).all());
        CHECK((one[i].depth == four[i].depth).all());
    }
}

TEST_CASE("static scene without noise renders identical frames")
{
    auto cfg = render_config(100, 75);
    cfg.agent_count = 4;
    cfg.frame_count = 5;
    for (auto& b : cfg.classes[0].behaviours)
        b.sigma = 0.0;
    cfg.classes[0].behaviours[index_of(Behaviour::surface_noise)].mu = 0.0;
    auto lib = std::make_shared<const MeshLibrary>(Tessellation{}, AssetPaths::bundled());
    const auto frames = render_sequence(run_simulation(cfg, lib), *lib, cfg, 2);
    for (std::size_t i = 1; i < frames.size(); ++i)
        CHECK((frames[i].intensity == frames[0].intensity).all());
}
