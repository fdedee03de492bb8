#include <antgen/scene.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace antgen {

using Eigen::Vector3d;

namespace {

constexpr std::array<std::string_view, kBehaviourCount> kBehaviourKeys = {
    "translation.x",   "translation.y",   "translation.z",   "rotation.x",      "rotation.y",      "rotation.z",
    "scale.x",         "scale.y",         "scale.z",         "init_rotation.x", "init_rotation.y", "init_rotation.z",
    "init_position.x", "init_position.y", "init_position.z", "surface_noise",
};

constexpr double kDegrees = std::numbers::pi / 180.0;

} // namespace

std::string_view behaviour_key(Behaviour b) noexcept
{
    return kBehaviourKeys[index_of(b)];
}

std::optional<Behaviour> parse_behaviour_key(std::string_view key) noexcept
{
    for (std::size_t i = 0; i < kBehaviourKeys.size(); ++i)
        if (kBehaviourKeys[i] == key)
            return static_cast<Behaviour>(i);
    return std::nullopt;
}

std::string_view to_string(EdgeMode mode) noexcept
{
    return mode == EdgeMode::respawn ? "respawn" : "bounce";
}

BehaviourTable default_behaviours()
{
    BehaviourTable t{};
    auto set_axes = [&t](Behaviour x_axis, Vector3d mu, Vector3d sigma) {
        for (int k = 0; k < 3; ++k)
            t[index_of(x_axis) + k] = BehaviourSpec{mu[k], sigma[k], true};
    };
    set_axes(Behaviour::translation_x, Vector3d::Zero(), Vector3d::Constant(1.0));
    set_axes(Behaviour::rotation_x, Vector3d::Zero(), Vector3d::Constant(90.0));
    set_axes(Behaviour::scale_x, Vector3d::Ones(), Vector3d::Constant(0.15));
    set_axes(Behaviour::init_rotation_x, Vector3d::Zero(), Vector3d::Constant(180.0));
    set_axes(Behaviour::init_position_x, Vector3d(0.0, 0.0, 8.0), Vector3d(1.0, 0.7, 1.0));
    t[index_of(Behaviour::surface_noise)] = BehaviourSpec{0.1, 0.05, true};
    return t;
}

void SceneConfig::validate() const
{
    if (agent_count < 1)
        throw std::invalid_argument("agents must be >= 1");
    if (frame_count < 1)
        throw std::invalid_argument("frames must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt))
        throw std::invalid_argument("dt must be > 0");
    if (classes.empty())
        throw std::invalid_argument("at least one class is required");
    if (noise_resolution < 1)
        throw std::invalid_argument("noise_resolution must be >= 1");
    for (std::size_t g = 0; g < classes.size(); ++g)
        for (std::size_t j = 0; j < kBehaviourCount; ++j)
            if (!(classes[g].behaviours[j].sigma >= 0.0))
                throw std::invalid_argument("classes[" + std::to_string(g) + "].behaviours." +
                                            std::string(kBehaviourKeys[j]) + ".sigma must be >= 0");
    stats.validate();
    camera.validate();
    render.validate();
    eventizer.validate();
    (void)class_likelihoods();
}

std::vector<double> SceneConfig::class_likelihoods() const
{
    std::vector<double> weights;
    weights.reserve(classes.size());
    for (const auto& c : classes)
        weights.push_back(c.weight);
    return normalize_class_weights(weights);
}

bool SceneConfig::operator==(const SceneConfig& o) const
{
    return seed == o.seed && agent_count == o.agent_count && frame_count == o.frame_count && dt == o.dt &&
           edge_mode == o.edge_mode && classes == o.classes && stats == o.stats && camera == o.camera &&
           render == o.render && eventizer == o.eventizer && tessellation.segments == o.tessellation.segments &&
           tessellation.subdivisions == o.tessellation.subdivisions && noise_resolution == o.noise_resolution &&
           assets == o.assets;
}

Eigen::Matrix3d Agent::rotation_matrix() const
{
    const Eigen::AngleAxisd rx(rotation.x() * kDegrees, Vector3d::UnitX());
    const Eigen::AngleAxisd ry(rotation.y() * kDegrees, Vector3d::UnitY());
    const Eigen::AngleAxisd rz(rotation.z() * kDegrees, Vector3d::UnitZ());
    return (rz * ry * rx).toRotationMatrix();
}

bool Agent::operator==(const Agent& o) const
{
    const bool same_noise = (!noise && !o.noise) ||
                            (noise && o.noise && noise->resolution == o.noise->resolution &&
                             noise->amplitude == o.noise->amplitude && noise->texels == o.noise->texels);
    return id == o.id && class_index == o.class_index && samples == o.samples && included == o.included &&
           score == o.score && position == o.position && rotation == o.rotation && scale == o.scale &&
           angular_velocity == o.angular_velocity && linear_velocity == o.linear_velocity &&
           surface_noise_amplitude == o.surface_noise_amplitude && spawn_time == o.spawn_time && same_noise;
}

Agent spawn_agent(const SceneConfig& config, std::span<const double> class_likelihoods, std::uint32_t id,
                  std::int64_t frame_index, SeededRng& rng)
{
    Agent agent;
    agent.id = id;
    agent.spawn_time = frame_index;

    // Inverse-CDF categorical draw; the last class absorbs rounding.
    const double u = rng.uniform_open();
    double cumulative = 0.0;
    agent.class_index = static_cast<int>(class_likelihoods.size()) - 1;
    for (std::size_t g = 0; g < class_likelihoods.size(); ++g) {
        cumulative += class_likelihoods[g];
        if (u < cumulative) {
            agent.class_index = static_cast<int>(g);
            break;
        }
    }

    const auto& table = config.classes[agent.class_index].behaviours;
    for (std::size_t j = 0; j < kBehaviourCount; ++j) {
        agent.samples[j] = sample_behaviour(table[j], config.stats, rng);
        agent.included[j] = table[j].counts_toward_anomaly();
    }
    agent.score = score_agent(agent.samples, agent.included, class_likelihoods[agent.class_index], config.stats);

    const auto visual = &BehaviourSample::value_visual;
    agent.linear_velocity = axis_values(agent.samples, Behaviour::translation_x, visual);
    agent.angular_velocity = axis_values(agent.samples, Behaviour::rotation_x, visual);
    agent.scale = axis_values(agent.samples, Behaviour::scale_x, visual).cwiseMax(kMinScale);
    agent.rotation = axis_values(agent.samples, Behaviour::init_rotation_x, visual);
    agent.position = axis_values(agent.samples, Behaviour::init_position_x, visual);
    agent.surface_noise_amplitude =
        std::clamp(agent.samples[index_of(Behaviour::surface_noise)].value_visual, 0.0, 1.0);
    return agent;
}

Agent spawn_agent(const SceneConfig& config, std::span<const double> class_likelihoods, std::uint32_t id,
                  std::int64_t frame_index)
{
    SeededRng rng(config.seed, "agent", id);
    return spawn_agent(config, class_likelihoods, id, frame_index, rng);
}

void attach_noise_field(Agent& agent, const SceneConfig& config)
{
    if (agent.surface_noise_amplitude <= 0.0) {
        agent.noise.reset();
        return;
    }
    SeededRng rng(config.seed, "noise", agent.id);
    agent.noise = std::make_shared<const NoiseField>(
        build_noise_field(agent.surface_noise_amplitude, rng, config.noise_resolution));
}

double agent_radius(const Agent& agent, const SceneConfig& config, const MeshLibrary& meshes)
{
    return meshes.bounding_radius(config.classes[agent.class_index].shape) * agent.scale.maxCoeff();
}

SceneState step(const SceneState& state, const SceneConfig& config)
{
    SceneState next = state;
    for (auto& agent : next.agents) {
        agent.position += agent.linear_velocity * config.dt;
        agent.rotation += agent.angular_velocity * config.dt;
    }
    next.frame_index += 1;
    return next;
}

namespace {

// A frustum boundary as an inward unit normal n and offset: inside when
// n . p >= offset.
struct Boundary
{
    Vector3d normal;
    double offset;
};

std::array<Boundary, 6> frustum_boundaries(const CameraConfig& camera)
{
    const auto sides = frustum_side_normals(camera);
    return {Boundary{sides[0], 0.0},
            Boundary{sides[1], 0.0},
            Boundary{sides[2], 0.0},
            Boundary{sides[3], 0.0},
            Boundary{Vector3d::UnitZ(), camera.near},
            Boundary{-Vector3d::UnitZ(), -camera.far}};
}

// Index of the boundary the agent has left through, if it has departed:
// sphere entirely outside that boundary and moving strictly away.
std::optional<std::size_t> departure_boundary(const Agent& agent, double radius,
                                              const std::array<Boundary, 6>& boundaries)
{
    std::optional<std::size_t> exit;
    double worst = 0.0;
    for (std::size_t i = 0; i < boundaries.size(); ++i) {
        const auto& b = boundaries[i];
        const double clearance = b.normal.dot(agent.position) - b.offset + radius;
        if (clearance < 0.0 && agent.linear_velocity.dot(b.normal) < 0.0 && (!exit || clearance < worst)) {
            exit = i;
            worst = clearance;
        }
    }
    return exit;
}

// Put a fresh agent just outside boundary `face` with velocity pointing in.
void place_on_face(Agent& agent, double radius, double depth, std::size_t face, const CameraConfig& camera,
                   const Boundary& boundary, SeededRng& rng)
{
    const double tx = camera.tan_half_fov_x();
    const double ty = camera.tan_half_fov_y();
    const double z = std::clamp(depth, camera.near, camera.far);
    const auto spread = [&rng](double half) { return (2.0 * rng.uniform_open() - 1.0) * half; };

    Vector3d on_face;
    Vector3d& v = agent.linear_velocity;
    switch (face) {
    case 0: // left: x = -tx z
        on_face = {-tx * z, spread(ty * z), z};
        v.x() = std::abs(v.x());
        break;
    case 1: // right
        on_face = {tx * z, spread(ty * z), z};
        v.x() = -std::abs(v.x());
        break;
    case 2: // bottom
        on_face = {spread(tx * z), -ty * z, z};
        v.y() = std::abs(v.y());
        break;
    case 3: // top
        on_face = {spread(tx * z), ty * z, z};
        v.y() = -std::abs(v.y());
        break;
    case 4: // near
        on_face = {spread(tx * camera.near), spread(ty * camera.near), camera.near};
        v.z() = std::abs(v.z());
        break;
    default: // far
        on_face = {spread(tx * camera.far), spread(ty * camera.far), camera.far};
        v.z() = -std::abs(v.z());
        break;
    }
    // Side planes tilt with depth, so the axial component alone may not be
    // enough to re-enter; recruit z as well.
    if (face < 4 && v.dot(boundary.normal) <= 0.0)
        v.z() = -v.z();
    agent.position = on_face - boundary.normal * radius * (1.0 + 1e-9);
}

void bounce(Agent& agent, double radius, const CameraConfig& camera)
{
    Vector3d& v = agent.linear_velocity;
    const Vector3d& p = agent.position;
    if (p.z() > camera.near) {
        const ScreenPoint c = project(p, camera);
        const double r_px = camera.focal_length() * radius / p.z();
        if ((c.x - r_px <= 0.0 && v.x() < 0.0) || (c.x + r_px >= camera.width && v.x() > 0.0))
            v.x() = -v.x();
        // Screen y grows downward.
        if ((c.y - r_px <= 0.0 && v.y() > 0.0) || (c.y + r_px >= camera.height && v.y() < 0.0))
            v.y() = -v.y();
    }
    if ((p.z() - radius <= camera.near && v.z() < 0.0) || (p.z() + radius >= camera.far && v.z() > 0.0))
        v.z() = -v.z();
}

} // namespace

SceneState handle_edges(const SceneState& state, const SceneConfig& config, const MeshLibrary& meshes)
{
    SceneState next = state;
    if (config.edge_mode == EdgeMode::bounce) {
        for (auto& agent : next.agents)
            bounce(agent, agent_radius(agent, config, meshes), config.camera);
        return next;
    }

    const auto boundaries = frustum_boundaries(config.camera);
    const auto likelihoods = config.class_likelihoods();
    for (auto& agent : next.agents) {
        const auto exit = departure_boundary(agent, agent_radius(agent, config, meshes), boundaries);
        if (!exit)
            continue;
        const double depth = agent.position.z();
        Agent fresh = spawn_agent(config, likelihoods, next.next_id++, next.frame_index);
        SeededRng placement(config.seed, "respawn", fresh.id);
        place_on_face(fresh, agent_radius(fresh, config, meshes), depth, *exit, config.camera, boundaries[*exit],
                      placement);
        attach_noise_field(fresh, config);
        agent = std::move(fresh);
    }
    return next;
}

SceneState populate_scene(const SceneConfig& config)
{
    const auto likelihoods = config.class_likelihoods();
    SceneState state;
    state.frame_index = 0;
    state.agents.reserve(static_cast<std::size_t>(config.agent_count));
    for (int n = 0; n < config.agent_count; ++n) {
        Agent agent = spawn_agent(config, likelihoods, state.next_id++, 0);
        attach_noise_field(agent, config);
        state.agents.push_back(std::move(agent));
    }
    return state;
}

Simulation::Simulation(SceneConfig config, std::shared_ptr<const MeshLibrary> meshes)
    : config_(std::move(config)), meshes_(std::move(meshes))
{
    config_.validate();
    if (!meshes_)
        throw std::invalid_argument("Simulation requires a mesh library");
}

const SceneState& Simulation::next()
{
    if (done())
        throw std::out_of_range("simulation produced all frames");
    if (produced_ == 0)
        state_ = populate_scene(config_);
    else
        state_ = handle_edges(step(state_, config_), config_, *meshes_);
    ++produced_;
    return state_;
}

std::vector<SceneState> run_simulation(const SceneConfig& config, std::shared_ptr<const MeshLibrary> meshes)
{
    Simulation sim(config, std::move(meshes));
    std::vector<SceneState> states;
    states.reserve(static_cast<std::size_t>(config.frame_count));
    while (!sim.done())
        states.push_back(sim.next());
    return states;
}

} // namespace antgen
