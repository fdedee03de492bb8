#pragma once

#include <antgen/camera.hpp>
#include <antgen/events.hpp>
#include <antgen/geometry.hpp>
#include <antgen/stats.hpp>

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace antgen {

/// The 16 sampled behaviours, in draw order.
enum class Behaviour : int
{
    translation_x,
    translation_y,
    translation_z,
    rotation_x,
    rotation_y,
    rotation_z,
    scale_x,
    scale_y,
    scale_z,
    init_rotation_x,
    init_rotation_y,
    init_rotation_z,
    init_position_x,
    init_position_y,
    init_position_z,
    surface_noise,
};

inline constexpr std::size_t kBehaviourCount = 16;

/// Dotted key such as "translation.x" or "surface_noise".
std::string_view behaviour_key(Behaviour b) noexcept;
std::optional<Behaviour> parse_behaviour_key(std::string_view key) noexcept;

template <typename T>
using PerBehaviour = std::array<T, kBehaviourCount>;

using BehaviourTable = PerBehaviour<BehaviourSpec>;

constexpr std::size_t index_of(Behaviour b) noexcept { return static_cast<std::size_t>(b); }

/// Built-in distributions used where a config leaves a behaviour unset.
BehaviourTable default_behaviours();

/// Three consecutive axis behaviours starting at `x_axis`.
template <typename T>
Eigen::Vector3d axis_values(const PerBehaviour<T>& table, Behaviour x_axis, double T::*field)
{
    const std::size_t i = index_of(x_axis);
    return {table[i].*field, table[i + 1].*field, table[i + 2].*field};
}

struct AgentClassConfig
{
    ShapeId shape = ShapeId::cuboid;
    double weight = 1.0;
    BehaviourTable behaviours = default_behaviours();

    bool operator==(const AgentClassConfig&) const = default;
};

enum class EdgeMode
{
    respawn,
    bounce,
};

std::string_view to_string(EdgeMode mode) noexcept;

struct SceneConfig
{
    std::uint64_t seed = 0;
    int agent_count = 1;
    int frame_count = 1;
    double dt = 0.001; // seconds per frame
    EdgeMode edge_mode = EdgeMode::respawn;
    std::vector<AgentClassConfig> classes;
    StatsConfig stats;
    CameraConfig camera;
    RenderConfig render;
    EventizerConfig eventizer;
    Tessellation tessellation;
    int noise_resolution = 64;
    AssetPaths assets = AssetPaths::bundled();

    /// Throws std::invalid_argument on the first violated constraint.
    void validate() const;
    /// Normalised class weights.
    [[nodiscard]] std::vector<double> class_likelihoods() const;

    bool operator==(const SceneConfig& other) const;
};

struct Agent
{
    std::uint32_t id = 0; // 0 is reserved for background
    int class_index = 0;
    PerBehaviour<BehaviourSample> samples{};
    PerBehaviour<bool> included{};
    AnomalyScore score;
    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    Eigen::Vector3d rotation = Eigen::Vector3d::Zero(); // Euler degrees
    Eigen::Vector3d scale = Eigen::Vector3d::Ones();
    Eigen::Vector3d angular_velocity = Eigen::Vector3d::Zero(); // degrees / s
    Eigen::Vector3d linear_velocity = Eigen::Vector3d::Zero();  // units / s
    double surface_noise_amplitude = 0.0;
    std::int64_t spawn_time = 0;
    std::shared_ptr<const NoiseField> noise; // null when the amplitude is zero

    /// R = Rz * Ry * Rx: X rotation applied first, then Y, then Z.
    [[nodiscard]] Eigen::Matrix3d rotation_matrix() const;

    bool operator==(const Agent& other) const;
};

struct SceneState
{
    std::int64_t frame_index = 0;
    std::vector<Agent> agents;
    std::uint32_t next_id = 1;

    bool operator==(const SceneState&) const = default;
};

/// Minimum per-axis scale after spawn-time clamping.
inline constexpr double kMinScale = 0.01;

/// Spawn from an explicit stream. `class_likelihoods` are the normalised
/// weights. One uniform picks the class, then 16 normals in Behaviour order.
Agent spawn_agent(const SceneConfig& config, std::span<const double> class_likelihoods, std::uint32_t id,
                  std::int64_t frame_index, SeededRng& rng);

/// Spawn from the agent's own stream (seed, "agent", id).
Agent spawn_agent(const SceneConfig& config, std::span<const double> class_likelihoods, std::uint32_t id,
                  std::int64_t frame_index);

/// Attach the static surface-noise texture from stream (seed, "noise", id).
void attach_noise_field(Agent& agent, const SceneConfig& config);

/// Bounding-sphere radius of an agent: mesh radius times its largest scale.
double agent_radius(const Agent& agent, const SceneConfig& config, const MeshLibrary& meshes);

/// Fixed-dt kinematics: position += v dt, rotation += omega dt, frame_index + 1.
SceneState step(const SceneState& state, const SceneConfig& config);

/// Respawn departed agents or bounce them off the viewport, per edge_mode.
SceneState handle_edges(const SceneState& state, const SceneConfig& config, const MeshLibrary& meshes);

/// Frame-0 scene with agents 1..N.
SceneState populate_scene(const SceneConfig& config);

/// Pull-based stream of T scene states; frame 0 is the populated scene.
class Simulation
{
public:
    Simulation(SceneConfig config, std::shared_ptr<const MeshLibrary> meshes);

    [[nodiscard]] bool done() const noexcept { return produced_ >= config_.frame_count; }
    /// Next state in sequence. Throws std::out_of_range past frame T-1.
    const SceneState& next();

    [[nodiscard]] const SceneConfig& config() const noexcept { return config_; }
    [[nodiscard]] const MeshLibrary& meshes() const noexcept { return *meshes_; }

private:
    SceneConfig config_;
    std::shared_ptr<const MeshLibrary> meshes_;
    SceneState state_;
    int produced_ = 0;
};

std::vector<SceneState> run_simulation(const SceneConfig& config, std::shared_ptr<const MeshLibrary> meshes);

} // namespace antgen
