#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>

namespace antgen {

/// Static pinhole camera at the origin looking down +Z with +Y up.
struct CameraConfig
{
    int width = 346;
    int height = 260;
    double fov_degrees = 60.0; // vertical
    double near = 0.1;
    double far = 100.0;

    void validate() const;

    /// Focal length in pixels: (height / 2) / tan(fov / 2).
    [[nodiscard]] double focal_length() const;
    /// tan of the half field of view along x and y.
    [[nodiscard]] double tan_half_fov_x() const;
    [[nodiscard]] double tan_half_fov_y() const;

    bool operator==(const CameraConfig&) const = default;
};

struct RenderConfig
{
    double background_mean = 0.3;
    double background_sigma = 0.01;
    double fog_density = 0.02;
    std::optional<double> fog_target; // defaults to background_mean
    Eigen::Vector3d light_direction = Eigen::Vector3d(0.4, 0.6, -1.0).normalized(); // toward the light
    double ambient = 0.2;

    void validate() const;
    [[nodiscard]] double resolved_fog_target() const { return fog_target.value_or(background_mean); }

    bool operator==(const RenderConfig&) const = default;
};

struct ScreenPoint
{
    double x = 0.0;
    double y = 0.0;
    double depth = 0.0;
};

/// Perspective projection of a camera-space point with z > 0.
ScreenPoint project(const Eigen::Vector3d& point, const CameraConfig& camera);

/// Inward unit normals of the four side planes (left, right, bottom, top);
/// all pass through the origin.
std::array<Eigen::Vector3d, 4> frustum_side_normals(const CameraConfig& camera);

} // namespace antgen
