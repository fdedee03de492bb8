#include <antgen/camera.hpp>

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace antgen {

void CameraConfig::validate() const
{
    if (width < 1 || height < 1)
        throw std::invalid_argument("camera resolution must be positive");
    if (!(fov_degrees > 1.0 && fov_degrees < 179.0))
        throw std::invalid_argument("camera.fov_degrees must lie in (1, 179)");
    if (!(near > 0.0))
        throw std::invalid_argument("camera.near must be > 0");
    if (!(far > near))
        throw std::invalid_argument("camera.far must exceed camera.near");
}

double CameraConfig::tan_half_fov_y() const
{
    return std::tan(0.5 * fov_degrees * std::numbers::pi / 180.0);
}

double CameraConfig::tan_half_fov_x() const
{
    return tan_half_fov_y() * static_cast<double>(width) / static_cast<double>(height);
}

double CameraConfig::focal_length() const
{
    return 0.5 * height / tan_half_fov_y();
}

void RenderConfig::validate() const
{
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!unit(background_mean))
        throw std::invalid_argument("render.background_mean must lie in [0, 1]");
    if (!(background_sigma >= 0.0))
        throw std::invalid_argument("render.background_sigma must be >= 0");
    if (!(fog_density >= 0.0))
        throw std::invalid_argument("render.fog_density must be >= 0");
    if (fog_target && !unit(*fog_target))
        throw std::invalid_argument("render.fog_target must lie in [0, 1]");
    if (!unit(ambient))
        throw std::invalid_argument("render.ambient must lie in [0, 1]");
    if (std::abs(light_direction.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("render.light_direction must be a unit vector");
}

ScreenPoint project(const Eigen::Vector3d& point, const CameraConfig& camera)
{
    const double f = camera.focal_length();
    return {0.5 * camera.width + f * (point.x() / point.z()), 0.5 * camera.height - f * (point.y() / point.z()),
            point.z()};
}

std::array<Eigen::Vector3d, 4> frustum_side_normals(const CameraConfig& camera)
{
    const double tx = camera.tan_half_fov_x();
    const double ty = camera.tan_half_fov_y();
    // Plane x = tx z has inward normal (-1, 0, tx) for the right side, etc.
    return {Eigen::Vector3d(1.0, 0.0, tx).normalized(), Eigen::Vector3d(-1.0, 0.0, tx).normalized(),
            Eigen::Vector3d(0.0, 1.0, ty).normalized(), Eigen::Vector3d(0.0, -1.0, ty).normalized()};
}

} // namespace antgen
