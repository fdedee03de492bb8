#pragma once

#include <antgen/camera.hpp>
#include <antgen/grid.hpp>
#include <antgen/scene.hpp>

#include <span>
#include <vector>

namespace antgen {

/// Rendered outputs of one timestep.
struct FrameSet
{
    IntensityGrid intensity; // monochrome, [0, 1]
    IdGrid agent_id;         // 0 = background
    DepthGrid depth;         // camera-space z, +inf for background

    [[nodiscard]] int width() const noexcept { return static_cast<int>(intensity.cols()); }
    [[nodiscard]] int height() const noexcept { return static_cast<int>(intensity.rows()); }
};

/// Background-only frame: clamp(mean + N(0, sigma)) per pixel from rng.
FrameSet background_frame(const CameraConfig& camera, const RenderConfig& render, SeededRng& rng);

/// Z-buffered render of every agent: scale, then rotate (X, Y, Z), then
/// translate; near-plane clipping; top-left fill rule; strictly-closer depth
/// test with agents drawn in ascending id order; Lambert shading with the
/// agent's noise-perturbed normal; exponential depth fog.
FrameSet rasterize_scene(const SceneState& state, const MeshLibrary& meshes, const SceneConfig& config,
                         SeededRng& frame_rng);

/// Same, with the per-frame background stream (seed, "bg", frame_index).
FrameSet render_frame(const SceneState& state, const MeshLibrary& meshes, const SceneConfig& config);

/// Render many states; `threads` workers, output independent of thread count.
std::vector<FrameSet> render_sequence(std::span<const SceneState> states, const MeshLibrary& meshes,
                                      const SceneConfig& config, int threads = 1);

} // namespace antgen
