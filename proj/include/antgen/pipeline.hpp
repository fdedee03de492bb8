#pragma once

#include <antgen/dataset_io.hpp>
#include <antgen/raster.hpp>
#include <antgen/scene.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace antgen {

/// Receives every dataset file in a fixed order: per frame (frame, mask,
/// event frame), then events.bin, then labels.jsonl. Paths are relative.
using FileSink = std::function<void(const std::string& relative_path, std::string_view bytes)>;

/// Called after each frame is exported, with (frames_done, frame_count).
using ProgressFn = std::function<void(int, int)>;

struct ProduceSummary
{
    std::uint64_t event_count = 0;
};

/// Simulate, render, eventize and serialise a dataset. `threads` only
/// affects speed; the emitted bytes depend on the config alone.
ProduceSummary produce_dataset(const SceneConfig& config, int threads, const FileSink& sink,
                               const ProgressFn& progress = {});

/// Write a complete dataset under out_dir. Any stale manifest is removed
/// first and the new one is written last, so an interrupted run leaves none.
DatasetManifest generate_dataset(const SceneConfig& config, const std::filesystem::path& out_dir, int threads,
                                 const ProgressFn& progress = {});

// ---------------------------------------------------------------------------

struct PreviewImages
{
    std::int64_t frame_index = 0;
    std::string side_by_side; // P6: intensity | event view
    std::string overlay;      // P6: intensity with anomalous agents in red
};

/// Binary 8-bit RGB PPM, row-major (r, g, b) triples.
std::string write_ppm(int width, int height, std::string_view rgb);

/// Preview images for frames first..last inclusive, rendered through the
/// same path as generate.
std::vector<PreviewImages> preview_frames(const SceneConfig& config, std::int64_t first, std::int64_t last,
                                          int threads);

/// Writes preview_NNNNNN.ppm and overlay_NNNNNN.ppm into out_dir.
std::vector<std::filesystem::path> write_previews(std::span<const PreviewImages> images,
                                                  const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------

struct ValidationReport
{
    bool manifest_found = false;
    std::vector<std::string> failures;
    [[nodiscard]] bool ok() const noexcept { return manifest_found && failures.empty(); }
};

/// Checksums, file census, dense/sparse event agreement, label invariants
/// against the masks, and a full replay from the manifest's config echo.
ValidationReport validate_dataset(const std::filesystem::path& dataset_dir, int threads);

// ---------------------------------------------------------------------------

struct DatasetStats
{
    std::int64_t frame_count = 0;
    std::int64_t agent_count = 0; // distinct agent ids
    std::map<std::string, double> class_frequency;
    double anomaly_fraction = 0.0;
    std::vector<std::uint64_t> events_per_frame;
    std::vector<std::uint64_t> r_bar_histogram; // 20 bins over [0, 1]
};

inline constexpr int kHistogramBins = 20;

/// Per-agent figures use each distinct id once. Throws on unreadable files.
DatasetStats compute_stats(const std::filesystem::path& dataset_dir);
std::string stats_text(const DatasetStats& stats);
nlohmann::json stats_json(const DatasetStats& stats);

} // namespace antgen
