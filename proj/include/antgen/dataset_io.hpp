#pragma once

#include <antgen/events.hpp>
#include <antgen/grid.hpp>
#include <antgen/scene.hpp>

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace antgen {

inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kGeneratorVersion = "antgen 1.0.0";

// ---------------------------------------------------------------------------
// Scene configuration (JSON). See docs/formats.md for the schema.

/// Config problem located by a path such as "classes[0].behaviours.scale.x.sigma".
class ConfigError : public std::runtime_error
{
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path + ": " + message), path_(std::move(path))
    {
    }
    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Parse and validate. Relative asset paths resolve against base_dir.
SceneConfig read_config(std::string_view text, const std::filesystem::path& base_dir = {});
SceneConfig read_config_file(const std::filesystem::path& path);

/// Fully resolved echo: every field explicit, rereads to an equal config.
nlohmann::json config_to_json(const SceneConfig& config);

// ---------------------------------------------------------------------------
// Binary PGM images

struct PgmImage
{
    int width = 0;
    int height = 0;
    int maxval = 255;
    std::vector<std::uint16_t> samples; // row-major
};

/// 8-bit P5, round(v * 255) of values clamped to [0, 1].
std::string write_frame(const IntensityGrid& intensity);

/// 16-bit big-endian P5 (maxval 65535). Throws std::out_of_range for ids >= 65536.
std::string write_id_mask(const IdGrid& ids);

/// 8-bit P5 with 0 -> 0, 0.5 -> 128, 1 -> 255. Throws std::invalid_argument otherwise.
std::string write_event_frame(const EventFrame& frame);

/// Inverse byte mapping of write_event_frame.
EventFrame event_frame_from_pgm(const PgmImage& image, std::int64_t timestamp_us);

/// Parses P5 with maxval <= 65535. Throws std::runtime_error on malformed data.
PgmImage read_pgm(std::string_view bytes);

IdGrid id_grid_from_pgm(const PgmImage& image);

/// frames/000007.pgm style name.
std::string frame_file_name(std::string_view directory, std::int64_t frame_index);

// ---------------------------------------------------------------------------
// Sparse events: 16-byte header then 13-byte little-endian records.

inline constexpr std::array<char, 8> kEventsMagic = {'A', 'N', 'T', 'G', 'E', 'V', 'T', 'S'};
inline constexpr std::uint32_t kEventsVersion = 1;
inline constexpr std::size_t kEventsHeaderSize = 16;
inline constexpr std::size_t kEventRecordSize = 13;

std::string events_header();
/// Records only (no header). Throws std::invalid_argument if not sorted by (t, y, x).
std::string encode_event_records(std::span<const EventRecord> records);
/// Header plus records.
std::string write_events(std::span<const EventRecord> records);
std::vector<EventRecord> read_events(std::string_view bytes);

// ---------------------------------------------------------------------------
// Labels (JSON lines)

struct BehaviourLabel
{
    double m = 0.0;
    double value_stat = 0.0;
    double value_visual = 0.0;
    double p = 1.0;
    bool included = false;
    bool operator==(const BehaviourLabel&) const = default;
};

struct BoundingBox
{
    int min_x = 0;
    int min_y = 0;
    int max_x = 0;
    int max_y = 0;
    bool operator==(const BoundingBox&) const = default;
};

struct AgentLabel
{
    std::uint32_t id = 0;
    int class_index = 0;
    std::string class_name;
    bool is_anomaly = false;
    double omega = 1.0;
    double r_bar = 1.0;
    double w_bar = 1.0;
    std::optional<BoundingBox> bbox;
    PerBehaviour<BehaviourLabel> behaviours{};
    bool operator==(const AgentLabel&) const = default;
};

struct FrameLabel
{
    std::int64_t frame_index = 0;
    std::int64_t timestamp_us = 0;
    std::vector<AgentLabel> agents;
    bool operator==(const FrameLabel&) const = default;
};

/// Tight pixel boxes per agent id found in the ID buffer.
std::vector<std::pair<std::uint32_t, BoundingBox>> tight_boxes(const IdGrid& ids);

FrameLabel make_frame_label(const SceneState& state, const SceneConfig& config, const IdGrid& ids);

/// One JSON object plus '\n'; reals with 17 significant digits.
std::string write_label_line(const FrameLabel& label);
FrameLabel parse_label_line(std::string_view line);
std::vector<FrameLabel> read_labels(std::string_view text);

// ---------------------------------------------------------------------------
// Manifest

struct ManifestEntry
{
    std::string path;
    std::uint64_t size = 0;
    std::uint64_t checksum = 0; // FNV-1a 64
};

struct DatasetManifest
{
    int format_version = kFormatVersion;
    std::string generator_version{kGeneratorVersion};
    int frame_count = 0;
    int width = 0;
    int height = 0;
    std::int64_t dt_us = 0;
    std::uint64_t event_count = 0;
    nlohmann::json config;
    std::vector<ManifestEntry> files;
};

/// The manifest carries the FNV-1a 64 of its own text, computed with the
/// digits of this field zeroed, so any single-byte edit is detectable.
inline constexpr std::string_view kManifestSelfKey = "manifest_fnv1a64";

std::string checksum_hex(std::uint64_t checksum);
std::string write_manifest(const DatasetManifest& manifest);
bool manifest_self_checksum_ok(std::string_view text);
DatasetManifest parse_manifest(std::string_view text);

// ---------------------------------------------------------------------------
// File helpers

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

} // namespace antgen
