#include <antgen/pipeline.hpp>

#include <antgen/rng.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <set>
#include <sstream>
#include <unordered_map>

namespace antgen {

namespace fs = std::filesystem;

namespace {

constexpr const char* kFramesDir = "frames";
constexpr const char* kMasksDir = "masks";
constexpr const char* kEventsDir = "events";
constexpr const char* kEventsFile = "events.bin";
constexpr const char* kLabelsFile = "labels.jsonl";
constexpr const char* kManifestFile = "manifest.json";

std::size_t chunk_size(int threads)
{
    return static_cast<std::size_t>(std::max(8, 4 * threads));
}

std::int64_t dt_microseconds(double dt)
{
    return std::llround(dt * 1e6);
}

} // namespace

ProduceSummary produce_dataset(const SceneConfig& config, int threads, const FileSink& sink,
                               const ProgressFn& progress)
{
    config.validate();
    auto meshes = std::make_shared<const MeshLibrary>(config.tessellation, config.assets);
    Simulation sim(config, meshes);
    Eventizer eventizer(config.eventizer, config.dt);

    std::string events_bin = events_header();
    std::string labels;
    ProduceSummary summary;
    int done = 0;

    std::vector<SceneState> chunk;
    while (!sim.done()) {
        chunk.clear();
        while (!sim.done() && chunk.size() < chunk_size(threads))
            chunk.push_back(sim.next());
        const auto frames = render_sequence(chunk, *meshes, config, threads);

        for (std::size_t i = 0; i < chunk.size(); ++i) {
            const SceneState& state = chunk[i];
            const FrameSet& frame = frames[i];
            const EventFrame events = eventizer.feed(frame.intensity, state.frame_index);

            sink(frame_file_name(kFramesDir, state.frame_index), write_frame(frame.intensity));
            sink(frame_file_name(kMasksDir, state.frame_index), write_id_mask(frame.agent_id));
            sink(frame_file_name(kEventsDir, state.frame_index), write_event_frame(events));

            const auto records = to_sparse(events);
            summary.event_count += records.size();
            events_bin += encode_event_records(records);
            labels += write_label_line(make_frame_label(state, config, frame.agent_id));
            if (progress)
                progress(++done, config.frame_count);
        }
    }
    sink(kEventsFile, events_bin);
    sink(kLabelsFile, labels);
    return summary;
}

DatasetManifest generate_dataset(const SceneConfig& config, const fs::path& out_dir, int threads,
                                 const ProgressFn& progress)
{
    fs::create_directories(out_dir);
    fs::remove(out_dir / kManifestFile);
    for (const char* sub : {kFramesDir, kMasksDir, kEventsDir})
        fs::create_directories(out_dir / sub);

    DatasetManifest manifest;
    manifest.frame_count = config.frame_count;
    manifest.width = config.camera.width;
    manifest.height = config.camera.height;
    manifest.dt_us = dt_microseconds(config.dt);
    manifest.config = config_to_json(config);

    const auto sink = [&](const std::string& rel, std::string_view bytes) {
        write_file(out_dir / rel, bytes);
        manifest.files.push_back({rel, bytes.size(), fnv1a64(bytes)});
    };
    manifest.event_count = produce_dataset(config, threads, sink, progress).event_count;
    write_file(out_dir / kManifestFile, write_manifest(manifest));
    return manifest;
}

// ---------------------------------------------------------------------------
// Preview

std::string write_ppm(int width, int height, std::string_view rgb)
{
    if (rgb.size() != static_cast<std::size_t>(width) * height * 3)
        throw std::invalid_argument("write_ppm: pixel buffer size mismatch");
    std::string out = "P6 " + std::to_string(width) + " " + std::to_string(height) + " 255\n";
    out.append(rgb);
    return out;
}

namespace {

std::uint8_t quantise(double v)
{
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

PreviewImages compose_preview(const SceneState& state, const FrameSet& frame, const EventFrame& events)
{
    const int w = frame.width();
    const int h = frame.height();
    std::set<std::uint32_t> anomalous;
    for (const auto& a : state.agents)
        if (a.score.is_anomaly)
            anomalous.insert(a.id);

    std::string pair(static_cast<std::size_t>(2 * w) * h * 3, '\0');
    std::string overlay(static_cast<std::size_t>(w) * h * 3, '\0');
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto g = static_cast<char>(quantise(frame.intensity(y, x)));
            const auto e = static_cast<char>(quantise(events.values(y, x)));
            const std::size_t left = (static_cast<std::size_t>(y) * 2 * w + x) * 3;
            const std::size_t right = left + static_cast<std::size_t>(w) * 3;
            pair[left] = pair[left + 1] = pair[left + 2] = g;
            pair[right] = pair[right + 1] = pair[right + 2] = e;

            const std::size_t o = (static_cast<std::size_t>(y) * w + x) * 3;
            if (anomalous.count(frame.agent_id(y, x)) != 0) {
                overlay[o] = static_cast<char>(255);
                overlay[o + 1] = overlay[o + 2] = 0;
            } else {
                overlay[o] = overlay[o + 1] = overlay[o + 2] = g;
            }
        }
    }
    return {state.frame_index, write_ppm(2 * w, h, pair), write_ppm(w, h, overlay)};
}

} // namespace

std::vector<PreviewImages> preview_frames(const SceneConfig& config, std::int64_t first, std::int64_t last,
                                          int threads)
{
    config.validate();
    if (first < 0 || last < first || last >= config.frame_count)
        throw std::invalid_argument("preview: frame range must satisfy 0 <= first <= last < frames");

    auto meshes = std::make_shared<const MeshLibrary>(config.tessellation, config.assets);
    Simulation sim(config, meshes);
    Eventizer eventizer(config.eventizer, config.dt);
    // The event view needs frame first-1 as its predecessor.
    const std::int64_t start = std::max<std::int64_t>(0, first - 1);

    std::vector<SceneState> states;
    while (!sim.done()) {
        const SceneState& s = sim.next();
        if (s.frame_index >= start)
            states.push_back(s);
        if (s.frame_index == last)
            break;
    }
    const auto frames = render_sequence(states, *meshes, config, threads);

    std::vector<PreviewImages> images;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const EventFrame events = eventizer.feed(frames[i].intensity, states[i].frame_index);
        if (states[i].frame_index >= first)
            images.push_back(compose_preview(states[i], frames[i], events));
    }
    return images;
}

std::vector<fs::path> write_previews(std::span<const PreviewImages> images, const fs::path& out_dir)
{
    fs::create_directories(out_dir);
    std::vector<fs::path> written;
    for (const auto& img : images) {
        char name[48];
        std::snprintf(name, sizeof name, "preview_%06lld.ppm", static_cast<long long>(img.frame_index));
        written.push_back(out_dir / name);
        write_file(written.back(), img.side_by_side);
        std::snprintf(name, sizeof name, "overlay_%06lld.ppm", static_cast<long long>(img.frame_index));
        written.push_back(out_dir / name);
        write_file(written.back(), img.overlay);
    }
    return written;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Checker
{
public:
    explicit Checker(ValidationReport& report) : report_(report) {}

    void fail(std::string message) { report_.failures.push_back(std::move(message)); }

    template <typename Fn>
    void guarded(const std::string& context, Fn&& fn)
    {
        try {
            fn();
        } catch (const std::exception& e) {
            fail(context + ": " + e.what());
        }
    }

private:
    ValidationReport& report_;
};

void check_checksums(const fs::path& dir, const DatasetManifest& manifest, Checker& check,
                     std::unordered_map<std::string, std::string>& contents)
{
    for (const auto& entry : manifest.files) {
        check.guarded(entry.path, [&] {
            const fs::path p = dir / entry.path;
            if (!fs::exists(p)) {
                check.fail(entry.path + ": missing");
                return;
            }
            std::string bytes = read_file(p);
            if (bytes.size() != entry.size)
                check.fail(entry.path + ": size " + std::to_string(bytes.size()) + " differs from manifest " +
                           std::to_string(entry.size));
            else if (fnv1a64(bytes) != entry.checksum)
                check.fail(entry.path + ": checksum " + checksum_hex(fnv1a64(bytes)) + " differs from manifest " +
                           checksum_hex(entry.checksum));
            contents.emplace(entry.path, std::move(bytes));
        });
    }
}

void check_census(const DatasetManifest& manifest, Checker& check)
{
    std::set<std::string> listed;
    for (const auto& e : manifest.files)
        listed.insert(e.path);
    for (std::int64_t t = 0; t < manifest.frame_count; ++t)
        for (const char* sub : {kFramesDir, kMasksDir, kEventsDir})
            if (listed.count(frame_file_name(sub, t)) == 0)
                check.fail("manifest: " + frame_file_name(sub, t) + " not listed");
    for (const char* f : {kEventsFile, kLabelsFile})
        if (listed.count(f) == 0)
            check.fail(std::string("manifest: ") + f + " not listed");
}

const std::string* find(const std::unordered_map<std::string, std::string>& contents, const std::string& key)
{
    const auto it = contents.find(key);
    return it == contents.end() ? nullptr : &it->second;
}

void check_events(const DatasetManifest& manifest, double dt,
                  const std::unordered_map<std::string, std::string>& contents, Checker& check)
{
    const std::string* bin = find(contents, kEventsFile);
    if (!bin)
        return;
    std::vector<EventRecord> records;
    check.guarded(kEventsFile, [&] { records = read_events(*bin); });
    if (records.size() != manifest.event_count)
        check.fail(std::string(kEventsFile) + ": " + std::to_string(records.size()) +
                   " records but manifest says " + std::to_string(manifest.event_count));

    std::size_t cursor = 0;
    for (std::int64_t t = 0; t < manifest.frame_count; ++t) {
        const std::int64_t stamp = frame_timestamp_us(t, dt);
        std::size_t end = cursor;
        while (end < records.size() && records[end].t == stamp)
            ++end;
        const std::string name = frame_file_name(kEventsDir, t);
        const std::string* dense = find(contents, name);
        if (!dense)
            continue;
        check.guarded(name, [&] {
            const EventFrame stored = event_frame_from_pgm(read_pgm(*dense), stamp);
            const EventFrame sparse = from_sparse(std::span(records).subspan(cursor, end - cursor), manifest.width,
                                                  manifest.height, stamp);
            if (!(stored == sparse))
                check.fail(name + ": disagrees with events.bin");
        });
        cursor = end;
    }
    if (cursor != records.size())
        check.fail(std::string(kEventsFile) + ": records with timestamps outside the frame grid");
}

void check_labels(const DatasetManifest& manifest, const SceneConfig& config,
                  const std::unordered_map<std::string, std::string>& contents, Checker& check)
{
    const std::string* text = find(contents, kLabelsFile);
    if (!text)
        return;
    std::vector<FrameLabel> labels;
    check.guarded(kLabelsFile, [&] { labels = read_labels(*text); });
    if (labels.size() != static_cast<std::size_t>(manifest.frame_count))
        check.fail(std::string(kLabelsFile) + ": " + std::to_string(labels.size()) + " frames, expected " +
                   std::to_string(manifest.frame_count));

    for (const auto& label : labels) {
        const std::string where = std::string(kLabelsFile) + " frame " + std::to_string(label.frame_index);
        for (const auto& a : label.agents) {
            const std::string who = where + " agent " + std::to_string(a.id);
            if (a.omega != a.w_bar * a.r_bar)
                check.fail(who + ": omega != w_bar * r_bar");
            if (a.is_anomaly != label_anomaly(a.omega, config.stats.v))
                check.fail(who + ": is_anomaly disagrees with omega <= v");
        }
        const std::string mask_name = frame_file_name(kMasksDir, label.frame_index);
        const std::string* mask = find(contents, mask_name);
        if (!mask)
            continue;
        check.guarded(mask_name, [&] {
            const auto boxes = tight_boxes(id_grid_from_pgm(read_pgm(*mask)));
            std::map<std::uint32_t, BoundingBox> expected(boxes.begin(), boxes.end());
            for (const auto& a : label.agents) {
                const auto it = expected.find(a.id);
                const std::optional<BoundingBox> truth =
                    it == expected.end() ? std::nullopt : std::optional<BoundingBox>(it->second);
                if (truth != a.bbox)
                    check.fail(where + " agent " + std::to_string(a.id) + ": bbox disagrees with " + mask_name);
                if (it != expected.end())
                    expected.erase(it);
            }
            for (const auto& [id, box] : expected)
                check.fail(mask_name + ": id " + std::to_string(id) + " has no label");
        });
    }
}

void check_replay(const SceneConfig& config, int threads,
                  const std::unordered_map<std::string, std::string>& contents, Checker& check)
{
    check.guarded("replay", [&] {
        produce_dataset(config, threads, [&](const std::string& rel, std::string_view bytes) {
            const std::string* stored = find(contents, rel);
            if (stored && *stored != bytes)
                check.fail(rel + ": differs from a replay of the recorded config");
        });
    });
}

} // namespace

ValidationReport validate_dataset(const fs::path& dir, int threads)
{
    ValidationReport report;
    Checker check(report);
    const fs::path manifest_path = dir / kManifestFile;
    if (!fs::exists(manifest_path))
        return report;
    report.manifest_found = true;

    DatasetManifest manifest;
    try {
        const std::string text = read_file(manifest_path);
        if (!manifest_self_checksum_ok(text))
            check.fail(std::string(kManifestFile) + ": self checksum mismatch");
        manifest = parse_manifest(text);
    } catch (const std::exception& e) {
        check.fail(std::string(kManifestFile) + ": " + e.what());
        return report;
    }

    std::optional<SceneConfig> config;
    check.guarded(std::string(kManifestFile) + " config", [&] { config = read_config(manifest.config.dump()); });

    std::unordered_map<std::string, std::string> contents;
    check_checksums(dir, manifest, check, contents);
    check_census(manifest, check);
    check_events(manifest, config ? config->dt : manifest.dt_us * 1e-6, contents, check);
    if (config) {
        if (config->frame_count != manifest.frame_count || config->camera.width != manifest.width ||
            config->camera.height != manifest.height || dt_microseconds(config->dt) != manifest.dt_us)
            check.fail(std::string(kManifestFile) + ": header disagrees with config echo");
        check_labels(manifest, *config, contents, check);
        check_replay(*config, threads, contents, check);
    }
    return report;
}

// ---------------------------------------------------------------------------
// Statistics

DatasetStats compute_stats(const fs::path& dir)
{
    const DatasetManifest manifest = parse_manifest(read_file(dir / kManifestFile));
    const auto labels = read_labels(read_file(dir / kLabelsFile));
    const auto records = read_events(read_file(dir / kEventsFile));

    DatasetStats stats;
    stats.frame_count = manifest.frame_count;
    stats.r_bar_histogram.assign(kHistogramBins, 0);

    std::set<std::uint32_t> seen;
    std::map<std::string, std::int64_t> class_counts;
    std::int64_t anomalies = 0;
    for (const auto& frame : labels) {
        for (const auto& a : frame.agents) {
            if (!seen.insert(a.id).second)
                continue;
            ++class_counts[a.class_name];
            anomalies += a.is_anomaly ? 1 : 0;
            const int bin = std::clamp(static_cast<int>(a.r_bar * kHistogramBins), 0, kHistogramBins - 1);
            ++stats.r_bar_histogram[static_cast<std::size_t>(bin)];
        }
    }
    stats.agent_count = static_cast<std::int64_t>(seen.size());
    for (const auto& [name, count] : class_counts)
        stats.class_frequency[name] = static_cast<double>(count) / static_cast<double>(stats.agent_count);
    stats.anomaly_fraction =
        stats.agent_count > 0 ? static_cast<double>(anomalies) / static_cast<double>(stats.agent_count) : 0.0;

    std::map<std::int64_t, std::uint64_t> per_stamp;
    for (const auto& r : records)
        ++per_stamp[r.t];
    for (const auto& frame : labels) {
        const auto it = per_stamp.find(frame.timestamp_us);
        stats.events_per_frame.push_back(it == per_stamp.end() ? 0 : it->second);
    }
    return stats;
}

std::string stats_text(const DatasetStats& stats)
{
    std::ostringstream out;
    char buf[96];
    out << "frames: " << stats.frame_count << "\n";
    out << "agents: " << stats.agent_count << "\n";
    out << "class frequencies:\n";
    for (const auto& [name, f] : stats.class_frequency) {
        std::snprintf(buf, sizeof buf, "  %-12s %.6f\n", name.c_str(), f);
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "anomaly fraction: %.6f\n", stats.anomaly_fraction);
    out << buf;
    std::uint64_t total = 0;
    for (auto n : stats.events_per_frame)
        total += n;
    out << "events: " << total << " total\n";
    for (std::size_t t = 0; t < stats.events_per_frame.size(); ++t)
        out << "  frame " << t << ": " << stats.events_per_frame[t] << "\n";
    out << "r_bar histogram:\n";
    for (int b = 0; b < kHistogramBins; ++b) {
        std::snprintf(buf, sizeof buf, "  [%.2f, %.2f%c %llu\n", b / double(kHistogramBins),
                      (b + 1) / double(kHistogramBins), b + 1 == kHistogramBins ? ']' : ')',
                      static_cast<unsigned long long>(stats.r_bar_histogram[static_cast<std::size_t>(b)]));
        out << buf;
    }
    return out.str();
}

nlohmann::json stats_json(const DatasetStats& stats)
{
    return {{"frames", stats.frame_count},
            {"agents", stats.agent_count},
            {"class_frequency", stats.class_frequency},
            {"anomaly_fraction", stats.anomaly_fraction},
            {"events_per_frame", stats.events_per_frame},
            {"r_bar_histogram", stats.r_bar_histogram}};
}

} // namespace antgen
