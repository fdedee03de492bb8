#include <antgen/dataset_io.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace antgen {

using nlohmann::json;

// ---------------------------------------------------------------------------
// PGM

namespace {

std::string pgm_header(Eigen::Index width, Eigen::Index height, int maxval)
{
    return "P5 " + std::to_string(width) + " " + std::to_string(height) + " " + std::to_string(maxval) + "\n";
}

std::uint8_t event_byte(float v)
{
    if (v == kEventOff)
        return 0;
    if (v == kEventNone)
        return 128;
    if (v == kEventOn)
        return 255;
    throw std::invalid_argument("event frame holds an illegal value " + std::to_string(v));
}

} // namespace

std::string write_frame(const IntensityGrid& intensity)
{
    std::string out = pgm_header(intensity.cols(), intensity.rows(), 255);
    out.reserve(out.size() + static_cast<std::size_t>(intensity.size()));
    for (Eigen::Index y = 0; y < intensity.rows(); ++y)
        for (Eigen::Index x = 0; x < intensity.cols(); ++x)
            out.push_back(static_cast<char>(std::lround(std::clamp(intensity(y, x), 0.0, 1.0) * 255.0)));
    return out;
}

std::string write_id_mask(const IdGrid& ids)
{
    std::string out = pgm_header(ids.cols(), ids.rows(), 65535);
    out.reserve(out.size() + 2 * static_cast<std::size_t>(ids.size()));
    for (Eigen::Index y = 0; y < ids.rows(); ++y) {
        for (Eigen::Index x = 0; x < ids.cols(); ++x) {
            const std::uint32_t id = ids(y, x);
            if (id > 0xffff)
                throw std::out_of_range("agent id " + std::to_string(id) + " does not fit a 16-bit mask");
            out.push_back(static_cast<char>(id >> 8));
            out.push_back(static_cast<char>(id & 0xff));
        }
    }
    return out;
}

std::string write_event_frame(const EventFrame& frame)
{
    std::string out = pgm_header(frame.values.cols(), frame.values.rows(), 255);
    for (Eigen::Index y = 0; y < frame.values.rows(); ++y)
        for (Eigen::Index x = 0; x < frame.values.cols(); ++x)
            out.push_back(static_cast<char>(event_byte(frame.values(y, x))));
    return out;
}

EventFrame event_frame_from_pgm(const PgmImage& image, std::int64_t timestamp_us)
{
    EventFrame frame = quiet_frame(image.width, image.height, timestamp_us);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            const auto b = image.samples[static_cast<std::size_t>(y) * image.width + x];
            if (b == 0)
                frame.values(y, x) = kEventOff;
            else if (b == 255)
                frame.values(y, x) = kEventOn;
            else if (b != 128)
                throw std::invalid_argument("event frame byte " + std::to_string(b) + " is not 0, 128 or 255");
        }
    }
    return frame;
}

PgmImage read_pgm(std::string_view bytes)
{
    std::size_t pos = 0;
    const auto skip_space = [&] {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
                ++pos;
            } else {
                break;
            }
        }
    };
    const auto read_int = [&](const char* what) {
        skip_space();
        long value = 0;
        std::size_t digits = 0;
        while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            value = value * 10 + (bytes[pos++] - '0');
            if (value > 1 << 24)
                throw std::runtime_error(std::string("PGM ") + what + " too large");
            ++digits;
        }
        if (digits == 0)
            throw std::runtime_error(std::string("PGM: malformed ") + what);
        return static_cast<int>(value);
    };

    if (bytes.substr(0, 2) != "P5")
        throw std::runtime_error("PGM: missing P5 magic");
    pos = 2;
    PgmImage img;
    img.width = read_int("width");
    img.height = read_int("height");
    img.maxval = read_int("maxval");
    if (img.maxval < 1 || img.maxval > 65535)
        throw std::runtime_error("PGM: maxval out of range");
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
        throw std::runtime_error("PGM: header not terminated");
    ++pos;
    const std::size_t bytes_per_sample = img.maxval > 255 ? 2 : 1;
    const std::size_t count = static_cast<std::size_t>(img.width) * img.height;
    if (bytes.size() - pos != count * bytes_per_sample)
        throw std::runtime_error("PGM: pixel data size mismatch");
    img.samples.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (bytes_per_sample == 1) {
            img.samples[i] = static_cast<unsigned char>(bytes[pos + i]);
        } else {
            const auto hi = static_cast<unsigned char>(bytes[pos + 2 * i]);
            const auto lo = static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
            img.samples[i] = static_cast<std::uint16_t>((hi << 8) | lo);
        }
        if (img.samples[i] > img.maxval)
            throw std::runtime_error("PGM: sample exceeds maxval");
    }
    return img;
}

IdGrid id_grid_from_pgm(const PgmImage& image)
{
    IdGrid ids(image.height, image.width);
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x)
            ids(y, x) = image.samples[static_cast<std::size_t>(y) * image.width + x];
    return ids;
}

std::string frame_file_name(std::string_view directory, std::int64_t frame_index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06lld.pgm", static_cast<long long>(frame_index));
    return std::string(directory) + "/" + buf;
}

// ---------------------------------------------------------------------------
// events.bin

namespace {

template <typename T>
void put_le(std::string& out, T value)
{
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<char>(u & 0xff));
        u = static_cast<U>(u >> 8);
    }
}

template <typename T>
T get_le(std::string_view bytes, std::size_t offset)
{
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        u |= static_cast<U>(static_cast<U>(static_cast<unsigned char>(bytes[offset + i])) << (8 * i));
    return static_cast<T>(u);
}

} // namespace

std::string events_header()
{
    std::string out(kEventsMagic.begin(), kEventsMagic.end());
    put_le<std::uint32_t>(out, kEventsVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kEventRecordSize));
    return out;
}

std::string encode_event_records(std::span<const EventRecord> records)
{
    std::string out;
    out.reserve(records.size() * kEventRecordSize);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (i > 0 && !event_before(records[i - 1], r))
            throw std::invalid_argument("write_events: records not strictly sorted by (t, y, x)");
        if (r.t < 0 || (r.polarity != 1 && r.polarity != -1))
            throw std::invalid_argument("write_events: invalid record");
        put_le<std::uint64_t>(out, static_cast<std::uint64_t>(r.t));
        put_le<std::uint16_t>(out, r.x);
        put_le<std::uint16_t>(out, r.y);
        put_le<std::int8_t>(out, r.polarity);
    }
    return out;
}

std::string write_events(std::span<const EventRecord> records)
{
    return events_header() + encode_event_records(records);
}

std::vector<EventRecord> read_events(std::string_view bytes)
{
    if (bytes.size() < kEventsHeaderSize || std::memcmp(bytes.data(), kEventsMagic.data(), kEventsMagic.size()) != 0)
        throw std::runtime_error("events.bin: bad magic");
    if (get_le<std::uint32_t>(bytes, 8) != kEventsVersion)
        throw std::runtime_error("events.bin: unsupported version");
    if (get_le<std::uint32_t>(bytes, 12) != kEventRecordSize)
        throw std::runtime_error("events.bin: unexpected record size");
    const std::size_t payload = bytes.size() - kEventsHeaderSize;
    if (payload % kEventRecordSize != 0)
        throw std::runtime_error("events.bin: truncated record");
    std::vector<EventRecord> records(payload / kEventRecordSize);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const std::size_t at = kEventsHeaderSize + i * kEventRecordSize;
        records[i].t = static_cast<std::int64_t>(get_le<std::uint64_t>(bytes, at));
        records[i].x = get_le<std::uint16_t>(bytes, at + 8);
        records[i].y = get_le<std::uint16_t>(bytes, at + 10);
        records[i].polarity = get_le<std::int8_t>(bytes, at + 12);
        if (records[i].polarity != 1 && records[i].polarity != -1)
            throw std::runtime_error("events.bin: polarity must be +1 or -1");
    }
    return records;
}

// ---------------------------------------------------------------------------
// Labels

std::vector<std::pair<std::uint32_t, BoundingBox>> tight_boxes(const IdGrid& ids)
{
    std::map<std::uint32_t, BoundingBox> boxes;
    for (int y = 0; y < ids.rows(); ++y) {
        for (int x = 0; x < ids.cols(); ++x) {
            const std::uint32_t id = ids(y, x);
            if (id == 0)
                continue;
            auto [it, inserted] = boxes.try_emplace(id, BoundingBox{x, y, x, y});
            if (!inserted) {
                auto& b = it->second;
                b.min_x = std::min(b.min_x, x);
                b.min_y = std::min(b.min_y, y);
                b.max_x = std::max(b.max_x, x);
                b.max_y = std::max(b.max_y, y);
            }
        }
    }
    return {boxes.begin(), boxes.end()};
}

FrameLabel make_frame_label(const SceneState& state, const SceneConfig& config, const IdGrid& ids)
{
    const auto boxes = tight_boxes(ids);
    FrameLabel label;
    label.frame_index = state.frame_index;
    label.timestamp_us = frame_timestamp_us(state.frame_index, config.dt);
    for (const auto& agent : state.agents) {
        AgentLabel a;
        a.id = agent.id;
        a.class_index = agent.class_index;
        a.class_name = std::string(shape_name(config.classes[agent.class_index].shape));
        a.is_anomaly = agent.score.is_anomaly;
        a.omega = agent.score.omega;
        a.r_bar = agent.score.r_bar;
        a.w_bar = agent.score.w_bar;
        const auto it = std::lower_bound(boxes.begin(), boxes.end(), agent.id,
                                         [](const auto& entry, std::uint32_t id) { return entry.first < id; });
        if (it != boxes.end() && it->first == agent.id)
            a.bbox = it->second;
        for (std::size_t j = 0; j < kBehaviourCount; ++j) {
            const auto& s = agent.samples[j];
            a.behaviours[j] = {s.m, s.value_stat, s.value_visual, s.p, agent.included[j]};
        }
        label.agents.push_back(std::move(a));
    }
    return label;
}

namespace {

void append_real(std::string& out, double v)
{
    if (!std::isfinite(v))
        throw std::invalid_argument("labels: non-finite value");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void append_key(std::string& out, std::string_view key)
{
    out += '"';
    out += key;
    out += "\":";
}

double real_field(const json& j, const char* key)
{
    return j.at(key).get<double>();
}

} // namespace

std::string write_label_line(const FrameLabel& label)
{
    std::string out;
    out += "{\"frame\":" + std::to_string(label.frame_index);
    out += ",\"t_us\":" + std::to_string(label.timestamp_us);
    out += ",\"agents\":[";
    for (std::size_t i = 0; i < label.agents.size(); ++i) {
        const auto& a = label.agents[i];
        if (i > 0)
            out += ',';
        out += "{\"id\":" + std::to_string(a.id);
        out += ",\"class\":\"" + a.class_name + "\"";
        out += ",\"class_index\":" + std::to_string(a.class_index);
        out += std::string(",\"is_anomaly\":") + (a.is_anomaly ? "true" : "false");
        out += ',';
        append_key(out, "omega");
        append_real(out, a.omega);
        out += ',';
        append_key(out, "r_bar");
        append_real(out, a.r_bar);
        out += ',';
        append_key(out, "w_bar");
        append_real(out, a.w_bar);
        if (a.bbox) {
            const auto& b = *a.bbox;
            out += ",\"bbox\":[" + std::to_string(b.min_x) + "," + std::to_string(b.min_y) + "," +
                   std::to_string(b.max_x) + "," + std::to_string(b.max_y) + "]";
        }
        out += ",\"behaviours\":{";
        for (std::size_t j = 0; j < kBehaviourCount; ++j) {
            const auto& b = a.behaviours[j];
            if (j > 0)
                out += ',';
            append_key(out, behaviour_key(static_cast<Behaviour>(j)));
            out += '{';
            append_key(out, "m");
            append_real(out, b.m);
            out += ',';
            append_key(out, "value_stat");
            append_real(out, b.value_stat);
            out += ',';
            append_key(out, "value_visual");
            append_real(out, b.value_visual);
            out += ',';
            append_key(out, "p");
            append_real(out, b.p);
            out += std::string(",\"included\":") + (b.included ? "true" : "false") + "}";
        }
        out += "}}";
    }
    out += "]}\n";
    return out;
}

FrameLabel parse_label_line(std::string_view line)
{
    const json j = json::parse(line);
    FrameLabel label;
    label.frame_index = j.at("frame").get<std::int64_t>();
    label.timestamp_us = j.at("t_us").get<std::int64_t>();
    for (const auto& ja : j.at("agents")) {
        AgentLabel a;
        a.id = ja.at("id").get<std::uint32_t>();
        a.class_name = ja.at("class").get<std::string>();
        a.class_index = ja.at("class_index").get<int>();
        a.is_anomaly = ja.at("is_anomaly").get<bool>();
        a.omega = real_field(ja, "omega");
        a.r_bar = real_field(ja, "r_bar");
        a.w_bar = real_field(ja, "w_bar");
        if (const auto it = ja.find("bbox"); it != ja.end()) {
            const auto& b = *it;
            a.bbox = BoundingBox{b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(), b.at(3).get<int>()};
        }
        const auto& jb = ja.at("behaviours");
        for (std::size_t k = 0; k < kBehaviourCount; ++k) {
            const auto& e = jb.at(std::string(behaviour_key(static_cast<Behaviour>(k))));
            a.behaviours[k] = {real_field(e, "m"), real_field(e, "value_stat"), real_field(e, "value_visual"),
                               real_field(e, "p"), e.at("included").get<bool>()};
        }
        label.agents.push_back(std::move(a));
    }
    return label;
}

std::vector<FrameLabel> read_labels(std::string_view text)
{
    std::vector<FrameLabel> labels;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        const auto line = text.substr(pos, end - pos);
        if (!line.empty())
            labels.push_back(parse_label_line(line));
        pos = end + 1;
    }
    return labels;
}

// ---------------------------------------------------------------------------
// Manifest

std::string checksum_hex(std::uint64_t checksum)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(checksum));
    return buf;
}

namespace {

// Offset of the 16 hex digits of the self checksum, or npos.
std::size_t self_checksum_offset(std::string_view text)
{
    const std::string key = "\"" + std::string(kManifestSelfKey) + "\": \"";
    const std::size_t k = text.find(key);
    if (k == std::string_view::npos || text.find(key, k + 1) != std::string_view::npos)
        return std::string_view::npos;
    const std::size_t at = k + key.size();
    if (at + 17 > text.size() || text[at + 16] != '"')
        return std::string_view::npos;
    return at;
}

} // namespace

std::string write_manifest(const DatasetManifest& m)
{
    json files = json::array();
    for (const auto& f : m.files)
        files.push_back({{"path", f.path}, {"size", f.size}, {"fnv1a64", checksum_hex(f.checksum)}});
    const json j = {{"format_version", m.format_version},
                    {"generator_version", m.generator_version},
                    {"frame_count", m.frame_count},
                    {"resolution", {m.width, m.height}},
                    {"dt_us", m.dt_us},
                    {"event_count", m.event_count},
                    {"config", m.config},
                    {"files", files},
                    {std::string(kManifestSelfKey), checksum_hex(0)}};
    std::string text = j.dump(2) + "\n";
    const std::size_t at = self_checksum_offset(text);
    text.replace(at, 16, checksum_hex(fnv1a64(text)));
    return text;
}

bool manifest_self_checksum_ok(std::string_view text)
{
    const std::size_t at = self_checksum_offset(text);
    if (at == std::string_view::npos)
        return false;
    std::string zeroed(text);
    zeroed.replace(at, 16, checksum_hex(0));
    return text.substr(at, 16) == checksum_hex(fnv1a64(zeroed));
}

DatasetManifest parse_manifest(std::string_view text)
{
    const json j = json::parse(text);
    DatasetManifest m;
    m.format_version = j.at("format_version").get<int>();
    if (m.format_version != kFormatVersion)
        throw std::runtime_error("manifest: unsupported format_version " + std::to_string(m.format_version));
    m.generator_version = j.at("generator_version").get<std::string>();
    m.frame_count = j.at("frame_count").get<int>();
    m.width = j.at("resolution").at(0).get<int>();
    m.height = j.at("resolution").at(1).get<int>();
    m.dt_us = j.at("dt_us").get<std::int64_t>();
    m.event_count = j.at("event_count").get<std::uint64_t>();
    m.config = j.at("config");
    for (const auto& f : j.at("files")) {
        ManifestEntry e;
        e.path = f.at("path").get<std::string>();
        e.size = f.at("size").get<std::uint64_t>();
        e.checksum = std::stoull(f.at("fnv1a64").get<std::string>(), nullptr, 16);
        m.files.push_back(std::move(e));
    }
    return m;
}

// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw std::runtime_error("short write to " + path.string());
}

} // namespace antgen
