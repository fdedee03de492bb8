#include <antgen/events.hpp>

#include <cmath>
#include <string>

namespace antgen {

std::int64_t frame_timestamp_us(std::int64_t frame_index, double dt_seconds)
{
    return std::llround(static_cast<double>(frame_index) * dt_seconds * 1e6);
}

EventFrame quiet_frame(int width, int height, std::int64_t timestamp_us)
{
    EventFrame frame;
    frame.values = Grid<float>::Constant(height, width, kEventNone);
    frame.timestamp_us = timestamp_us;
    return frame;
}

std::vector<EventRecord> to_sparse(const EventFrame& frame)
{
    std::vector<EventRecord> records;
    // Row-major scan is already (y, x) order.
    for (Eigen::Index y = 0; y < frame.values.rows(); ++y) {
        for (Eigen::Index x = 0; x < frame.values.cols(); ++x) {
            const float v = frame.values(y, x);
            if (v == kEventNone)
                continue;
            records.push_back({frame.timestamp_us, static_cast<std::uint16_t>(x), static_cast<std::uint16_t>(y),
                               static_cast<std::int8_t>(v == kEventOn ? 1 : -1)});
        }
    }
    return records;
}

EventFrame from_sparse(std::span<const EventRecord> records, int width, int height, std::int64_t timestamp_us)
{
    EventFrame frame = quiet_frame(width, height, timestamp_us);
    for (const auto& r : records) {
        if (r.x >= width || r.y >= height)
            throw std::invalid_argument("from_sparse: coordinate (" + std::to_string(r.x) + ", " +
                                        std::to_string(r.y) + ") out of range");
        if (r.t != timestamp_us)
            throw std::invalid_argument("from_sparse: record timestamp does not match frame");
        if (r.polarity != 1 && r.polarity != -1)
            throw std::invalid_argument("from_sparse: polarity must be +1 or -1");
        float& cell = frame.values(r.y, r.x);
        if (cell != kEventNone)
            throw std::invalid_argument("from_sparse: duplicate coordinate (" + std::to_string(r.x) + ", " +
                                        std::to_string(r.y) + ")");
        cell = r.polarity > 0 ? kEventOn : kEventOff;
    }
    return frame;
}

EventFrame Eventizer::feed(const IntensityGrid& intensity, std::int64_t frame_index)
{
    const std::int64_t t = frame_timestamp_us(frame_index, dt_);
    EventFrame out = previous_ ? gate(diff_frames(intensity, *previous_), config_.beta, t)
                               : quiet_frame(static_cast<int>(intensity.cols()), static_cast<int>(intensity.rows()), t);
    previous_ = intensity;
    return out;
}

} // namespace antgen
