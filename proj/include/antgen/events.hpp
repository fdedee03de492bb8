#pragma once

#include <antgen/grid.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace antgen {

struct EventizerConfig
{
    double beta = 0.05; // intensity threshold, in [0, 1] units

    void validate() const
    {
        if (!(beta > 0.0))
            throw std::invalid_argument("eventizer.beta must be > 0");
    }
    bool operator==(const EventizerConfig&) const = default;
};

inline constexpr float kEventOff = 0.0f;
inline constexpr float kEventNone = 0.5f;
inline constexpr float kEventOn = 1.0f;

/// Dense per-frame events: every value is 0 (OFF), 0.5 (none) or 1 (ON).
struct EventFrame
{
    Grid<float> values;
    std::int64_t timestamp_us = 0;

    bool operator==(const EventFrame& other) const
    {
        return timestamp_us == other.timestamp_us && values.rows() == other.values.rows() &&
               values.cols() == other.values.cols() && (values == other.values).all();
    }
};

struct EventRecord
{
    std::int64_t t = 0; // microseconds
    std::uint16_t x = 0;
    std::uint16_t y = 0;
    std::int8_t polarity = 1; // +1 ON, -1 OFF

    bool operator==(const EventRecord&) const = default;
};

/// Ordering by (t, y, x).
inline bool event_before(const EventRecord& a, const EventRecord& b) noexcept
{
    if (a.t != b.t)
        return a.t < b.t;
    if (a.y != b.y)
        return a.y < b.y;
    return a.x < b.x;
}

/// frame_index * dt * 1e6, rounded to the nearest microsecond.
std::int64_t frame_timestamp_us(std::int64_t frame_index, double dt_seconds);

/// Elementwise f_t - f_{t-1}. Throws std::invalid_argument on a size mismatch.
template <typename DerivedA, typename DerivedB>
Grid<double> diff_frames(const Eigen::ArrayBase<DerivedA>& current, const Eigen::ArrayBase<DerivedB>& previous)
{
    if (current.rows() != previous.rows() || current.cols() != previous.cols())
        throw std::invalid_argument("diff_frames: frame dimensions differ");
    return current.template cast<double>() - previous.template cast<double>();
}

/// Scalar gate: 0 below -beta, 1 above beta, 0.5 otherwise (|d| = beta gives 0.5).
inline float gate_value(double d, double beta) noexcept
{
    if (d < -beta)
        return kEventOff;
    if (d > beta)
        return kEventOn;
    return kEventNone;
}

template <typename Derived>
EventFrame gate(const Eigen::ArrayBase<Derived>& difference, double beta, std::int64_t timestamp_us = 0)
{
    if (!(beta > 0.0))
        throw std::invalid_argument("gate: beta must be > 0");
    EventFrame frame;
    frame.timestamp_us = timestamp_us;
    frame.values = difference.derived().template cast<double>().unaryExpr(
        [beta](double d) { return gate_value(d, beta); });
    return frame;
}

/// All-0.5 frame.
EventFrame quiet_frame(int width, int height, std::int64_t timestamp_us);

/// One record per non-0.5 pixel, sorted by (t, y, x).
std::vector<EventRecord> to_sparse(const EventFrame& frame);

/// Inverse of to_sparse. Rejects out-of-range or duplicate coordinates and
/// records stamped with a different time.
EventFrame from_sparse(std::span<const EventRecord> records, int width, int height, std::int64_t timestamp_us);

/// Stateful consumer of an ordered intensity stream. The first frame has no
/// predecessor and yields an all-0.5 frame.
class Eventizer
{
public:
    Eventizer(EventizerConfig config, double dt_seconds) : config_(config), dt_(dt_seconds) { config_.validate(); }

    EventFrame feed(const IntensityGrid& intensity, std::int64_t frame_index);

private:
    EventizerConfig config_;
    double dt_;
    std::optional<IntensityGrid> previous_;
};

} // namespace antgen
