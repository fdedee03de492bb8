#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace antgen {

/// Pixel grid indexed (y, x): rows are scanlines, top row first.
template <typename Scalar>
using Grid = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using IntensityGrid = Grid<double>;
using IdGrid = Grid<std::uint32_t>;
using DepthGrid = Grid<double>;

} // namespace antgen
