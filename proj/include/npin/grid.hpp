#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "npin/geometry.hpp"

namespace npin {

struct Cell {
    int x = 0;  // column
    int y = 0;  // row (increasing with world y)
    bool operator==(const Cell&) const = default;
};

/// Dense row-major grid anchored at `origin` (world position of the lower-left corner).
template <typename T>
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, double resolution, Vec2 origin = {}, T fill = T{})
        : width_(width), height_(height), resolution_(resolution), origin_(origin),
          data_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill) {
        if (width <= 0 || height <= 0 || !(resolution > 0.0)) {
            throw std::invalid_argument("grid dimensions and resolution must be positive");
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    double resolution() const { return resolution_; }
    Vec2 origin() const { return origin_; }
    std::size_t size() const { return data_.size(); }

    bool contains(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
    std::size_t index(Cell c) const {
        return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(c.x);
    }
    Cell cell_of_index(std::size_t i) const {
        return {static_cast<int>(i % static_cast<std::size_t>(width_)),
                static_cast<int>(i / static_cast<std::size_t>(width_))};
    }

    T& operator[](Cell c) { return data_[index(c)]; }
    const T& operator[](Cell c) const { return data_[index(c)]; }
    T& at(Cell c) {
        if (!contains(c)) throw std::out_of_range("grid cell out of range");
        return data_[index(c)];
    }
    const T& at(Cell c) const {
        if (!contains(c)) throw std::out_of_range("grid cell out of range");
        return data_[index(c)];
    }

    Vec2 center(Cell c) const {
        return {origin_.x + (c.x + 0.5) * resolution_, origin_.y + (c.y + 0.5) * resolution_};
    }
    Cell cell_at(Vec2 p) const {
        return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
                static_cast<int>(std::floor((p.y - origin_.y) / resolution_))};
    }

    std::span<T> data() { return data_; }
    std::span<const T> data() const { return data_; }

private:
    int width_ = 0;
    int height_ = 0;
    double resolution_ = 1.0;
    Vec2 origin_;
    std::vector<T> data_;
};

using OccupancyGrid = Grid<std::uint8_t>;
using DistanceGrid = Grid<double>;

/// Distance stored for cells that no source can reach.
inline constexpr double kUnreachable = std::numeric_limits<double>::max();

/// Marks every cell whose centre lies inside the polygon.
void rasterize_polygon(OccupancyGrid& grid, std::span<const Vec2> polygon, std::uint8_t value = 1);

/// Occupies every cell whose centre is within `radius` of an occupied cell centre.
OccupancyGrid inflate(const OccupancyGrid& grid, double radius);

/// Multi-source 8-connected Dijkstra (orthogonal step = resolution, diagonal = sqrt(2) * resolution).
/// Occupied cells are impassable and diagonal moves may not cut an occupied corner.
/// Distances are in metres; unreachable cells hold kUnreachable.
DistanceGrid distance_transform(const OccupancyGrid& occupancy, std::span<const Cell> sources);

}  // namespace npin
