#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace currl {

struct Cell {
    int row = 0;
    int col = 0;

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Rectangular grid world description: blocked cells, one goal, optional
// fixed start. The text format is one row per line, characters
//   '#' blocked   '.' free   'G' goal   'S' start
struct GridLayout {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> blocked;  // row-major, 1 = blocked
    Cell goal;
    std::optional<Cell> start;

    bool in_bounds(Cell c) const {
        return c.row >= 0 && c.row < height && c.col >= 0 && c.col < width;
    }
    bool is_blocked(Cell c) const { return blocked[index_of(c)] != 0; }
    bool is_feasible(Cell c) const { return in_bounds(c) && !is_blocked(c); }
    int index_of(Cell c) const { return c.row * width + c.col; }
    Cell cell_at(int index) const { return Cell{index / width, index % width}; }

    std::vector<Cell> feasible_cells() const;

    friend bool operator==(const GridLayout&, const GridLayout&) = default;
};

GridLayout parse_grid_layout(std::string_view text);
std::string serialize_grid_layout(const GridLayout& layout);
GridLayout load_grid_layout(const std::filesystem::path& path);

// Shortest 4-connected path length between two feasible cells, or nullopt
// when `to` is unreachable from `from`. Infeasible endpoints are an error.
std::optional<int> bfs_distance(const GridLayout& layout, Cell from, Cell to);

// Blocks every cell outside the rectangle [top, bottom] x [left, right]
// (inclusive), keeping the goal in place. The rectangle must contain the
// goal; a fixed start, when present, must also survive.
GridLayout shrink_maze(const GridLayout& layout, int top, int left, int bottom, int right);

// Returns a copy of `layout` whose start is `new_start`; everything else,
// including the feasible set and the goal, is unchanged.
GridLayout move_start(const GridLayout& layout, Cell new_start);

}  // namespace currl
