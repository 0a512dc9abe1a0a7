#include "currl/grid.hpp"

#include <deque>
#include <fstream>
#include <sstream>

namespace currl {

namespace {

void validate_layout(const GridLayout& layout) {
    if (layout.width <= 0 || layout.height <= 0) {
        throw ParseError("layout must be non-empty");
    }
    if (layout.is_blocked(layout.goal)) {
        throw ParseError("goal cell is blocked");
    }
    if (layout.start) {
        if (layout.is_blocked(*layout.start)) {
            throw ParseError("start cell is blocked");
        }
        if (*layout.start == layout.goal) {
            throw ParseError("start cell equals goal cell");
        }
    }
    bool has_non_goal_feasible = false;
    for (int i = 0; i < layout.width * layout.height; ++i) {
        if (layout.blocked[i] == 0 && layout.cell_at(i) != layout.goal) {
            has_non_goal_feasible = true;
            break;
        }
    }
    if (!has_non_goal_feasible) {
        throw ParseError("layout needs at least one feasible cell besides the goal");
    }
}

}  // namespace

std::vector<Cell> GridLayout::feasible_cells() const {
    std::vector<Cell> cells;
    for (int i = 0; i < width * height; ++i) {
        if (blocked[i] == 0) {
            cells.push_back(cell_at(i));
        }
    }
    return cells;
}

GridLayout parse_grid_layout(std::string_view text) {
    std::vector<std::string> rows;
    std::string line;
    std::istringstream in{std::string(text)};
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        rows.push_back(line);
    }
    while (!rows.empty() && rows.back().empty()) {
        rows.pop_back();
    }
    if (rows.empty()) {
        throw ParseError("layout text is empty");
    }

    GridLayout layout;
    layout.height = static_cast<int>(rows.size());
    layout.width = static_cast<int>(rows[0].size());
    layout.blocked.assign(static_cast<std::size_t>(layout.width) * layout.height, 0);

    bool goal_seen = false;
    for (int r = 0; r < layout.height; ++r) {
        if (static_cast<int>(rows[r].size()) != layout.width) {
            throw ParseError("row " + std::to_string(r) + ": expected " +
                             std::to_string(layout.width) + " columns, got " +
                             std::to_string(rows[r].size()));
        }
        for (int c = 0; c < layout.width; ++c) {
            const char ch = rows[r][c];
            const Cell cell{r, c};
            switch (ch) {
                case '#':
                    layout.blocked[layout.index_of(cell)] = 1;
                    break;
                case '.':
                    break;
                case 'G':
                    if (goal_seen) {
                        throw ParseError("row " + std::to_string(r) + ", col " +
                                         std::to_string(c) + ": duplicate goal");
                    }
                    layout.goal = cell;
                    goal_seen = true;
                    break;
                case 'S':
                    if (layout.start) {
                        throw ParseError("row " + std::to_string(r) + ", col " +
                                         std::to_string(c) + ": duplicate start");
                    }
                    layout.start = cell;
                    break;
                default:
                    throw ParseError("row " + std::to_string(r) + ", col " +
                                     std::to_string(c) + ": unknown character '" +
                                     std::string(1, ch) + "'");
            }
        }
    }
    if (!goal_seen) {
        throw ParseError("layout has no goal cell");
    }
    validate_layout(layout);
    return layout;
}

std::string serialize_grid_layout(const GridLayout& layout) {
    std::string out;
    out.reserve(static_cast<std::size_t>(layout.height) * (layout.width + 1));
    for (int r = 0; r < layout.height; ++r) {
        for (int c = 0; c < layout.width; ++c) {
            const Cell cell{r, c};
            char ch = layout.is_blocked(cell) ? '#' : '.';
            if (cell == layout.goal) {
                ch = 'G';
            } else if (layout.start && cell == *layout.start) {
                ch = 'S';
            }
            out.push_back(ch);
        }
        out.push_back('\n');
    }
    return out;
}

GridLayout load_grid_layout(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open layout file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_grid_layout(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::optional<int> bfs_distance(const GridLayout& layout, Cell from, Cell to) {
    if (!layout.is_feasible(from) || !layout.is_feasible(to)) {
        throw std::invalid_argument("bfs_distance: endpoint is blocked or out of bounds");
    }
    if (from == to) {
        return 0;
    }
    std::vector<int> dist(static_cast<std::size_t>(layout.width) * layout.height, -1);
    std::deque<Cell> queue;
    dist[layout.index_of(from)] = 0;
    queue.push_back(from);
    static constexpr int kDr[4] = {-1, 1, 0, 0};
    static constexpr int kDc[4] = {0, 0, -1, 1};
    while (!queue.empty()) {
        const Cell cur = queue.front();
        queue.pop_front();
        const int d = dist[layout.index_of(cur)];
        for (int k = 0; k < 4; ++k) {
            const Cell next{cur.row + kDr[k], cur.col + kDc[k]};
            if (!layout.is_feasible(next) || dist[layout.index_of(next)] >= 0) {
                continue;
            }
            if (next == to) {
                return d + 1;
            }
            dist[layout.index_of(next)] = d + 1;
            queue.push_back(next);
        }
    }
    return std::nullopt;
}

GridLayout shrink_maze(const GridLayout& layout, int top, int left, int bottom, int right) {
    if (top > bottom || left > right) {
        throw std::invalid_argument("shrink_maze: empty keep region");
    }
    const auto inside = [&](Cell c) {
        return c.row >= top && c.row <= bottom && c.col >= left && c.col <= right;
    };
    if (!inside(layout.goal)) {
        throw std::invalid_argument("shrink_maze: keep region excludes the goal");
    }
    if (layout.start && !inside(*layout.start)) {
        throw std::invalid_argument("shrink_maze: keep region excludes the start");
    }
    GridLayout out = layout;
    for (int r = 0; r < out.height; ++r) {
        for (int c = 0; c < out.width; ++c) {
            if (!inside(Cell{r, c})) {
                out.blocked[out.index_of(Cell{r, c})] = 1;
            }
        }
    }
    validate_layout(out);
    return out;
}

GridLayout move_start(const GridLayout& layout, Cell new_start) {
    if (!layout.is_feasible(new_start)) {
        throw std::invalid_argument("move_start: new start is blocked or out of bounds");
    }
    if (new_start == layout.goal) {
        throw std::invalid_argument("move_start: new start equals the goal");
    }
    GridLayout out = layout;
    out.start = new_start;
    return out;
}

}  // namespace currl
