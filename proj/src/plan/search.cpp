#include "physnav/plan/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "physnav/core/errors.hpp"

namespace physnav {

namespace {

constexpr std::int64_t kStraight = 1'000'000'000;
const std::int64_t kDiagonal = std::llround(std::sqrt(2.0) * kCostScale);
constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max();

constexpr int kNeighbors[8][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

std::int64_t octile(Cell a, Cell b) {
  const std::int64_t dx = std::abs(a.col - b.col);
  const std::int64_t dy = std::abs(a.row - b.row);
  return kStraight * (std::max(dx, dy) - std::min(dx, dy)) + kDiagonal * std::min(dx, dy);
}

// (priority, cell index) min-heap: equal priorities pop the lower index.
using Entry = std::pair<std::int64_t, std::size_t>;
using MinHeap = std::priority_queue<Entry, std::vector<Entry>, std::greater<>>;

// Plain Dijkstra from `source` with integer costs; shared by the distance
// field and geodesic queries.
std::vector<std::int64_t> integer_field(const CostGrid& grid, Cell source) {
  std::vector<std::int64_t> dist(grid.cell_count(), kUnreached);
  if (grid.blocked(source)) return dist;
  MinHeap open;
  dist[grid.index(source)] = 0;
  open.push({0, grid.index(source)});
  while (!open.empty()) {
    const auto [d, i] = open.top();
    open.pop();
    if (d != dist[i]) continue;
    const Cell c = grid.cell_at(i);
    for (const auto& off : kNeighbors) {
      if (!can_step(grid, c, off[0], off[1])) continue;
      const Cell n{c.col + off[0], c.row + off[1]};
      const std::int64_t nd = d + edge_cost(grid, n, off[0] != 0 && off[1] != 0);
      const std::size_t j = grid.index(n);
      if (nd < dist[j]) {
        dist[j] = nd;
        open.push({nd, j});
      }
    }
  }
  return dist;
}

}  // namespace

std::int64_t edge_cost(const CostGrid& grid, Cell to, bool diagonal) {
  const double base = diagonal ? std::sqrt(2.0) : 1.0;
  return std::llround(base * grid.cost(to) * kCostScale);
}

bool can_step(const CostGrid& grid, Cell from, int dc, int dr) {
  const Cell to{from.col + dc, from.row + dr};
  if (grid.blocked(to)) return false;
  if (dc != 0 && dr != 0) {
    return !grid.blocked({from.col + dc, from.row}) && !grid.blocked({from.col, from.row + dr});
  }
  return true;
}

std::int64_t path_cost(const CostGrid& grid, std::span<const Cell> path) {
  std::int64_t total = 0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const int dc = path[i].col - path[i - 1].col;
    const int dr = path[i].row - path[i - 1].row;
    if (std::abs(dc) > 1 || std::abs(dr) > 1 || (dc == 0 && dr == 0)) {
      throw ValidationError("path cells are not 8-adjacent");
    }
    total += edge_cost(grid, path[i], dc != 0 && dr != 0);
  }
  return total;
}

std::vector<Cell> astar(const CostGrid& grid, Cell start, Cell goal) {
  if (!grid.in_bounds(start) || !grid.in_bounds(goal)) throw OutOfBounds("astar endpoint off the grid");
  if (grid.blocked(start)) throw NoPath("start cell is blocked");
  if (grid.blocked(goal)) throw NoPath("goal cell is blocked");

  const std::size_t n = grid.cell_count();
  std::vector<std::int64_t> g(n, kUnreached);
  std::vector<std::size_t> parent(n, n);
  std::vector<bool> closed(n, false);
  MinHeap open;
  const std::size_t s = grid.index(start);
  const std::size_t t = grid.index(goal);
  g[s] = 0;
  open.push({octile(start, goal), s});
  while (!open.empty()) {
    const std::size_t i = open.top().second;
    open.pop();
    if (closed[i]) continue;
    closed[i] = true;
    if (i == t) break;
    const Cell c = grid.cell_at(i);
    for (const auto& off : kNeighbors) {
      if (!can_step(grid, c, off[0], off[1])) continue;
      const Cell nb{c.col + off[0], c.row + off[1]};
      const std::size_t j = grid.index(nb);
      if (closed[j]) continue;
      const std::int64_t ng = g[i] + edge_cost(grid, nb, off[0] != 0 && off[1] != 0);
      if (ng < g[j]) {
        g[j] = ng;
        parent[j] = i;
        open.push({ng + octile(nb, goal), j});
      }
    }
  }
  if (!closed[t]) throw NoPath("goal is not reachable from start");

  std::vector<Cell> path;
  for (std::size_t i = t; i != n; i = parent[i]) path.push_back(grid.cell_at(i));
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<double> geodesic_field(const GridMap& map, Cell source) {
  if (!map.in_bounds(source)) throw OutOfBounds("geodesic source off the map");
  const CostGrid grid = CostGrid::uniform(map);
  const auto dist = integer_field(grid, source);
  std::vector<double> out(dist.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] != kUnreached) out[i] = static_cast<double>(dist[i]) / kCostScale * map.cell_size();
  }
  return out;
}

double geodesic_distance(const GridMap& map, Vec2 a, Vec2 b) {
  if (!map.in_bounds(a) || !map.in_bounds(b)) throw OutOfBounds("geodesic endpoint off the map");
  const Cell ca = map.cell_of(a);
  const Cell cb = map.cell_of(b);
  if (map.is_obstacle(ca) || map.is_obstacle(cb)) throw Unreachable("geodesic endpoint inside an obstacle");
  if (ca == cb) return 0.0;
  const CostGrid grid = CostGrid::uniform(map);
  std::vector<Cell> path;
  try {
    path = astar(grid, ca, cb);
  } catch (const NoPath&) {
    throw Unreachable("points are not connected");
  }
  return static_cast<double>(path_cost(grid, path)) / kCostScale * map.cell_size();
}

std::vector<Vec2> to_points(const GridMap& map, std::span<const Cell> path) {
  std::vector<Vec2> out;
  out.reserve(path.size());
  for (const Cell& c : path) out.push_back(map.center(c));
  return out;
}

double path_length(std::span<const Vec2> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) total += distance(points[i - 1], points[i]);
  return total;
}

}  // namespace physnav
