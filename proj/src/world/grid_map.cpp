#include "physnav/world/grid_map.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "physnav/core/errors.hpp"
#include "physnav/core/text.hpp"

namespace physnav {

namespace {

constexpr char kFreeChar = '.';
constexpr char kObstacleChar = '#';
constexpr char kHoleChar = 'H';

bool is_reserved_char(char c) {
  return c == kFreeChar || c == kObstacleChar || c == kHoleChar ||
         static_cast<unsigned char>(c) <= ' ';
}

}  // namespace

GridMap::GridMap(int width, int height, double cell_size, std::vector<CellKind> cells,
                 std::vector<LabelId> labels, std::vector<std::string> label_names,
                 std::vector<char> label_chars)
    : width_(width),
      height_(height),
      cell_size_(cell_size),
      cells_(std::move(cells)),
      labels_(std::move(labels)),
      label_names_(std::move(label_names)),
      label_chars_(std::move(label_chars)) {
  if (width_ <= 0 || height_ <= 0) throw ValidationError("map has no cells");
  if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) {
    throw ValidationError("cell size must be positive");
  }
  const auto n = static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
  if (cells_.size() != n) throw ValidationError("cell array does not match width*height");
  if (labels_.empty()) labels_.assign(n, kNoLabel);
  if (labels_.size() != n) throw ValidationError("label array does not match width*height");
  if (label_names_.empty()) label_names_.emplace_back();
  if (!label_names_.front().empty()) label_names_.insert(label_names_.begin(), std::string{});
  if (label_chars_.size() != label_names_.size()) {
    // Assign printable characters for maps built in code.
    label_chars_.assign(label_names_.size(), '\0');
    char next = 'a';
    for (std::size_t i = 1; i < label_names_.size(); ++i) {
      while (is_reserved_char(next)) ++next;
      label_chars_[i] = next++;
    }
  }

  for (int r = 0; r < height_; ++r) {
    for (int c = 0; c < width_; ++c) {
      const bool border = r == 0 || c == 0 || r == height_ - 1 || c == width_ - 1;
      if (border && kind({c, r}) != CellKind::Obstacle) {
        throw ValidationError("map border is open at cell (" + std::to_string(c) + ", " +
                              std::to_string(r) + ")");
      }
      const LabelId l = label({c, r});
      if (l == kNoLabel) continue;
      if (l >= label_names_.size()) throw ValidationError("label id out of range");
      if (kind({c, r}) == CellKind::Obstacle) {
        throw ValidationError("labeled cell is an obstacle");
      }
      labeled_cells_.push_back({c, r});
    }
  }
}

bool GridMap::in_bounds(Vec2 p) const {
  return p.x >= 0.0 && p.y >= 0.0 && p.x < width_ * cell_size_ && p.y < height_ * cell_size_;
}

Cell GridMap::cell_of(Vec2 p) const {
  return {static_cast<int>(std::floor(p.x / cell_size_)),
          static_cast<int>(std::floor(p.y / cell_size_))};
}

std::optional<LabelId> GridMap::find_label(std::string_view name) const {
  for (std::size_t i = 1; i < label_names_.size(); ++i) {
    if (label_names_[i] == name) return static_cast<LabelId>(i);
  }
  return std::nullopt;
}

GridMap load_map(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t nl = text.find('\n', pos);
      const std::size_t end = nl == std::string_view::npos ? text.size() : nl;
      lines.push_back(trim(text.substr(pos, end - pos)));
      if (nl == std::string_view::npos) break;
      pos = nl + 1;
    }
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::size_t i = 0;
  while (i < lines.size() && lines[i].empty()) ++i;
  if (i == lines.size()) throw ParseError("empty map file");

  double cell_size = 0.0;
  {
    std::istringstream header{std::string(lines[i])};
    std::string key;
    header >> key;
    if (key != "cellsize" || !(header >> cell_size)) {
      throw ParseError("first line must be `cellsize <meters>`");
    }
    std::string rest;
    if (header >> rest) throw ParseError("trailing tokens after cellsize");
    ++i;
  }

  std::vector<std::string> names{std::string{}};
  std::vector<char> chars{'\0'};
  for (; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (line.empty()) continue;
    if (line.rfind("label ", 0) != 0) break;
    std::string_view body = trim(line.substr(6));
    if (body.size() < 3 || body[1] != ' ') throw ParseError("malformed label line: " + std::string(line));
    const char ch = body[0];
    if (is_reserved_char(ch)) throw ParseError("label character is reserved: " + std::string(1, ch));
    if (std::find(chars.begin() + 1, chars.end(), ch) != chars.end()) {
      throw ParseError("duplicate label character: " + std::string(1, ch));
    }
    const std::string_view name = trim(body.substr(2));
    if (name.empty()) throw ParseError("label without a name");
    chars.push_back(ch);
    names.emplace_back(name);
  }

  std::vector<std::string_view> rows;
  for (; i < lines.size(); ++i) {
    if (lines[i].empty()) throw ParseError("blank line inside grid");
    rows.push_back(lines[i]);
  }
  if (rows.empty()) throw ParseError("map has no grid rows");
  const std::size_t width = rows.front().size();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != width) {
      throw ParseError("ragged grid: row " + std::to_string(r) + " has " +
                       std::to_string(rows[r].size()) + " cells, expected " + std::to_string(width));
    }
  }

  std::vector<CellKind> cells;
  std::vector<LabelId> labels;
  cells.reserve(width * rows.size());
  labels.reserve(width * rows.size());
  for (std::string_view row : rows) {
    for (char ch : row) {
      switch (ch) {
        case kFreeChar: cells.push_back(CellKind::Free); labels.push_back(kNoLabel); break;
        case kObstacleChar: cells.push_back(CellKind::Obstacle); labels.push_back(kNoLabel); break;
        case kHoleChar: cells.push_back(CellKind::Hole); labels.push_back(kNoLabel); break;
        default: {
          auto it = std::find(chars.begin() + 1, chars.end(), ch);
          if (it == chars.end()) throw ParseError("unknown grid character: " + std::string(1, ch));
          cells.push_back(CellKind::Free);
          labels.push_back(static_cast<LabelId>(it - chars.begin()));
        }
      }
    }
  }
  return GridMap(static_cast<int>(width), static_cast<int>(rows.size()), cell_size,
                 std::move(cells), std::move(labels), std::move(names), std::move(chars));
}

GridMap load_map_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open map file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_map(ss.str());
}

std::string to_text(const GridMap& map) {
  std::string out = "cellsize " + format_double(map.cell_size()) + "\n";
  for (std::size_t l = 1; l < map.label_names().size(); ++l) {
    out += "label ";
    out += map.label_chars()[l];
    out += ' ';
    out += map.label_names()[l];
    out += '\n';
  }
  for (int r = 0; r < map.height(); ++r) {
    for (int c = 0; c < map.width(); ++c) {
      const Cell cell{c, r};
      if (const LabelId l = map.label(cell); l != kNoLabel) {
        out += map.label_chars()[l];
        continue;
      }
      switch (map.kind(cell)) {
        case CellKind::Free: out += kFreeChar; break;
        case CellKind::Obstacle: out += kObstacleChar; break;
        case CellKind::Hole: out += kHoleChar; break;
      }
    }
    out += '\n';
  }
  return out;
}

}  // namespace physnav
