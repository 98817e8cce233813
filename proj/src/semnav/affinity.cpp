#include "physnav/semnav/affinity.hpp"

#include "physnav/core/errors.hpp"
#include "physnav/core/file_io.hpp"
#include "physnav/core/text.hpp"
#include "physnav/world/random_map.hpp"

namespace physnav {

const std::vector<std::string>& room_names() {
  static const std::vector<std::string> kRooms = {"living room", "dining room", "bedroom",
                                                  "kitchen",     "toilet",      std::string(kOtherRoom)};
  return kRooms;
}

AffinityTable::AffinityTable(std::vector<std::string> objects, std::vector<std::string> columns,
                             std::vector<double> values)
    : objects_(std::move(objects)), columns_(std::move(columns)), values_(std::move(values)) {
  if (values_.size() != objects_.size() * columns_.size()) {
    throw ValidationError("affinity values do not match objects x columns");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("affinity scores must lie in [0, 1]");
  }
}

std::optional<std::size_t> AffinityTable::object_index(std::string_view name) const {
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (objects_[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> AffinityTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  return std::nullopt;
}

double AffinityTable::affinity(std::string_view object, std::string_view column) const {
  const auto r = object_index(object);
  const auto c = column_index(column);
  if (r && c) return values_[*r * columns_.size() + *c];
  return object == column ? 1.0 : 0.0;
}

AffinityTable default_affinity_table() {
  std::vector<std::string> objects;
  std::vector<std::string> home;
  for (const RoomTemplate& room : household_rooms()) {
    for (const char* o : room.objects) {
      objects.emplace_back(o);
      home.emplace_back(room.room);
    }
  }
  std::vector<std::string> columns = room_names();
  columns.insert(columns.end(), objects.begin(), objects.end());

  std::vector<double> values;
  values.reserve(objects.size() * columns.size());
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (const std::string& room : room_names()) {
      values.push_back(room == kOtherRoom ? 0.2 : room == home[i] ? 0.9 : 0.1);
    }
    for (std::size_t j = 0; j < objects.size(); ++j) {
      values.push_back(i == j ? 1.0 : home[i] == home[j] ? 0.6 : 0.05);
    }
  }
  return AffinityTable(std::move(objects), std::move(columns), std::move(values));
}

AffinityTable parse_affinity_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::string_view line : split(text, '\n')) {
    line = trim(line);
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) throw ParseError("empty affinity table");

  const auto header = split(lines[0], ',');
  if (header.size() < 2) throw ParseError("affinity header needs at least one column");
  std::vector<std::string> columns;
  for (std::size_t i = 1; i < header.size(); ++i) {
    const std::string_view name = trim(header[i]);
    if (name.empty()) throw ParseError("empty column name in affinity header");
    columns.emplace_back(name);
  }

  std::vector<std::string> objects;
  std::vector<double> values;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r], ',');
    if (cells.size() != header.size()) {
      throw ParseError("affinity row " + std::to_string(r) + " has " + std::to_string(cells.size()) +
                       " cells, expected " + std::to_string(header.size()));
    }
    const std::string_view name = trim(cells[0]);
    if (name.empty()) throw ParseError("empty object name in affinity row " + std::to_string(r));
    objects.emplace_back(name);
    for (std::size_t c = 1; c < cells.size(); ++c) {
      double v = 0.0;
      if (!parse_double(cells[c], v)) throw ParseError("bad affinity value: " + std::string(trim(cells[c])));
      values.push_back(v);
    }
  }
  try {
    return AffinityTable(std::move(objects), std::move(columns), std::move(values));
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

AffinityTable load_affinity_csv(const std::string& path) { return parse_affinity_csv(read_file(path)); }

std::string to_csv(const AffinityTable& table) {
  std::string out = "object";
  for (const auto& c : table.columns()) out += "," + c;
  out += "\n";
  for (const auto& o : table.objects()) {
    out += o;
    for (const auto& c : table.columns()) out += "," + format_double(table.affinity(o, c));
    out += "\n";
  }
  return out;
}

}  // namespace physnav
