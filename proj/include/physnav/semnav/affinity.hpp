#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace physnav {

/// living room, dining room, bedroom, kitchen, toilet, others.
const std::vector<std::string>& room_names();
inline constexpr std::string_view kOtherRoom = "others";

/// Similarity scores in [0, 1] between object labels (rows) and room or
/// landmark labels (columns).
class AffinityTable {
 public:
  /// `values` is row-major objects x columns. Throws ValidationError.
  AffinityTable(std::vector<std::string> objects, std::vector<std::string> columns, std::vector<double> values);

  const std::vector<std::string>& objects() const { return objects_; }
  const std::vector<std::string>& columns() const { return columns_; }
  std::optional<std::size_t> object_index(std::string_view name) const;
  std::optional<std::size_t> column_index(std::string_view name) const;

  /// 1 for identical names, 0 when either name is missing from the table.
  double affinity(std::string_view object, std::string_view column) const;

 private:
  std::vector<std::string> objects_;
  std::vector<std::string> columns_;
  std::vector<double> values_;
};

/// Hand-authored household table: an object scores 0.9 with its own room,
/// 0.1 with other rooms, 0.2 with "others"; 0.6 with objects of the same
/// room and 0.05 with the rest.
AffinityTable default_affinity_table();

/// CSV with a header row of column labels (the first header cell is
/// ignored) and one row per object. Throws ParseError.
AffinityTable parse_affinity_csv(std::string_view text);
AffinityTable load_affinity_csv(const std::string& path);
std::string to_csv(const AffinityTable& table);

}  // namespace physnav
