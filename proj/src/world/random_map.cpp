#include "physnav/world/random_map.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <string>
#include <vector>

#include "physnav/core/errors.hpp"
#include "physnav/core/rng.hpp"

namespace physnav {

const std::array<RoomTemplate, 5>& household_rooms() {
  static constexpr std::array<RoomTemplate, 5> kRooms{{
      {"living room", {"sofa", "tv", "plant"}},
      {"dining room", {"table", "chair", "cabinet"}},
      {"bedroom", {"bed", "nightstand", "wardrobe"}},
      {"kitchen", {"stove", "fridge", "counter"}},
      {"toilet", {"sink", "bathtub", "towel"}},
  }};
  return kRooms;
}

namespace {

struct Rect {
  int c0, r0, c1, r1;  // inclusive
  int width() const { return c1 - c0 + 1; }
  int height() const { return r1 - r0 + 1; }
};


class Builder {
 public:
  Builder(int w, int h) : w_(w), h_(h), kinds_(static_cast<std::size_t>(w * h), CellKind::Free),
                          labels_(static_cast<std::size_t>(w * h), kNoLabel),
                          keep_clear_(static_cast<std::size_t>(w * h), 0) {
    for (int r = 0; r < h; ++r) {
      for (int c = 0; c < w; ++c) {
        if (r == 0 || c == 0 || r == h - 1 || c == w - 1) at(c, r) = CellKind::Obstacle;
      }
    }
  }

  CellKind& at(int c, int r) { return kinds_[idx(c, r)]; }
  std::size_t idx(int c, int r) const { return static_cast<std::size_t>(r * w_ + c); }

  void fill(const Rect& rc, CellKind k) {
    for (int r = rc.r0; r <= rc.r1; ++r)
      for (int c = rc.c0; c <= rc.c1; ++c) at(c, r) = k;
  }

  void mark_clear(const Rect& rc) {
    for (int r = std::max(rc.r0, 0); r <= std::min(rc.r1, h_ - 1); ++r)
      for (int c = std::max(rc.c0, 0); c <= std::min(rc.c1, w_ - 1); ++c) keep_clear_[idx(c, r)] = 1;
  }

  bool placeable(const Rect& rc, bool allow_labels = false) const {
    if (rc.c0 < 1 || rc.r0 < 1 || rc.c1 > w_ - 2 || rc.r1 > h_ - 2) return false;
    for (int r = rc.r0; r <= rc.r1; ++r) {
      for (int c = rc.c0; c <= rc.c1; ++c) {
        const std::size_t i = idx(c, r);
        if (kinds_[i] != CellKind::Free || keep_clear_[i]) return false;
        if (!allow_labels && labels_[i] != kNoLabel) return false;
      }
    }
    return true;
  }

  LabelId label_id(const std::string& name) {
    for (std::size_t i = 1; i < names_.size(); ++i)
      if (names_[i] == name) return static_cast<LabelId>(i);
    names_.push_back(name);
    return static_cast<LabelId>(names_.size() - 1);
  }

  void label(const Rect& rc, LabelId id) {
    for (int r = rc.r0; r <= rc.r1; ++r)
      for (int c = rc.c0; c <= rc.c1; ++c) labels_[idx(c, r)] = id;
  }

  // Keeps only the largest 4-connected traversable component.
  void prune_disconnected() {
    std::vector<int> comp(kinds_.size(), -1);
    std::vector<std::size_t> sizes;
    for (std::size_t start = 0; start < kinds_.size(); ++start) {
      if (kinds_[start] == CellKind::Obstacle || comp[start] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      std::size_t count = 0;
      std::queue<std::size_t> q;
      q.push(start);
      comp[start] = id;
      while (!q.empty()) {
        const std::size_t cur = q.front();
        q.pop();
        ++count;
        const int c = static_cast<int>(cur % static_cast<std::size_t>(w_));
        const int r = static_cast<int>(cur / static_cast<std::size_t>(w_));
        const std::array<std::array<int, 2>, 4> nbrs{{{c + 1, r}, {c - 1, r}, {c, r + 1}, {c, r - 1}}};
        for (const auto& n : nbrs) {
          const std::size_t ni = idx(n[0], n[1]);
          if (kinds_[ni] == CellKind::Obstacle || comp[ni] >= 0) continue;
          comp[ni] = id;
          q.push(ni);
        }
      }
      sizes.push_back(count);
    }
    if (sizes.empty()) return;
    const int keep = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
      if (comp[i] >= 0 && comp[i] != keep) {
        kinds_[i] = CellKind::Obstacle;
        labels_[i] = kNoLabel;
      }
    }
  }

  GridMap build(double cell_size) {
    // Drop names whose cells were all pruned.
    std::vector<LabelId> remap(names_.size(), kNoLabel);
    std::vector<std::string> names{std::string{}};
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      const LabelId l = labels_[i];
      if (l == kNoLabel) continue;
      if (remap[l] == kNoLabel) {
        names.push_back(names_[l]);
        remap[l] = static_cast<LabelId>(names.size() - 1);
      }
    }
    for (auto& l : labels_) l = remap[l];
    return GridMap(w_, h_, cell_size, std::move(kinds_), std::move(labels_), std::move(names));
  }

  int w_, h_;
  std::vector<CellKind> kinds_;
  std::vector<LabelId> labels_;
  std::vector<std::uint8_t> keep_clear_;
  std::vector<std::string> names_{std::string{}};
};

int uniform_int(Rng& rng, int lo, int hi) {  // inclusive
  if (hi <= lo) return lo;
  return lo + static_cast<int>(rng.index(static_cast<std::size_t>(hi - lo + 1)));
}

}  // namespace

GridMap make_random_map(std::uint64_t seed, const RandomMapConfig& cfg) {
  if (cfg.width < 20 || cfg.height < 20) throw ValidationError("random maps need at least 20x20 cells");
  Rng rng(seed);
  Builder b(cfg.width, cfg.height);
  const int w = cfg.width;
  const int h = cfg.height;
  const int door = std::max(5, std::min(w, h) / 7);

  // Vertical wall splitting the house, then a horizontal wall on one side.
  const int vx = uniform_int(rng, w * 2 / 5, w * 3 / 5);
  b.fill({vx, 1, vx + 1, h - 2}, CellKind::Obstacle);
  const int vdoor = uniform_int(rng, 2, h - 3 - door);
  b.fill({vx, vdoor, vx + 1, vdoor + door - 1}, CellKind::Free);
  b.mark_clear({vx - 3, vdoor - 1, vx + 4, vdoor + door});

  const bool split_left = rng.uniform() < 0.5;
  const int hy = uniform_int(rng, h * 2 / 5, h * 3 / 5);
  const int hc0 = split_left ? 1 : vx + 2;
  const int hc1 = split_left ? vx - 1 : w - 2;
  b.fill({hc0, hy, hc1, hy + 1}, CellKind::Obstacle);
  const int hdoor = uniform_int(rng, hc0 + 1, std::max(hc0 + 1, hc1 - door));
  b.fill({hdoor, hy, std::min(hdoor + door - 1, hc1), hy + 1}, CellKind::Free);
  b.mark_clear({hdoor - 1, hy - 3, hdoor + door, hy + 4});

  std::vector<Rect> rooms;
  if (split_left) {
    rooms = {{1, 1, vx - 1, hy - 1}, {1, hy + 2, vx - 1, h - 2}, {vx + 2, 1, w - 2, h - 2}};
  } else {
    rooms = {{1, 1, vx - 1, h - 2}, {vx + 2, 1, w - 2, hy - 1}, {vx + 2, hy + 2, w - 2, h - 2}};
  }

  std::vector<std::size_t> room_types(household_rooms().size());
  for (std::size_t i = 0; i < room_types.size(); ++i) room_types[i] = i;
  for (std::size_t i = room_types.size() - 1; i > 0; --i) {
    std::swap(room_types[i], room_types[rng.index(i + 1)]);
  }

  for (int f = 0; f < cfg.furniture_count; ++f) {
    for (int attempt = 0; attempt < 30; ++attempt) {
      const Rect& room = rooms[rng.index(rooms.size())];
      const int fw = uniform_int(rng, 3, std::max(3, std::min(8, room.width() / 3)));
      const int fh = uniform_int(rng, 3, std::max(3, std::min(8, room.height() / 3)));
      const int c0 = uniform_int(rng, room.c0, room.c1 - fw + 1);
      const int r0 = uniform_int(rng, room.r0, room.r1 - fh + 1);
      const Rect rc{c0, r0, c0 + fw - 1, r0 + fh - 1};
      if (!b.placeable(rc)) continue;
      b.fill(rc, CellKind::Obstacle);
      break;
    }
  }

  for (std::size_t ri = 0; ri < rooms.size(); ++ri) {
    const Rect& room = rooms[ri];
    const RoomTemplate& tmpl = household_rooms()[room_types[ri % room_types.size()]];
    for (int k = 0; k < cfg.landmarks_per_room; ++k) {
      const std::string name = tmpl.objects[static_cast<std::size_t>(k) % tmpl.objects.size()];
      for (int attempt = 0; attempt < 40; ++attempt) {
        const int c0 = uniform_int(rng, room.c0 + 1, room.c1 - 2);
        const int r0 = uniform_int(rng, room.r0 + 1, room.r1 - 2);
        const Rect rc{c0, r0, c0 + 1, r0 + 1};
        if (!b.placeable(rc)) continue;
        b.label(rc, b.label_id(name));
        break;
      }
    }
  }

  for (int p = 0; p < cfg.hole_patches; ++p) {
    for (int attempt = 0; attempt < 30; ++attempt) {
      const int c0 = uniform_int(rng, 2, w - 4);
      const int r0 = uniform_int(rng, 2, h - 4);
      const Rect rc{c0, r0, c0 + 1, r0 + 1};
      if (!b.placeable(rc)) continue;
      b.fill(rc, CellKind::Hole);
      break;
    }
  }

  b.prune_disconnected();
  return b.build(cfg.cell_size);
}

}  // namespace physnav
