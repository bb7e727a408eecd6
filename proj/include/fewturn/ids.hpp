#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace fewturn {

/// Dense integer identifier, distinct per tag so segment, junction and road ids
/// cannot be mixed up.
template <typename Tag>
struct Id {
  std::uint32_t value = std::numeric_limits<std::uint32_t>::max();

  constexpr Id() = default;
  constexpr explicit Id(std::uint32_t v) : value(v) {}
  constexpr explicit Id(std::size_t v) : value(static_cast<std::uint32_t>(v)) {}

  constexpr bool valid() const { return value != std::numeric_limits<std::uint32_t>::max(); }
  constexpr std::size_t index() const { return value; }

  friend constexpr auto operator<=>(Id, Id) = default;
};

struct SegmentTag {};
struct JunctionTag {};
struct RoadTag {};

using SegmentId = Id<SegmentTag>;
using JunctionId = Id<JunctionTag>;
using RoadId = Id<RoadTag>;

/// Which end of a segment's geometry touches a junction.
enum class End : std::uint8_t { from = 0, to = 1 };

constexpr End opposite(End e) { return e == End::from ? End::to : End::from; }

}  // namespace fewturn

template <typename Tag>
struct std::hash<fewturn::Id<Tag>> {
  std::size_t operator()(fewturn::Id<Tag> id) const noexcept { return std::hash<std::uint32_t>{}(id.value); }
};
