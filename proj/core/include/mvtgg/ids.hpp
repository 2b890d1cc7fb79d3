#pragma once

#include <cstdint>

namespace mvtgg {

// Every node and edge of a TypedGraph lives in one shared id space, so a set
// of ElementIds can mix nodes and edges (bookkeeping sets, deletion lists,
// rule interfaces all need that). 0 is reserved as "no element".
using ElementId = std::uint64_t;
inline constexpr ElementId kNoElement = 0;

// Dense per-TypeGraph indices for node and edge types.
using NodeTypeId = std::uint32_t;
using EdgeTypeId = std::uint32_t;
inline constexpr std::uint32_t kNoType = 0xffffffffu;

// Versions are named by the history file; dense indices into a VersionGraph
// are plain std::uint32_t.
using VersionId = std::uint64_t;

} // namespace mvtgg
