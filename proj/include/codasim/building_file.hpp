#ifndef CODASIM_BUILDING_FILE_HPP
#define CODASIM_BUILDING_FILE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "codasim/building.hpp"

// Text form of a building description.  Versioned magic line, brace blocks,
// key = value pairs, fixed-arity tuples for layers and cp sectors.  Parsing
// is total: malformed input yields diagnostics with line and column, never
// exceptions; structural rules are checked on top by validate(), with the
// offender's location attached.  Serialization is canonical and preserves
// every double bit-exactly, so parse(serialize(d)) == d.

namespace codasim {

inline constexpr std::string_view kBuildingMagic = "# codasim-building v1";

struct BuildingParseResult {
    BuildingDescription description;
    std::vector<Diagnostic> diagnostics;
    bool ok() const { return diagnostics.empty(); }
};

BuildingParseResult parseBuilding(std::string_view text);

std::string serializeBuilding(const BuildingDescription& desc);

} // namespace codasim

#endif
