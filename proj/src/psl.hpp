#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "domain.hpp"

namespace seqnature {

// Registrable domain ("effective second-level domain") of a hostname under
// the bundled public-suffix snapshot. Absent when the host itself is a
// public suffix or has no suffix rule context (e.g. a bare TLD).
std::optional<std::string> registrable_domain(std::string_view host);

// eSLD of a stream label. IP labels carry no name and yield nullopt.
std::optional<std::string> esld_of(const DomainLabel& domain);

// The raw snapshot text the library was built with (tests pin it against
// data/public_suffix_list.dat).
std::string_view public_suffix_snapshot();

}  // namespace seqnature
