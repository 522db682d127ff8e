#pragma once

#include <string>
#include <string_view>

namespace tw {

/// Porter (1980) suffix stripper, following the reference C implementation
/// distributed by its author (including its "bli" and "logi" departures).
///
/// Words of length <= 2 and words containing bytes outside printable ASCII
/// are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace tw
