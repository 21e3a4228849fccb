#pragma once

#include "fracfilt/config.hpp"

#include <string>
#include <vector>

namespace fracfilt {

// Built-in experiment definitions.  Every value a run reads is present in the
// returned store, so the echoed config is the complete record of a run and
// any assumption lives in exactly one place.
Config preset_config(const std::string& name);

// Recognized preset names: case1, case2, case3a, case3b.
const std::vector<std::string>& preset_names();

} // namespace fracfilt
