#pragma once

#include <string>

namespace veritas {

// Shortest round-trip decimal representation; identical bytes on every run.
std::string format_double(double v);

}  // namespace veritas
