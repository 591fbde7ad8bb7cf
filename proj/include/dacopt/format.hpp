#pragma once

#include <string>

namespace dacopt {

// Shortest decimal string that round-trips the exact double. Used for every
// float written to an artifact so that repeated runs are byte-identical.
std::string fmt_double(double v);

}  // namespace dacopt
