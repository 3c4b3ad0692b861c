#pragma once

#include <string>
#include <vector>

namespace ergolab::diag {

// Process-wide diagnostics sink.  Disabled by default; when enabled, library
// routines append short notes (truncation orders, residual checks).  Appends
// are mutex-guarded and safe from parallel regions.
void enable(bool on);
bool enabled();
void append(std::string note);

// Returns all notes appended so far and clears the sink.
std::vector<std::string> drain();

}  // namespace ergolab::diag
