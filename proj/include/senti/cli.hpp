#pragma once

namespace senti {

// Full command-line entry point; returns the process exit status
// (0 success, 2 configuration error, 1 runtime failure).
int parse_and_run(int argc, const char* const* argv);

}  // namespace senti
