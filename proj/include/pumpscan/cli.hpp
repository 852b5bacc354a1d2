#pragma once

namespace pumpscan::cli {

// Entry point for the pumpscan tool. Returns the process exit status:
// 0 success, 1 domain error (machine-readable code on stderr), 2 usage error.
int run(int argc, const char* const* argv);

}  // namespace pumpscan::cli
