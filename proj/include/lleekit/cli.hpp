#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace lleekit {

/// Runs the command line `args` (without the program name).
/// Returns 0 on success / EQUAL, 1 on NOT_EQUAL or a failed check, 2 on I/O or parse errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace lleekit
