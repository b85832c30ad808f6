#pragma once

#include <iosfwd>

namespace hrv::cli {

/// Entry point shared by the `hrv` binary and the CLI tests. Diagnostics go
/// to `err`; data only ever goes to files.
int run(int argc, const char *const *argv, std::ostream &err);

} // namespace hrv::cli
