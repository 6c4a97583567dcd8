#pragma once

namespace ctinfo::cli {

// Full command-line front end; returns the process exit code:
// 0 success, 2 validation failure, 3 parameter error, 4 numerical error.
int ctinfo_main(int argc, const char* const* argv);

}  // namespace ctinfo::cli
