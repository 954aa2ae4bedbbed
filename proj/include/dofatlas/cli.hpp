#pragma once

namespace dofatlas::cli {

// Full command-line surface of the dofatlas binary. Returns the process
// exit code: 0 success, 2 invalid input, 3 verification failure, 64 unknown
// arguments.
int run(int argc, char** argv);

}  // namespace dofatlas::cli
