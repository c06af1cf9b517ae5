#pragma once

#include <string>
#include <vector>

namespace spdelab {

//! Entry point of the command-line harness (main() forwards here; tests call
//! it in-process).  Returns the process exit code:
//!   0  success, and for verification commands a PASS verdict
//!   1  usage, configuration or I/O errors
//!   2  a verification verdict of FAIL (inadmissible measure, invalid
//!      exponent certificate, violated density bound)
int run_command(int argc, const char* const* argv);
int run_command(const std::vector<std::string>& args);

}  // namespace spdelab
