#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace coldstart::cli {

// Subcommands: ingest, synth, run, sweep, report. Returns the process exit
// code: 0 ok, 2 validation/parse error, 3 runtime error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace coldstart::cli
