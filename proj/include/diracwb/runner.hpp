#pragma once

#include "diracwb/deffile.hpp"
#include "diracwb/report.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace diracwb {

struct RunFlags {
  uint64_t seed = 1;
  int samples = 8;
  int max_degree = 2;
  bool pretty = false;
  bool timings = false;
};

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& w) : std::runtime_error(w) {}
};

// Runs one named check against the definition file. Unknown commands, bad
// parameters, and verifier precondition violations raise UsageError (CLI
// exit code 2).
CheckReport run_check(const DefinitionFile& file, const std::string& command,
                      const std::vector<std::pair<std::string, std::string>>& params,
                      const RunFlags& flags);

// Runs every check block of the file (fanned out across workers; reports are
// emitted in declaration order). Returns the process exit code: 0 when all
// verdicts are PASS or VACUOUS, 1 otherwise.
int run_file(const DefinitionFile& file, const RunFlags& flags, std::ostream& out);

// Catalog of available check names.
std::vector<std::string> verifier_catalog();

}  // namespace diracwb
