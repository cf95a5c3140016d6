#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace agpk::cli {

/// Process exit codes. 0–2 are solver verdicts; 64 and up are input errors.
enum ExitCode : int {
    kOk = 0,
    kInfeasible = 1,     // numerically infeasible / verification failed / check failed
    kInconclusive = 2,   // solver ran out of iterations
    kMalformedJson = 64,
    kDomain = 65,        // point outside G, duplicate points
    kSchema = 66,        // JSON does not match the schema, dimension mismatch
    kParameter = 67,     // invalid parameter value
    kEvaluation = 68,    // pole, singular denominator, non-commuting or inadmissible tuple
    kIo = 69,            // file could not be read
    kUsage = 70,         // bad command line
};

/// Runs one command. `args` excludes the program name. The JSON report is
/// written to `out` in one piece at the end; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace agpk::cli
