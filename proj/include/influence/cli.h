#ifndef INFLUENCE_CLI_H_
#define INFLUENCE_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace influence {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitInternalError = 2;

inline constexpr char kReportSchema[] = "influence-report/1";

// Entry point of the `influence` tool. Reports go to --output or `out`;
// diagnostics and warnings to `err`.
int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace influence

#endif  // INFLUENCE_CLI_H_
