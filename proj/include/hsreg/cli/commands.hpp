#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hsreg::cli {

/// Runs one subcommand (gd, critical, trace, painleve, match, composite,
/// frames, toda). Returns 0 on success, 1 on a domain error, 2 on a
/// configuration or command-line error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hsreg::cli
