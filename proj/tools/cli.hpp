#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pdrc::cli
{

enum exit_code : int
{
    exit_controlled = 0,
    exit_uncontrollable = 1,
    exit_invalid_input = 2,
    exit_budget = 3,
    exit_internal = 4,
    exit_certificate_invalid = 5,
    exit_mismatch = 6,
};

// Runs one invocation; `args` excludes the program name.
int run( const std::vector< std::string >& args, std::ostream& out, std::ostream& err );

} // namespace pdrc::cli
