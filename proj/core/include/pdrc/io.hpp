#pragma once

#include "pdrc/encoding.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

// JSON model and certificate files.
namespace pdrc::io
{

// Throws model::model_error on malformed input; the result is not validated.
model::system parse_model( std::string_view text );
model::system read_model_file( const std::filesystem::path& path );
std::string write_model( const model::system& sys );

inline constexpr std::string_view certificate_format = "pdrc-certificate-1";

// Clauses as lists of model-level literal names.
std::string write_certificate( const encoding::symbolic_system& sym, const std::vector< sat::clause >& clauses );
// Literals that fold to constants are simplified away (a clause with a true
// literal disappears). Throws model::model_error on unknown names.
std::vector< sat::clause > parse_certificate( const encoding::symbolic_system& sym, std::string_view text );

std::string read_file( const std::filesystem::path& path );

} // namespace pdrc::io
