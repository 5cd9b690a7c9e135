#pragma once

#include <iosfwd>
#include <string>

#include "bayestab/table.hpp"

namespace bayestab {

// Plain-text table format: '#' starts a comment line; blank lines separate
// strata; within a stratum, one table row per line, integers split on commas
// or whitespace. One RxC block parses as a two-way table; two 2x2 blocks
// parse as a stratified [2,2,2] table.
ContingencyTable parse_table(std::istream& in);
ContingencyTable parse_table_file(const std::string& path);

}  // namespace bayestab
