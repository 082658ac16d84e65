#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hybefs::csv {

// Minimal RFC-4180 helpers shared by the dataset reader and result writers.

/// Splits one record. Quoted fields may contain commas and doubled quotes;
/// records spanning several lines are not supported.
std::vector<std::string> split_record(std::string_view line);

/// Quotes a field only when it contains a comma, quote or line break.
std::string quote(std::string_view field);

/// Shortest-safe round-trip text for a double (17 significant digits).
std::string format_real(double value);

}  // namespace hybefs::csv
