#ifndef COLLAB_CSV_HPP_
#define COLLAB_CSV_HPP_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace collab {

// Shortest-round-trip-ish fixed formatting ("%.12g"): stable across runs,
// used for every CSV cell so outputs are byte-reproducible.
std::string format_number(double value);

// One CSV cell: numbers via format_number, missing values as empty cells.
std::string csv_cell(std::optional<double> value);

// Text cell, quoted (with doubled inner quotes) when it holds a comma,
// quote, or newline.
std::string csv_text(const std::string& value);

void write_csv_row(std::ostream& os, const std::vector<std::string>& cells);

}  // namespace collab

#endif  // COLLAB_CSV_HPP_
