#ifndef KINETIC_CSV_HPP_
#define KINETIC_CSV_HPP_

#include <string>
#include <vector>

namespace kinetic {

// Numeric CSV with a header line; values are written with %.17g so files
// round-trip bit-exactly.
void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

bool file_exists(const std::string& path);

}  // namespace kinetic

#endif  // KINETIC_CSV_HPP_
