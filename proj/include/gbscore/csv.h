#ifndef GBSCORE_CSV_H_
#define GBSCORE_CSV_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gbscore {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of `name` in the header, or -1.
  int column_index(std::string_view name) const;
};

// RFC-4180 reader: quoted fields may contain the delimiter, CR/LF and doubled
// quotes. The first record is the header. A UTF-8 BOM is skipped.
CsvTable parse_csv(std::string_view text, char delimiter = ',');
CsvTable read_csv(const std::filesystem::path& path, char delimiter = ',');

// Shortest representation that parses back to the same double.
std::string format_real(double value);

// Quotes a field only when it needs it.
std::string escape_csv_field(std::string_view field, char delimiter = ',');

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields,
                   char delimiter = ',');

void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace gbscore

#endif  // GBSCORE_CSV_H_
