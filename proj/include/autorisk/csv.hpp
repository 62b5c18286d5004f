#ifndef AUTORISK_CSV_HPP
#define AUTORISK_CSV_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace autorisk::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index for `name`, or npos when absent.
  std::size_t column(const std::string& name) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

// Reads a comma-separated UTF-8 file with a header row. Fields are plain
// (no quoting); trailing \r is stripped. Ragged rows raise IoError naming
// the offending line.
Table read_file(const std::filesystem::path& path);
Table parse_string(const std::string& text, const std::string& origin = "<string>");

std::string join_row(const std::vector<std::string>& fields);

}  // namespace autorisk::csv

#endif
