#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace igfade::cli {

/// Numeric CSV with a header row. Blank lines are skipped; anything else that is
/// not a number raises InputError naming the file and line.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> line;  ///< source line of each row
};

Table read_csv(const std::string& path);

/// 12 significant digits.
std::string format_number(double x);

/// Rows accumulate in memory and reach the file only on commit(), so a failed
/// command never leaves a partial file behind. An empty path means stdout.
class CsvWriter {
public:
    CsvWriter(std::string path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    void row(const std::vector<double>& values);
    void commit();

private:
    std::string path_;
    std::string text_;
};

}  // namespace igfade::cli
