#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace hybridbec {

inline constexpr std::string_view tool_version = "0.1.0";

/// Header lines starting with this prefix carry wall-clock time and are
/// ignored by determinism comparisons.
inline constexpr std::string_view timestamp_prefix = "# generated: ";

/// Writes `# key: value` header lines, one column line and comma-separated rows.
/// Doubles are printed with 17 significant digits.
class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path& path);

    CsvWriter& meta(std::string_view key, std::string_view value);
    CsvWriter& meta(std::string_view key, double value);
    CsvWriter& timestamp();
    CsvWriter& columns(std::initializer_list<std::string_view> names);

    /// One row; each cell is a preformatted string.
    void row(const std::vector<std::string>& cells);

    static std::string num(double x);

private:
    std::ofstream out_;
    std::filesystem::path path_;
};

/// Data rows and non-timestamp header lines of a CSV file.
std::vector<std::string> stable_lines(const std::filesystem::path& path);

}  // namespace hybridbec
