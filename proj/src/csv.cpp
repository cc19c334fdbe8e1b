#include "hybridbec/csv.hpp"

#include <chrono>
#include <ctime>

#include <fmt/format.h>

#include "hybridbec/errors.hpp"

namespace hybridbec {

CsvWriter::CsvWriter(const std::filesystem::path& path) : out_(path), path_(path) {
    if (!out_) throw Error(fmt::format("cannot write '{}'", path.string()));
    out_ << "# tool: hybridbec " << tool_version << '\n';
}

CsvWriter& CsvWriter::meta(std::string_view key, std::string_view value) {
    out_ << "# " << key << ": " << value << '\n';
    return *this;
}

CsvWriter& CsvWriter::meta(std::string_view key, double value) { return meta(key, num(value)); }

CsvWriter& CsvWriter::timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    out_ << timestamp_prefix << buf << '\n';
    return *this;
}

CsvWriter& CsvWriter::columns(std::initializer_list<std::string_view> names) {
    bool first = true;
    for (auto n : names) {
        if (!first) out_ << ',';
        out_ << n;
        first = false;
    }
    out_ << '\n';
    return *this;
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
    if (!out_) throw Error(fmt::format("write failed for '{}'", path_.string()));
}

std::string CsvWriter::num(double x) { return fmt::format("{:.17g}", x); }

std::vector<std::string> stable_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(fmt::format("cannot read '{}'", path.string()));
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);)
        if (line.rfind(timestamp_prefix, 0) != 0) lines.push_back(line);
    return lines;
}

}  // namespace hybridbec
