#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hpt::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Reads a comma-separated UTF-8 file. No quoting support; the canonical
// schemas never need it. Throws DataError on a missing file or ragged rows.
Table read(const std::filesystem::path& path);

// Case-insensitive header match against an expected schema; throws DataError.
void require_header(const Table& t, const std::vector<std::string>& expected,
                    const std::string& file_label);

double parse_double(const std::string& cell, const std::string& context);
int parse_int(const std::string& cell, const std::string& context);

// Deterministic writer: "\n" line endings, no trailing separators.
class Writer {
public:
    explicit Writer(const std::filesystem::path& path);
    void row(const std::vector<std::string>& cells);
    long long rows_written() const { return rows_; }

private:
    std::filesystem::path path_;
    std::string buffer_;
    long long rows_ = 0;
    friend struct WriterFlush;

public:
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;
};

// Shortest round-trip formatting for doubles; "inf"/"-inf" for the t-stat
// sentinel, "nan" for undefined moments.
std::string format_double(double v);

}  // namespace hpt::csv
