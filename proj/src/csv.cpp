#include "hpt/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>

#include "hpt/error.hpp"

namespace hpt::csv {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    size_t pos = 0;
    while (true) {
        size_t comma = line.find(',', pos);
        if (comma == std::string::npos) {
            cells.push_back(line.substr(pos));
            break;
        }
        cells.push_back(line.substr(pos, comma - pos));
        pos = comma + 1;
    }
    return cells;
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

Table read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    Table t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (first) {
            t.header = std::move(cells);
            first = false;
            continue;
        }
        if (cells.size() != t.header.size())
            throw DataError(path.string() + ": row " + std::to_string(t.rows.size() + 2) +
                            " has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(t.header.size()));
        t.rows.push_back(std::move(cells));
    }
    if (first) throw DataError(path.string() + ": empty file");
    return t;
}

void require_header(const Table& t, const std::vector<std::string>& expected,
                    const std::string& file_label) {
    bool ok = t.header.size() == expected.size();
    for (size_t i = 0; ok && i < expected.size(); ++i)
        ok = lower(t.header[i]) == lower(expected[i]);
    if (!ok) {
        std::string want, got;
        for (const auto& c : expected) want += (want.empty() ? "" : ",") + c;
        for (const auto& c : t.header) got += (got.empty() ? "" : ",") + c;
        throw DataError(file_label + ": header mismatch, expected '" + want + "', got '" + got + "'");
    }
}

double parse_double(const std::string& cell, const std::string& context) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || p != cell.data() + cell.size())
        throw DataError(context + ": not a number: '" + cell + "'");
    return v;
}

int parse_int(const std::string& cell, const std::string& context) {
    int v = 0;
    auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || p != cell.data() + cell.size())
        throw DataError(context + ": not an integer: '" + cell + "'");
    return v;
}

Writer::Writer(const std::filesystem::path& path) : path_(path) {
    std::filesystem::create_directories(path.parent_path());
}

void Writer::row(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) buffer_ += ',';
        buffer_ += cells[i];
    }
    buffer_ += '\n';
    ++rows_;
}

Writer::~Writer() {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    out << buffer_;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

}  // namespace hpt::csv
