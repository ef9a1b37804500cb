#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace lda::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    // Index of a header column, matching case-insensitively and ignoring
    // '-', '_', '.' and spaces, so "marital-status" finds "maritalstatus".
    // Returns -1 when absent.
    int find_column(std::string_view name) const;
};

std::string trim(std::string_view s);

// RFC-4180-ish parser: quoted fields, embedded commas/newlines, CRLF.
Table read_file(const std::string& path);
Table parse(std::string_view text);

std::string escape_field(std::string_view field);
void write_file(const std::string& path, const Table& table);

} // namespace lda::csv
