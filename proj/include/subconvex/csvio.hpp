// Deterministic CSV and run-manifest output: every floating value is printed
// with 12 significant digits, rows use LF endings, and the manifest records
// the full argument set plus an FNV-1a hash of the CSV bytes so reruns are
// byte-comparable.
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace subconvex::io {

// %.12g rendering used for every floating CSV/manifest value.
std::string fmt12(double v);

std::uint64_t fnv1a64(std::string_view s);

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    void row(std::vector<std::string> cells) { rows.push_back(std::move(cells)); }
    std::string text() const; // header + rows, comma-separated, LF endings
};

struct Manifest {
    std::vector<std::pair<std::string, std::string>> entries;

    void put(std::string key, std::string value) {
        entries.emplace_back(std::move(key), std::move(value));
    }
    std::string text() const; // key=value lines, LF endings
};

void write_file(const std::string& path, const std::string& content);

}  // namespace subconvex::io
