#include "subconvex/csvio.hpp"

#include <cstdio>
#include <fstream>

#include "subconvex/errors.hpp"

namespace subconvex::io {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string Csv::text() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += r[i];
        }
        out += '\n';
    }
    return out;
}

std::string Manifest::text() const {
    std::string out;
    for (const auto& [k, v] : entries) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidParam("cannot open output file: " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw InvalidParam("short write to output file: " + path);
}

} // namespace subconvex::io
