#pragma once

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "geometa/point.hpp"

namespace geometa {

inline constexpr const char* kVersion = "0.1.0";

/// 64-bit FNV-1a, rendered as 16 hex digits.
inline std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) h = (h ^ c) * 0x100000001b3ULL;
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

/// RFC 4180 style writer: comma separated, CRLF-free, fields quoted when
/// they contain a comma, quote or newline. Reals use 17 significant digits.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    static std::string num(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    static std::string num(std::size_t v) { return std::to_string(v); }

    static std::string point(const Point& p) {
        std::string s = "(";
        for (std::size_t i = 0; i < p.dim(); ++i) s += (i ? " " : "") + num(p[i]);
        return s + ")";
    }

    static std::string field(std::string_view f) {
        if (f.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(f);
        std::string out = "\"";
        for (char c : f) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    }

    void header_comment(const std::string& config_hash) {
        os_ << "# geometa " << kVersion << " config-hash " << config_hash << '\n';
    }

    void comment(const std::string& text) { os_ << "# " << text << '\n'; }

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) os_ << (i ? "," : "") << field(fields[i]);
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

}  // namespace geometa
