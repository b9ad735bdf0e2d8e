#pragma once

// Internal helpers shared by the file-format code. Field access goes through
// these wrappers so parse errors always name the offending path.

#include "glossc/errors.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

namespace glossc::detail {

using json = nlohmann::ordered_json;

inline json parse_json(std::istream& in, const std::string& what) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(what + ": " + e.what());
    }
}

inline json parse_json(const std::string& text, const std::string& what) {
    std::istringstream in(text);
    return parse_json(in, what);
}

inline const json& field(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + "." + key + ": missing field");
    return *it;
}

inline double number_at(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path + ": expected number");
    return v.get<double>();
}

inline std::int64_t integer_at(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path + ": expected integer");
    return v.get<std::int64_t>();
}

inline std::string string_at(const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path + ": expected string");
    return v.get<std::string>();
}

inline const json& array_at(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path + ": expected array");
    return v;
}

inline std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    return in;
}

inline std::string read_file(const std::string& path) {
    auto in = open_input(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path);
}

// Locale-independent fixed formatting, six decimal places. All seconds in the
// timeline format go through this.
inline std::string fixed6(double v) {
    if (v == 0.0) v = 0.0; // never emit "-0.000000"
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 6);
    return std::string(buf, res.ptr);
}

inline std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(const std::string& bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out = "fnv1a64:";
    for (int shift = 60; shift >= 0; shift -= 4) out += digits[(h >> shift) & 0xF];
    return out;
}

} // namespace glossc::detail
