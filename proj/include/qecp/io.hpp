// Formatting and serialization primitives: significant-digit float printing
// (12 for CSV, 17 for JSON so values round-trip) and the JSON form of a
// PureState.

#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qecp/state.hpp"

namespace qecp {

inline constexpr int kCsvDigits = 12;
inline constexpr int kJsonDigits = 17;

inline std::string fmt_g(double x, int sig_digits) {
    if (x == 0.0) x = 0.0;  // canonicalize -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.*g", sig_digits, x);
    return buf;
}

inline std::string csv_float(double x) { return fmt_g(x, kCsvDigits); }
inline std::string json_float(double x) { return fmt_g(x, kJsonDigits); }

inline std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string state_to_json(const PureState& s) {
    std::ostringstream os;
    os << "{\"registers\":[";
    bool first = true;
    for (const auto& r : s.registers()) {
        if (!first) os << ",";
        first = false;
        os << "{\"name\":\"" << json_escape(r.name) << "\",\"dim\":" << r.dim << "}";
    }
    os << "],\"amps\":[";
    first = true;
    for (const auto& [label, amp] : s.amps()) {
        if (!first) os << ",";
        first = false;
        os << "{\"idx\":[";
        for (size_t i = 0; i < label.size(); ++i) os << (i ? "," : "") << label[i];
        os << "],\"re\":" << json_float(amp.real()) << ",\"im\":" << json_float(amp.imag()) << "}";
    }
    os << "]}";
    return os.str();
}

// Writes the whole payload in one go; callers build output in memory first so
// a failed run never leaves a partial file behind.
inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open: " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

// Minimal CSV line splitter (fixture files carry no quoted fields).
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace qecp
