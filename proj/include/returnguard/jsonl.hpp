#pragma once

#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "returnguard/common.hpp"

namespace returnguard {

using Json = nlohmann::json;

/// Stream a JSONL file line by line. Unreadable file -> IoError; a line that
/// is not valid JSON -> ParseError with the line number.
inline void for_each_jsonl(const std::string& path, const std::function<void(const Json&)>& fn) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw ParseError(path + ":" + std::to_string(lineno) + ": invalid JSON");
        }
        fn(j);
    }
}

class JsonlWriter {
public:
    explicit JsonlWriter(const std::string& path) : out_(path, std::ios::trunc) {
        if (!out_) throw IoError("cannot open " + path + " for writing");
    }

    void write(const Json& j) { out_ << j.dump() << '\n'; }

    void close() { out_.close(); }

private:
    std::ofstream out_;
};

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ParseError(path + ": invalid JSON");
    return j;
}

inline void save_json_file(const std::string& path, const Json& j, int indent = 2) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(indent) << '\n';
}

}  // namespace returnguard
