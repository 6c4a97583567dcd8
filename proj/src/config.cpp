#include "ctinfo/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ctinfo/common.hpp"

namespace ctinfo::config {

namespace {
std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}
}  // namespace

KeyValues KeyValues::parse_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open params file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

KeyValues KeyValues::parse_text(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos, "params: expected 'key = value', got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        require(!key.empty() && !val.empty(), "params: empty key or value in: " + line);
        require(kv.values_.emplace(key, val).second, "params: duplicate key: " + key);
    }
    return kv;
}

double KeyValues::get_number(const std::string& key) const {
    auto it = values_.find(key);
    require(it != values_.end(), "params: missing key: " + key);
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    require(pos == it->second.size(), "params: not a number for key " + key + ": " + it->second);
    return v;
}

double KeyValues::get_number(const std::string& key, double fallback) const {
    return has(key) ? get_number(key) : fallback;
}

std::string KeyValues::get_string(const std::string& key) const {
    auto it = values_.find(key);
    require(it != values_.end(), "params: missing key: " + key);
    return it->second;
}

std::string KeyValues::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

void KeyValues::restrict_keys(const std::set<std::string>& allowed) const {
    for (const auto& [k, v] : values_)
        require(allowed.count(k) > 0, "params: unknown key: " + k);
}

std::string KeyValues::canonical() const {
    std::string s;
    for (const auto& [k, v] : values_) {
        s += k;
        s += '=';
        s += v;
        s += ';';
    }
    return s;
}

std::string KeyValues::fnv1a_hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (char c : canonical()) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace ctinfo::config
