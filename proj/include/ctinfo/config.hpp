#pragma once
#include <map>
#include <set>
#include <string>

namespace ctinfo::config {

// Flat key-value parameter files ("mu = 1.0", one pair per line, '#' comments).
// Unknown keys are hard errors so typos never pass silently.
class KeyValues {
  public:
    static KeyValues parse_file(const std::string& path);
    static KeyValues parse_text(const std::string& text);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    double get_number(const std::string& key) const;
    double get_number(const std::string& key, double fallback) const;
    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

    // throws std::invalid_argument naming the first key outside `allowed`
    void restrict_keys(const std::set<std::string>& allowed) const;

    // canonical "k=v;..." form used for the output-file metadata hash
    std::string canonical() const;
    std::string fnv1a_hash() const;

  private:
    std::map<std::string, std::string> values_;
};

}  // namespace ctinfo::config
