#pragma once

#include <map>
#include <string>
#include <vector>

namespace krylab {

// Flat "[section]" + "key = value" configuration text; lists are comma
// separated.  Parse errors carry line numbers.
class Config {
  public:
    static Config parse_text(const std::string& text, const std::string& origin = "<config>");
    static Config parse_file(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    std::string require(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    long get_long(const std::string& section, const std::string& key, long fallback) const;
    std::vector<double> get_list(const std::string& section, const std::string& key) const;

    // canonical text used for hashing (sorted sections and keys)
    std::string canonical() const;

  private:
    std::map<std::string, std::map<std::string, std::string>> data_;
    std::string origin_;
};

// FNV-1a over the canonical text, hex encoded.
std::string config_hash(const Config& cfg);

} // namespace krylab
