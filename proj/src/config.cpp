#include "krylab/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

#include "krylab/error.hpp"

namespace krylab {

namespace {
std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}
} // namespace

Config Config::parse_text(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                fail(ErrKind::config,
                     origin + ":" + std::to_string(lineno) + ": unterminated section header");
            section = trim(t.substr(1, t.size() - 2));
            if (section.empty())
                fail(ErrKind::config, origin + ":" + std::to_string(lineno) + ": empty section name");
            cfg.data_[section];
            continue;
        }
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            fail(ErrKind::config,
                 origin + ":" + std::to_string(lineno) + ": expected key = value, got '" + t + "'");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        if (key.empty())
            fail(ErrKind::config, origin + ":" + std::to_string(lineno) + ": empty key");
        cfg.data_[section][key] = val;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrKind::config, "cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str(), path);
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = data_.find(section);
    return s != data_.end() && s->second.count(key) > 0;
}

std::string Config::get(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
    auto s = data_.find(section);
    if (s == data_.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

std::string Config::require(const std::string& section, const std::string& key) const {
    if (!has(section, key))
        fail(ErrKind::config, origin_ + ": missing required key [" + section + "] " + key);
    return get(section, key, "");
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(ErrKind::config, origin_ + ": bad numeric value for [" + section + "] " + key + ": '" +
                                  v + "'");
    }
}

long Config::get_long(const std::string& section, const std::string& key, long fallback) const {
    if (!has(section, key)) return fallback;
    const std::string v = get(section, key, "");
    try {
        std::size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(ErrKind::config, origin_ + ": bad integer value for [" + section + "] " + key + ": '" +
                                  v + "'");
    }
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    if (!has(section, key)) return out;
    std::string v = get(section, key, "");
    std::istringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::string t = trim(item);
        if (t.empty()) continue;
        try {
            out.push_back(std::stod(t));
        } catch (const std::exception&) {
            fail(ErrKind::config,
                 origin_ + ": bad list entry for [" + section + "] " + key + ": '" + t + "'");
        }
    }
    return out;
}

std::string Config::canonical() const {
    std::ostringstream out;
    for (auto& [sec, kv] : data_) {
        out << "[" << sec << "]\n";
        for (auto& [k, v] : kv) out << k << "=" << v << "\n";
    }
    return out.str();
}

std::string config_hash(const Config& cfg) {
    std::string text = cfg.canonical();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace krylab
