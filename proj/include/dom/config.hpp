#pragma once

#include <map>
#include <stdexcept>
#include <string>

#include "dom/rng.hpp"

namespace dom {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key=value configuration. Keys are namespaced (sim.*, expert.*,
// executor.*, flow.*, bench.*). Unknown keys are rejected at parse time;
// the digest is order-independent because entries live in a sorted map.
class Config {
public:
    Config();

    static Config from_file(const std::string& path);
    static Config from_string(const std::string& text);

    // Flat --key=value override, validated like file keys.
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    double get_double(const std::string& key) const;
    int get_int(const std::string& key) const;
    bool get_bool(const std::string& key) const;
    std::string get_string(const std::string& key) const;

    uint64_t digest() const;
    std::string canonical_text() const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    void parse_line(const std::string& line, int lineno);

    std::map<std::string, std::string> values_;
};

}  // namespace dom
