#pragma once

#include <map>
#include <string>
#include <vector>

namespace gpolar {

struct TomlValue {
    enum class Kind { string, integer, real, boolean, array };
    Kind kind = Kind::string;
    std::string str;
    long long int_v = 0;
    double real_v = 0.0;
    bool bool_v = false;
    std::vector<TomlValue> items;

    double as_real() const;  // integers widen; anything else throws
    const char* kind_name() const;
};

// Flat key/value view of a TOML subset: [section] headers, key = value lines,
// strings, integers, floats, booleans, and flat (possibly multi-line) arrays.
// Sectioned keys are exposed as "section.key". Typed getters throw
// std::invalid_argument naming the offending field.
class TomlTable {
  public:
    bool has(const std::string& key) const;
    const TomlValue& get(const std::string& key) const;
    void set(const std::string& key, TomlValue v);

    std::string get_string(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_real(const std::string& key) const;
    double get_real(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::vector<long long> get_int_array(const std::string& key) const;
    std::vector<double> get_real_array(const std::string& key) const;
    std::vector<std::string> get_string_array(const std::string& key) const;

    // Sweep axes: a scalar lifts to a one-element list, a missing key to the
    // fallback.
    std::vector<long long> axis_int(const std::string& key, long long fallback) const;
    std::vector<double> axis_real(const std::string& key, double fallback) const;

    const std::map<std::string, TomlValue>& entries() const { return entries_; }

  private:
    std::map<std::string, TomlValue> entries_;
};

TomlTable parse_toml(const std::string& text);

// Value parser for command-line overrides; a bare word that is not a number,
// boolean, or array falls back to a plain string.
TomlValue parse_toml_value(const std::string& text);

}  // namespace gpolar
