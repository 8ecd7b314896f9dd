#include "gpolar/toml_lite.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace gpolar {

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void field_fail(const std::string& key, const std::string& msg) {
    throw std::invalid_argument("config field '" + key + "': " + msg);
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// cuts a # comment that is outside any quoted string
std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_str) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_str = false;
            }
        } else if (c == '"') {
            in_str = true;
        } else if (c == '#') {
            return line.substr(0, i);
        }
    }
    return line;
}

bool bare_key_ok(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' && c != '.')
            return false;
    return true;
}

// net bracket depth outside strings; used to join multi-line arrays
int bracket_balance(const std::string& s) {
    bool in_str = false;
    int depth = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (in_str) {
            if (c == '\\') {
                ++i;
            } else if (c == '"') {
                in_str = false;
            }
        } else if (c == '"') {
            in_str = true;
        } else if (c == '[') {
            ++depth;
        } else if (c == ']') {
            --depth;
        }
    }
    return depth;
}

bool parse_integer(const std::string& s, long long& out) {
    std::string digits;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) digits += s[i++];
    bool prev_digit = false;
    bool any = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            prev_digit = true;
            any = true;
        } else if (c == '_' && prev_digit) {
            prev_digit = false;  // underscore separators need digits on both sides
        } else {
            return false;
        }
    }
    if (!any || !prev_digit) return false;
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(digits.c_str(), &end, 10);
    if (errno != 0 || end == nullptr || *end != '\0') return false;
    out = v;
    return true;
}

std::string parse_quoted(const std::string& s, int line) {
    if (s.size() < 2 || s.back() != '"') fail(line, "unterminated string");
    std::string out;
    for (size_t i = 1; i + 1 < s.size(); ++i) {
        char c = s[i];
        if (c == '\\') {
            if (i + 2 >= s.size()) fail(line, "dangling escape in string");
            char e = s[++i];
            switch (e) {
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: fail(line, std::string("unsupported escape \\") + e);
            }
        } else if (c == '"') {
            fail(line, "unexpected quote inside string");
        } else {
            out += c;
        }
    }
    return out;
}

std::vector<std::string> split_array_items(const std::string& body, int line) {
    std::vector<std::string> items;
    std::string cur;
    bool in_str = false;
    int depth = 0;
    for (size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (in_str) {
            cur += c;
            if (c == '\\' && i + 1 < body.size()) {
                cur += body[++i];
            } else if (c == '"') {
                in_str = false;
            }
            continue;
        }
        if (c == '"') {
            in_str = true;
            cur += c;
        } else if (c == '[') {
            ++depth;
            cur += c;
        } else if (c == ']') {
            --depth;
            cur += c;
        } else if (c == ',' && depth == 0) {
            items.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (in_str || depth != 0) fail(line, "unbalanced array");
    std::string last = trim(cur);
    if (!last.empty()) items.push_back(cur);  // trailing comma is allowed
    return items;
}

TomlValue parse_value(const std::string& raw, int line) {
    std::string s = trim(raw);
    if (s.empty()) fail(line, "missing value");
    TomlValue v;
    if (s.front() == '"') {
        v.kind = TomlValue::Kind::string;
        v.str = parse_quoted(s, line);
        return v;
    }
    if (s == "true" || s == "false") {
        v.kind = TomlValue::Kind::boolean;
        v.bool_v = s == "true";
        return v;
    }
    if (s.front() == '[') {
        if (s.back() != ']') fail(line, "unterminated array");
        v.kind = TomlValue::Kind::array;
        for (const std::string& item : split_array_items(s.substr(1, s.size() - 2), line))
            v.items.push_back(parse_value(item, line));
        return v;
    }
    if (parse_integer(s, v.int_v)) {
        v.kind = TomlValue::Kind::integer;
        return v;
    }
    errno = 0;
    char* end = nullptr;
    double d = std::strtod(s.c_str(), &end);
    if (errno == 0 && end != nullptr && *end == '\0' && end != s.c_str()) {
        v.kind = TomlValue::Kind::real;
        v.real_v = d;
        return v;
    }
    fail(line, "cannot parse value '" + s + "'");
}

}  // namespace

double TomlValue::as_real() const {
    if (kind == Kind::real) return real_v;
    if (kind == Kind::integer) return static_cast<double>(int_v);
    throw std::invalid_argument(std::string("expected a number, got ") + kind_name());
}

const char* TomlValue::kind_name() const {
    switch (kind) {
        case Kind::string: return "string";
        case Kind::integer: return "integer";
        case Kind::real: return "float";
        case Kind::boolean: return "boolean";
        case Kind::array: return "array";
    }
    return "?";
}

bool TomlTable::has(const std::string& key) const { return entries_.count(key) > 0; }

const TomlValue& TomlTable::get(const std::string& key) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) field_fail(key, "missing");
    return it->second;
}

void TomlTable::set(const std::string& key, TomlValue v) { entries_[key] = std::move(v); }

std::string TomlTable::get_string(const std::string& key) const {
    const TomlValue& v = get(key);
    if (v.kind != TomlValue::Kind::string) field_fail(key, "expected a string");
    return v.str;
}

std::string TomlTable::get_string(const std::string& key, const std::string& fallback) const {
    return has(key) ? get_string(key) : fallback;
}

long long TomlTable::get_int(const std::string& key) const {
    const TomlValue& v = get(key);
    if (v.kind != TomlValue::Kind::integer) field_fail(key, "expected an integer");
    return v.int_v;
}

long long TomlTable::get_int(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

double TomlTable::get_real(const std::string& key) const {
    const TomlValue& v = get(key);
    if (v.kind != TomlValue::Kind::integer && v.kind != TomlValue::Kind::real)
        field_fail(key, "expected a number");
    return v.as_real();
}

double TomlTable::get_real(const std::string& key, double fallback) const {
    return has(key) ? get_real(key) : fallback;
}

bool TomlTable::get_bool(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const TomlValue& v = get(key);
    if (v.kind != TomlValue::Kind::boolean) field_fail(key, "expected a boolean");
    return v.bool_v;
}

std::vector<long long> TomlTable::get_int_array(const std::string& key) const {
    const TomlValue& v = get(key);
    if (v.kind != TomlValue::Kind::array) field_fail(key, "expected an array");
    std::vector<long long> out;
    for (const TomlValue& item : v.items) {
        if (item.kind != TomlValue::Kind::integer) field_fail(key, "expected integer entries");
        out.push_back(item.int_v);
    }
    return out;
}

std::vector<double> TomlTable::get_real_array(const std::string& key) const {
    const TomlValue& v = get(key);
    if (v.kind != TomlValue::Kind::array) field_fail(key, "expected an array");
    std::vector<double> out;
    for (const TomlValue& item : v.items) {
        if (item.kind != TomlValue::Kind::integer && item.kind != TomlValue::Kind::real)
            field_fail(key, "expected numeric entries");
        out.push_back(item.as_real());
    }
    return out;
}

std::vector<std::string> TomlTable::get_string_array(const std::string& key) const {
    const TomlValue& v = get(key);
    if (v.kind != TomlValue::Kind::array) field_fail(key, "expected an array");
    std::vector<std::string> out;
    for (const TomlValue& item : v.items) {
        if (item.kind != TomlValue::Kind::string) field_fail(key, "expected string entries");
        out.push_back(item.str);
    }
    return out;
}

std::vector<long long> TomlTable::axis_int(const std::string& key, long long fallback) const {
    if (!has(key)) return {fallback};
    const TomlValue& v = get(key);
    if (v.kind == TomlValue::Kind::integer) return {v.int_v};
    std::vector<long long> out = get_int_array(key);
    if (out.empty()) field_fail(key, "axis must not be empty");
    return out;
}

std::vector<double> TomlTable::axis_real(const std::string& key, double fallback) const {
    if (!has(key)) return {fallback};
    const TomlValue& v = get(key);
    if (v.kind == TomlValue::Kind::integer || v.kind == TomlValue::Kind::real)
        return {v.as_real()};
    std::vector<double> out = get_real_array(key);
    if (out.empty()) field_fail(key, "axis must not be empty");
    return out;
}

TomlTable parse_toml(const std::string& text) {
    TomlTable table;
    std::string section;
    size_t pos = 0;
    int line_no = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        int start_line = line_no;

        std::string body = trim(strip_comment(line));
        if (body.empty()) continue;
        if (body.front() == '[' && body.find('=') == std::string::npos) {
            if (body.back() != ']') fail(start_line, "unterminated section header");
            std::string name = trim(body.substr(1, body.size() - 2));
            if (!bare_key_ok(name)) fail(start_line, "bad section name '" + name + "'");
            section = name;
            continue;
        }
        size_t eq = body.find('=');
        if (eq == std::string::npos) fail(start_line, "expected 'key = value'");
        std::string key = trim(body.substr(0, eq));
        if (!bare_key_ok(key)) fail(start_line, "bad key '" + key + "'");
        std::string value = body.substr(eq + 1);
        while (bracket_balance(value) > 0) {
            if (pos >= text.size()) fail(start_line, "unterminated array");
            eol = text.find('\n', pos);
            if (eol == std::string::npos) eol = text.size();
            std::string cont = text.substr(pos, eol - pos);
            pos = eol + 1;
            ++line_no;
            value += " " + strip_comment(cont);
        }
        std::string full = section.empty() ? key : section + "." + key;
        if (table.has(full)) fail(start_line, "duplicate key '" + full + "'");
        table.set(full, parse_value(value, start_line));
    }
    return table;
}

TomlValue parse_toml_value(const std::string& text) {
    try {
        return parse_value(text, 0);
    } catch (const std::invalid_argument&) {
        TomlValue v;
        v.kind = TomlValue::Kind::string;
        v.str = trim(text);
        return v;
    }
}

}  // namespace gpolar
