#pragma once

#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pmuplace {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex16(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)v);
    return buf;
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Line-delimited key=value record; the machine-readable output of every CLI
// command. Keys are [a-z0-9_.]+, values are newline-free; line order is the
// emission order, so identical runs serialize to identical bytes.
struct RunRecord {
    std::vector<std::pair<std::string, std::string>> fields;

    void add(std::string key, std::string value) {
        for (char c : key)
            if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '.'))
                throw std::logic_error("bad record key: " + key);
        if (value.find('\n') != std::string::npos)
            throw std::logic_error("record value contains newline");
        fields.emplace_back(std::move(key), std::move(value));
    }
    void add(std::string key, long long v) { add(std::move(key), std::to_string(v)); }
    void add(std::string key, int v) { add(std::move(key), std::to_string(v)); }
    void add(std::string key, double v) { add(std::move(key), format_double(v)); }

    const std::string* find(std::string_view key) const {
        for (const auto& [k, v] : fields)
            if (k == key) return &v;
        return nullptr;
    }

    std::string serialize() const {
        std::string out;
        for (const auto& [k, v] : fields) {
            out += k;
            out += '=';
            out += v;
            out += '\n';
        }
        return out;
    }

    static RunRecord parse(std::string_view text) {
        RunRecord r;
        size_t pos = 0;
        int line = 0;
        while (pos < text.size()) {
            size_t eol = text.find('\n', pos);
            if (eol == std::string_view::npos) eol = text.size();
            std::string_view ln = text.substr(pos, eol - pos);
            pos = eol + 1;
            ++line;
            if (ln.empty()) continue;
            size_t eq = ln.find('=');
            if (eq == std::string_view::npos)
                throw std::runtime_error("record line " + std::to_string(line) + ": missing '='");
            r.add(std::string(ln.substr(0, eq)), std::string(ln.substr(eq + 1)));
        }
        return r;
    }
};

// Strips volatile timing fields so two records can be compared for the
// deterministic rest.
inline std::string strip_wall_times(std::string_view record_text) {
    std::string out;
    size_t pos = 0;
    while (pos < record_text.size()) {
        size_t eol = record_text.find('\n', pos);
        if (eol == std::string_view::npos) eol = record_text.size();
        std::string_view ln = record_text.substr(pos, eol - pos);
        pos = eol + 1;
        size_t eq = ln.find('=');
        std::string_view key = eq == std::string_view::npos ? ln : ln.substr(0, eq);
        bool volatile_key = key == "wall_ms" ||
                            (key.size() > 8 && key.substr(key.size() - 8) == ".wall_ms");
        if (!volatile_key) {
            out += std::string(ln);
            out += '\n';
        }
    }
    return out;
}

}  // namespace pmuplace
