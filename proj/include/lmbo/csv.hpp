#pragma once

#include <concepts>
#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lmbo {

/// Fixed 17-significant-digit rendering used by every CSV we emit.
std::string format_real(double v);

/// Comma-separated writer: header row on construction, LF line endings.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::vector<std::string>& header);

    template <typename... Ts>
    void row(const Ts&... values) {
        bool first = true;
        ((put(values, first)), ...);
        os_ << '\n';
    }

private:
    void sep(bool& first) {
        if (!first) {
            os_ << ',';
        }
        first = false;
    }
    void put(double v, bool& first) {
        sep(first);
        os_ << format_real(v);
    }
    template <std::integral T>
    void put(T v, bool& first) {
        sep(first);
        os_ << v;
    }
    void put(std::string_view v, bool& first) {
        sep(first);
        os_ << v;
    }
    void put(const char* v, bool& first) { put(std::string_view(v), first); }
    void put(const std::string& v, bool& first) { put(std::string_view(v), first); }

    std::ostream& os_;
};

/// Writes through a temporary sibling file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& body);

}  // namespace lmbo
