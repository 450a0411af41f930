#ifndef RCAR_IO_HPP
#define RCAR_IO_HPP

#include "rcar/process_sim.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace rcar::io {

/// Locale-independent rendering with 17 significant digits.
inline std::string format_double(double value)
{
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

/// RFC 4180 field quoting; only applied when needed.
inline std::string csv_field(std::string_view text)
{
    if (text.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(text);
    std::string out = "\"";
    for (const char c : text) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Writes comma-separated rows terminated by a bare LF.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(std::initializer_list<std::string_view> names)
    {
        bool first = true;
        for (const auto name : names) {
            if (!first)
                out_ << ',';
            out_ << csv_field(name);
            first = false;
        }
        out_ << '\n';
    }

    template <class... Ts>
    void row(const Ts&... values)
    {
        bool first = true;
        ((emit(values, first)), ...);
        out_ << '\n';
    }

private:
    template <class T>
    void emit(const T& value, bool& first)
    {
        if (!first)
            out_ << ',';
        first = false;
        if constexpr (std::is_floating_point_v<T>)
            out_ << format_double(static_cast<double>(value));
        else if constexpr (std::is_integral_v<T>)
            out_ << std::to_string(value);
        else
            out_ << csv_field(value);
    }

    std::ostream& out_;
};

inline std::ofstream open_output(const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    return out;
}

/// One value per line under a "value" header.
inline void write_samples_csv(std::ostream& out, std::span<const double> samples)
{
    CsvWriter csv(out);
    csv.header({"value"});
    for (const double x : samples)
        csv.row(x);
}

inline void write_samples_csv(const std::filesystem::path& path, std::span<const double> samples)
{
    auto out = open_output(path);
    write_samples_csv(out, samples);
}

/// Reads the first column of a CSV file, skipping a non-numeric header line.
inline std::vector<double> read_samples_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::vector<double> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::string_view field = std::string_view(line).substr(0, line.find(','));
        double value = 0.0;
        const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
        if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
            if (line_no == 1)
                continue;
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": not a number");
        }
        out.push_back(value);
    }
    return out;
}

/// Columns k, G_k, X_k, X_k/k^a for k = 1..n.
inline void write_path_csv(std::ostream& out, const ProcessPath& path)
{
    CsvWriter csv(out);
    csv.header({"k", "G_k", "X_k", "X_k/k^a"});
    for (std::size_t k = 1; k <= path.steps(); ++k)
        csv.row(static_cast<std::uint64_t>(k), path.arrivals.at(k), path.raw[k], path.normalized[k]);
}

/// FNV-1a, 64 bit.
inline std::uint64_t fnv1a64(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace rcar::io

#endif // RCAR_IO_HPP
