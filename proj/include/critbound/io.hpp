#pragma once

// Plain CSV output at 17 significant digits, plus a JSON manifest. Nothing
// written here depends on the clock, so identical inputs give identical files.

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "critbound/errors.hpp"

namespace critbound {

using CsvCell = std::variant<double, long long, std::string>;

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
        : path_(path), columns_(columns.size())
    {
        if (path.has_parent_path()) {
            std::filesystem::create_directories(path.parent_path());
        }
        out_.open(path);
        if (!out_) {
            throw Error("cannot open " + path.string() + " for writing");
        }
        out_.precision(17);
        for (std::size_t i = 0; i < columns.size(); ++i) {
            out_ << (i ? "," : "") << columns[i];
        }
        out_ << '\n';
    }

    void row(std::initializer_list<CsvCell> cells) { row(std::vector<CsvCell>(cells)); }

    void row(const std::vector<CsvCell>& cells)
    {
        if (cells.size() != columns_) {
            throw Error("CSV row width does not match the header of " + path_.string());
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                out_ << ',';
            }
            std::visit([this](const auto& v) { write(v); }, cells[i]);
        }
        out_ << '\n';
    }

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::size_t columns_;
    std::ofstream out_;

    void write(double v) { out_ << v; }
    void write(long long v) { out_ << v; }
    void write(const std::string& v)
    {
        if (v.find_first_of(",\"\n") == std::string::npos) {
            out_ << v;
            return;
        }
        out_ << '"';
        for (char ch : v) {
            out_ << (ch == '"' ? "\"\"" : std::string(1, ch));
        }
        out_ << '"';
    }
};

inline void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open " + path.string() + " for writing");
    }
    out << text;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    write_text(path, j.dump(2) + "\n");
}

} // namespace critbound
