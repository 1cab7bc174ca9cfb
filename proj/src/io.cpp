// SPDX-License-Identifier: Apache-2.0
#include "landau/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#ifndef LANDAU_VERSION
#    define LANDAU_VERSION "0.0.0"
#endif

namespace landau {

std::string version_string()
{
    return LANDAU_VERSION;
}

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

CsvTable::CsvTable(Provenance p, std::vector<std::string> columns)
    : prov_(std::move(p))
    , columns_(std::move(columns))
{
}

void CsvTable::add(std::vector<double> const& row)
{
    if (row.size() != columns_.size())
        throw std::invalid_argument("csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i)
    {
        if (i)
            body_ += ',';
        body_ += format_number(row[i]);
    }
    body_ += '\n';
    ++rows_;
}

namespace {

//! RFC 4180 quoting for cells holding separators or quotes
std::string quote(std::string const& cell)
{
    if (cell.find_first_of(",\"\n") == std::string::npos)
        return cell;
    std::string out = "\"";
    for (char c : cell)
    {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

void CsvTable::add_cells(std::vector<std::string> const& row)
{
    if (row.size() != columns_.size())
        throw std::invalid_argument("csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i)
    {
        if (i)
            body_ += ',';
        body_ += quote(row[i]);
    }
    body_ += '\n';
    ++rows_;
}

std::string CsvTable::str() const
{
    std::string out = "# landau-tagged v1 config=" + prov_.config_hash
                      + " seed=" + std::to_string(prov_.seed)
                      + " version=" + prov_.version + "\n";
    for (std::size_t i = 0; i < columns_.size(); ++i)
    {
        if (i)
            out += ',';
        out += columns_[i];
    }
    out += '\n';
    return out + body_;
}

void write_atomic(std::filesystem::path const& path, std::string const& content)
{
    namespace fs = std::filesystem;
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace landau
