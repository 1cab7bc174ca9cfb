// SPDX-License-Identifier: Apache-2.0
//! \file io.hpp
//! Provenance-tagged CSV tables, JSON sidecars and atomic file output.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace landau {

std::string version_string();

struct Provenance
{
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version = version_string();
};

//! Shortest decimal that round-trips (locale independent)
std::string format_number(double x);

/*!
 * CSV table. The first line is
 * `# landau-tagged v1 config=<hash> seed=<seed> version=<version>`,
 * the second the column names.
 */
class CsvTable
{
  public:
    CsvTable(Provenance p, std::vector<std::string> columns);

    void add(std::vector<double> const& row);
    void add_cells(std::vector<std::string> const& row);
    std::size_t rows() const { return rows_; }
    std::string str() const;

  private:
    Provenance prov_;
    std::vector<std::string> columns_;
    std::string body_;
    std::size_t rows_ = 0;
};

//! Write via a temporary file in the same directory and rename
void write_atomic(std::filesystem::path const& path, std::string const& content);

}  // namespace landau
