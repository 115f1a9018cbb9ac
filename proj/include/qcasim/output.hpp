#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

// Diffable result files: CSV with RFC-4180 quoting, LF line endings and 17
// significant digits, JSON with sorted keys.
namespace qcasim::output {

class OutputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Quotes a field when it contains a comma, quote, CR or LF.
std::string csv_escape(const std::string& field);

class CsvTable {
public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

std::string cell(double v);
std::string cell(std::int64_t v);
inline std::string cell(int v) { return cell(static_cast<std::int64_t>(v)); }
inline std::string cell(const std::string& s) { return s; }

/// Finite doubles as numbers, infinities as the strings "inf" / "-inf".
nlohmann::json json_number(double v);

/// Creates the directory (and parents). Throws OutputError on failure.
void ensure_directory(const std::filesystem::path& dir);
/// Writes bytes exactly as given. Throws OutputError when the file cannot be written.
void write_text(const std::filesystem::path& path, const std::string& content);
void write_json(const std::filesystem::path& path, const nlohmann::json& j);
std::string dump_json(const nlohmann::json& j);

}  // namespace qcasim::output
