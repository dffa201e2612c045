#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "rblab/rbsim.hpp"

namespace rblab {

// Header plus rows of already formatted cells. Cells never contain commas,
// quotes or newlines; the writer rejects them.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
  size_t column(const std::string& name) const;  // throws DomainError if absent
};

// Shortest decimal that round-trips through strtod.
std::string format_double(double x);
double parse_double(const std::string& cell);

// UTF-8, LF line endings, '.' decimal separator.
std::string to_csv_string(const CsvTable& table);
CsvTable parse_csv_string(const std::string& text);

// Writes <path> and the sidecar <path>.json holding `metadata` plus the column list.
void write_csv(const std::filesystem::path& path, const CsvTable& table, const nlohmann::json& metadata);
CsvTable read_csv(const std::filesystem::path& path);
nlohmann::json read_sidecar(const std::filesystem::path& csv_path);

// Columns: povm_index, m, g_end, p_hat, shots, sequences.
CsvTable dataset_table(const RBDataset& data);
RBDataset dataset_from_table(const CsvTable& table);

}  // namespace rblab
