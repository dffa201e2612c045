#include "rblab/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace rblab {

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header.size())
    throw DomainError(fmt::format("csv: row has {} cells, header has {}", row.size(), header.size()));
  rows.push_back(std::move(row));
}

size_t CsvTable::column(const std::string& name) const {
  for (size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return k;
  throw DomainError(fmt::format("csv: no column '{}'", name));
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc()) throw Error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& cell) {
  double x = 0.0;
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), x);
  if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
    throw DomainError(fmt::format("csv: '{}' is not a number", cell));
  return x;
}

namespace {

void check_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") != std::string::npos)
    throw DomainError(fmt::format("csv: cell '{}' contains a separator, quote or newline", cell));
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  for (;;) {
    const size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p += ".json";
  return p;
}

}  // namespace

std::string to_csv_string(const CsvTable& table) {
  if (table.header.empty()) throw DomainError("csv: empty header");
  std::string out;
  auto emit = [&out](const std::vector<std::string>& cells) {
    for (size_t k = 0; k < cells.size(); ++k) {
      check_cell(cells[k]);
      if (k > 0) out += ',';
      out += cells[k];
    }
    out += '\n';
  };
  emit(table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw DomainError("csv: ragged row");
    emit(r);
  }
  return out;
}

CsvTable parse_csv_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CsvTable t;
  if (!std::getline(in, line) || line.empty()) throw DomainError("csv: missing header");
  t.header = split_line(line);
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != t.header.size())
      throw DomainError(fmt::format("csv: line {} has {} cells, expected {}", lineno, cells.size(), t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  return t;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table, const nlohmann::json& metadata) {
  {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(fmt::format("cannot write {}", path.string()));
    f << to_csv_string(table);
  }
  nlohmann::json side = metadata;
  side["columns"] = table.header;
  side["rows"] = table.rows.size();
  std::ofstream f(sidecar_path(path), std::ios::binary);
  if (!f) throw Error(fmt::format("cannot write {}", sidecar_path(path).string()));
  f << side.dump(2) << '\n';
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(fmt::format("cannot read {}", path.string()));
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_csv_string(ss.str());
}

nlohmann::json read_sidecar(const std::filesystem::path& csv_path) {
  std::ifstream f(sidecar_path(csv_path));
  if (!f) throw Error(fmt::format("cannot read {}", sidecar_path(csv_path).string()));
  return nlohmann::json::parse(f);
}

CsvTable dataset_table(const RBDataset& data) {
  CsvTable t;
  t.header = {"povm_index", "m", "g_end", "p_hat", "shots", "sequences"};
  for (const auto& r : data.rows)
    t.add_row({std::to_string(r.povm_index), std::to_string(r.m), std::to_string(r.g_end), format_double(r.p_hat),
               std::to_string(r.shots), std::to_string(r.sequences)});
  return t;
}

RBDataset dataset_from_table(const CsvTable& t) {
  const size_t ci = t.column("povm_index"), cm = t.column("m"), cg = t.column("g_end"), cp = t.column("p_hat"),
               cs = t.column("shots"), cq = t.column("sequences");
  RBDataset d;
  for (const auto& row : t.rows) {
    RBRow r;
    r.povm_index = std::stoi(row[ci]);
    r.m = std::stoi(row[cm]);
    r.g_end = std::stoi(row[cg]);
    r.p_hat = parse_double(row[cp]);
    r.shots = std::stoll(row[cs]);
    r.sequences = std::stoi(row[cq]);
    d.rows.push_back(r);
  }
  return d;
}

}  // namespace rblab
