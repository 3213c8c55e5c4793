#include "csv.hpp"

#include <fstream>
#include <stdexcept>

#include <hetcomp/config_io.hpp>
#include <hetcomp/error.hpp>

namespace hetcomp::cli {

namespace {

std::string csv_field(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

CsvTable::CsvTable(std::string digest, std::vector<std::string> columns)
    : digest_(std::move(digest)), columns_(std::move(columns)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  rows_.back().reserve(columns_.size());
  return *this;
}

CsvTable& CsvTable::add(double value) { return add(format_double(value)); }

CsvTable& CsvTable::add(std::uint64_t value) { return add(std::to_string(value)); }

CsvTable& CsvTable::add(std::string value) {
  if (rows_.empty() || rows_.back().size() == columns_.size()) {
    throw std::logic_error("csv row overflow");
  }
  rows_.back().push_back(csv_field(value));
  return *this;
}

std::string CsvTable::str() const {
  std::string out = "# config_digest: " + digest_ + "\n";
  auto line = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  line(columns_);
  for (const auto& r : rows_) {
    if (r.size() != columns_.size()) throw std::logic_error("incomplete csv row");
    line(r);
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace hetcomp::cli
