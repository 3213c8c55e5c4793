#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace hetcomp::cli {

/// In-memory CSV table with a leading `# config_digest:` comment line.
class CsvTable {
 public:
  CsvTable(std::string digest, std::vector<std::string> columns);

  CsvTable& row();
  CsvTable& add(double value);
  CsvTable& add(std::uint64_t value);
  CsvTable& add(int value) { return add(static_cast<std::uint64_t>(value)); }
  CsvTable& add(std::string value);
  CsvTable& add(const char* value) { return add(std::string(value)); }

  std::string str() const;
  const std::vector<std::string>& columns() const noexcept { return columns_; }

 private:
  std::string digest_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace hetcomp::cli
