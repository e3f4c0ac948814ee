#include "evrisk/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "evrisk/errors.hpp"

namespace evrisk {

std::string format_double(double x) {
  char buf[40];
  for (int precision : {15, 16, 17}) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw DataError("write_csv: row width does not match header");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "\n");
  }
  if (!out) throw DataError("write failed: " + path.string());
}

std::string file_hash_hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open for hashing: " + path.string());
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  char chunk[4096];
  while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      hash ^= static_cast<unsigned char>(chunk[i]);
      hash *= 0x100000001b3ULL;
    }
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

TopKSample parse_returns_csv(const std::filesystem::path& path, std::size_t k) {
  if (k < 1) throw std::domain_error("parse_returns_csv: k must be >= 1");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path.string());

  std::string line;
  std::size_t line_no = 0;

  auto fail = [&](const std::string& what) -> DataError {
    return DataError(path.string() + ":" + std::to_string(line_no) + ": " + what);
  };

  if (!std::getline(in, line)) throw fail("empty file");
  ++line_no;
  {
    std::stringstream header(line);
    std::string col1, col2;
    std::getline(header, col1, ',');
    std::getline(header, col2);
    if (trim(col1) != "return" || trim(col2) != "label")
      throw fail("expected header 'return,label'");
  }

  struct Record {
    double value;
    bool red;
  };
  std::vector<Record> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw fail("missing label column");
    const std::string value_str = trim(line.substr(0, comma));
    const std::string label = trim(line.substr(comma + 1));
    char* end = nullptr;
    const double value = std::strtod(value_str.c_str(), &end);
    if (value_str.empty() || end != value_str.c_str() + value_str.size())
      throw fail("bad return value '" + value_str + "'");
    bool red;
    if (label == "red")
      red = true;
    else if (label == "green")
      red = false;
    else
      throw fail("label must be 'red' or 'green', got '" + label + "'");
    records.push_back({value, red});
  }

  if (records.size() < k + 1)
    throw DataError(path.string() + ": need at least k+1 = " + std::to_string(k + 1) +
                    " rows, got " + std::to_string(records.size()));

  // Descending by value; stable sort keeps input order on duplicates.
  std::stable_sort(records.begin(), records.end(),
                   [](const Record& a, const Record& b) { return a.value > b.value; });

  TopKSample sample;
  sample.threshold = records[k].value;
  for (std::size_t i = 0; i < k; ++i) {
    const double excess = records[i].value - sample.threshold;
    if (records[i].red)
      sample.red_excesses.push_back(excess);
    else
      sample.green_excesses.push_back(excess);
  }
  return sample;
}

}  // namespace evrisk
