// Quarantined adapter for the externally released NeoRL evaluation files.
// The release has no documented schema, so every assumption about its layout
// lives in this file and nowhere else:
//   - one CSV per algorithm, file name `<algorithm>*<environment-tag>*.csv`
//     (case-insensitive match on the environment tag),
//   - a header row, one data row per hyperparameter assignment,
//   - an optional `seed` column; the return value is taken from a column
//     named value/return/reward/score/mean, or the last numeric column,
//   - an optional id column (hyperparam_id/hp_id/id/index); row order is the
//     fallback id.
// If the release's real layout differs, only this mapping needs adjusting.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "eop/io.hpp"

namespace eop {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string::size_type start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n\"");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n\"");
  return s.substr(first, last - first + 1);
}

bool parse_number(const std::string& field, double& out) {
  const std::string t = trim(field);
  const auto res = std::from_chars(t.data(), t.data() + t.size(), out);
  return res.ec == std::errc{} && res.ptr == t.data() + t.size() &&
         std::isfinite(out);
}

int find_column(const std::vector<std::string>& header,
                const std::vector<std::string>& candidates) {
  for (const std::string& want : candidates) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (lower(trim(header[i])) == want) return static_cast<int>(i);
    }
  }
  return -1;
}

}  // namespace

std::vector<RunRecord> import_neorl(const std::string& dir,
                                    const std::string& environment) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw std::runtime_error("import-neorl: not a directory: " + dir);
  }
  const std::string env_tag = lower(environment);

  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = lower(entry.path().filename().string());
    if (entry.path().extension() != ".csv") continue;
    if (name.find(env_tag) == std::string::npos) continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::runtime_error("import-neorl: no CSV files matching '" +
                             environment + "' under " + dir);
  }

  std::vector<RunRecord> records;
  for (const fs::path& file : files) {
    const std::string stem = file.stem().string();
    const std::string algorithm =
        trim(stem.substr(0, stem.find_first_of("_-.")));
    if (algorithm.empty()) {
      throw std::runtime_error("import-neorl: cannot infer algorithm from " +
                               file.string());
    }

    std::ifstream in(file);
    if (!in) throw std::runtime_error("import-neorl: cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line)) {
      throw std::runtime_error("import-neorl: empty file " + file.string());
    }
    const std::vector<std::string> header = split_csv(line);
    const int value_col =
        find_column(header, {"value", "return", "reward", "score", "mean"});
    const int seed_col = find_column(header, {"seed"});
    const int id_col = find_column(header, {"hyperparam_id", "hp_id", "id", "index"});

    std::size_t row = 0;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      const std::vector<std::string> fields = split_csv(line);
      double value = 0.0;
      bool have_value = false;
      if (value_col >= 0 && static_cast<std::size_t>(value_col) < fields.size()) {
        have_value = parse_number(fields[static_cast<std::size_t>(value_col)], value);
      } else {
        for (std::size_t i = fields.size(); i-- > 0;) {  // last numeric column
          if (parse_number(fields[i], value)) {
            have_value = true;
            break;
          }
        }
      }
      if (!have_value) {
        throw std::runtime_error("import-neorl: no numeric value in row " +
                                 std::to_string(row + 2) + " of " + file.string());
      }

      RunRecord r;
      r.algorithm = algorithm;
      r.environment = environment;
      if (id_col >= 0 && static_cast<std::size_t>(id_col) < fields.size()) {
        r.hyperparam_id = trim(fields[static_cast<std::size_t>(id_col)]);
      }
      if (r.hyperparam_id.empty()) r.hyperparam_id = "hp-" + std::to_string(row);
      double seed = 0.0;
      if (seed_col >= 0 && static_cast<std::size_t>(seed_col) < fields.size() &&
          parse_number(fields[static_cast<std::size_t>(seed_col)], seed)) {
        r.seed = static_cast<long>(seed);
      }
      r.value = value;
      records.push_back(std::move(r));
      ++row;
    }
  }
  return records;
}

}  // namespace eop
