#include "kmpso/data.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "kmpso/error.hpp"

namespace kmpso {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  if (delimiter == '\0') {
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) fields.push_back(f);
    return fields;
  }
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    fields.push_back(trim(std::string_view(line).substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return fields;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& value) {
  std::size_t v = 0;
  const std::string t = trim(value);
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    throw ConfigError("schema key '" + key + "': expected a count, got '" + value + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  for (auto& item : split(value, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

void set_schema_value(Schema& schema, const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  if (key == "class_col") {
    schema.class_col = parse_count(key, v);
  } else if (key == "delimiter") {
    if (v == "whitespace" || v == "space") {
      schema.delimiter = '\0';
    } else if (v == "tab" || v == "\\t") {
      schema.delimiter = '\t';
    } else if (v.size() == 1) {
      schema.delimiter = v[0];
    } else {
      throw ConfigError("schema key 'delimiter': unsupported value '" + v + "'");
    }
  } else if (key == "missing") {
    schema.missing = v;
  } else if (key == "ignore_cols") {
    schema.ignore_cols.clear();
    for (const auto& item : split_list(v)) schema.ignore_cols.push_back(parse_count(key, item));
  } else if (key == "classes") {
    schema.classes = split_list(v);
  } else if (key == "binarize") {
    schema.binarize = v;
  } else if (key == "skip_lines") {
    schema.skip_lines = parse_count(key, v);
  } else {
    throw ConfigError("unknown schema key '" + key + "'");
  }
}

Schema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open schema file '" + path + "'");
  Schema schema;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    set_schema_value(schema, trim(t.substr(0, eq)), t.substr(eq + 1));
  }
  return schema;
}

RawTable parse_table(std::istream& in, const Schema& schema) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> line_numbers;
  std::string line;
  std::size_t lineno = 0;
  std::size_t n_fields = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno <= schema.skip_lines) continue;
    if (trim(line).empty()) continue;
    auto fields = split(line, schema.delimiter);
    if (rows.empty()) {
      n_fields = fields.size();
    } else if (fields.size() != n_fields) {
      throw ParseError(lineno, "expected " + std::to_string(n_fields) + " fields, found " +
                                   std::to_string(fields.size()));
    }
    rows.push_back(std::move(fields));
    line_numbers.push_back(lineno);
  }
  if (rows.empty()) throw DataError("input contains no rows");

  const std::size_t class_col = schema.class_col.value_or(n_fields - 1);
  if (class_col >= n_fields) {
    throw ParseError(line_numbers.front(), "class column " + std::to_string(class_col) +
                                               " out of range for " +
                                               std::to_string(n_fields) + " fields");
  }
  std::vector<std::size_t> feature_cols;
  for (std::size_t c = 0; c < n_fields; ++c) {
    if (c == class_col) continue;
    if (std::find(schema.ignore_cols.begin(), schema.ignore_cols.end(), c) !=
        schema.ignore_cols.end()) {
      continue;
    }
    feature_cols.push_back(c);
  }
  if (feature_cols.empty()) throw DataError("schema leaves no feature columns");

  const std::size_t p = rows.size();
  const std::size_t n = feature_cols.size();
  RawTable table;
  table.values = Matrix(p, n);
  table.missing.assign(p * n, 0);
  table.categorical.assign(n, false);

  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t c = feature_cols[j];
    bool numeric = true;
    for (const auto& r : rows) {
      if (r[c] != schema.missing && !parse_number(r[c])) {
        numeric = false;
        break;
      }
    }
    table.categorical[j] = !numeric;
    std::unordered_map<std::string, double> codes;
    for (std::size_t i = 0; i < p; ++i) {
      const std::string& cell = rows[i][c];
      if (cell == schema.missing) {
        table.missing[i * n + j] = 1;
        continue;
      }
      if (numeric) {
        table.values(i, j) = *parse_number(cell);
      } else {
        auto [it, inserted] = codes.try_emplace(cell, static_cast<double>(codes.size()));
        table.values(i, j) = it->second;
      }
    }
  }

  if (schema.binarize) {
    table.class_names = {*schema.binarize, "not " + *schema.binarize};
  } else {
    table.class_names = schema.classes;
  }
  table.labels.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    const std::string& cell = rows[i][class_col];
    if (cell == schema.missing || cell.empty()) {
      throw ParseError(line_numbers[i], "missing class value");
    }
    if (schema.binarize) {
      table.labels[i] = cell == *schema.binarize ? 0 : 1;
      continue;
    }
    auto it = std::find(table.class_names.begin(), table.class_names.end(), cell);
    if (it == table.class_names.end()) {
      if (!schema.classes.empty()) {
        throw ParseError(line_numbers[i], "unknown class value '" + cell + "'");
      }
      table.class_names.push_back(cell);
      it = table.class_names.end() - 1;
    }
    table.labels[i] = static_cast<std::size_t>(it - table.class_names.begin());
  }
  return table;
}

RawTable load_csv(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open data file '" + path + "'");
  return parse_table(in, schema);
}

std::vector<double> column_means(const RawTable& table, std::span<const std::size_t> rows) {
  std::vector<std::size_t> all;
  if (rows.empty()) {
    all.resize(table.rows());
    std::iota(all.begin(), all.end(), std::size_t{0});
    rows = all;
  }
  std::vector<double> means(table.cols(), 0.0);
  for (std::size_t c = 0; c < table.cols(); ++c) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t r : rows) {
      if (table.is_missing(r, c)) continue;
      sum += table.values(r, c);
      ++count;
    }
    if (count == 0) {
      throw DataError("column " + std::to_string(c) + " has no observed values");
    }
    means[c] = sum / static_cast<double>(count);
  }
  return means;
}

RawTable impute_missing(const RawTable& table, std::span<const double> fill) {
  if (fill.size() != table.cols()) throw ContractError("impute_missing: fill width mismatch");
  RawTable out = table;
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      if (table.is_missing(r, c)) out.values(r, c) = fill[c];
    }
  }
  std::fill(out.missing.begin(), out.missing.end(), 0);
  return out;
}

RawTable impute_missing(const RawTable& table) {
  const bool any = std::any_of(table.missing.begin(), table.missing.end(),
                               [](char m) { return m != 0; });
  if (!any) return table;
  return impute_missing(table, column_means(table));
}

std::vector<ColumnStats> column_stats(const Matrix& values) {
  std::vector<ColumnStats> stats(values.cols());
  if (values.empty()) return stats;
  for (std::size_t c = 0; c < values.cols(); ++c) {
    stats[c] = {values(0, c), values(0, c)};
    for (std::size_t r = 1; r < values.rows(); ++r) {
      stats[c].min = std::min(stats[c].min, values(r, c));
      stats[c].max = std::max(stats[c].max, values(r, c));
    }
  }
  return stats;
}

Matrix normalize(const Matrix& values, std::span<const ColumnStats> stats) {
  if (stats.size() != values.cols()) throw ContractError("normalize: stats width mismatch");
  Matrix out(values.rows(), values.cols());
  for (std::size_t c = 0; c < values.cols(); ++c) {
    const double range = stats[c].max - stats[c].min;
    for (std::size_t r = 0; r < values.rows(); ++r) {
      if (range <= 0.0) {
        out(r, c) = 0.0;
        continue;
      }
      out(r, c) = std::clamp((values(r, c) - stats[c].min) / range, 0.0, 1.0);
    }
  }
  return out;
}

Matrix encode_labels(std::span<const std::size_t> labels, std::size_t n_classes) {
  Matrix targets(labels.size(), n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= n_classes) {
      throw ContractError("encode_labels: label " + std::to_string(labels[i]) +
                          " out of range for " + std::to_string(n_classes) + " classes");
    }
    targets(i, labels[i]) = 1.0;
  }
  return targets;
}

Matrix select_rows(const Matrix& values, std::span<const std::size_t> rows) {
  Matrix out(rows.size(), values.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= values.rows()) throw ContractError("select_rows: row out of range");
    std::copy_n(values.row(rows[i]).begin(), values.cols(), out.row(i).begin());
  }
  return out;
}

Dataset make_dataset(const RawTable& table, std::span<const std::size_t> rows,
                     std::optional<std::vector<ColumnStats>> stats) {
  if (std::any_of(table.missing.begin(), table.missing.end(), [](char m) { return m != 0; })) {
    throw ContractError("make_dataset: table still has missing cells");
  }
  Matrix raw = select_rows(table.values, rows);
  Dataset d;
  d.attribute_stats = stats ? std::move(*stats) : column_stats(raw);
  d.features = normalize(raw, d.attribute_stats);
  d.labels.reserve(rows.size());
  for (std::size_t r : rows) d.labels.push_back(table.labels[r]);
  d.targets = encode_labels(d.labels, table.n_classes());
  d.row_ids.assign(rows.begin(), rows.end());
  return d;
}

std::vector<std::size_t> FoldPlan::test_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_rows(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::sizes() const {
  std::vector<std::size_t> out(folds, 0);
  for (std::size_t f : assignment) ++out[f];
  return out;
}

FoldPlan kfold_split(std::size_t p, std::size_t folds, Rng& rng) {
  if (folds < 2) throw ConfigError("kfold_split: need at least 2 folds");
  if (folds > p) {
    throw ConfigError("kfold_split: " + std::to_string(folds) + " folds for " +
                      std::to_string(p) + " examples");
  }
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (std::size_t i = p - 1; i > 0; --i) {
    std::swap(order[i], order[rng.index(i + 1)]);
  }
  FoldPlan plan;
  plan.folds = folds;
  plan.assignment.resize(p);
  for (std::size_t i = 0; i < p; ++i) plan.assignment[order[i]] = i % folds;
  return plan;
}

}  // namespace kmpso
