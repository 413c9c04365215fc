#include "ssgc/cli.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace ssgc::cli {

namespace {

using nlohmann::json;

Matrix matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw InputError(what + " must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw InputError(what + " rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InputError(what + " is not rectangular");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const json& v = row[static_cast<std::size_t>(k)];
      if (!v.is_number()) throw InputError(what + " entries must be numbers");
      m(i, k) = v.get<double>();
      if (!std::isfinite(m(i, k))) throw InputError(what + " entries must be finite");
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<JointPartition> partition_from_json(const json& doc, int p) {
  if (!doc.contains("px")) return std::nullopt;
  if (!doc["px"].is_number_integer()) throw InputError("px must be an integer");
  const int px = doc["px"].get<int>();
  if (px < 1 || px >= p) {
    throw InputError("px must satisfy 1 <= px < " + std::to_string(p));
  }
  return JointPartition(px, p - px);
}

const json& field(const json& doc, const char* name) {
  if (!doc.contains(name)) throw InputError(std::string("model file is missing \"") + name + "\"");
  return doc[name];
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double parse_double(std::string_view s, long line, std::size_t column) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InputError("line " + std::to_string(line) + ", column " + std::to_string(column + 1) +
                     ": not a finite number");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

ISSModel model_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("model file must be a JSON object");
  const json& type = field(doc, "type");
  if (!type.is_string()) throw InputError("\"type\" must be a string");
  const std::string t = type.get<std::string>();
  if (t == "iss") {
    const Matrix a = matrix_from_json(field(doc, "A"), "A");
    const Matrix c = matrix_from_json(field(doc, "C"), "C");
    const Matrix k = matrix_from_json(field(doc, "K"), "K");
    const Matrix v = matrix_from_json(field(doc, "V"), "V");
    return ISSModel(a, c, k, v, partition_from_json(doc, static_cast<int>(c.rows())));
  }
  if (t == "var") {
    const json& list = field(doc, "coeffs");
    if (!list.is_array() || list.empty()) throw InputError("coeffs must be a non-empty array");
    std::vector<Matrix> coeffs;
    for (std::size_t i = 0; i < list.size(); ++i) {
      coeffs.push_back(matrix_from_json(list[i], "coeffs[" + std::to_string(i) + "]"));
    }
    const Matrix sigma = matrix_from_json(field(doc, "sigma"), "sigma");
    return var_to_iss(coeffs, sigma, partition_from_json(doc, static_cast<int>(sigma.rows())));
  }
  throw InputError("unknown model type \"" + t + "\" (expected \"iss\" or \"var\")");
}

ISSModel load_model(const std::string& path) { return model_from_json(read_file(path)); }

std::string model_to_json(const ISSModel& model) {
  json doc;
  doc["type"] = "iss";
  doc["A"] = matrix_to_json(model.A());
  doc["C"] = matrix_to_json(model.C());
  doc["K"] = matrix_to_json(model.K());
  doc["V"] = matrix_to_json(model.V());
  if (model.partition()) doc["px"] = model.partition()->px();
  return doc.dump(2) + "\n";
}

std::string var_model_to_json(const std::vector<Matrix>& coefficients, const Matrix& sigma,
                              std::optional<JointPartition> partition) {
  json doc;
  doc["type"] = "var";
  json list = json::array();
  for (const Matrix& a : coefficients) list.push_back(matrix_to_json(a));
  doc["coeffs"] = std::move(list);
  doc["sigma"] = matrix_to_json(sigma);
  if (partition) doc["px"] = partition->px();
  return doc.dump(2) + "\n";
}

TimeSeries read_csv(std::istream& in, int px) {
  std::string line;
  long line_no = 0;
  TimeSeries ts;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) break;
  }
  if (line_no == 0 || line.empty()) throw InputError("CSV input is empty");
  for (std::string_view name : split(line)) {
    while (!name.empty() && name.front() == ' ') name.remove_prefix(1);
    while (!name.empty() && name.back() == ' ') name.remove_suffix(1);
    ts.names.emplace_back(name);
  }
  const std::size_t p = ts.names.size();
  for (const std::string& n : ts.names) {
    if (n.empty()) throw InputError("CSV header has an empty column name");
    double ignored = 0.0;
    const auto [ptr, ec] = std::from_chars(n.data(), n.data() + n.size(), ignored);
    if (ec == std::errc() && ptr == n.data() + n.size()) {
      throw InputError("CSV header row is required (first row is numeric)");
    }
  }
  if (px < 1 || static_cast<std::size_t>(px) >= p) {
    throw InputError("--px must satisfy 1 <= px < " + std::to_string(p));
  }
  std::vector<double> values;
  long rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split(line);
    if (fields.size() != p) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(p) +
                       " fields, got " + std::to_string(fields.size()));
    }
    for (std::size_t k = 0; k < p; ++k) values.push_back(parse_double(fields[k], line_no, k));
    ++rows;
  }
  if (rows == 0) throw InputError("CSV input has no data rows");
  ts.observations = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                   Eigen::RowMajor>>(
      values.data(), rows, static_cast<Eigen::Index>(p));
  ts.partition = JointPartition(px, static_cast<int>(p) - px);
  return ts;
}

TimeSeries load_csv(const std::string& path, int px) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return read_csv(in, px);
}

}  // namespace ssgc::cli
