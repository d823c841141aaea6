#include "jbc/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace jbc::io {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

double parse_number(std::string_view s, const std::string& where) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw IoError("malformed number '" + std::string(s) + "' in " + where);
  }
  return x;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::vector<double> doubles(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw IoError(std::string("missing array '") + key + "'");
  }
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw IoError(std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  return out;
}

double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) throw IoError(std::string("missing number '") + key + "'");
  return j.at(key).get<double>();
}

Json array(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// Uniform grid check shared by controls and response samples.
double uniform_step(const std::vector<double>& t, const std::string& what) {
  if (t.size() < 2) throw IoError(what + " needs at least 2 samples");
  if (t.front() != 0.0) throw IoError(what + " must start at t = 0");
  const double h = t.back() / static_cast<double>(t.size() - 1);
  if (!(h > 0.0)) throw IoError(what + " abscissae must increase");
  const double tol = 1e-9 * std::max(1.0, t.back());
  for (std::size_t n = 0; n < t.size(); ++n) {
    if (std::abs(t[n] - static_cast<double>(n) * h) > tol) {
      throw IoError(what + " abscissae are not uniformly spaced (row " + std::to_string(n + 2) + ")");
    }
  }
  return h;
}

}  // namespace

std::string format_number(double x) { return fmt::format("{}", x); }

std::size_t Table::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw IoError("missing CSV column '" + name + "'");
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  std::string text;
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i > 0) text += ',';
    text += table.header[i];
  }
  text += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) text += ',';
      text += format_number(row[i]);
    }
    text += '\n';
  }
  write_text(path, text);
}

Table read_csv(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  std::istringstream in(text);
  std::string line;
  Table table;
  if (!std::getline(in, line)) throw IoError("empty CSV file " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  for (auto h : split(line)) {
    while (!h.empty() && h.front() == ' ') h.remove_prefix(1);
    while (!h.empty() && h.back() == ' ') h.remove_suffix(1);
    table.header.emplace_back(h);
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw IoError(fmt::format("{}:{}: expected {} fields, found {}", path.string(), lineno,
                                table.header.size(), cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) row.push_back(parse_number(c, fmt::format("{}:{}", path.string(), lineno)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

Json to_json(const JacobiMatrix& J) {
  Json j;
  j["a"] = std::vector<double>(J.off_diagonal().begin(), J.off_diagonal().end());
  j["b"] = std::vector<double>(J.diagonal().begin(), J.diagonal().end());
  return j;
}

JacobiMatrix jacobi_from_json(const Json& j) {
  try {
    return JacobiMatrix(doubles(j, "a"), doubles(j, "b"));
  } catch (const DomainError& e) {
    throw IoError(std::string("invalid Jacobi matrix: ") + e.what());
  }
}

Json to_json(const SpectralData& sd) {
  Json j;
  j["lambdas"] = array(sd.lambdas());
  j["rhos"] = array(sd.rhos());
  return j;
}

Json to_json(const GramMatrix& G) {
  Json j;
  j["T"] = G.T;
  Json rows = Json::array();
  for (int r = 0; r < G.size(); ++r) rows.push_back(array(G.g.row(r).transpose()));
  j["g"] = std::move(rows);
  return j;
}

GramMatrix gram_from_json(const Json& j) {
  const double T = number(j, "T");
  if (!j.contains("g") || !j.at("g").is_array()) throw IoError("missing array 'g'");
  const auto& rows = j.at("g");
  const auto n = static_cast<Eigen::Index>(rows.size());
  WideMatrix g(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw IoError("Gram matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) g(r, c) = Wide(row.at(static_cast<std::size_t>(c)).get<double>());
  }
  return GramMatrix(std::move(g), T);
}

Json to_json(const Reconstruction& r) {
  Json j;
  j["a"] = r.a;
  j["b"] = r.b;
  j["residuals"] = r.residuals;
  j["rank"] = r.rank;
  j["condition"] = r.condition;
  return j;
}

Reconstruction reconstruction_from_json(const Json& j) {
  Reconstruction r;
  r.a = doubles(j, "a");
  r.b = doubles(j, "b");
  r.residuals = doubles(j, "residuals");
  if (!j.contains("rank") || !j.at("rank").is_number_integer()) throw IoError("missing integer 'rank'");
  r.rank = j.at("rank").get<int>();
  r.condition = number(j, "condition");
  return r;
}

Json to_json(const KappaReport& k) {
  Json j;
  j["kappa_E"] = {{"re", k.kappa_E.real()}, {"im", k.kappa_E.imag()}, {"relative_spread", k.kappa_E_spread}};
  j["kappa_B"] = {{"re", k.kappa_B.real()}, {"im", k.kappa_B.imag()}, {"relative_spread", k.kappa_B_spread}};
  j["product"] = {{"re", k.product.real()}, {"im", k.product.imag()}};
  return j;
}

Json to_json(const AxiomReport& a) {
  Json j;
  j["point_evaluation_max_ratio"] = a.point_evaluation_max_ratio;
  j["conjugation_max_diff"] = a.conjugation_max_diff;
  j["blaschke_checked"] = a.blaschke_checked;
  j["blaschke_max_diff"] = a.blaschke_max_diff;
  j["blaschke_max_remainder"] = a.blaschke_max_remainder;
  j["tolerance"] = a.tolerance;
  j["passed"] = a.passed();
  return j;
}

Json to_json(const SBasisControl& f) {
  Json j;
  j["T"] = f.T;
  const Eigen::VectorXcd c = to_complex(f.coeffs);
  j["re"] = array(c.real());
  j["im"] = array(c.imag());
  return j;
}

SBasisControl sbasis_from_json(const Json& j) {
  const double T = number(j, "T");
  const auto re = doubles(j, "re");
  std::vector<double> im = j.contains("im") ? doubles(j, "im") : std::vector<double>(re.size(), 0.0);
  if (im.size() != re.size()) throw IoError("'re' and 'im' differ in length");
  Eigen::VectorXcd c(static_cast<Eigen::Index>(re.size()));
  for (std::size_t i = 0; i < re.size(); ++i) c(static_cast<Eigen::Index>(i)) = Complex(re[i], im[i]);
  if (!(T > 0.0)) throw IoError("control horizon T must be positive");
  return make_sbasis(T, c);
}

Table to_table(const SampledControl& f) {
  Table t{{"t", "re", "im"}, {}};
  for (int i = 0; i < f.grid.size(); ++i) {
    const Complex v = f.values[static_cast<std::size_t>(i)];
    t.rows.push_back({f.grid.at(i), v.real(), v.imag()});
  }
  return t;
}

SampledControl sampled_from_table(const Table& t) {
  const auto ct = t.column("t");
  const auto cre = t.column("re");
  std::vector<double> ts;
  std::vector<Complex> values;
  const bool has_im = std::find(t.header.begin(), t.header.end(), "im") != t.header.end();
  const std::size_t cim = has_im ? t.column("im") : 0;
  for (const auto& row : t.rows) {
    ts.push_back(row[ct]);
    values.emplace_back(row[cre], has_im ? row[cim] : 0.0);
  }
  uniform_step(ts, "control");
  return SampledControl(TimeGrid(ts.back(), static_cast<int>(ts.size())), std::move(values));
}

Control read_control(const std::filesystem::path& path) {
  if (path.extension() == ".json") return sbasis_from_json(read_json(path));
  return sampled_from_table(read_csv(path));
}

Table to_table(const ResponseSamples& r) {
  Table t{{"t", "r"}, {}};
  const double h = r.step();
  for (std::size_t n = 0; n < r.values.size(); ++n) {
    const double tn = n + 1 == r.values.size() ? 2.0 * r.T : static_cast<double>(n) * h;
    t.rows.push_back({tn, r.values[n]});
  }
  return t;
}

ResponseSamples response_from_table(const Table& t) {
  const auto ct = t.column("t");
  const auto cr = t.column("r");
  std::vector<double> ts;
  std::vector<double> values;
  for (const auto& row : t.rows) {
    ts.push_back(row[ct]);
    values.push_back(row[cr]);
  }
  uniform_step(ts, "response samples");
  if (ts.size() % 2 == 0) throw IoError("response samples need an odd count covering [0, 2T]");
  ResponseSamples r;
  r.T = 0.5 * ts.back();
  r.m = static_cast<int>((ts.size() - 1) / 2 + 1);
  r.values = std::move(values);
  return r;
}

}  // namespace jbc::io
