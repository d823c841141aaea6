#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jbc/connecting.hpp"
#include "jbc/control.hpp"
#include "jbc/debranges.hpp"
#include "jbc/jacobi.hpp"
#include "jbc/krein.hpp"

namespace jbc::io {

using Json = nlohmann::ordered_json;

/// Unreadable, unwritable or malformed files.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Shortest decimal string that parses back to the same double.
std::string format_number(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Index of a named column; throws IoError when absent.
  std::size_t column(const std::string& name) const;
};

void write_csv(const std::filesystem::path& path, const Table& table);
Table read_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

/// {"a": [...], "b": [...]}
Json to_json(const JacobiMatrix& J);
JacobiMatrix jacobi_from_json(const Json& j);

/// {"lambdas": [...], "rhos": [...]}
Json to_json(const SpectralData& sd);

/// {"T": ..., "g": [[...], ...]}
Json to_json(const GramMatrix& G);
GramMatrix gram_from_json(const Json& j);

/// {"a", "b", "residuals", "rank", "condition"}
Json to_json(const Reconstruction& r);
Reconstruction reconstruction_from_json(const Json& j);

Json to_json(const KappaReport& k);
Json to_json(const AxiomReport& a);

/// {"T": ..., "re": [...], "im": [...]}, coefficients of an S-basis control.
Json to_json(const SBasisControl& f);
SBasisControl sbasis_from_json(const Json& j);

/// CSV `t,re,im` on a uniform grid starting at 0.
Table to_table(const SampledControl& f);
SampledControl sampled_from_table(const Table& t);

/// Reads a control: `.json` as S-basis coefficients, anything else as CSV samples.
Control read_control(const std::filesystem::path& path);

/// CSV `t,r` with t = n h, n = 0..2(m-1), covering [0, 2T].
Table to_table(const ResponseSamples& r);
/// Checks a zero start, uniform spacing and an odd number of samples; T is half
/// the last abscissa.
ResponseSamples response_from_table(const Table& t);

}  // namespace jbc::io
