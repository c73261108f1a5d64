#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "uvsamp/format.hpp"
#include "uvsamp/tensor.hpp"

namespace uvsamp {

enum class EmitFormat { csv, json };

inline EmitFormat parse_format(const std::string& s) {
  if (s == "csv") return EmitFormat::csv;
  if (s == "json") return EmitFormat::json;
  throw ValidationError("format must be csv or json, got \"" + s + "\"");
}

// ---------------------------------------------------------------------------
// SampleGrid
// ---------------------------------------------------------------------------

/// Rows ordered by (j, jprime, n, m) ascending, 0-based channel indices,
/// LF line endings. An empty grid emits the header only.
inline std::string grid_to_csv(const SampleGrid& g) {
  std::string out = "j,jprime,n,m,re,im\n";
  for (long j = 0; j < g.s; ++j)
    for (long jp = 0; jp < g.sprime; ++jp)
      for (long n = g.nwin.lo; n <= g.nwin.hi; ++n)
        for (long m = g.mwin.lo; m <= g.mwin.hi; ++m) {
          const Complex v = g.at(j, jp, n, m);
          out += std::to_string(j) + "," + std::to_string(jp) + "," + std::to_string(n) + "," +
                 std::to_string(m) + "," + fmt_double(v.real()) + "," + fmt_double(v.imag()) +
                 "\n";
        }
  return out;
}

inline SampleGrid grid_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "j,jprime,n,m,re,im")
    throw ParseError("sample grid csv: bad header");
  struct Row {
    long j, jp, n, m;
    Complex v;
  };
  std::vector<Row> rows;
  long s = 0, sp = 0;
  std::optional<IndexWindow> nwin, mwin;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Row r;
    double re, im;
    if (std::sscanf(line.c_str(), "%ld,%ld,%ld,%ld,%lf,%lf", &r.j, &r.jp, &r.n, &r.m, &re, &im) !=
        6)
      throw ParseError("sample grid csv: bad row \"" + line + "\"");
    r.v = Complex(re, im);
    s = std::max(s, r.j + 1);
    sp = std::max(sp, r.jp + 1);
    nwin = nwin ? IndexWindow{std::min(nwin->lo, r.n), std::max(nwin->hi, r.n)}
                : IndexWindow{r.n, r.n};
    mwin = mwin ? IndexWindow{std::min(mwin->lo, r.m), std::max(mwin->hi, r.m)}
                : IndexWindow{r.m, r.m};
    rows.push_back(r);
  }
  if (rows.empty()) return SampleGrid{};
  SampleGrid g = SampleGrid::zeros(s, sp, *nwin, *mwin);
  for (const Row& r : rows) g.at(r.j, r.jp, r.n, r.m) = r.v;
  return g;
}

inline std::string grid_to_json(const SampleGrid& g) {
  std::string out = "{\n";
  out += "  \"s\": " + std::to_string(g.s) + ",\n";
  out += "  \"sprime\": " + std::to_string(g.sprime) + ",\n";
  out += "  \"nwin\": [" + std::to_string(g.nwin.lo) + ", " + std::to_string(g.nwin.hi) + "],\n";
  out += "  \"mwin\": [" + std::to_string(g.mwin.lo) + ", " + std::to_string(g.mwin.hi) + "],\n";
  out += "  \"values\": [";
  for (std::size_t i = 0; i < g.values.size(); ++i)
    out += (i ? ", " : "") + fmt_complex(g.values[i]);
  out += "]\n}\n";
  return out;
}

inline SampleGrid grid_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    SampleGrid g;
    g.s = j.at("s").get<long>();
    g.sprime = j.at("sprime").get<long>();
    g.nwin = IndexWindow{j.at("nwin")[0].get<long>(), j.at("nwin")[1].get<long>()};
    g.mwin = IndexWindow{j.at("mwin")[0].get<long>(), j.at("mwin")[1].get<long>()};
    for (const auto& e : j.at("values"))
      g.values.emplace_back(e[0].get<double>(), e[1].get<double>());
    const long expect = g.s * g.sprime * g.cells();
    if (static_cast<long>(g.values.size()) != expect)
      throw ParseError("sample grid json: expected " + std::to_string(expect) + " values, got " +
                       std::to_string(g.values.size()));
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("sample grid json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// TensorCoefficients
// ---------------------------------------------------------------------------

inline std::string coefficients_to_csv(const TensorCoefficients& x) {
  std::string out = "n,m,re,im\n";
  for (const auto& [key, v] : x.entries)
    out += std::to_string(key.first) + "," + std::to_string(key.second) + "," +
           fmt_double(v.real()) + "," + fmt_double(v.imag()) + "\n";
  return out;
}

inline std::string coefficients_to_json(const TensorCoefficients& x) {
  std::string out = "{\n  \"entries\": [";
  bool first = true;
  for (const auto& [key, v] : x.entries) {
    out += std::string(first ? "" : ", ") + "[" + std::to_string(key.first) + ", " +
           std::to_string(key.second) + ", " + fmt_double(v.real()) + ", " +
           fmt_double(v.imag()) + "]";
    first = false;
  }
  out += "]\n}\n";
  return out;
}

inline TensorCoefficients coefficients_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    TensorCoefficients x;
    for (const auto& e : j.at("entries"))
      x.set(e[0].get<long>(), e[1].get<long>(), Complex(e[2].get<double>(), e[3].get<double>()));
    return x;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("coefficients json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// ReconstructionKit
// ---------------------------------------------------------------------------

namespace detail {

inline std::string factor_kit_to_json(const FactorKit& f) {
  std::string out = "{\"step\": " + std::to_string(f.step);
  out += ", \"period\": " + (f.period ? std::to_string(*f.period) : std::string("null"));
  out += ", \"provenance\": " + json_str(f.provenance);
  out += ", \"channels\": [";
  for (std::size_t j = 0; j < f.seqs.size(); ++j) {
    out += j ? ", [" : "[";
    bool first = true;
    for (const auto& [k, v] : f.seqs[j]) {
      out += std::string(first ? "" : ", ") + "[" + std::to_string(k) + ", " +
             fmt_double(v.real()) + ", " + fmt_double(v.imag()) + "]";
      first = false;
    }
    out += "]";
  }
  return out + "]}";
}

inline FactorKit factor_kit_from_json(const nlohmann::json& j) {
  FactorKit f;
  f.step = j.at("step").get<long>();
  if (!j.at("period").is_null()) f.period = j.at("period").get<long>();
  f.provenance = j.at("provenance").get<std::string>();
  for (const auto& chan : j.at("channels")) {
    SparseSeq seq;
    for (const auto& e : chan)
      seq.set(e[0].get<long>(), Complex(e[1].get<double>(), e[2].get<double>()));
    f.seqs.push_back(std::move(seq));
  }
  return f;
}

}  // namespace detail

inline std::string kit_to_json(const ReconstructionKit& kit) {
  std::string out = "{\n";
  out += "  \"factor1\": " + detail::factor_kit_to_json(kit.factor1) + ",\n";
  out += "  \"factor2\": " + detail::factor_kit_to_json(kit.factor2) + "\n}\n";
  return out;
}

inline ReconstructionKit kit_from_json(const std::string& text) {
  try {
    const nlohmann::json j = nlohmann::json::parse(text);
    ReconstructionKit kit;
    kit.factor1 = detail::factor_kit_from_json(j.at("factor1"));
    kit.factor2 = detail::factor_kit_from_json(j.at("factor2"));
    return kit;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("kit json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// RunReport
// ---------------------------------------------------------------------------

struct FactorVerdict {
  std::string type;  // "continuous" | "periodic"
  bool ok = false;
  long rank = -1;      // periodic factors; -1 when not applicable
  long required = -1;  // full rank target
  double alpha = 0.0;  // optimal frame bounds of the factor
  double beta = 0.0;
  std::string note;
};

/// Aggregated outcome of an analyze/verify run. Timings are diagnostic only
/// and are not part of the serialized report, keeping outputs byte-identical
/// across runs.
struct RunReport {
  std::string scenario_digest;
  std::string case_tag;
  FactorVerdict factor1, factor2;
  double tensor_alpha = 0.0;  // products of the factor frame bounds
  double tensor_beta = 0.0;
  std::optional<double> max_reconstruction_error;
  std::optional<double> interpolation_deviation;
  std::string interpolation_note;
  std::map<std::string, double> timings_ms;

  bool frame_ok() const { return factor1.ok && factor2.ok; }
};

namespace detail {

inline std::string verdict_to_json(const FactorVerdict& v) {
  std::string out = "{\"type\": " + json_str(v.type);
  out += ", \"ok\": " + std::string(v.ok ? "true" : "false");
  if (v.rank >= 0) {
    out += ", \"rank\": " + std::to_string(v.rank);
    out += ", \"required\": " + std::to_string(v.required);
  }
  out += ", \"alpha\": " + fmt_double(v.alpha);
  out += ", \"beta\": " + fmt_double(v.beta);
  if (!v.note.empty()) out += ", \"note\": " + json_str(v.note);
  return out + "}";
}

}  // namespace detail

inline std::string report_to_json(const RunReport& r) {
  std::string out = "{\n";
  out += "  \"scenario\": " + json_str(r.scenario_digest) + ",\n";
  out += "  \"case\": " + json_str(r.case_tag) + ",\n";
  out += "  \"factor1\": " + detail::verdict_to_json(r.factor1) + ",\n";
  out += "  \"factor2\": " + detail::verdict_to_json(r.factor2) + ",\n";
  out += "  \"frame_ok\": " + std::string(r.frame_ok() ? "true" : "false") + ",\n";
  out += "  \"tensor_bounds\": [" + fmt_double(r.tensor_alpha) + ", " + fmt_double(r.tensor_beta) +
         "],\n";
  out += "  \"max_reconstruction_error\": " +
         (r.max_reconstruction_error ? fmt_double(*r.max_reconstruction_error)
                                     : std::string("null")) +
         ",\n";
  out += "  \"interpolation_deviation\": " +
         (r.interpolation_deviation ? fmt_double(*r.interpolation_deviation)
                                    : std::string("null"));
  if (!r.interpolation_note.empty())
    out += ",\n  \"interpolation_note\": " + json_str(r.interpolation_note);
  out += "\n}\n";
  return out;
}

// ---------------------------------------------------------------------------
// File plumbing
// ---------------------------------------------------------------------------

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void emit_results(const SampleGrid& g, EmitFormat format,
                         const std::filesystem::path& path) {
  write_file(path, format == EmitFormat::csv ? grid_to_csv(g) : grid_to_json(g));
}

inline void emit_results(const TensorCoefficients& x, EmitFormat format,
                         const std::filesystem::path& path) {
  write_file(path, format == EmitFormat::csv ? coefficients_to_csv(x) : coefficients_to_json(x));
}

inline void emit_results(const ReconstructionKit& kit, EmitFormat,
                         const std::filesystem::path& path) {
  write_file(path, kit_to_json(kit));
}

inline void emit_results(const RunReport& r, EmitFormat, const std::filesystem::path& path) {
  write_file(path, report_to_json(r));
}

}  // namespace uvsamp
