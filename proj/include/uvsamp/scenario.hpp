#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "uvsamp/format.hpp"
#include "uvsamp/generators.hpp"
#include "uvsamp/tensor.hpp"

namespace uvsamp {

/// One generator or system vector: how to produce it.
///   periodic factors:  delta | random | explicit
///   continuous factors: bspline | crosscov | random-trig
struct GeneratorSpec {
  std::string kind = "delta";
  long order = 0;                 // bspline
  long shift = 0;                 // delta position / bspline translate
  long degree = 0;                // random-trig
  unsigned long long seed = 0;    // random kinds
  double amplitude = 1.0;         // random kinds
  std::vector<Complex> values;    // explicit vector
  SparseSeq entries;              // explicit cross-covariance
};

struct ModelSpec {
  std::string kind = "circular-shift";  // circular-shift | random-unitary | explicit
  unsigned long long seed = 0;
  CMat matrix;  // explicit
};

struct FactorSpec {
  std::string type;  // "continuous" | "periodic"
  long r = 1;        // sampling period (r for factor 1, rbar for factor 2)
  long grid = 256;   // continuous: evaluation grid L
  long truncation = -1;  // continuous: dual coefficient cutoff K, -1 = grid
  long period = 0;   // periodic: orbit period N
  ModelSpec model;   // periodic
  GeneratorSpec generator;
  std::vector<GeneratorSpec> systems;
};

struct FreeUSpec {
  std::string kind = "zero";  // zero | random | explicit
  unsigned long long seed = 0;
  double scale = 1.0;
  CMat matrix;  // explicit
};

struct SignalSpec {
  std::string kind = "delta";  // delta | random | explicit
  long n = 0, m = 0;           // delta position
  std::optional<unsigned long long> seed;
  double amplitude = 1.0;
  IndexWindow support1{0, 0}, support2{0, 0};  // random, infinite axes only
  std::vector<std::tuple<long, long, Complex>> entries;  // explicit
};

/// A fully parsed scenario document; one file determines a run.
struct Scenario {
  std::string case_tag;   // infinite-finite | infinite-infinite | finite-finite
  double tolerance = 1e-9;  // reconstruction error budget (exit code 3)
  double rel_tol = 1e-10;   // rank / pseudo-inverse truncation
  unsigned long long seed = 0;
  FactorSpec factor1, factor2;
  FreeUSpec freeU1, freeU2;
  std::optional<SignalSpec> signal;
};

namespace detail {

using nlohmann::json;

inline Complex parse_complex(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": complex numbers are [re, im] pairs");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline GeneratorSpec parse_generator(const json& j, const std::string& where) {
  GeneratorSpec g;
  if (!j.is_object() || !j.contains("kind"))
    throw ParseError(where + ": expected an object with a \"kind\" field");
  g.kind = j.at("kind").get<std::string>();
  if (j.contains("order")) g.order = j.at("order").get<long>();
  if (j.contains("shift")) g.shift = j.at("shift").get<long>();
  if (j.contains("degree")) g.degree = j.at("degree").get<long>();
  if (j.contains("seed")) g.seed = j.at("seed").get<unsigned long long>();
  if (j.contains("amplitude")) g.amplitude = j.at("amplitude").get<double>();
  if (j.contains("values"))
    for (std::size_t i = 0; i < j.at("values").size(); ++i)
      g.values.push_back(parse_complex(j.at("values")[i], where + ".values"));
  if (j.contains("entries")) {
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 3)
        throw ParseError(where + ".entries: expected [k, re, im] triples");
      g.entries.set(e[0].get<long>(), Complex(e[1].get<double>(), e[2].get<double>()));
    }
  }
  return g;
}

inline CMat parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ParseError(where + ": expected a nonempty array of rows");
  const std::size_t cols = j[0].size();
  CMat m(static_cast<long>(j.size()), static_cast<long>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      throw ParseError(where + ": ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(static_cast<long>(i), static_cast<long>(c)) =
          parse_complex(j[i][c], where + " entry");
  }
  return m;
}

inline FactorSpec parse_factor(const json& j, const std::string& where) {
  FactorSpec f;
  if (!j.is_object() || !j.contains("type"))
    throw ParseError(where + ": expected an object with a \"type\" field");
  f.type = j.at("type").get<std::string>();
  if (f.type != "continuous" && f.type != "periodic")
    throw ParseError(where + ".type: must be \"continuous\" or \"periodic\"");
  if (j.contains("r")) f.r = j.at("r").get<long>();
  if (j.contains("step")) f.r = j.at("step").get<long>();
  if (f.type == "continuous") {
    if (j.contains("grid")) f.grid = j.at("grid").get<long>();
    if (j.contains("K")) f.truncation = j.at("K").get<long>();
  } else {
    if (!j.contains("N")) throw ParseError(where + ": a periodic factor needs \"N\"");
    f.period = j.at("N").get<long>();
    if (j.contains("model")) {
      const json& m = j.at("model");
      if (!m.is_object() || !m.contains("kind"))
        throw ParseError(where + ".model: expected an object with a \"kind\" field");
      f.model.kind = m.at("kind").get<std::string>();
      if (m.contains("seed")) f.model.seed = m.at("seed").get<unsigned long long>();
      if (m.contains("matrix")) f.model.matrix = parse_matrix(m.at("matrix"), where + ".model.matrix");
    }
  }
  if (j.contains("generator")) f.generator = parse_generator(j.at("generator"), where + ".generator");
  if (!j.contains("systems") || !j.at("systems").is_array() || j.at("systems").empty())
    throw ParseError(where + ": needs a nonempty \"systems\" array");
  for (std::size_t i = 0; i < j.at("systems").size(); ++i)
    f.systems.push_back(
        parse_generator(j.at("systems")[i], where + ".systems[" + std::to_string(i) + "]"));
  return f;
}

inline FreeUSpec parse_freeu(const json& j, const std::string& where) {
  FreeUSpec u;
  if (!j.is_object() || !j.contains("kind"))
    throw ParseError(where + ": expected an object with a \"kind\" field");
  u.kind = j.at("kind").get<std::string>();
  if (u.kind != "zero" && u.kind != "random" && u.kind != "explicit")
    throw ParseError(where + ".kind: must be zero, random or explicit");
  if (j.contains("seed")) u.seed = j.at("seed").get<unsigned long long>();
  if (j.contains("scale")) u.scale = j.at("scale").get<double>();
  if (j.contains("matrix")) u.matrix = parse_matrix(j.at("matrix"), where + ".matrix");
  return u;
}

inline SignalSpec parse_signal(const json& j, const std::string& where) {
  SignalSpec s;
  if (!j.is_object() || !j.contains("kind"))
    throw ParseError(where + ": expected an object with a \"kind\" field");
  s.kind = j.at("kind").get<std::string>();
  if (s.kind != "delta" && s.kind != "random" && s.kind != "explicit")
    throw ParseError(where + ".kind: must be delta, random or explicit");
  if (j.contains("n")) s.n = j.at("n").get<long>();
  if (j.contains("m")) s.m = j.at("m").get<long>();
  if (j.contains("seed")) s.seed = j.at("seed").get<unsigned long long>();
  if (j.contains("amplitude")) s.amplitude = j.at("amplitude").get<double>();
  auto window = [&](const char* key) {
    const json& w = j.at(key);
    if (!w.is_array() || w.size() != 2)
      throw ParseError(where + "." + key + ": expected [lo, hi]");
    return IndexWindow{w[0].get<long>(), w[1].get<long>()};
  };
  if (j.contains("support1")) s.support1 = window("support1");
  if (j.contains("support2")) s.support2 = window("support2");
  if (j.contains("entries"))
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 4)
        throw ParseError(where + ".entries: expected [n, m, re, im] tuples");
      s.entries.emplace_back(e[0].get<long>(), e[1].get<long>(),
                             Complex(e[2].get<double>(), e[3].get<double>()));
    }
  return s;
}

inline void validate_scenario(const Scenario& s) {
  const std::string& c = s.case_tag;
  if (c != "infinite-finite" && c != "infinite-infinite" && c != "finite-finite")
    throw ValidationError("case must be infinite-finite, infinite-infinite or finite-finite");
  const bool c1 = s.factor1.type == "continuous";
  const bool c2 = s.factor2.type == "continuous";
  const bool want1 = (c != "finite-finite");
  const bool want2 = (c == "infinite-infinite");
  if (c1 != want1 || c2 != want2)
    throw ValidationError("case " + c + " requires factor types (" +
                          (want1 ? "continuous" : "periodic") + ", " +
                          (want2 ? "continuous" : "periodic") + ")");
  if (!(s.rel_tol > 0.0 && s.rel_tol < 1.0))
    throw ValidationError("rel_tol must be in (0, 1)");
  if (!(s.tolerance > 0.0)) throw ValidationError("tolerance must be positive");
  for (const FactorSpec* f : {&s.factor1, &s.factor2}) {
    if (f->r < 1) throw ValidationError("sampling period must be >= 1");
    if (f->type == "periodic") {
      if (f->period < 1) throw ValidationError("periodic factor: N must be >= 1");
      if (f->period % f->r != 0)
        throw ValidationError("periodic factor: the sampling period " + std::to_string(f->r) +
                              " must divide N = " + std::to_string(f->period));
    } else {
      if (f->grid < 1 || f->grid % f->r != 0)
        throw ValidationError("continuous factor: grid must be a positive multiple of r");
      if (static_cast<long>(f->systems.size()) < f->r)
        throw ValidationError("continuous factor: needs at least r = " + std::to_string(f->r) +
                              " systems");
    }
    for (const GeneratorSpec& g : f->systems)
      if (g.kind == "bspline" && f->generator.kind != "bspline")
        throw ValidationError("a bspline system needs a bspline factor generator");
  }
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario: top level must be an object");
  Scenario s;
  try {
    if (!j.contains("case")) throw ParseError("scenario: missing \"case\"");
    s.case_tag = j.at("case").get<std::string>();
    if (j.contains("tolerance")) s.tolerance = j.at("tolerance").get<double>();
    if (j.contains("rel_tol")) s.rel_tol = j.at("rel_tol").get<double>();
    if (j.contains("seed")) s.seed = j.at("seed").get<unsigned long long>();
    if (!j.contains("factor1") || !j.contains("factor2"))
      throw ParseError("scenario: needs \"factor1\" and \"factor2\"");
    s.factor1 = detail::parse_factor(j.at("factor1"), "factor1");
    s.factor2 = detail::parse_factor(j.at("factor2"), "factor2");
    if (j.contains("freeU1")) s.freeU1 = detail::parse_freeu(j.at("freeU1"), "freeU1");
    if (j.contains("freeU2")) s.freeU2 = detail::parse_freeu(j.at("freeU2"), "freeU2");
    if (j.contains("signal")) s.signal = detail::parse_signal(j.at("signal"), "signal");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  detail::validate_scenario(s);
  return s;
}

namespace detail {

inline std::string serialize_complex_vector(const std::vector<Complex>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? ", " : "") + fmt_complex(v[i]);
  return out + "]";
}

inline std::string serialize_matrix(const CMat& m) {
  std::string out = "[";
  for (long i = 0; i < m.rows(); ++i) {
    out += i ? ", [" : "[";
    for (long c = 0; c < m.cols(); ++c) out += (c ? ", " : "") + fmt_complex(m(i, c));
    out += "]";
  }
  return out + "]";
}

inline std::string serialize_generator(const GeneratorSpec& g) {
  std::string out = "{\"kind\": " + json_str(g.kind);
  if (g.kind == "bspline") out += ", \"order\": " + std::to_string(g.order);
  if (g.kind == "bspline" || g.kind == "delta") out += ", \"shift\": " + std::to_string(g.shift);
  if (g.kind == "random-trig") out += ", \"degree\": " + std::to_string(g.degree);
  if (g.kind == "random" || g.kind == "random-trig") {
    out += ", \"seed\": " + std::to_string(g.seed);
    out += ", \"amplitude\": " + fmt_double(g.amplitude);
  }
  if (g.kind == "explicit" && !g.values.empty())
    out += ", \"values\": " + serialize_complex_vector(g.values);
  if (g.kind == "crosscov") {
    out += ", \"entries\": [";
    bool first = true;
    for (const auto& [k, v] : g.entries) {
      out += std::string(first ? "" : ", ") + "[" + std::to_string(k) + ", " +
             fmt_double(v.real()) + ", " + fmt_double(v.imag()) + "]";
      first = false;
    }
    out += "]";
  }
  return out + "}";
}

inline std::string serialize_factor(const FactorSpec& f) {
  std::string out = "{\"type\": " + json_str(f.type);
  if (f.type == "continuous") {
    out += ", \"r\": " + std::to_string(f.r);
    out += ", \"grid\": " + std::to_string(f.grid);
    if (f.truncation >= 0) out += ", \"K\": " + std::to_string(f.truncation);
  } else {
    out += ", \"N\": " + std::to_string(f.period);
    out += ", \"step\": " + std::to_string(f.r);
    out += ", \"model\": {\"kind\": " + json_str(f.model.kind);
    if (f.model.kind == "random-unitary") out += ", \"seed\": " + std::to_string(f.model.seed);
    if (f.model.kind == "explicit") out += ", \"matrix\": " + serialize_matrix(f.model.matrix);
    out += "}";
  }
  out += ", \"generator\": " + serialize_generator(f.generator);
  out += ", \"systems\": [";
  for (std::size_t i = 0; i < f.systems.size(); ++i)
    out += (i ? ", " : "") + serialize_generator(f.systems[i]);
  return out + "]}";
}

inline std::string serialize_freeu(const FreeUSpec& u) {
  std::string out = "{\"kind\": " + json_str(u.kind);
  if (u.kind == "random") {
    out += ", \"seed\": " + std::to_string(u.seed);
    out += ", \"scale\": " + fmt_double(u.scale);
  }
  if (u.kind == "explicit") out += ", \"matrix\": " + serialize_matrix(u.matrix);
  return out + "}";
}

inline std::string serialize_signal(const SignalSpec& s) {
  std::string out = "{\"kind\": " + json_str(s.kind);
  if (s.kind == "delta") {
    out += ", \"n\": " + std::to_string(s.n);
    out += ", \"m\": " + std::to_string(s.m);
  }
  if (s.kind == "random") {
    if (s.seed) out += ", \"seed\": " + std::to_string(*s.seed);
    out += ", \"amplitude\": " + fmt_double(s.amplitude);
    out += ", \"support1\": [" + std::to_string(s.support1.lo) + ", " +
           std::to_string(s.support1.hi) + "]";
    out += ", \"support2\": [" + std::to_string(s.support2.lo) + ", " +
           std::to_string(s.support2.hi) + "]";
  }
  if (s.kind == "explicit") {
    out += ", \"entries\": [";
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
      const auto& [n, m, v] = s.entries[i];
      out += (i ? ", " : "") + std::string("[") + std::to_string(n) + ", " + std::to_string(m) +
             ", " + fmt_double(v.real()) + ", " + fmt_double(v.imag()) + "]";
    }
    out += "]";
  }
  return out + "}";
}

}  // namespace detail

/// Canonical text form; parsing it back yields an equal scenario.
inline std::string serialize_scenario(const Scenario& s) {
  std::string out = "{\n";
  out += "  \"case\": " + json_str(s.case_tag) + ",\n";
  out += "  \"tolerance\": " + fmt_double(s.tolerance) + ",\n";
  out += "  \"rel_tol\": " + fmt_double(s.rel_tol) + ",\n";
  out += "  \"seed\": " + std::to_string(s.seed) + ",\n";
  out += "  \"factor1\": " + detail::serialize_factor(s.factor1) + ",\n";
  out += "  \"factor2\": " + detail::serialize_factor(s.factor2) + ",\n";
  out += "  \"freeU1\": " + detail::serialize_freeu(s.freeU1) + ",\n";
  out += "  \"freeU2\": " + detail::serialize_freeu(s.freeU2);
  if (s.signal) out += ",\n  \"signal\": " + detail::serialize_signal(*s.signal);
  out += "\n}\n";
  return out;
}

inline bool operator==(const Scenario& a, const Scenario& b) {
  return serialize_scenario(a) == serialize_scenario(b);
}

namespace detail {

inline SparseSeq system_cross_covariance(const FactorSpec& factor, const GeneratorSpec& sys,
                                         const std::string& where) {
  if (sys.kind == "crosscov") {
    if (sys.entries.empty())
      throw ValidationError(where + ": crosscov system needs nonempty entries");
    return sys.entries;
  }
  if (sys.kind == "random-trig") {
    Rng rng(sys.seed);
    return rng.random_trig(sys.degree, sys.amplitude).cross_covariance();
  }
  if (sys.kind == "bspline") {
    if (factor.generator.kind != "bspline")
      throw ValidationError(where + ": bspline system needs a bspline generator");
    const SparseSeq base = bspline_cross_covariance(static_cast<int>(factor.generator.order),
                                                    static_cast<int>(sys.order));
    return base.shifted(sys.shift);
  }
  throw ValidationError(where + ": unknown continuous system kind \"" + sys.kind + "\"");
}

inline ContinuousScheme build_continuous(const FactorSpec& f, const std::string& where) {
  std::vector<FourierSymbol> symbols;
  for (std::size_t i = 0; i < f.systems.size(); ++i)
    symbols.push_back(FourierSymbol::from_cross_covariance(
        system_cross_covariance(f, f.systems[i], where + ".systems[" + std::to_string(i) + "]")));
  return make_continuous_scheme(f.r, std::move(symbols), f.grid);
}

inline CVec build_vector(const GeneratorSpec& g, long dim, const std::string& where) {
  if (g.kind == "delta") {
    CVec v = CVec::Zero(dim);
    v(pmod(g.shift, dim)) = Complex(1.0, 0.0);
    return v;
  }
  if (g.kind == "random") {
    Rng rng(g.seed);
    return rng.complex_vector(dim, g.amplitude);
  }
  if (g.kind == "explicit") {
    if (static_cast<long>(g.values.size()) != dim)
      throw ValidationError(where + ": explicit vector has " + std::to_string(g.values.size()) +
                            " entries, the model dimension is " + std::to_string(dim));
    CVec v(dim);
    for (long i = 0; i < dim; ++i) v(i) = g.values[static_cast<std::size_t>(i)];
    return v;
  }
  throw ValidationError(where + ": unknown periodic vector kind \"" + g.kind + "\"");
}

inline PeriodicScheme build_periodic(const FactorSpec& f, const std::string& where) {
  FiniteUnitaryModel model = FiniteUnitaryModel::circular_shift(1);
  if (f.model.kind == "circular-shift") {
    model = FiniteUnitaryModel::circular_shift(f.period);
  } else if (f.model.kind == "random-unitary") {
    Rng rng(f.model.seed);
    model = FiniteUnitaryModel::explicit_matrix(random_period_unitary(f.period, rng), f.period);
  } else if (f.model.kind == "explicit") {
    model = FiniteUnitaryModel::explicit_matrix(f.model.matrix, f.period);
  } else {
    throw ValidationError(where + ".model: unknown kind \"" + f.model.kind + "\"");
  }
  const CVec generator = build_vector(f.generator, model.dim(), where + ".generator");
  std::vector<CVec> systems;
  for (std::size_t i = 0; i < f.systems.size(); ++i)
    systems.push_back(
        build_vector(f.systems[i], model.dim(), where + ".systems[" + std::to_string(i) + "]"));
  return make_periodic_scheme(std::move(model), generator, std::move(systems), f.r);
}

}  // namespace detail

inline TensorScheme build_tensor_scheme(const Scenario& s) {
  if (s.case_tag == "infinite-finite")
    return tensor_infinite_finite(detail::build_continuous(s.factor1, "factor1"),
                                  detail::build_periodic(s.factor2, "factor2"));
  if (s.case_tag == "infinite-infinite")
    return tensor_infinite_infinite(detail::build_continuous(s.factor1, "factor1"),
                                    detail::build_continuous(s.factor2, "factor2"));
  return tensor_finite_finite(detail::build_periodic(s.factor1, "factor1"),
                              detail::build_periodic(s.factor2, "factor2"));
}

namespace detail {

inline GridFreeTerm build_free_term(const FreeUSpec& u, bool continuous, long rows, long cols,
                                    long grid, const std::string& where) {
  if (u.kind == "zero") return {};
  if (u.kind == "explicit") {
    if (u.matrix.rows() != rows || u.matrix.cols() != cols)
      throw ValidationError(where + ": free term must be " + std::to_string(rows) + "x" +
                            std::to_string(cols));
    return {u.matrix};
  }
  Rng rng(u.seed);
  GridFreeTerm out;
  const long count = continuous ? grid : 1;
  out.reserve(static_cast<std::size_t>(count));
  for (long t = 0; t < count; ++t) out.push_back(rng.complex_matrix(rows, cols, u.scale));
  return out;
}

}  // namespace detail

/// Free terms and truncation depths for kit design, from the scenario.
inline KitOptions kit_options(const Scenario& s, const TensorScheme& scheme) {
  KitOptions opts;
  if (scheme.cont1)
    opts.freeU1 = detail::build_free_term(s.freeU1, true, scheme.cont1->r,
                                          scheme.cont1->num_systems(), scheme.cont1->grid,
                                          "freeU1");
  else
    opts.freeU1 = detail::build_free_term(s.freeU1, false, scheme.per1->period(),
                                          scheme.per1->num_systems() * scheme.per1->ell(), 1,
                                          "freeU1");
  if (scheme.cont2)
    opts.freeU2 = detail::build_free_term(s.freeU2, true, scheme.cont2->r,
                                          scheme.cont2->num_systems(), scheme.cont2->grid,
                                          "freeU2");
  else
    opts.freeU2 = detail::build_free_term(s.freeU2, false, scheme.per2->period(),
                                          scheme.per2->num_systems() * scheme.per2->ell(), 1,
                                          "freeU2");
  opts.truncation1 = s.factor1.truncation;
  opts.truncation2 = s.factor2.truncation;
  return opts;
}

/// Materializes the scenario's signal. Random signals draw from the signal
/// seed when given, else from the scenario seed (a CLI override replaces the
/// scenario seed).
inline TensorCoefficients build_signal(const Scenario& s, const TensorScheme& scheme,
                                       std::optional<unsigned long long> seed_override =
                                           std::nullopt) {
  if (!s.signal) throw ValidationError("scenario has no \"signal\" section");
  const SignalSpec& spec = *s.signal;
  const bool fin1 = !scheme.cont1;
  const bool fin2 = !scheme.cont2;
  const long n1 = fin1 ? scheme.per1->period() : 0;
  const long n2 = fin2 ? scheme.per2->period() : 0;
  auto check1 = [&](long n) {
    if (fin1 && (n < 0 || n >= n1))
      throw ValidationError("signal: axis-1 index " + std::to_string(n) + " outside [0, " +
                            std::to_string(n1) + ")");
  };
  auto check2 = [&](long m) {
    if (fin2 && (m < 0 || m >= n2))
      throw ValidationError("signal: axis-2 index " + std::to_string(m) + " outside [0, " +
                            std::to_string(n2) + ")");
  };
  TensorCoefficients x;
  if (spec.kind == "delta") {
    check1(spec.n);
    check2(spec.m);
    x.set(spec.n, spec.m, Complex(1.0, 0.0));
    return x;
  }
  if (spec.kind == "explicit") {
    for (const auto& [n, m, v] : spec.entries) {
      check1(n);
      check2(m);
      x.set(n, m, v);
    }
    return x;
  }
  // random
  const unsigned long long seed =
      seed_override ? *seed_override : (spec.seed ? *spec.seed : s.seed);
  Rng rng(seed);
  const IndexWindow w1 = fin1 ? IndexWindow{0, n1 - 1} : spec.support1;
  const IndexWindow w2 = fin2 ? IndexWindow{0, n2 - 1} : spec.support2;
  if (w1.empty() || w2.empty())
    throw ValidationError("signal: random signal needs nonempty supports on infinite axes");
  for (long n = w1.lo; n <= w1.hi; ++n)
    for (long m = w2.lo; m <= w2.hi; ++m) x.set(n, m, rng.complex_uniform(spec.amplitude));
  return x;
}

}  // namespace uvsamp
