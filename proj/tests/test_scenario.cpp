#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"
#include "uvsamp/io.hpp"
#include "uvsamp/scenario.hpp"

using namespace uvsamp;
using uvsamp::testing::scenario_dir;

namespace {

const char* kMinimalFiniteFinite = R"({
  "case": "finite-finite",
  "factor1": {"type": "periodic", "N": 2, "systems": [{"kind": "delta"}]},
  "factor2": {"type": "periodic", "N": 3, "systems": [{"kind": "delta"}]}
})";

}  // namespace

TEST_CASE("parse_scenario fills the documented defaults") {
  const Scenario s = parse_scenario(kMinimalFiniteFinite);
  CHECK(s.case_tag == "finite-finite");
  CHECK(s.rel_tol == 1e-10);
  CHECK(s.factor1.r == 1);
  CHECK(s.factor1.model.kind == "circular-shift");
  CHECK(s.factor1.generator.kind == "delta");
  CHECK(s.freeU1.kind == "zero");
  CHECK(s.freeU2.kind == "zero");
  CHECK_FALSE(s.signal.has_value());
  // A continuous factor defaults to grid 256.
  const Scenario c = parse_scenario(R"({
    "case": "infinite-finite",
    "factor1": {"type": "continuous", "systems": [{"kind": "crosscov", "entries": [[0, 1, 0]]}]},
    "factor2": {"type": "periodic", "N": 2, "systems": [{"kind": "delta"}]}
  })");
  CHECK(c.factor1.grid == 256);
}

TEST_CASE("parse_scenario rejects a step that does not divide the period") {
  const char* doc = R"({
    "case": "finite-finite",
    "factor1": {"type": "periodic", "N": 4, "step": 3, "systems": [{"kind": "delta"}]},
    "factor2": {"type": "periodic", "N": 2, "systems": [{"kind": "delta"}]}
  })";
  CHECK_THROWS_AS(parse_scenario(doc), ValidationError);
}

TEST_CASE("parse_scenario reports malformed documents") {
  CHECK_THROWS_AS(parse_scenario("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_scenario("{}"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"case": "finite-finite"})"), ParseError);
  // Case/factor-type mismatch.
  const char* mismatch = R"({
    "case": "infinite-finite",
    "factor1": {"type": "periodic", "N": 2, "systems": [{"kind": "delta"}]},
    "factor2": {"type": "periodic", "N": 2, "systems": [{"kind": "delta"}]}
  })";
  CHECK_THROWS_AS(parse_scenario(mismatch), ValidationError);
}

TEST_CASE("serialize/parse round trip is the identity on the scenario model") {
  for (const char* name :
       {"finite_square.json", "finite_oversampled.json", "bspline_demo.json",
        "exact_infinite.json", "negative_rank_deficient.json", "negative_alpha_zero.json"}) {
    const std::string text = read_file(std::filesystem::path(scenario_dir()) / name);
    const Scenario once = parse_scenario(text);
    const Scenario twice = parse_scenario(serialize_scenario(once));
    CHECK(once == twice);
  }
  const Scenario minimal = parse_scenario(kMinimalFiniteFinite);
  CHECK(parse_scenario(serialize_scenario(minimal)) == minimal);
}

TEST_CASE("build_tensor_scheme assembles the B-spline demo") {
  const std::string text =
      read_file(std::filesystem::path(scenario_dir()) / "bspline_demo.json");
  const TensorScheme scheme = build_tensor_scheme(parse_scenario(text));
  REQUIRE(scheme.kind == TensorCase::infinite_finite);
  REQUIRE(scheme.cont1.has_value());
  // Hat autocovariance symbol: 2/3 + (1/3) cos.
  CHECK(std::abs(scheme.cont1->symbols[0].coeff(0) - 2.0 / 3.0) <= 1e-14);
  CHECK(std::abs(scheme.cont1->symbols[0].coeff(1) - 1.0 / 6.0) <= 1e-14);
  const FrameConstants fc = frame_constants(*scheme.cont1);
  CHECK(fc.alpha >= 1.0 / 9.0 - 1e-12);
  CHECK(fc.beta <= 1.0 + 1e-12);
  CHECK(frame_test(*scheme.per2).is_frame);
}

TEST_CASE("build_signal validates finite ranges") {
  const Scenario s = parse_scenario(R"({
    "case": "finite-finite",
    "factor1": {"type": "periodic", "N": 2, "systems": [{"kind": "delta"}]},
    "factor2": {"type": "periodic", "N": 3, "systems": [{"kind": "delta"}]},
    "signal": {"kind": "delta", "n": 5, "m": 0}
  })");
  const TensorScheme scheme = build_tensor_scheme(s);
  CHECK_THROWS_AS(build_signal(s, scheme), ValidationError);
}

TEST_CASE("random signals are reproducible and seed-overridable") {
  const std::string text =
      read_file(std::filesystem::path(scenario_dir()) / "finite_square.json");
  const Scenario s = parse_scenario(text);
  const TensorScheme scheme = build_tensor_scheme(s);
  const TensorCoefficients a = build_signal(s, scheme);
  const TensorCoefficients b = build_signal(s, scheme);
  CHECK(max_diff(a, b) == 0.0);
  const TensorCoefficients c = build_signal(s, scheme, 12345ULL);
  CHECK(max_diff(a, c) > 0.0);
}

TEST_CASE("empty sample grid emits a header-only csv") {
  CHECK(grid_to_csv(SampleGrid{}) == "j,jprime,n,m,re,im\n");
}

TEST_CASE("known 2x2 grid emits the documented byte layout") {
  SampleGrid g = SampleGrid::zeros(1, 1, IndexWindow{0, 1}, IndexWindow{0, 1});
  g.at(0, 0, 0, 0) = Complex(1.0, 0.0);
  g.at(0, 0, 0, 1) = Complex(2.0, 3.0);
  g.at(0, 0, 1, 1) = Complex(-1.0, 0.0);
  const std::string expected =
      "j,jprime,n,m,re,im\n"
      "0,0,0,0,1,0\n"
      "0,0,0,1,2,3\n"
      "0,0,1,0,0,0\n"
      "0,0,1,1,-1,0\n";
  CHECK(grid_to_csv(g) == expected);
}

TEST_CASE("grid json round trip preserves the structure") {
  SampleGrid g = SampleGrid::zeros(2, 1, IndexWindow{-1, 1}, IndexWindow{0, 2});
  Rng rng(55);
  for (auto& v : g.values) v = rng.complex_uniform();
  const SampleGrid back = grid_from_json(grid_to_json(g));
  CHECK(back.s == g.s);
  CHECK(back.sprime == g.sprime);
  CHECK(back.nwin == g.nwin);
  CHECK(back.mwin == g.mwin);
  REQUIRE(back.values.size() == g.values.size());
  for (std::size_t i = 0; i < g.values.size(); ++i) CHECK(back.values[i] == g.values[i]);
}

TEST_CASE("grid csv round trip preserves complete grids") {
  SampleGrid g = SampleGrid::zeros(2, 2, IndexWindow{0, 1}, IndexWindow{0, 1});
  Rng rng(57);
  for (auto& v : g.values) v = rng.complex_uniform();
  const SampleGrid back = grid_from_csv(grid_to_csv(g));
  CHECK(back.s == g.s);
  CHECK(back.mwin == g.mwin);
  for (long j = 0; j < 2; ++j)
    for (long jp = 0; jp < 2; ++jp)
      for (long n = 0; n < 2; ++n)
        for (long m = 0; m < 2; ++m) CHECK(back.at(j, jp, n, m) == g.at(j, jp, n, m));
}

TEST_CASE("kit json round trip preserves the kit") {
  FactorKit f1;
  f1.step = 2;
  f1.seqs = {SparseSeq::delta(0), SparseSeq::delta(-3, Complex(0.5, -0.25))};
  f1.provenance = "freeU=zero";
  FactorKit f2;
  f2.step = 1;
  f2.period = 4;
  SparseSeq s2;
  s2.set(0, Complex(1.0, 2.0));
  s2.set(3, Complex(-1.0, 0.0));
  f2.seqs = {s2};
  f2.provenance = "freeU=explicit";
  const ReconstructionKit kit{f1, f2};
  const ReconstructionKit back = kit_from_json(kit_to_json(kit));
  CHECK(back.factor1.step == 2);
  CHECK_FALSE(back.factor1.period.has_value());
  REQUIRE(back.factor2.period.has_value());
  CHECK(*back.factor2.period == 4);
  CHECK(back.factor1.provenance == "freeU=zero");
  CHECK(max_diff(back.factor1.seqs[1], f1.seqs[1]) == 0.0);
  CHECK(max_diff(back.factor2.seqs[0], f2.seqs[0]) == 0.0);
}

TEST_CASE("coefficients round trip through json") {
  TensorCoefficients x;
  Rng rng(59);
  for (long n = -2; n <= 2; ++n) x.set(n, pmod(n, 3), rng.complex_uniform());
  const TensorCoefficients back = coefficients_from_json(coefficients_to_json(x));
  CHECK(max_diff(back, x) == 0.0);
}

TEST_CASE("floats serialize with 17 significant digits") {
  const double v = 0.1234567890123456789;
  const std::string s = fmt_double(v);
  CHECK(s.size() >= 17);
  CHECK(std::stod(s) == v);  // lossless round trip
}

TEST_CASE("emit_results reports unwritable destinations") {
  SampleGrid g;
  CHECK_THROWS_AS(emit_results(g, EmitFormat::csv, "/nonexistent-dir/out.csv"), IoError);
}
