#include <fstream>
#include <sstream>

#include "doctest.h"
#include "torich/error.hpp"
#include "torich/suite.hpp"

using namespace torich;

namespace {

std::string path(const std::string& rel) { return std::string(TORICH_SOURCE_DIR) + "/" + rel; }

Scene scene(const std::string& name) { return load_scene(path("scenes/" + name + ".json")); }

void expect_error(const std::string& rel, ErrorCode code, const std::string& location) {
  try {
    load_scene(path(rel));
    FAIL("expected throw for " << rel);
  } catch (const Error& e) {
    CHECK(e.code() == code);
    CHECK_MESSAGE(std::string(e.what()).find(location) != std::string::npos, e.what());
  }
}

const TaskResult& find_task(const Report& r, const std::string& theorem, const std::string& bundle,
                            const std::string& field) {
  for (const auto& t : r.tasks)
    if (t.theorem == theorem && t.bundle == bundle && t.field == field) return t;
  throw std::runtime_error("no task " + theorem + " " + bundle + " " + field);
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("shipped scenes load") {
  for (const char* name : {"p1", "p2", "p2_triangle", "p2_skeleton", "p2_points", "p1xp1_boundary", "p3_mixed",
                           "blowup_p2", "p112", "a3_nonpure"}) {
    CAPTURE(name);
    const Scene s = scene(name);
    CHECK(s.name == name);
    CHECK(s.digest.size() == 16);
    CHECK_FALSE(s.fields.empty());
  }
  const Scene t = scene("p2_triangle");
  REQUIRE(t.phi.has_value());
  CHECK(t.phi->ids().size() == 6);
  CHECK(t.phi->component_dimensions() == std::vector<std::size_t>{1, 1, 1});
  CHECK(t.line_bundles.size() == 4);
  CHECK(t.fields == std::vector<FieldSpec>{FieldSpec::rationals(), FieldSpec::prime(2), FieldSpec::prime(3)});
  // The skeleton encoding names the same polyhedron, and the Cartier encoding the same bundle.
  const Scene k = scene("p2_skeleton");
  CHECK(k.phi->ids() == t.phi->ids());
  CHECK(k.line_bundles[0].bundle == t.line_bundles[1].bundle);
  const Scene b = scene("blowup_p2");
  REQUIRE(b.morphism.has_value());
  CHECK_FALSE(b.morphism->map.is_identity());
  CHECK(b.boundaries.size() == 4);
  CHECK_FALSE(scene("a3_nonpure").phi->is_pure());
}

TEST_CASE("invalid scenes report a location") {
  expect_error("tests/data/bad_star.json", ErrorCode::kStar, "/phi");
  expect_error("tests/data/bad_field.json", ErrorCode::kField, "/fields/1/p");
  expect_error("tests/data/bad_fan.json", ErrorCode::kFanAxiom, "/cones");
  expect_error("tests/data/bad_cartier.json", ErrorCode::kCartier, "/line_bundles/D2");
  expect_error("tests/data/bad_syntax.json", ErrorCode::kParse, "invalid JSON");
  expect_error("tests/data/bad_ray_index.json", ErrorCode::kParse, "/cones/1/1");
  expect_error("tests/data/bad_morphism.json", ErrorCode::kNotCompatible, "/morphism");
  expect_error("tests/data/no_such_scene.json", ErrorCode::kParse, "cannot open");
  CHECK_THROWS_AS(parse_scene(R"({"lattice_rank": 1, "rays": [[1]], "cones": [[0]], "A": [0], "B": [0]})", "x"),
                  Error);
  CHECK_THROWS_AS(parse_scene(R"({"rays": [[1]], "cones": [[0]]})", "x"), Error);
}

TEST_CASE("star set error carries a witness pair") {
  try {
    load_scene(path("tests/data/bad_star.json"));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kStar);
    CHECK(std::string(e.what()).find("cone") != std::string::npos);
  }
}

TEST_CASE("extension suite on the triangle") {
  const Report r = run_suite(scene("p2_triangle"), Suite::kExtension);
  CHECK_FALSE(r.any_fail());
  const auto& t = find_task(r, "extension", "O(1)", "Q");
  CHECK(t.verdict == Verdict::kPass);
  CHECK(t.tables.at("h") == std::vector<std::vector<Int>>{{0, 0, 0}});
  CHECK(t.values.at("h0_X") == 3);
  CHECK(t.values.at("h0_Y") == 3);
  CHECK(t.values.at("restriction_rank") == 3);
  for (Int d : {2, 3}) {
    const auto& td = find_task(r, "extension", "O(" + std::to_string(d) + ")", "F2");
    CHECK(td.verdict == Verdict::kPass);
    CHECK(td.values.at("restriction_rank") == 3 * d);
  }
  CHECK(find_task(r, "extension", "O(-1)", "Q").verdict == Verdict::kSkip);
}

TEST_CASE("e1 suite over F2 on the triangle") {
  SuiteOptions options;
  options.field = FieldSpec::prime(2);
  const Report r = run_suite(scene("p2_triangle"), Suite::kE1, options);
  REQUIRE(r.tasks.size() == 1);
  const auto& t = r.tasks[0];
  CHECK(t.verdict == Verdict::kPass);
  CHECK(t.field == "F2");
  CHECK(t.tables.at("hyper") == t.tables.at("e1_diagonals"));
  CHECK(t.tables.at("hyper") == std::vector<std::vector<Int>>{{1, 1, 3, 0, 0}});
}

TEST_CASE("vanishing suite on the boundary of P1 x P1") {
  SuiteOptions options;
  options.field = FieldSpec::rationals();
  const Report r = run_suite(scene("p1xp1_boundary"), Suite::kVanishing, options);
  CHECK_FALSE(r.any_fail());
  std::size_t pass = 0;
  for (const auto& t : r.tasks) {
    if (t.theorem != "vanishing") continue;
    if (t.bundle == "O(1,0)") {
      CHECK(t.verdict == Verdict::kSkip);
      continue;
    }
    CHECK(t.verdict == Verdict::kPass);
    const auto& h = t.tables.at("h")[0];
    for (std::size_t i = 1; i < h.size(); ++i) CHECK(h[i] == 0);
    ++pass;
  }
  CHECK(pass == 2 * 6);  // two ample bundles, Ω̃^0..2 and the three log degrees
}

TEST_CASE("missing ingredients are named") {
  try {
    run_suite(scene("p2"), Suite::kExtension);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingIngredient);
    CHECK(std::string(e.what()).find("phi") != std::string::npos);
  }
  CHECK_THROWS_AS(run_suite(scene("p2"), Suite::kKollar), Error);
  CHECK_THROWS_AS(parse_suite("nonsense"), Error);
  CHECK(parse_suite("kollar") == Suite::kKollar);
}

TEST_CASE("non-complete scenes skip unbounded checks") {
  const Report r = run_suite(scene("a3_nonpure"), Suite::kVanishing);
  CHECK_FALSE(r.any_fail());
  for (const auto& t : r.tasks) CHECK(t.verdict == Verdict::kSkip);
  SuiteOptions boxed;
  boxed.policy.explicit_radius = 2;
  boxed.field = FieldSpec::rationals();
  const Report b = run_suite(scene("a3_nonpure"), Suite::kVanishing, boxed);
  bool chain_ran = false;
  for (const auto& t : b.tasks)
    if (t.theorem.rfind("frobenius-chain", 0) == 0) chain_ran = chain_ran || t.verdict == Verdict::kPass;
  CHECK(chain_ran);
}

TEST_CASE("reports serialize deterministically") {
  SuiteOptions options;
  options.field = FieldSpec::rationals();
  const Report r = run_suite(scene("p2_triangle"), Suite::kExtension, options);
  const Report again = run_suite(scene("p2_triangle"), Suite::kExtension, options);
  const std::string json = emit_report(r, ReportFormat::kJson);
  CHECK(json == emit_report(again, ReportFormat::kJson));
  CHECK(parse_report_json(json) == r);
  CHECK(emit_report(parse_report_json(json), ReportFormat::kJson) == json);
  CHECK(json.find("\"digest\"") < json.find("\"scene\""));  // sorted keys

  const std::string csv = emit_report(r, ReportFormat::kCsv);
  CHECK(count_lines(csv) == r.tasks.size() + 1);

  const std::string text = emit_report(r, ReportFormat::kText);
  std::istringstream lines(text);
  std::size_t verdict_lines = 0;
  for (std::string line; std::getline(lines, line);)
    if (line.rfind("PASS ", 0) == 0 || line.rfind("FAIL ", 0) == 0 || line.rfind("SKIP ", 0) == 0) ++verdict_lines;
  CHECK(verdict_lines == r.tasks.size());
  CHECK_THROWS_AS(parse_report_json("{}"), Error);
  CHECK_THROWS_AS(parse_report_format("yaml"), Error);
}

TEST_CASE("scene digest is FNV-1a of the canonical JSON") {
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
  const Scene a = parse_scene(R"({"lattice_rank":1,"rays":[[1],[-1]],"cones":[[0],[1]]})", "x");
  const Scene b = parse_scene("{ \"cones\": [[0], [1]],\n \"rays\": [[1], [-1]], \"lattice_rank\": 1 }", "x");
  CHECK(a.digest == b.digest);
}

TEST_CASE("multiplication suite certificates") {
  SuiteOptions options;
  options.field = FieldSpec::rationals();
  const Report r = run_suite(scene("p1"), Suite::kMultiplication, options);
  CHECK_FALSE(r.any_fail());
  std::size_t controls = 0;
  for (const auto& t : r.tasks)
    if (t.theorem.rfind("char-p-morphism-fails-over-Q", 0) == 0) {
      CHECK(t.verdict == Verdict::kPass);
      CHECK_FALSE(t.witness.empty());
      ++controls;
    }
  CHECK(controls == 3 * 3);  // l = 2, 3, 5 for Ω̃ and two log configurations
}
