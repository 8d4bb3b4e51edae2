#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "torich/error.hpp"
#include "torich/suite.hpp"

using namespace torich;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

bool is_input_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::kParse:
    case ErrorCode::kNotCone:
    case ErrorCode::kFanAxiom:
    case ErrorCode::kStar:
    case ErrorCode::kBoundary:
    case ErrorCode::kCartier:
    case ErrorCode::kField:
    case ErrorCode::kMissingIngredient:
    case ErrorCode::kNotCompatible:
    case ErrorCode::kDegree:
    case ErrorCode::kRankMismatch:
      return true;
    default:
      return false;
  }
}

std::string join(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

int validate(const std::string& path) {
  const Scene s = load_scene(path);
  const Fan& fan = *s.fan;
  std::size_t smooth = 0;
  for (auto c : fan.max_cones()) smooth += is_smooth(fan, c);
  std::cout << "scene " << s.name << " (" << s.digest << ")\n"
            << "rank " << fan.rank() << ", " << fan.rays().size() << " rays, " << fan.size() << " cones, "
            << fan.max_cones().size() << " maximal\n"
            << "complete " << (is_complete(fan) ? "yes" : "no") << ", smooth charts " << smooth << "/"
            << fan.max_cones().size() << "\n";
  if (s.phi)
    std::cout << "polyhedron: components of dimension " << join(s.phi->component_dimensions())
              << (s.phi->is_pure() ? " (pure)" : " (not pure)") << "\n";
  for (std::size_t i = 0; i < s.boundaries.size(); ++i)
    std::cout << "boundary " << i << ": A = {" << join(s.boundaries[i].a) << "} B = {" << join(s.boundaries[i].b)
              << "}\n";
  for (const auto& nb : s.line_bundles)
    std::cout << "bundle " << nb.name << (is_ample(nb.bundle) ? " ample" : " not ample") << "\n";
  if (s.morphism) {
    std::cout << "morphism onto a fan with " << s.morphism->target->rays().size() << " rays"
              << (s.morphism->map.is_identity() ? " (identity)" : " (subdivision)") << "\n";
    for (const auto& nb : s.morphism->line_bundles)
      std::cout << "target bundle " << nb.name << (is_ample(nb.bundle) ? " ample" : " not ample") << "\n";
  }
  std::cout << "fields";
  for (const auto& f : s.fields) std::cout << ' ' << f.name();
  std::cout << "\nvalid\n";
  return 0;
}

const CartierData& find_bundle(const Scene& s, const std::string& name) {
  for (const auto& nb : s.line_bundles)
    if (nb.name == name) return nb.bundle;
  throw Error(ErrorCode::kMissingIngredient, "scene has no line bundle named " + name);
}

SheafSpec make_sheaf(const Scene& s, const std::string& name, std::size_t a, std::size_t boundary) {
  auto need_phi = [&]() -> const StarSet& {
    if (!s.phi) throw Error(ErrorCode::kMissingIngredient, "scene has no phi");
    return *s.phi;
  };
  if (name == "O") return SheafSpec::structure_on(whole_fan(s.fan)).with_degree(a);
  if (name == "O_Y") return SheafSpec::structure_on(need_phi()).with_degree(a);
  if (name == "I_Y") return SheafSpec::ideal_of(need_phi()).with_degree(a);
  if (name == "omega") return SheafSpec::ishida_forms(s.polyhedron(), a);
  if (name == "log") {
    if (boundary >= s.boundaries.size())
      throw Error(ErrorCode::kMissingIngredient, "scene has no boundary configuration " + std::to_string(boundary));
    return SheafSpec::log_forms(s.fan, s.boundaries[boundary], a);
  }
  throw Error(ErrorCode::kParse, "unknown sheaf " + name + " (expected O, O_Y, I_Y, omega, log)");
}

int cohomology(const std::string& path, const std::string& sheaf, std::size_t a, const std::string& twist,
               std::size_t boundary, const std::string& field_name, const BoxPolicy& policy, const std::string& format) {
  const Scene s = load_scene(path);
  SheafSpec spec = make_sheaf(s, sheaf, a, boundary);
  if (!twist.empty()) spec = spec.twisted(find_bundle(s, twist));
  const FieldSpec field = FieldSpec::parse(field_name);
  const auto table = sheaf_cohomology(spec, field, policy);
  const auto& c = table.certificate;
  if (format == "json") {
    nlohmann::json j = {{"sheaf", spec.describe()},
                        {"bundle", twist},
                        {"field", field.name()},
                        {"h", table.h},
                        {"euler_characteristic", table.euler_characteristic()},
                        {"certificate",
                         {{"radius", c.radius},
                          {"confirmed_radius", c.confirmed_radius},
                          {"doublings", c.doublings},
                          {"explicit_box", c.explicit_box},
                          {"visited", c.visited},
                          {"support", c.support}}}};
    std::cout << j.dump(2) << "\n";
    return 0;
  }
  if (format != "text") throw Error(ErrorCode::kParse, "unknown format " + format);
  std::cout << spec.describe() << (twist.empty() ? "" : " with L = " + twist) << " over " << field.name() << "\n";
  for (std::size_t i = 0; i < table.h.size(); ++i) std::cout << "h^" << i << " = " << table.h[i] << "\n";
  std::cout << "chi = " << table.euler_characteristic() << "\n"
            << "box radius " << c.radius << (c.explicit_box ? " (explicit)" : "") << ", confirmed at "
            << c.confirmed_radius << ", " << c.doublings << " doublings, " << c.support << " weights in support\n";
  return 0;
}

int run(const std::string& suite, const std::string& path, const std::string& format, const SuiteOptions& options) {
  const ReportFormat f = parse_report_format(format);
  const Suite which = parse_suite(suite);
  const Scene s = load_scene(path);
  const Report report = run_suite(s, which, options);
  std::cout << emit_report(report, f);
  return report.any_fail() ? kExitFail : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"torich: cohomology of toric varieties and toric polyhedra"};
  app.require_subcommand(1);

  std::string scene_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scene file and summarize it");
  validate_cmd->add_option("scene", scene_path, "Scene JSON")->required();

  std::string sheaf, twist, field = "Q", format = "text";
  std::size_t a = 0, boundary = 0;
  std::optional<Int> box;
  std::size_t max_doublings = 4;
  bool serial = false;
  auto* coh_cmd = app.add_subcommand("cohomology", "Dimensions h^i of one sheaf");
  coh_cmd->add_option("scene", scene_path, "Scene JSON")->required();
  coh_cmd->add_option("--sheaf", sheaf, "O, O_Y, I_Y, omega or log")->required();
  coh_cmd->add_option("--a", a, "Form degree");
  coh_cmd->add_option("--twist", twist, "Name of a line bundle in the scene");
  coh_cmd->add_option("--boundary", boundary, "Index of the (A, B) configuration for log forms");
  coh_cmd->add_option("--field", field, "Q or Fp (e.g. F2)");
  coh_cmd->add_option("--format", format, "text or json");
  coh_cmd->add_option("--box", box, "Sum over this box radius instead of stabilizing");
  coh_cmd->add_option("--max-doublings", max_doublings, "Box doublings before giving up");
  coh_cmd->add_flag("--serial", serial, "Use the serial weight kernel");

  std::string suite;
  std::optional<std::string> run_field;
  auto* run_cmd = app.add_subcommand("run", "Run a theorem suite on a scene");
  run_cmd->add_option("suite", suite, "vanishing, e1, extension, kollar or multiplication")->required();
  run_cmd->add_option("scene", scene_path, "Scene JSON")->required();
  run_cmd->add_option("--format", format, "json, csv or text");
  run_cmd->add_option("--box", box, "Sum over this box radius instead of stabilizing");
  run_cmd->add_option("--max-doublings", max_doublings, "Box doublings before giving up");
  run_cmd->add_option("--field", run_field, "Run over this field only");
  run_cmd->add_flag("--serial", serial, "Use the serial weight kernel");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  BoxPolicy policy;
  policy.explicit_radius = box;
  policy.max_doublings = max_doublings;
  policy.mode = serial ? ExecutionMode::kSerial : ExecutionMode::kParallel;
  try {
    if (*validate_cmd) return validate(scene_path);
    if (*coh_cmd) return cohomology(scene_path, sheaf, a, twist, boundary, field, policy, format);
    SuiteOptions options;
    options.policy = policy;
    if (run_field) options.field = FieldSpec::parse(*run_field);
    return run(suite, scene_path, format, options);
  } catch (const Error& e) {
    std::cerr << "torich: " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInput : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "torich: internal error: " << e.what() << "\n";
    return kExitFail;
  }
}
