#include "torich/scene.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "torich/error.hpp"

namespace torich {

namespace {

using nlohmann::json;

[[noreturn]] void fail(ErrorCode code, const std::string& pointer, const std::string& what) {
  throw Error(code, what + " at " + (pointer.empty() ? "/" : pointer));
}

// Rethrows library errors with the location attached.
template <class F>
auto located(const std::string& pointer, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    fail(e.code(), pointer, std::string(e.what()).substr(error_code_name(e.code()).size() + 2));
  }
}

const json& require(const json& obj, const std::string& pointer, const char* key) {
  if (!obj.is_object()) fail(ErrorCode::kParse, pointer, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::kParse, pointer + "/" + key, "missing field");
  return *it;
}

Int as_int(const json& v, const std::string& pointer) {
  if (!v.is_number_integer()) fail(ErrorCode::kParse, pointer, "expected an integer");
  return v.get<Int>();
}

std::size_t as_index(const json& v, const std::string& pointer, std::size_t bound, const char* what) {
  const Int i = as_int(v, pointer);
  if (i < 0 || static_cast<std::size_t>(i) >= bound)
    fail(ErrorCode::kParse, pointer, std::string(what) + " index " + std::to_string(i) + " out of range");
  return static_cast<std::size_t>(i);
}

const json& as_array(const json& v, const std::string& pointer) {
  if (!v.is_array()) fail(ErrorCode::kParse, pointer, "expected an array");
  return v;
}

std::vector<Int> int_list(const json& v, const std::string& pointer) {
  std::vector<Int> out;
  for (std::size_t i = 0; i < as_array(v, pointer).size(); ++i)
    out.push_back(as_int(v[i], pointer + "/" + std::to_string(i)));
  return out;
}

std::vector<std::size_t> index_list(const json& v, const std::string& pointer, std::size_t bound, const char* what) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < as_array(v, pointer).size(); ++i)
    out.push_back(as_index(v[i], pointer + "/" + std::to_string(i), bound, what));
  return out;
}

std::shared_ptr<const Fan> parse_fan(const json& obj, const std::string& pointer, std::size_t rank) {
  const std::string rp = pointer + "/rays";
  const json& rays_json = as_array(require(obj, pointer, "rays"), rp);
  std::vector<NVector> rays;
  for (std::size_t i = 0; i < rays_json.size(); ++i) {
    auto c = int_list(rays_json[i], rp + "/" + std::to_string(i));
    if (c.size() != rank)
      fail(ErrorCode::kParse, rp + "/" + std::to_string(i), "ray has " + std::to_string(c.size()) + " coordinates");
    rays.emplace_back(std::move(c));
  }
  const std::string cp = pointer + "/cones";
  const json& cones_json = as_array(require(obj, pointer, "cones"), cp);
  std::vector<std::vector<std::size_t>> cones;
  for (std::size_t i = 0; i < cones_json.size(); ++i)
    cones.push_back(index_list(cones_json[i], cp + "/" + std::to_string(i), rays.size(), "ray"));
  return located(cp, [&] { return std::make_shared<const Fan>(Fan::build(rank, std::move(rays), cones)); });
}

std::vector<NamedBundle> parse_bundles(const json& obj, const std::string& pointer,
                                       const std::shared_ptr<const Fan>& fan) {
  std::vector<NamedBundle> out;
  if (!obj.is_object()) fail(ErrorCode::kParse, pointer, "expected an object of named bundles");
  for (const auto& [name, spec] : obj.items()) {
    const std::string bp = pointer + "/" + name;
    if (spec.contains("divisor")) {
      const auto coeffs = int_list(spec["divisor"], bp + "/divisor");
      if (coeffs.size() != fan->rays().size())
        fail(ErrorCode::kCartier, bp + "/divisor", "expected one coefficient per ray");
      out.push_back({name, located(bp, [&] { return cartier_from_divisor(fan, coeffs); })});
    } else if (spec.contains("cartier")) {
      const std::string cp = bp + "/cartier";
      const json& pieces = as_array(spec["cartier"], cp);
      std::vector<MVector> data(fan->max_cones().size());
      std::vector<bool> seen(data.size(), false);
      for (std::size_t i = 0; i < pieces.size(); ++i) {
        const std::string pp = cp + "/" + std::to_string(i);
        const auto rays = index_list(require(pieces[i], pp, "cone"), pp + "/cone", fan->rays().size(), "ray");
        const auto id = fan->find(rays);
        const auto slot = id ? fan->max_index(*id) : std::nullopt;
        if (!slot) fail(ErrorCode::kCartier, pp + "/cone", "not a maximal cone");
        auto m = int_list(require(pieces[i], pp, "m"), pp + "/m");
        if (m.size() != fan->rank()) fail(ErrorCode::kParse, pp + "/m", "wrong number of coordinates");
        data[*slot] = MVector(std::move(m));
        seen[*slot] = true;
      }
      for (std::size_t s = 0; s < seen.size(); ++s)
        if (!seen[s]) fail(ErrorCode::kCartier, cp, "missing datum for maximal cone " + std::to_string(s));
      out.push_back({name, located(bp, [&] { return cartier_validate(fan, std::move(data)); })});
    } else {
      fail(ErrorCode::kParse, bp, "expected \"divisor\" or \"cartier\"");
    }
  }
  return out;
}

FieldSpec parse_field(const json& v, const std::string& pointer) {
  if (v.is_string()) return located(pointer, [&] { return FieldSpec::parse(v.get<std::string>()); });
  const json& type = require(v, pointer, "type");
  if (!type.is_string()) fail(ErrorCode::kParse, pointer + "/type", "expected a string");
  if (type == "Q") return FieldSpec::rationals();
  if (type == "Fp") {
    const Int p = as_int(require(v, pointer, "p"), pointer + "/p");
    return located(pointer + "/p", [&] { return FieldSpec::prime(p); });
  }
  fail(ErrorCode::kField, pointer + "/type", "unknown field type");
}

BoundaryData parse_boundary(const json& obj, const std::string& pointer, const Fan& fan) {
  std::vector<std::size_t> a, b;
  if (obj.contains("A")) a = index_list(obj["A"], pointer + "/A", fan.rays().size(), "ray");
  if (obj.contains("B")) b = index_list(obj["B"], pointer + "/B", fan.rays().size(), "ray");
  return located(pointer, [&] { return validate_boundary(fan, a, b); });
}

}  // namespace

StarSet Scene::polyhedron() const { return phi ? *phi : whole_fan(fan); }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Scene parse_scene(std::string_view text, std::string name) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kParse, std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) fail(ErrorCode::kParse, "", "expected an object");
  Scene s;
  s.name = root.contains("name") && root["name"].is_string() ? root["name"].get<std::string>() : std::move(name);
  s.digest = fnv1a_hex(root.dump());

  const Int rank = as_int(require(root, "", "lattice_rank"), "/lattice_rank");
  if (rank < 1 || rank > 8) fail(ErrorCode::kParse, "/lattice_rank", "rank must be between 1 and 8");
  s.fan = parse_fan(root, "", static_cast<std::size_t>(rank));

  if (root.contains("phi")) {
    const json& phi = root["phi"];
    if (phi.is_object()) {
      const Int m = as_int(require(phi, "/phi", "skeleton"), "/phi/skeleton");
      if (m < 0 || m > rank) fail(ErrorCode::kStar, "/phi/skeleton", "skeleton index out of range");
      s.phi = skeleton_star_set(s.fan, static_cast<std::size_t>(m));
    } else {
      std::vector<std::size_t> ids;
      for (std::size_t i = 0; i < as_array(phi, "/phi").size(); ++i) {
        const std::string pp = "/phi/" + std::to_string(i);
        const auto rays = index_list(phi[i], pp, s.fan->rays().size(), "ray");
        const auto id = s.fan->find(rays);
        if (!id) fail(ErrorCode::kStar, pp, "not a cone of the fan");
        ids.push_back(*id);
      }
      s.phi = located("/phi", [&] { return validate_star_set(s.fan, ids); });
    }
  }

  if (root.contains("A") || root.contains("B")) s.boundaries.push_back(parse_boundary(root, "", *s.fan));
  if (root.contains("boundaries")) {
    const json& list = as_array(root["boundaries"], "/boundaries");
    for (std::size_t i = 0; i < list.size(); ++i)
      s.boundaries.push_back(parse_boundary(list[i], "/boundaries/" + std::to_string(i), *s.fan));
  }

  if (root.contains("line_bundles")) s.line_bundles = parse_bundles(root["line_bundles"], "/line_bundles", s.fan);

  if (root.contains("morphism")) {
    const json& mj = root["morphism"];
    const std::string mp = "/morphism";
    auto target = parse_fan(require(mj, mp, "target"), mp + "/target", static_cast<std::size_t>(rank));
    std::optional<IntMatrix> map;
    if (mj.contains("map")) {
      const json& rows = as_array(mj["map"], mp + "/map");
      std::vector<std::vector<Int>> r;
      for (std::size_t i = 0; i < rows.size(); ++i) r.push_back(int_list(rows[i], mp + "/map/" + std::to_string(i)));
      if (r.size() != static_cast<std::size_t>(rank))
        fail(ErrorCode::kParse, mp + "/map", "lattice map must be square of the lattice rank");
      for (std::size_t i = 0; i < r.size(); ++i)
        if (r[i].size() != static_cast<std::size_t>(rank))
          fail(ErrorCode::kParse, mp + "/map/" + std::to_string(i), "lattice map must be square of the lattice rank");
      map = IntMatrix::from_rows(r, static_cast<std::size_t>(rank));
    }
    auto f = located(mp, [&] { return validate_fan_morphism(s.fan, target, map); });
    std::vector<NamedBundle> bundles;
    if (mj.contains("line_bundles")) bundles = parse_bundles(mj["line_bundles"], mp + "/line_bundles", target);
    s.morphism = SceneMorphism{target, std::move(f), std::move(bundles)};
  }

  if (root.contains("fields")) {
    const json& list = as_array(root["fields"], "/fields");
    for (std::size_t i = 0; i < list.size(); ++i) s.fields.push_back(parse_field(list[i], "/fields/" + std::to_string(i)));
  }
  if (s.fields.empty()) s.fields.push_back(FieldSpec::rationals());

  if (root.contains("tasks")) {
    const json& t = root["tasks"];
    if (!t.is_object()) fail(ErrorCode::kParse, "/tasks", "expected an object");
    if (t.contains("split_radius")) s.tasks.split_radius = as_int(t["split_radius"], "/tasks/split_radius");
    if (t.contains("multipliers")) s.tasks.multipliers = int_list(t["multipliers"], "/tasks/multipliers");
    if (t.contains("chain_bases")) s.tasks.chain_bases = int_list(t["chain_bases"], "/tasks/chain_bases");
    if (t.contains("chain_length")) {
      const Int r = as_int(t["chain_length"], "/tasks/chain_length");
      if (r < 0) fail(ErrorCode::kParse, "/tasks/chain_length", "must be nonnegative");
      s.tasks.chain_length = static_cast<std::size_t>(r);
    }
    for (std::size_t i = 0; i < s.tasks.multipliers.size(); ++i)
      if (s.tasks.multipliers[i] < 2) fail(ErrorCode::kParse, "/tasks/multipliers/" + std::to_string(i), "must be >= 2");
    for (std::size_t i = 0; i < s.tasks.chain_bases.size(); ++i)
      if (s.tasks.chain_bases[i] < 2) fail(ErrorCode::kParse, "/tasks/chain_bases/" + std::to_string(i), "must be >= 2");
  }
  return s;
}

Scene load_scene(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scene(buf.str(), path.stem().string());
}

}  // namespace torich
