#include "torich/suite.hpp"

#include <deque>

#include "torich/error.hpp"
#include "torich/multmap.hpp"

namespace torich {

namespace {

std::string ids(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

std::string sheaf_label(const SheafSpec& spec) {
  const SheafSpec plain = spec.untwisted();
  if (plain.kind() != SheafKind::kLogForms) return plain.describe();
  return "Omega~^" + std::to_string(plain.degree()) + "_X(log A=" + ids(plain.boundary()->a) +
         " B=" + ids(plain.boundary()->b) + ")(-A)";
}

std::vector<std::vector<Int>> row(const std::vector<Int>& v) { return {v}; }

std::string weight_string(const MVector& m) { return to_string(m); }

std::vector<FieldSpec> fields_of(const Scene& scene, const SuiteOptions& options) {
  if (options.field) return {*options.field};
  return scene.fields;
}

const std::vector<NamedBundle>& require_bundles(const std::vector<NamedBundle>& b, const char* what) {
  if (b.empty()) throw Error(ErrorCode::kMissingIngredient, std::string("scene has no ") + what);
  return b;
}

// Ishida forms on the polyhedron and every log configuration, degrees 0..n.
std::vector<SheafSpec> form_sheaves(const Scene& scene) {
  std::vector<SheafSpec> out;
  const std::size_t n = scene.fan->rank();
  for (std::size_t a = 0; a <= n; ++a) out.push_back(SheafSpec::ishida_forms(scene.polyhedron(), a));
  for (const auto& ab : scene.boundaries)
    for (std::size_t a = 0; a <= n; ++a) out.push_back(SheafSpec::log_forms(scene.fan, ab, a));
  return out;
}

std::vector<SheafSpec> de_rham_families(const Scene& scene) {
  std::vector<SheafSpec> out{SheafSpec::ishida_forms(scene.polyhedron(), 0)};
  for (const auto& ab : scene.boundaries) out.push_back(SheafSpec::log_forms(scene.fan, ab, 0));
  return out;
}

TaskResult task(std::string theorem, const SheafSpec& spec, const std::string& bundle, const FieldSpec& field) {
  TaskResult t;
  t.theorem = std::move(theorem);
  t.sheaf = sheaf_label(spec);
  t.bundle = bundle;
  t.field = field.name();
  return t;
}

void fail_with(TaskResult& t, const std::string& witness) {
  t.verdict = Verdict::kFail;
  t.witness = witness;
}

// Runs `body`; computational errors become FAIL verdicts with the message,
// except unbounded sums on non-complete fans, which are SKIP.
template <class F>
void guarded(TaskResult& t, F&& body) {
  try {
    body();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kMissingIngredient) throw;
    if (e.code() == ErrorCode::kUnbounded) {
      t.tables.clear();
      t.verdict = Verdict::kSkip;
      t.witness = "fan is not complete; pass an explicit box";
      return;
    }
    fail_with(t, e.what());
  }
}

// h^i for i > 0 must vanish; witness names the degree and a weight.
void check_higher_vanishing(TaskResult& t, const SheafSpec& spec, const FieldSpec& field, const CohomologyTable& table) {
  for (std::size_t i = 1; i < table.h.size(); ++i) {
    if (table.h[i] == 0) continue;
    std::string w = "h^" + std::to_string(i) + " = " + std::to_string(table.h[i]);
    if (auto m = cohomology_witness(spec, field, i, table.certificate.radius)) w += " at weight " + weight_string(*m);
    fail_with(t, w);
    return;
  }
}

// Cohomology tables shared between the vanishing checks and the chains: L^{l^t}
// for different (L, l, t) often coincide.
class TableCache {
 public:
  TableCache(const BoxPolicy& policy) : policy_(policy) {}
  const CohomologyTable& get(std::size_t sheaf, const SheafSpec& spec, const CartierData& l, const FieldSpec& field) {
    for (const auto& e : entries_)
      if (e.sheaf == sheaf && e.field == field && e.bundle == l) return e.table;
    entries_.push_back({sheaf, field, l, sheaf_cohomology(spec.twisted(l), field, policy_)});
    return entries_.back().table;
  }

 private:
  struct Entry {
    std::size_t sheaf;
    FieldSpec field;
    CartierData bundle;
    CohomologyTable table;
  };
  BoxPolicy policy_;
  std::deque<Entry> entries_;
};

void vanishing(const Scene& scene, const SuiteOptions& options, Report& report) {
  const auto& bundles = require_bundles(scene.line_bundles, "line_bundles");
  const auto sheaves = form_sheaves(scene);
  TableCache cache(options.policy);
  for (const auto& field : fields_of(scene, options)) {
    for (const auto& nb : bundles) {
      const bool ample = is_ample(nb.bundle);
      for (std::size_t k = 0; k < sheaves.size(); ++k) {
        const auto& spec = sheaves[k];
        TaskResult t = task("vanishing", spec, nb.name, field);
        if (!ample) {
          t.verdict = Verdict::kSkip;
          t.witness = "bundle is not ample";
        } else {
          guarded(t, [&] {
            const auto& table = cache.get(k, spec, nb.bundle, field);
            t.tables["h"] = row(table.h);
            t.certificate = table.certificate;
            check_higher_vanishing(t, spec.twisted(nb.bundle), field, table);
          });
        }
        report.tasks.push_back(std::move(t));
      }
    }
    // Split injections force h^i(F ⊗ L) <= h^i(F ⊗ L^l) along L, L^l, L^{l^2}, ...
    for (const auto& nb : bundles) {
      for (std::size_t k = 0; k < sheaves.size(); ++k) {
        const auto& spec = sheaves[k];
        for (Int l : scene.tasks.chain_bases) {
          TaskResult t = task("frobenius-chain l=" + std::to_string(l), spec, nb.name, field);
          guarded(t, [&] {
            std::vector<std::vector<Int>> chain;
            Int power = 1;
            for (std::size_t step = 0; step <= scene.tasks.chain_length; ++step) {
              chain.push_back(cache.get(k, spec, nb.bundle.power(power), field).h);
              power = checked_mul(power, l);
            }
            t.tables["chain"] = chain;
            for (std::size_t step = 1; step < chain.size() && t.verdict == Verdict::kPass; ++step)
              for (std::size_t i = 0; i < chain[step].size(); ++i)
                if (chain[step][i] < chain[step - 1][i]) {
                  fail_with(t, "h^" + std::to_string(i) + " drops from " + std::to_string(chain[step - 1][i]) +
                                   " to " + std::to_string(chain[step][i]) + " at step " + std::to_string(step));
                  break;
                }
          });
          report.tasks.push_back(std::move(t));
        }
      }
    }
  }
}

void e1(const Scene& scene, const SuiteOptions& options, Report& report) {
  const bool complete = is_complete(*scene.fan);
  for (const auto& field : fields_of(scene, options)) {
    for (const auto& family : de_rham_families(scene)) {
      TaskResult t = task("e1-degeneration", family, "", field);
      t.sheaf = family.kind() == SheafKind::kLogForms ? sheaf_label(family) : "Omega~^*" + sheaf_label(family).substr(8);
      if (!complete) {
        t.verdict = Verdict::kSkip;
        t.witness = "fan is not complete";
        report.tasks.push_back(std::move(t));
        continue;
      }
      guarded(t, [&] {
        const auto table = hypercohomology(family, field, options.policy);
        t.tables["e1"] = table.e1;
        t.tables["hyper"] = row(table.hyper);
        t.tables["e1_diagonals"] = row(table.e1_diagonals());
        t.certificate = table.certificate;
        const auto diag = table.e1_diagonals();
        for (std::size_t k = 0; k < diag.size(); ++k)
          if (diag[k] != table.hyper[k]) {
            fail_with(t, "sum of E1 on diagonal " + std::to_string(k) + " is " + std::to_string(diag[k]) +
                             " but dim H^" + std::to_string(k) + " = " + std::to_string(table.hyper[k]));
            break;
          }
      });
      report.tasks.push_back(std::move(t));
    }
  }
}

void extension(const Scene& scene, const SuiteOptions& options, Report& report) {
  if (!scene.phi) throw Error(ErrorCode::kMissingIngredient, "scene has no phi");
  const auto& bundles = require_bundles(scene.line_bundles, "line_bundles");
  const SheafSpec ideal = SheafSpec::ideal_of(*scene.phi);
  const SheafSpec on_y = SheafSpec::structure_on(*scene.phi);
  for (const auto& field : fields_of(scene, options)) {
    for (const auto& nb : bundles) {
      TaskResult t = task("extension", ideal, nb.name, field);
      if (!is_ample(nb.bundle)) {
        t.verdict = Verdict::kSkip;
        t.witness = "bundle is not ample";
        report.tasks.push_back(std::move(t));
        continue;
      }
      guarded(t, [&] {
        const SheafSpec twisted = ideal.twisted(nb.bundle);
        const auto table = sheaf_cohomology(twisted, field, options.policy);
        t.tables["h"] = row(table.h);
        t.certificate = table.certificate;

        // Restriction H^0(X, L) -> H^0(Y, L|Y), weight by weight.
        const CechKernel x(line_bundle_spec(nb.bundle), field);
        const CechKernel y(on_y.twisted(nb.bundle), field);
        const auto y_charts = default_cover(on_y).charts;
        const Int r0 = default_initial_radius(*scene.fan, nb.bundle);
        const auto sums = stabilized_sum(scene.fan->rank(), r0, options.policy, 3, [&](const MVector& m) {
          const Int hx = x(m)[0], hy = y(m)[0];
          Int rank = 0;
          if (hx > 0)
            for (auto c : y_charts)
              if (y.model().component(c, m).rows() > 0) rank = 1;
          return std::vector<Int>{hx, hy, rank};
        });
        t.values["h0_X"] = sums.totals[0];
        t.values["h0_Y"] = sums.totals[1];
        t.values["restriction_rank"] = sums.totals[2];
        check_higher_vanishing(t, twisted, field, table);
        if (t.verdict == Verdict::kFail) return;
        if (sums.totals[2] != sums.totals[1])
          fail_with(t, "restriction has rank " + std::to_string(sums.totals[2]) + " onto a space of dimension " +
                           std::to_string(sums.totals[1]));
        else if (sums.totals[0] - table.h[0] != sums.totals[2])
          fail_with(t, "rank " + std::to_string(sums.totals[2]) + " disagrees with h0(X,L) - h0(I_Y (x) L) = " +
                           std::to_string(sums.totals[0] - table.h[0]));
      });
      report.tasks.push_back(std::move(t));
    }
  }
}

void kollar(const Scene& scene, const SuiteOptions& options, Report& report) {
  if (!scene.morphism) throw Error(ErrorCode::kMissingIngredient, "scene has no morphism");
  const auto& m = *scene.morphism;
  const auto& bundles = require_bundles(m.line_bundles, "morphism/line_bundles");
  std::vector<BoundaryData> configs = scene.boundaries;
  if (configs.empty()) configs.push_back({});
  const FanMorphism identity = validate_fan_morphism(scene.fan, scene.fan);
  const std::size_t n = scene.fan->rank();
  for (const auto& field : fields_of(scene, options)) {
    for (const auto& nb : bundles) {
      const bool ample = is_ample(nb.bundle);
      const CartierData pulled = pull_back(nb.bundle, scene.fan);
      for (const auto& ab : configs) {
        for (std::size_t a = 0; a <= n; ++a) {
          const SheafSpec spec = SheafSpec::log_forms(scene.fan, ab, a);
          TaskResult t = task("kollar-vanishing", spec, nb.name, field);
          std::optional<DirectImageTable> table;
          if (!ample) {
            t.verdict = Verdict::kSkip;
            t.witness = "bundle is not ample";
          } else {
            guarded(t, [&] {
              table = twisted_direct_image_cohomology(m.map, spec, nb.bundle, field, options.policy);
              t.tables["h"] = table->h;
              t.certificate = table->certificate;
              for (std::size_t j = 0; j < table->h.size() && t.verdict == Verdict::kPass; ++j)
                for (std::size_t i = 1; i < table->h[j].size(); ++i)
                  if (table->h[j][i] != 0) {
                    fail_with(t, "h^" + std::to_string(i) + "(L (x) R^" + std::to_string(j) + ") = " +
                                     std::to_string(table->h[j][i]));
                    break;
                  }
            });
          }
          report.tasks.push_back(std::move(t));

          TaskResult euler = task("leray-euler", spec, nb.name, field);
          guarded(euler, [&] {
            if (!table) table = twisted_direct_image_cohomology(m.map, spec, nb.bundle, field, options.policy);
            const auto direct = sheaf_cohomology(spec.twisted(pulled), field, options.policy);
            euler.values["chi_direct_images"] = table->euler_characteristic();
            euler.values["chi_source"] = direct.euler_characteristic();
            if (table->euler_characteristic() != direct.euler_characteristic())
              fail_with(euler, "Euler characteristics differ");
          });
          report.tasks.push_back(std::move(euler));

          TaskResult id = task("identity-reduction", spec, nb.name + " pulled back", field);
          guarded(id, [&] {
            const auto via = twisted_direct_image_cohomology(identity, spec, pulled, field, options.policy);
            const auto direct = sheaf_cohomology(spec.twisted(pulled), field, options.policy);
            id.tables["direct_images"] = via.h;
            id.tables["direct"] = row(direct.h);
            if (via.h[0] != direct.h) fail_with(id, "R^0 of the identity differs from direct cohomology");
            for (std::size_t j = 1; j < via.h.size(); ++j)
              for (auto v : via.h[j])
                if (v != 0) fail_with(id, "identity has nonzero R^" + std::to_string(j));
          });
          report.tasks.push_back(std::move(id));
        }
      }
    }
  }
}

void multiplication(const Scene& scene, const SuiteOptions& options, Report& report) {
  auto sheaves = form_sheaves(scene);
  if (scene.phi) sheaves.push_back(SheafSpec::ideal_of(*scene.phi));
  const Int radius = scene.tasks.split_radius;
  for (const auto& field : fields_of(scene, options)) {
    for (Int l : scene.tasks.multipliers) {
      const auto ctx = MultiplicationContext::make(l);
      for (const auto& spec : sheaves) {
        std::vector<std::pair<std::string, std::optional<CartierData>>> twists{{"", std::nullopt}};
        for (const auto& nb : scene.line_bundles) twists.emplace_back(nb.name, nb.bundle);
        for (const auto& [name, bundle] : twists) {
          TaskResult t = task("split-injection l=" + std::to_string(l), spec, name, field);
          guarded(t, [&] {
            const auto cert = verify_split(bundle ? spec.twisted(*bundle) : spec, ctx, radius, field);
            t.values["checks"] = static_cast<Int>(cert.checks);
            t.values["radius"] = radius;
            if (!cert.ok) fail_with(t, cert.witness);
          });
          report.tasks.push_back(std::move(t));
        }
      }
    }
  }
  // d∘φ = 0 and ψ∘d = 0 hold in characteristic l and fail over Q.
  for (Int l : scene.tasks.multipliers) {
    if (!is_prime(l)) continue;
    const auto ctx = MultiplicationContext::make(l);
    const FieldSpec fl = FieldSpec::prime(l);
    for (const auto& family : de_rham_families(scene)) {
      TaskResult t = task("char-p-morphism l=" + std::to_string(l), family, "", fl);
      guarded(t, [&] {
        const auto cert = verify_complex_morphism_char_p(family, ctx, radius, fl);
        t.values["checks"] = static_cast<Int>(cert.checks);
        if (!cert.ok) fail_with(t, cert.witness);
      });
      report.tasks.push_back(std::move(t));

      TaskResult q = task("char-p-morphism-fails-over-Q l=" + std::to_string(l), family, "", FieldSpec::rationals());
      if (family.phi() && family.phi()->component_dimensions().front() == 0) {
        q.verdict = Verdict::kSkip;
        q.witness = "zero-dimensional polyhedron: the de Rham complex has no differentials";
        report.tasks.push_back(std::move(q));
        continue;
      }
      guarded(q, [&] {
        const auto cert = verify_complex_morphism_char_p(family, ctx, radius, FieldSpec::rationals());
        q.values["checks"] = static_cast<Int>(cert.checks);
        if (cert.ok)
          fail_with(q, "no failure found over Q");
        else
          q.witness = cert.witness;
      });
      report.tasks.push_back(std::move(q));
    }
  }
}

}  // namespace

Suite parse_suite(std::string_view name) {
  if (name == "vanishing") return Suite::kVanishing;
  if (name == "e1") return Suite::kE1;
  if (name == "extension") return Suite::kExtension;
  if (name == "kollar") return Suite::kKollar;
  if (name == "multiplication") return Suite::kMultiplication;
  throw Error(ErrorCode::kParse, "unknown suite " + std::string(name));
}

std::string_view suite_name(Suite suite) {
  switch (suite) {
    case Suite::kVanishing: return "vanishing";
    case Suite::kE1: return "e1";
    case Suite::kExtension: return "extension";
    case Suite::kKollar: return "kollar";
    case Suite::kMultiplication: return "multiplication";
  }
  return "";
}

std::optional<MVector> cohomology_witness(const SheafSpec& spec, const FieldSpec& field, std::size_t i, Int r) {
  const CechKernel kernel(spec, field);
  const std::size_t n = spec.fan().rank();
  MVector m(std::vector<Int>(n, -r));
  while (true) {
    const auto h = kernel(m);
    if (i + 1 < h.size() && h[i] != 0) return m;
    std::size_t k = 0;
    while (k < n && m[k] == r) m[k++] = -r;
    if (k == n) return std::nullopt;
    ++m[k];
  }
}

Report run_suite(const Scene& scene, Suite suite, const SuiteOptions& options) {
  Report report;
  report.scene = scene.name;
  report.digest = scene.digest;
  report.suite = std::string(suite_name(suite));
  switch (suite) {
    case Suite::kVanishing: vanishing(scene, options, report); break;
    case Suite::kE1: e1(scene, options, report); break;
    case Suite::kExtension: extension(scene, options, report); break;
    case Suite::kKollar: kollar(scene, options, report); break;
    case Suite::kMultiplication: multiplication(scene, options, report); break;
  }
  return report;
}

}  // namespace torich
