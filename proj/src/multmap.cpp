#include "torich/multmap.hpp"

#include "torich/error.hpp"

namespace torich {

namespace {

bool in_span(const IntMatrix& basis, std::span<const Int> v, const FieldSpec& field) {
  bool zero = true;
  for (Int x : v) zero = zero && field.reduce(x) == 0;
  if (zero) return true;
  if (basis.rows() == 0) return false;
  IntMatrix both = basis;
  both.append_row(v);
  return rank(both, field) == rank(basis, field);
}

std::string describe(const Section& s) {
  return "chart " + std::to_string(s.chart) + ", weight " + to_string(s.weight) + ", omega " + to_string(s.omega);
}

std::vector<Int> reduced(std::vector<Int> v, const FieldSpec& field) {
  for (auto& x : v) x = field.reduce(x);
  return v;
}

}  // namespace

MultiplicationContext MultiplicationContext::make(Int l) {
  if (l < 2) throw Error(ErrorCode::kDegree, "multiplication maps need l >= 2");
  return MultiplicationContext{l};
}

Section phi(const MultiplicationContext& ctx, const Section& s) {
  return Section{s.chart, s.weight.scaled(ctx.l), s.omega};
}

Section phi(const MultiplicationContext& ctx, const SheafModel& target, const Section& s) {
  Section out = phi(ctx, s);
  if (target.component(out.chart, out.weight).rows() == 0)
    throw Error(ErrorCode::kEmpty, "phi lands in a zero component at " + describe(out));
  return out;
}

std::optional<Section> psi(const MultiplicationContext& ctx, const Section& s) {
  MVector w(s.weight.rank());
  for (std::size_t i = 0; i < w.rank(); ++i) {
    if (s.weight[i] % ctx.l != 0) return std::nullopt;
    w[i] = s.weight[i] / ctx.l;
  }
  return Section{s.chart, std::move(w), s.omega};
}

MapCertificate verify_split(const SheafSpec& spec, const MultiplicationContext& ctx, Int radius,
                            const FieldSpec& field, const PsiFunction& psi_fn) {
  const SheafModel source(spec, field);
  const SheafModel target(spec.twist() ? spec.untwisted().twisted(spec.twist()->power(ctx.l)) : spec, field);
  const Fan& fan = spec.fan();
  MapCertificate cert;
  auto fail = [&](const std::string& what) {
    if (cert.ok) cert.witness = what;
    cert.ok = false;
  };
  auto alive = [](const SheafModel& model, std::size_t chart, const MVector& m) {
    return model.component(chart, m).rows() > 0;
  };

  // φ on primed sections, ψ∘φ = id, and compatibility with restriction.
  for (const auto& m : box_shell(fan.rank(), -1, radius))
    for (const auto& c : fan.cones()) {
      const IntMatrix src = source.component(c.id, m);
      for (std::size_t r = 0; r < src.rows(); ++r) {
        const Section s{c.id, m, std::vector<Int>(src.row(r).begin(), src.row(r).end())};
        const Section img = phi(ctx, s);
        ++cert.checks;
        if (!in_span(target.component(c.id, img.weight), img.omega, field)) {
          fail("phi leaves the target component at " + describe(img));
          continue;
        }
        const auto back = psi_fn(ctx, img);
        if (!back || back->weight != s.weight || reduced(back->omega, field) != reduced(s.omega, field))
          fail("psi(phi(s)) != s at " + describe(s));
        for (auto d : c.face_ids)
          if (alive(source, d, m) != alive(target, d, img.weight))
            fail("phi does not commute with restriction to cone " + std::to_string(d) + " at " + describe(s));
      }
    }

  // ψ on the whole pushforward component, and compatibility with restriction.
  for (const auto& m : box_shell(fan.rank(), -1, checked_mul(ctx.l, radius)))
    for (const auto& c : fan.cones()) {
      const IntMatrix tgt = target.component(c.id, m);
      for (std::size_t r = 0; r < tgt.rows(); ++r) {
        const Section t{c.id, m, std::vector<Int>(tgt.row(r).begin(), tgt.row(r).end())};
        const auto img = psi_fn(ctx, t);
        ++cert.checks;
        if (!img) continue;
        if (!in_span(source.component(c.id, img->weight), img->omega, field)) {
          fail("psi leaves the source component at " + describe(t));
          continue;
        }
        for (auto d : c.face_ids)
          if (alive(target, d, m) != alive(source, d, img->weight))
            fail("psi does not commute with restriction to cone " + std::to_string(d) + " at " + describe(t));
      }
    }
  return cert;
}

MapCertificate verify_complex_morphism_char_p(const SheafSpec& family, const MultiplicationContext& ctx,
                                              Int radius, const FieldSpec& field) {
  const Fan& fan = family.fan();
  const std::size_t n = fan.rank();
  MapCertificate cert;
  auto fail = [&](const std::string& what) {
    if (cert.ok) cert.witness = what;
    cert.ok = false;
  };
  auto is_zero = [&](const std::vector<Int>& v) {
    for (Int x : v)
      if (field.reduce(x) != 0) return false;
    return true;
  };
  for (std::size_t a = 0; a < n; ++a) {
    const SheafSpec spec = family.with_degree(a);
    const SheafModel source(spec, field);
    const SheafModel target(spec.twist() ? spec.untwisted().twisted(spec.twist()->power(ctx.l)) : spec, field);
    for (const auto& m : box_shell(n, -1, radius))
      for (const auto& c : fan.cones()) {
        const IntMatrix src = source.component(c.id, m);
        for (std::size_t r = 0; r < src.rows(); ++r) {
          const Section s{c.id, m, std::vector<Int>(src.row(r).begin(), src.row(r).end())};
          const Section img = phi(ctx, s);
          ++cert.checks;
          if (!is_zero(exterior_derivative(img.weight, img.omega, a, field)))
            fail("d(phi(s)) != 0 in degree " + std::to_string(a) + " at " + describe(s));
        }
      }
    for (const auto& m : box_shell(n, -1, checked_mul(ctx.l, radius)))
      for (const auto& c : fan.cones()) {
        const IntMatrix tgt = target.component(c.id, m);
        for (std::size_t r = 0; r < tgt.rows(); ++r) {
          const Section t{c.id, m, std::vector<Int>(tgt.row(r).begin(), tgt.row(r).end())};
          const Section dt{c.id, m, exterior_derivative(m, t.omega, a, field)};
          ++cert.checks;
          const auto img = psi(ctx, dt);
          if (img && !is_zero(img->omega))
            fail("psi(d(s)) != 0 in degree " + std::to_string(a + 1) + " at " + describe(t));
        }
      }
  }
  return cert;
}

std::vector<Int> frobenius_dim_chain(const SheafSpec& spec, const CartierData& l_bundle, std::size_t i, Int l,
                                     std::size_t r, const FieldSpec& field, const BoxPolicy& policy) {
  std::vector<Int> out;
  Int power = 1;
  for (std::size_t t = 0; t <= r; ++t) {
    const auto table = sheaf_cohomology(spec.twisted(l_bundle.power(power)), field, policy);
    out.push_back(i < table.h.size() ? table.h[i] : 0);
    power = checked_mul(power, l);
  }
  return out;
}

bool chain_is_monotone(const std::vector<Int>& chain) {
  for (std::size_t t = 1; t < chain.size(); ++t)
    if (chain[t] < chain[t - 1]) return false;
  return true;
}

}  // namespace torich
