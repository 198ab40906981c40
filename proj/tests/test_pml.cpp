#include <random>

#include "doctest.h"
#include "pmldd/pml.hpp"

using namespace pmldd;

namespace {

bool same(Complex a, Complex b, double tol = 1e-14) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

}  // namespace

TEST_CASE("stretching functions") {
  const StretchProfile m1{StretchKind::SigmaM1, 0.0, 1.0};
  const StretchProfile m2{StretchKind::SigmaM2, 0.0, 1.0};
  CHECK(sigma_eval(m1, 0.5) == doctest::Approx(2.0));
  CHECK(sigma_eval(m2, 0.0) == doctest::Approx(2.0));
  CHECK(sigma_eval(m2, 0.5) == doctest::Approx(8.0));
  CHECK(sigma_eval(m1, -0.1) == 0.0);
  CHECK(sigma_eval(m2, -1e-9) == 0.0);
  CHECK(sigma_eval(m1, 1.5) == 0.0);
  CHECK_THROWS_AS(sigma_eval(m1, 1.0), Error);

  // Decreasing layer: pole at the lower end.
  const StretchProfile down{StretchKind::SigmaM1, 3.0, 2.0};
  CHECK(sigma_eval(down, 2.5) == doctest::Approx(2.0));
  CHECK(sigma_eval(down, 3.1) == 0.0);
  CHECK(sigma_eval(down, 1.9) == 0.0);

  StretchProfile tuned = m2;
  tuned.m2_constant = 3.0;
  CHECK(sigma_eval(tuned, 0.0) == doctest::Approx(3.0));
}

TEST_CASE("stretching functions increase toward the pole") {
  for (auto kind : {StretchKind::SigmaM1, StretchKind::SigmaM2})
    for (bool up : {true, false}) {
      const StretchProfile p = up ? StretchProfile{kind, 1.0, 2.0} : StretchProfile{kind, 2.0, 1.0};
      double prev = 0.0;
      for (int i = 0; i < 200; ++i) {
        const double d = 1.0 - i / 200.0;  // distance to the pole
        const double t = up ? 2.0 - d : 1.0 + d;
        const double s = sigma_eval(p, t);
        CHECK(s > 0.0);
        CHECK(s >= prev);
        prev = s;
      }
    }
}

TEST_CASE("profile validation") {
  CHECK_THROWS_AS((StretchProfile{StretchKind::SigmaM1, 1.0, 1.0}.validate()), Error);
  CHECK_THROWS_AS((StretchProfile{StretchKind::SigmaM2, 0.0, 1.0, 0.0}.validate()), Error);
  CHECK_NOTHROW((StretchProfile{StretchKind::None, 1.0, 1.0}.validate()));
  StretchField f;
  CHECK_THROWS_AS(f.add(0, StretchProfile{StretchKind::SigmaM2, 2.0, 2.0}), Error);
}

TEST_CASE("stretch factor") {
  CHECK(stretch_factor(0.0, 3.0) == Complex(1.0, 0.0));
  CHECK(same(stretch_factor(2.0, 1.0), Complex(1.0, -2.0)));
  CHECK(same(stretch_factor(4.0, 2.0), Complex(1.0, -2.0)));
}

TEST_CASE("tensors") {
  const PmlTensors id = pml_tensors(StretchState{});
  for (int d = 0; d < 3; ++d) {
    CHECK(id.mass[d] == Complex(1.0));
    CHECK(id.curl[d] == Complex(1.0));
  }

  StretchState st;
  st.s[0] = Complex(1.0, -1.0);
  const PmlTensors t = pml_tensors(st);
  CHECK(same(t.mass[0], Complex(0.5, 0.5)));
  CHECK(same(t.mass[1], Complex(1.0, -1.0)));
  CHECK(same(t.mass[2], Complex(1.0, -1.0)));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int n = 0; n < 10; ++n) {
    StretchState r;
    for (int d = 0; d < 3; ++d) r.s[d] = n % 3 == d ? Complex(1.0) : Complex(1.0, -u(rng));
    const PmlTensors p = pml_tensors(r);
    const auto& s = r.s;
    // Component-wise product rule, evaluated independently.
    const CVec3 expect{s[1] * s[2] / s[0], s[2] * s[0] / s[1], s[0] * s[1] / s[2]};
    for (int d = 0; d < 3; ++d) {
      CHECK(same(p.mass[d], expect[d], 1e-13));
      CHECK(same(p.curl[d] * p.mass[d], Complex(1.0), 1e-13));
    }
  }
}

TEST_CASE("stretch field") {
  StretchField f;
  CHECK(f.empty());
  f.add(0, StretchProfile{StretchKind::SigmaM2, 1.0, 2.0});
  f.add(0, StretchProfile{StretchKind::SigmaM2, 0.0, -1.0});
  f.add(2, StretchProfile{StretchKind::SigmaM1, 1.5, 2.0});
  CHECK_FALSE(f.empty());

  const double w = 2.0;
  const StretchState inside = f.state_at({0.5, 0.5, 0.5}, w);
  for (int d = 0; d < 3; ++d) CHECK(inside.s[d] == Complex(1.0));
  const PmlTensors t = pml_tensors(inside);
  for (int d = 0; d < 3; ++d) CHECK(t.mass[d] == Complex(1.0));

  const StretchState corner = f.state_at({1.5, 0.5, 1.75}, w);
  CHECK(same(corner.s[0], stretch_factor(8.0, w)));
  CHECK(corner.s[1] == Complex(1.0));
  CHECK(same(corner.s[2], stretch_factor(4.0, w)));

  // Layers on the same axis add up.
  StretchField twin;
  twin.add(1, StretchProfile{StretchKind::SigmaM1, 0.0, 1.0});
  twin.add(1, StretchProfile{StretchKind::SigmaM1, 1.0, 0.0});
  CHECK(twin.sigma(1, 0.5) == doctest::Approx(4.0));

  CHECK(f.touches({0.9, 0.0, 0.0}, {1.1, 1.0, 1.0}));
  CHECK_FALSE(f.touches({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}));
  CHECK_FALSE(f.touches({0.2, 0.2, 0.2}, {0.8, 0.8, 1.5}));
  CHECK(f.touches({0.2, 0.2, 0.2}, {0.8, 0.8, 1.6}));
}
