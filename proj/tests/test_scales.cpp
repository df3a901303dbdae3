#include <doctest.h>

#include <cmath>

#include "phasekit/errors.hpp"
#include "phasekit/scales.hpp"

using phasekit::PhaseIndex;
using phasekit::ScaleParam;

TEST_CASE("derived momentum width") {
  for (double a : {0.1, 0.37, 1.0, 2.5, 13.0}) {
    for (double hbar : {1.0, 0.5, 1.054571817e-34}) {
      const ScaleParam s(a, hbar);
      CHECK(s.a() * s.b() == doctest::Approx(hbar / 2).epsilon(1e-15));
      CHECK(s.coord_unit() == a * a);
      CHECK(s.momentum_unit() == s.b() * s.b());
    }
  }
  const auto s = ScaleParam::from_momentum_width(0.25, 1.0);
  CHECK(s.a() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s.b() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("invalid scales") {
  CHECK_THROWS_AS(ScaleParam(0.0), phasekit::InvalidArgument);
  CHECK_THROWS_AS(ScaleParam(-1.0), phasekit::InvalidArgument);
  CHECK_THROWS_AS(ScaleParam(1.0, 0.0), phasekit::InvalidArgument);
  CHECK_THROWS_AS(ScaleParam(std::nan("")), phasekit::InvalidArgument);
  CHECK_THROWS_AS(ScaleParam::from_momentum_width(-0.5), phasekit::InvalidArgument);
}

TEST_CASE("dispersions") {
  auto d = phasekit::dispersions({0, 0.0, 0.0, ScaleParam(1.0, 1.0)});
  CHECK(d.variance_x == 1.0);
  CHECK(d.variance_p == 0.25);

  d = phasekit::dispersions({3, 0.0, 0.0, ScaleParam(0.5, 1.0)});
  CHECK(d.variance_x == doctest::Approx(1.75).epsilon(1e-15));
  CHECK(d.variance_p == doctest::Approx(7.0).epsilon(1e-15));

  for (int n = 0; n <= 20; ++n) {
    for (double a : {0.3, 1.9}) {
      const double hbar = 0.7;
      d = phasekit::dispersions({n, 1.0, -2.0, ScaleParam(a, hbar)});
      const double want = (2.0 * n + 1) * (2.0 * n + 1) * hbar * hbar / 4;
      CHECK(d.variance_x * d.variance_p == doctest::Approx(want).epsilon(1e-14));
    }
  }
}

TEST_CASE("phase index validation") {
  const ScaleParam s(1.0);
  CHECK_NOTHROW(PhaseIndex{4, 1.0, -1.0, s}.validate());
  CHECK_THROWS_AS((PhaseIndex{-1, 0.0, 0.0, s}.validate()), phasekit::InvalidArgument);
  CHECK_THROWS_AS((PhaseIndex{0, INFINITY, 0.0, s}.validate()), phasekit::InvalidArgument);
  CHECK_THROWS_AS((PhaseIndex{0, 0.0, std::nan(""), s}.validate()), phasekit::InvalidArgument);
}
