#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "reachlp/dual.hpp"
#include "reachlp/errors.hpp"
#include "reachlp/interval.hpp"
#include "reachlp/systems.hpp"

using reachlp::Dual;
using reachlp::DualInterval;
using reachlp::Interval;
using reachlp::IntervalVector;
using reachlp::Mat;
using reachlp::Vec;

namespace {

double sample_in(const Interval& a, oracle::Rng& rng) {
  const double t = rng.unit();
  const double x = a.lo + t * (a.hi - a.lo);
  return std::min(std::max(x, a.lo), a.hi);
}

bool holds(const Interval& r, double v) {
  const double slack = 1e-12 * std::max(1.0, std::fabs(v));
  return r.lo - slack <= v && v <= r.hi + slack;
}

}  // namespace

TEST_CASE("interval constructor rejects crossed bounds") {
  CHECK_THROWS_AS(Interval(2.0, 1.0), reachlp::DomainError);
  CHECK_NOTHROW(Interval(1.0, 1.0));
}

TEST_CASE("pinned arithmetic identities") {
  const Interval a(0.0, 1.0), b(2.0, 3.0);
  const Interval s = a + b;
  CHECK(s.lo == 2.0);
  CHECK(s.hi == 4.0);

  const Interval m = Interval(-1.0, 2.0) * Interval(-1.0, 2.0);
  CHECK(m.lo == -2.0);  // products forget that both factors are the same set
  CHECK(m.hi == 4.0);

  const Interval sq = reachlp::sqr(Interval(-1.0, 2.0));
  CHECK(sq.lo == 0.0);
  CHECK(sq.hi == 4.0);

  const Interval q = Interval(1.0, 2.0) / Interval(1.0, 2.0);
  CHECK(q.lo == 0.5);
  CHECK(q.hi == 2.0);

  const Interval d = a - b;
  CHECK(d.lo == -3.0);
  CHECK(d.hi == -1.0);

  const Interval n = -Interval(-1.0, 2.0);
  CHECK(n.lo == -2.0);
  CHECK(n.hi == 1.0);

  const Interval c = reachlp::cube(Interval(-2.0, 0.5));
  CHECK(c.lo == -8.0);
  CHECK(c.hi == 0.125);
}

TEST_CASE("division by a zero-straddling interval throws") {
  CHECK_THROWS_AS(Interval(1.0, 2.0) / Interval(-1.0, 1.0),
                  reachlp::DivisionByZeroInterval);
  CHECK_THROWS_AS(Interval(1.0, 2.0) / Interval(0.0, 1.0),
                  reachlp::DivisionByZeroInterval);
  CHECK_NOTHROW(Interval(1.0, 2.0) / Interval(-2.0, -1.0));
}

TEST_CASE("trig ranges clamp at interior extrema") {
  const double pi = std::numbers::pi;

  const Interval s = sin(Interval(0.0, pi / 2.0));
  CHECK(s.lo == 0.0);
  CHECK(s.hi == 1.0);  // the quarter-wave peak is inside, so exactly one

  const Interval c = cos(Interval(0.0, pi));
  CHECK(c.lo == -1.0);
  CHECK(c.hi == 1.0);

  const Interval a = atan(Interval(-1.0, 1.0));
  CHECK(a.lo == doctest::Approx(-pi / 4.0).epsilon(1e-15));
  CHECK(a.hi == doctest::Approx(pi / 4.0).epsilon(1e-15));
  CHECK(a.lo == -a.hi);

  const Interval t = tan(Interval(0.0, 1.0));
  CHECK(t.lo == 0.0);
  CHECK(t.hi == doctest::Approx(std::tan(1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(tan(Interval(1.0, 2.0)), reachlp::DomainError);

  // A full period reaches both extremes regardless of phase shift.
  const Interval full = sin(Interval(100.0, 100.0 + 2.0 * pi));
  CHECK(full.lo == -1.0);
  CHECK(full.hi == 1.0);
}

TEST_CASE("mat_vec picks endpoints by coefficient sign") {
  Mat m(1, 2);
  m(0, 0) = 1.0;
  m(0, 1) = -1.0;
  const IntervalVector v = {Interval(0.0, 1.0), Interval(0.0, 1.0)};
  const IntervalVector out = reachlp::mat_vec(m, v);
  REQUIRE(out.size() == 1);
  CHECK(out[0].lo == -1.0);
  CHECK(out[0].hi == 1.0);
}

TEST_CASE("width, midpoint, contains, make_box") {
  const Interval a(1.0, 3.0);
  CHECK(reachlp::width(a) == 2.0);
  CHECK(reachlp::midpoint(a) == 2.0);
  CHECK(reachlp::contains(a, 1.0));
  CHECK(reachlp::contains(a, 3.0));
  CHECK_FALSE(reachlp::contains(a, 0.999));
  CHECK(reachlp::contains(a, Interval(1.5, 2.0)));
  CHECK_FALSE(reachlp::contains(a, Interval(0.5, 2.0)));
  const IntervalVector box = reachlp::make_box({0.0, -1.0}, {1.0, 1.0});
  REQUIRE(box.size() == 2);
  CHECK(box[1].lo == -1.0);
  CHECK_THROWS_AS(reachlp::make_box({0.0}, {1.0, 2.0}),
                  reachlp::DimensionMismatch);
}

TEST_CASE("sampled points never escape computed ranges") {
  oracle::Rng rng(2718);
  for (int it = 0; it < 100000; ++it) {
    const double a1 = 4.0 * rng.symmetric();
    const double a2 = 4.0 * rng.symmetric();
    const Interval a(std::min(a1, a2), std::max(a1, a2));
    const double b1 = 4.0 * rng.symmetric();
    const double b2 = 4.0 * rng.symmetric();
    const Interval b(std::min(b1, b2), std::max(b1, b2));
    const double x = sample_in(a, rng);
    const double y = sample_in(b, rng);

    CHECK(holds(a + b, x + y));
    CHECK(holds(a - b, x - y));
    CHECK(holds(a * b, x * y));
    CHECK(holds(reachlp::sqr(a), x * x));
    CHECK(holds(reachlp::cube(a), x * x * x));
    CHECK(holds(sin(a), std::sin(x)));
    CHECK(holds(cos(a), std::cos(x)));
    CHECK(holds(atan(a), std::atan(x)));

    const Interval pos(0.1 + b.hi - b.lo, 0.1 + 2.0 * (b.hi - b.lo) + 1.0);
    const double z = sample_in(pos, rng);
    CHECK(holds(a / pos, x / z));
  }
}

TEST_CASE("tighter inputs give tighter outputs") {
  oracle::Rng rng(99);
  for (int it = 0; it < 10000; ++it) {
    const double c = 3.0 * rng.symmetric();
    const double r_out = 0.01 + 2.0 * rng.unit();
    const double r_in = r_out * rng.unit();
    const double off = (r_out - r_in) * rng.symmetric();
    const Interval outer(c - r_out, c + r_out);
    const Interval inner(c + off - r_in, c + off + r_in);
    const double slack = 1e-12;

    auto nested = [&](const Interval& big, const Interval& small) {
      CHECK(big.lo <= small.lo + slack);
      CHECK(small.hi <= big.hi + slack);
    };
    nested(sin(outer), sin(inner));
    nested(cos(outer), cos(inner));
    nested(atan(outer), atan(inner));
    nested(reachlp::sqr(outer), reachlp::sqr(inner));
    nested(reachlp::cube(outer), reachlp::cube(inner));
    nested(outer * outer, inner * inner);
    nested(outer + outer, inner + inner);
  }
}

TEST_CASE("degenerate intervals behave like points") {
  oracle::Rng rng(17);
  for (int it = 0; it < 10000; ++it) {
    const double x = 3.0 * rng.symmetric();
    const double y = 3.0 * rng.symmetric();
    const Interval a(x), b(y);
    auto close = [](const Interval& r, double v) {
      const double tol = 1e-12 * std::max(1.0, std::fabs(v));
      CHECK(r.hi - r.lo <= tol);
      CHECK(std::fabs(reachlp::midpoint(r) - v) <= tol);
    };
    close(a + b, x + y);
    close(a * b, x * y);
    close(sin(a), std::sin(x));
    close(reachlp::cube(a), x * x * x);
    if (std::fabs(y) > 0.1) close(a / b, x / y);
  }
}

TEST_CASE("dual intervals follow the double branch structure bitwise") {
  oracle::Rng rng(805);
  for (int it = 0; it < 2000; ++it) {
    const double a1 = 3.0 * rng.symmetric();
    const double a2 = 3.0 * rng.symmetric();
    const Interval a(std::min(a1, a2), std::max(a1, a2));
    const double b1 = 3.0 * rng.symmetric();
    const double b2 = 3.0 * rng.symmetric();
    const Interval b(std::min(b1, b2), std::max(b1, b2));

    const DualInterval ad(Dual::seeded(a.lo, 4, 0), Dual::seeded(a.hi, 4, 1));
    const DualInterval bd(Dual::seeded(b.lo, 4, 2), Dual::seeded(b.hi, 4, 3));

    auto same = [](const Interval& p, const DualInterval& d) {
      CHECK(d.lo.value() == p.lo);
      CHECK(d.hi.value() == p.hi);
    };
    same(a + b, ad + bd);
    same(a - b, ad - bd);
    same(a * b, ad * bd);
    same(reachlp::sqr(a), reachlp::sqr(ad));
    same(reachlp::cube(a), reachlp::cube(ad));
    same(sin(a), sin(ad));
    same(cos(a), cos(ad));
    same(atan(a), atan(ad));
  }
}

TEST_CASE("interior square minimum carries a zero tangent") {
  const DualInterval a(Dual::seeded(-1.0, 2, 0), Dual::seeded(2.0, 2, 1));
  const DualInterval s = reachlp::sqr(a);
  CHECK(s.lo.value() == 0.0);
  CHECK(s.lo.deriv(0) == 0.0);
  CHECK(s.lo.deriv(1) == 0.0);
  CHECK(s.hi.value() == 4.0);  // upper branch follows the winning endpoint
  CHECK(s.hi.deriv(0) == 0.0);
  CHECK(s.hi.deriv(1) == 4.0);

  const DualInterval b(Dual::seeded(-3.0, 2, 0), Dual::seeded(2.0, 2, 1));
  const DualInterval sb = reachlp::sqr(b);
  CHECK(sb.hi.value() == 9.0);
  CHECK(sb.hi.deriv(0) == -6.0);  // now the lower endpoint wins the max
  CHECK(sb.hi.deriv(1) == 0.0);
}

TEST_CASE("dual interval constructor checks primal order only") {
  CHECK_THROWS_AS(DualInterval(Dual(2.0), Dual(1.0)), reachlp::DomainError);
  CHECK_NOTHROW(DualInterval(Dual(1.0, {5.0}), Dual(1.0, {-5.0})));
}

TEST_CASE("van der Pol inclusion at a point reproduces the field") {
  const reachlp::VectorField f = reachlp::vanderpol_field(1.0);
  CHECK(f.state_dim == 2);
  CHECK(f.input_dim == 0);
  const IntervalVector x = {Interval(1.0), Interval(0.0)};
  const IntervalVector out = reachlp::inclusion(f, x, {}, {});
  REQUIRE(out.size() == 2);
  const double expected = 1.0 - 1.0 / 3.0;
  CHECK(out[0].lo == expected);
  CHECK(out[0].hi == expected);
  CHECK(out[0].lo == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(out[1].lo == 1.0);
  CHECK(out[1].hi == 1.0);
}

TEST_CASE("field inclusions contain sampled trajectories of points") {
  oracle::Rng rng(31337);

  const reachlp::VectorField vdp = reachlp::vanderpol_field(1.0);
  const IntervalVector xbox = {Interval(0.9, 1.1), Interval(-0.1, 0.1)};
  const IntervalVector vout = reachlp::inclusion(vdp, xbox, {}, {});
  for (int it = 0; it < 1000; ++it) {
    Vec x = {sample_in(xbox[0], rng), sample_in(xbox[1], rng)};
    Vec out(2);
    vdp.point(x, {}, {}, out);
    CHECK(holds(vout[0], out[0]));
    CHECK(holds(vout[1], out[1]));
  }

  const reachlp::VectorField bike = reachlp::bicycle_field();
  const IntervalVector bbox = {Interval(7.9, 8.1), Interval(6.9, 7.1),
                               Interval(-0.7, -0.6), Interval(1.9, 2.1)};
  const Vec u = {1.5, -0.5};
  const IntervalVector wbox = {Interval(-1e-3, 1e-3), Interval(-1e-3, 1e-3),
                               Interval(-1e-3, 1e-3), Interval(-1e-3, 1e-3)};
  const IntervalVector bout = reachlp::inclusion(bike, bbox, u, wbox);
  REQUIRE(bout.size() == 4);
  for (int it = 0; it < 1000; ++it) {
    Vec x(4), w(4), out(4);
    for (int j = 0; j < 4; ++j) {
      x[j] = sample_in(bbox[j], rng);
      w[j] = sample_in(wbox[j], rng);
    }
    bike.point(x, u, w, out);
    for (int j = 0; j < 4; ++j) CHECK(holds(bout[j], out[j]));
  }
}
