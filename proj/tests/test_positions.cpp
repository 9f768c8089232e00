#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "symcap/body_ops.hpp"
#include "symcap/errors.hpp"
#include "symcap/positions.hpp"
#include "symcap/structure.hpp"
#include "symcap/volume.hpp"

using namespace symcap;

namespace {

double max_gauge(const Ellipsoid& e, const Matrix& pts) {
  double g = 0.0;
  for (int k = 0; k < pts.cols(); ++k) {
    const Vector y = pts.col(k) - e.center;
    g = std::max(g, y.dot(e.shape * y));
  }
  return g;
}

}  // namespace

TEST_SUITE("loewner") {
  TEST_CASE("cross-polytope gives the unit ball") {
    for (int d = 2; d <= 6; ++d) {
      LoewnerOptions opt;
      opt.eps = 1e-5;
      const Ellipsoid e = loewner_ellipsoid(testing::cross_points(d), opt);
      CHECK((e.shape - Matrix::Identity(d, d)).norm() <= 1e-4);
      CHECK(e.center.norm() <= 1e-4);
      CHECK(max_gauge(e, testing::cross_points(d)) <= 1.0 + 1e-12);
    }
  }

  TEST_CASE("square gives the circumscribed circle") {
    LoewnerOptions opt;
    opt.eps = 1e-6;
    const Ellipsoid e = loewner_ellipsoid(testing::cube_points(2), opt);
    CHECK((e.shape - 0.5 * Matrix::Identity(2, 2)).norm() <= 1e-5);
  }

  TEST_CASE("points on an ellipsoid recover it") {
    const Matrix a = testing::random_pd(3, 17);
    const Vector c = Vector::LinSpaced(3, -1.0, 1.0);
    // An affine image of the cross-polytope has that ellipsoid as Loewner ellipsoid.
    const Matrix pts = (sym_inv_sqrt(a) * testing::cross_points(3)).colwise() + c;
    LoewnerOptions opt;
    opt.eps = 1e-7;
    const Ellipsoid e = loewner_ellipsoid(pts, opt);
    CHECK((e.shape - a).norm() <= 1e-5 * a.norm());
    CHECK((e.center - c).norm() <= 1e-5);
  }

  TEST_CASE("containment and minimality against the bounding ball") {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 10; ++t) {
      const Matrix pts = testing::gaussian(4, 25, rng);
      const Ellipsoid e = loewner_ellipsoid(pts);
      CHECK(max_gauge(e, pts) <= 1.0 + 1e-12);
      const Vector c = pts.rowwise().mean();
      const double r = (pts.colwise() - c).colwise().norm().maxCoeff();
      CHECK(1.0 / std::sqrt(e.shape.determinant()) <= std::pow(r, 4) + 1e-12);
    }
  }

  TEST_CASE("degenerate input") {
    Matrix p(3, 4);
    p << 0, 1, 0, 1,
         0, 0, 1, 1,
         0, 0, 0, 0;
    CHECK_THROWS_AS(loewner_ellipsoid(p), DomainError);
  }
}

TEST_SUITE("m-position") {
  TEST_CASE("ball and ellipsoid proxies") {
    const MProxy b = m_proxy(ConvexBody::ball(4));
    CHECK((b.ellipsoid.shape - Matrix::Identity(4, 4)).norm() < 1e-14);
    CHECK(b.quality.sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(b.source == ProxySource::known_exact);

    const Matrix a = testing::random_pd(4, 2);
    const MProxy e = m_proxy(ConvexBody::ellipsoid(Vector::Ones(4), a));
    CHECK((e.ellipsoid.shape - a).norm() < 1e-14);
    CHECK((e.ellipsoid.center - Vector::Ones(4)).norm() < 1e-14);
    CHECK(e.quality.sum == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("cube proxy is the volume-matched ball") {
    ProxyOptions opt;
    opt.seed = 4;
    const MProxy p = m_proxy(ConvexBody::polytope(testing::cube_points(4), Family::cube), opt);
    const double vol = ball_volume(4) / std::sqrt(p.ellipsoid.shape.determinant());
    CHECK(vol == doctest::Approx(16.0).epsilon(1e-12));
    CHECK((p.ellipsoid.shape - p.ellipsoid.shape(0, 0) * Matrix::Identity(4, 4)).norm() < 1e-14);
    CHECK(p.quality.measured);
    CHECK(p.quality.sum <= 2.5);
    CHECK(p.quality.sum >= 2.0 - 0.02);  // Brunn-Minkowski up to MC error
  }

  TEST_CASE("generic proxy has the body's volume") {
    std::mt19937_64 rng(8);
    const ConvexBody k = ConvexBody::polytope(testing::gaussian(4, 10, rng));
    ProxyOptions opt;
    opt.measure_quality = false;
    const MProxy p = m_proxy(k, opt);
    const double vol = ball_volume(4) / std::sqrt(p.ellipsoid.shape.determinant());
    CHECK(vol == doctest::Approx(volume_exact(k).value).epsilon(1e-12));
    CHECK((p.ellipsoid.center - barycenter(k)).norm() < 1e-10);
  }

  TEST_CASE("position maps") {
    CHECK((m_position_map(ConvexBody::ball(4)) - Matrix::Identity(4, 4)).norm() < 1e-14);
    Matrix m(2, 2);
    m << 2, 0, 0, 0.5;
    const Matrix t = m_position_map(linear_image(ConvexBody::ball(2), m));
    Matrix expect(2, 2);
    expect << 0.5, 0, 0, 2;
    CHECK((t - expect).norm() < 1e-13);
    ProxyOptions opt;
    opt.measure_quality = false;
    const Matrix tc = m_position_map(ConvexBody::polytope(testing::cube_points(4), Family::cube), opt);
    CHECK((tc - Matrix::Identity(4, 4)).norm() < 1e-13);
  }

  TEST_CASE("position map is volume preserving and normalizes the proxy") {
    std::mt19937_64 rng(9);
    ProxyOptions opt;
    opt.measure_quality = false;
    for (int t = 0; t < 5; ++t) {
      const ConvexBody k = ConvexBody::polytope(testing::gaussian(4, 9, rng));
      const MProxy p = m_proxy(k, opt);
      const Matrix tm = m_position_map(p);
      CHECK(std::abs(tm.determinant()) == doctest::Approx(1.0).epsilon(1e-12));
      // T maps the proxy to a ball: T^{-T} A T^{-1} is a multiple of I.
      const Matrix ti = tm.inverse();
      const Matrix img = ti.transpose() * p.ellipsoid.shape * ti;
      CHECK((img - img(0, 0) * Matrix::Identity(4, 4)).norm() <= 1e-10 * img.norm());
    }
  }

  TEST_CASE("proxy is equivariant under orthogonal maps") {
    std::mt19937_64 rng(10);
    const ConvexBody k = ConvexBody::polytope(testing::gaussian(4, 9, rng));
    const Matrix q = rotation(2, 0.4);
    ProxyOptions opt;
    opt.measure_quality = false;
    opt.eps = 1e-7;
    const MProxy a = m_proxy(k, opt);
    const MProxy b = m_proxy(linear_image(k, q), opt);
    const Matrix expect = q * a.ellipsoid.shape * q.transpose();
    CHECK((b.ellipsoid.shape - expect).norm() <= 1e-4 * expect.norm());
  }

  TEST_CASE("reverse Brunn-Minkowski checks") {
    CHECK(verify_rbm(ConvexBody::ball(4), ConvexBody::ball(4)) == doctest::Approx(1.0).epsilon(1e-14));
    const ConvexBody cube = ConvexBody::polytope(testing::cube_points(4), Family::cube);
    const ConvexBody cross = scale(ConvexBody::polytope(testing::cross_points(4), Family::cross_polytope),
                                   std::pow(16.0 / (16.0 / 24.0), 0.25));
    const double r = verify_rbm(cube, cross, {200'000, 1});
    CHECK(r >= 1.0 - 1e-9);
    CHECK(r <= 2.0);

    const MProxy bp = m_proxy(ConvexBody::ball(4));
    const auto [a0, b0] = verify_with_p(std::nullopt, ConvexBody::ball(4), bp);
    CHECK(a0 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b0 == doctest::Approx(1.0).epsilon(1e-14));
    const auto [a1, b1] = verify_with_p(ConvexBody::ball(4), ConvexBody::ball(4), bp);
    CHECK(a1 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b1 == doctest::Approx(1.0).epsilon(1e-14));

    ProxyOptions opt;
    opt.measure_quality = false;
    const MProxy cp = m_proxy(cross, opt);
    const auto [a2, b2] = verify_with_p(cube, cross, cp, {200'000, 2});
    CHECK(a2 <= 2.0);
    CHECK(b2 <= 2.0);
    CHECK(a2 * b2 == doctest::Approx(1.0).epsilon(1e-12));
  }
}
