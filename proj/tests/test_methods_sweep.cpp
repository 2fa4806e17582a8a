#include "doctest.h"

#include <array>
#include <cmath>
#include <stdexcept>

#include "lde/methods.hpp"
#include "lde/sweep.hpp"
#include "test_support.hpp"

using namespace lde;
using lde::testing::Rng;

namespace {

CVector map(std::initializer_list<Complex> v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const auto& x : v) out[i++] = x;
  return out;
}

// Roots near (1, 2, 3); only f_1 is modulated.
RecurrenceSpec cubic(double eps, long horizon) {
  return lde::testing::sinusoidal_spec(map({-6.0, 11.0, -6.0}), map({0.0, -0.1, 0.0}), eps, horizon);
}

const std::array<Complex, 3> kInitial{1.0, 0.5, 0.25};

double terminal(const RecurrenceSpec& spec, std::span<const Complex> initial, Method m) {
  return compare_methods(spec, initial, std::array{m}).results.front().terminal_error();
}

}  // namespace

TEST_CASE("method names") {
  for (Method m : all_methods()) CHECK(parse_method(to_string(m)) == m);
  CHECK(parse_method("wkb-general") == Method::WkbGeneral);
  CHECK_FALSE(parse_method("wkb").has_value());
  CHECK(all_methods().size() == 7);
  CHECK(third_order_only(Method::Riccati));
  CHECK_FALSE(third_order_only(Method::WkbGeneral));
  CHECK(requires_homogeneous(Method::WkbGeneral));
  CHECK_FALSE(requires_homogeneous(Method::GaugeExact));
}

TEST_CASE("exact methods agree with the oracle") {
  auto spec = cubic(0.01, 200);
  spec.forcing = CoefficientModel(SinusoidalInEpsK{0.5, 0.2, 2.0, 0.3, 0.01});
  const std::array methods{Method::Companion, Method::GaugeExact, Method::Explicit3};
  const auto table = compare_methods(spec, kInitial, methods);
  REQUIRE(table.results.size() == 3);
  CHECK(table.oracle.values.size() == static_cast<std::size_t>(spec.trajectory_length()));
  for (const auto& r : table.results) {
    CHECK(r.rel_error.size() == table.oracle.values.size());
    CHECK(r.max_error() <= 1e-10);
  }
  CHECK(table.results[0].method == Method::Companion);
}

TEST_CASE("property: exact methods on random problems") {
  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(2, 5);
    CVector b(n);
    for (int i = 0; i < n; ++i) b[i] = rng.in_disk(0.05);
    const auto roots = rng.complex_vector(static_cast<std::size_t>(n), 2.0);
    if (min_separation(Eigen::Map<const CVector>(roots.data(), n)) < 0.5) continue;
    auto spec = lde::testing::sinusoidal_spec(lde::testing::poly_from_roots(roots), b, 0.01, 100);
    spec.forcing = CoefficientModel(Constant{rng.in_disk(1.0)});
    const auto initial = rng.complex_vector(static_cast<std::size_t>(n), 1.0);
    const auto table = compare_methods(spec, initial, std::array{Method::Companion, Method::GaugeExact});
    for (const auto& r : table.results) CHECK(r.max_error() <= 1e-9);
  }
}

TEST_CASE("WKB methods at constant coefficients are exact") {
  const auto spec = cubic(0.0, 200);
  const auto table = compare_methods(spec, kInitial, std::array{Method::Wkb3, Method::WkbGeneral});
  for (const auto& r : table.results) CHECK(r.max_error() <= 1e-10);
}

TEST_CASE("WKB terminal error decreases with epsilon") {
  for (Method m : {Method::Wkb3, Method::WkbGeneral}) {
    std::vector<double> errors;
    for (double eps : {0.02, 0.01, 0.005}) errors.push_back(terminal(cubic(eps, 200), kInitial, m));
    MESSAGE(to_string(m) << " terminal errors " << errors[0] << ", " << errors[1] << ", " << errors[2]);
    CHECK(errors[1] < errors[0]);
    CHECK(errors[2] < errors[1]);
  }
  SUBCASE("N = 4 over 400 steps") {
    const auto a = lde::testing::poly_from_roots({1.0, 2.0, 3.0, 4.0});
    const std::array<Complex, 4> initial{1.0, 0.5, 0.25, -0.5};
    const double coarse = terminal(lde::testing::sinusoidal_spec(a, map({0.0, -0.1, 0.0, 0.0}), 0.005, 400), initial, Method::WkbGeneral);
    const double fine = terminal(lde::testing::sinusoidal_spec(a, map({0.0, -0.1, 0.0, 0.0}), 0.0025, 400), initial, Method::WkbGeneral);
    MESSAGE("N = 4 terminal errors " << coarse << ", " << fine);
    CHECK(fine < coarse);
  }
}

TEST_CASE("Riccati method") {
  // Roots near the cube roots of unity keep the three solution ratios distinct.
  const auto spec = lde::testing::sinusoidal_spec(map({-1.0, 0.0, 0.0}), map({0.1, -0.1, 0.05}), 0.01, 100);
  const auto table = compare_methods(spec, kInitial, std::array{Method::Riccati});
  CHECK(table.results.front().max_error() <= 1e-8);

  try {
    run_method(cubic(0.01, 200), kInitial, Method::Riccati);
    FAIL("expected the ratio branches to merge");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateRoots);
    REQUIRE(e.step().has_value());
    CHECK(*e.step() > 10);
  }
}

TEST_CASE("method errors") {
  SUBCASE("order mismatch") {
    const auto spec = lde::testing::constant_spec(map({-1.0, -1.0}), 10);
    try {
      run_method(spec, std::array<Complex, 2>{0.0, 1.0}, Method::Wkb3);
      FAIL("expected InvalidSpec");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::InvalidSpec);
      CHECK(std::string(e.what()).find("wkb3") != std::string::npos);
    }
  }
  SUBCASE("forcing with a homogeneous-only method") {
    const auto spec = lde::testing::constant_spec(map({-6.0, 11.0, -6.0}), 10, 1.0);
    CHECK_THROWS_AS(run_method(spec, kInitial, Method::WkbGeneral), Error);
    CHECK_NOTHROW(run_method(spec, kInitial, Method::GaugeExact));
  }
  SUBCASE("root collision carries the step index") {
    // rho^2 - 2 rho + (0.75 + 0.25 eps k): double root at eps k = 1
    RecurrenceSpec spec;
    spec.order = 2;
    spec.coeffs = {CoefficientModel(PolynomialInEpsK{{0.75, 0.25}, 0.01}), CoefficientModel(Constant{-2.0})};
    spec.horizon = 200;
    for (Method m : {Method::GaugeExact, Method::WkbGeneral}) {
      try {
        run_method(spec, std::array<Complex, 2>{1.0, 1.0}, m);
        FAIL("expected a numerical error");
      } catch (const Error& e) {
        CHECK(e.numerical());
        REQUIRE(e.step().has_value());
        CHECK(*e.step() >= 90);
        CHECK(*e.step() <= 102);
        CHECK(std::string(e.what()).find(std::string(to_string(m))) != std::string::npos);
      }
    }
  }
}

TEST_CASE("compare_methods is deterministic") {
  const auto spec = cubic(0.01, 150);
  const std::array methods{Method::Wkb3, Method::WkbGeneral, Method::GaugeExact};
  const auto a = compare_methods(spec, kInitial, methods);
  const auto b = compare_methods(spec, kInitial, methods);
  for (std::size_t i = 0; i < methods.size(); ++i) {
    CHECK(a.results[i].values.values == b.results[i].values.values);
    CHECK(a.results[i].rel_error == b.results[i].rel_error);
  }
}

TEST_CASE("parallel sweep equals the serial reference") {
  const auto spec = cubic(0.01, 120);
  const std::array methods{Method::Wkb3, Method::WkbGeneral};
  const std::vector<double> eps{0.0, 0.02, 0.015, 0.01, 0.0075, 0.005, 0.0025};
  const auto serial = sweep_serial(spec, kInitial, methods, eps);
  const auto parallel = sweep_parallel(spec, kInitial, methods, eps);
  REQUIRE(parallel.points.size() == eps.size());
  CHECK(parallel.methods == serial.methods);
  for (std::size_t i = 0; i < eps.size(); ++i) {
    CHECK(parallel.points[i].epsilon == eps[i]);
    CHECK(parallel.points[i].terminal_error == serial.points[i].terminal_error);
    CHECK(parallel.points[i].max_error == serial.points[i].max_error);
  }
  CHECK(serial.points[0].max_error[0] <= 1e-10);
  CHECK(parallel_threads() >= 1);
}

TEST_CASE("map_parallel") {
  const auto task = [](std::size_t i) { return std::sqrt(static_cast<double>(i)) * 1.5; };
  CHECK(map_parallel(257, task) == map_serial(257, task));
  CHECK(map_parallel(0, task).empty());
  const auto failing = [](std::size_t i) -> double {
    if (i == 5 || i == 9) throw std::runtime_error("task " + std::to_string(i));
    return 0.0;
  };
  try {
    map_parallel(20, failing);
    FAIL("expected rethrow");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "task 5");
  }
}

TEST_CASE("sweep errors propagate") {
  const auto spec = cubic(0.01, 200);
  CHECK_THROWS_AS(sweep_parallel(spec, kInitial, std::array{Method::Riccati}, std::vector<double>{0.01}), Error);
}
