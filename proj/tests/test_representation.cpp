#include <doctest.h>

#include <cmath>

#include "oracle_helpers.hpp"
#include "tvopt/representation.hpp"
#include "tvopt/tvp.hpp"

using namespace tvopt;

namespace {

AlphabetPtr box_alphabet(int dim, int lo, int hi) {
  return std::make_shared<AdmissibleSet>(AdmissibleSet::box(dim, lo, hi));
}

/// Independently enumerates the alphabet for points strictly between a and b
/// on the segment, with exact integer cross-multiplication.
std::vector<double> segment_interior_oracle(const std::vector<int>& a, const std::vector<int>& b,
                                            const AdmissibleSet& V) {
  std::vector<double> lambdas;
  for (const auto& point : V.values()) {
    if (point == a || point == b) continue;
    // find any coordinate with a difference to define lambda
    int pivot = -1;
    for (int k = 0; k < V.dim(); ++k) {
      if (a[k] != b[k]) {
        pivot = k;
        break;
      }
    }
    REQUIRE(pivot >= 0);
    bool on_segment = true;
    for (int k = 0; k < V.dim(); ++k) {
      if (static_cast<long long>(point[k] - a[k]) * (b[pivot] - a[pivot]) !=
          static_cast<long long>(point[pivot] - a[pivot]) * (b[k] - a[k])) {
        on_segment = false;
        break;
      }
    }
    if (!on_segment) continue;
    const double lambda =
        static_cast<double>(point[pivot] - a[pivot]) / (b[pivot] - a[pivot]);
    if (lambda > 0.0 && lambda < 1.0) lambdas.push_back(lambda);
  }
  std::sort(lambdas.begin(), lambdas.end());
  return lambdas;
}

}  // namespace

TEST_CASE("extract_minimal merges runs") {
  const auto V = box_alphabet(2, 0, 2);
  SUBCASE("constant grid") {
    const ControlGrid u(V, 4.0, std::vector<int>(4, 5));
    const MinimalRepresentation m = extract_minimal(u);
    CHECK(m.count() == 1);
    CHECK(m.times().empty());
  }
  SUBCASE("one merged switch") {
    const int zero = *V->find(std::vector<int>{0, 0});
    const int two = *V->find(std::vector<int>{2, 2});
    const ControlGrid u(V, 4.0, {zero, zero, two, two});
    const MinimalRepresentation m = extract_minimal(u);
    CHECK(m.count() == 2);
    REQUIRE(m.times().size() == 1);
    CHECK(m.times()[0] == doctest::Approx(2.0));
    CHECK(m.levels()[0] == std::vector<int>{0, 0});
    CHECK(m.levels()[1] == std::vector<int>{2, 2});
  }
}

TEST_CASE("round trips between grids and representations") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto V = testing::random_alphabet(rng, 1 + static_cast<int>(rng.bounded(3)), 4);
    const int n = 2 + static_cast<int>(rng.bounded(14));
    const ControlGrid u = testing::random_grid(rng, V, n, 3.0);
    const MinimalRepresentation m = extract_minimal(u);
    const ControlGrid back = render_grid(m, u.alphabet_ptr(), n);
    CHECK(back == u);
    CHECK(extract_minimal(back) == m);
  }
}

TEST_CASE("render refuses misaligned switch times") {
  const auto V = box_alphabet(1, 0, 1);
  const MinimalRepresentation m(4.0, {{0}, {1}}, {1.5});
  CHECK_THROWS_AS(render_grid(m, V, 4), std::invalid_argument);
  CHECK_NOTHROW(render_grid(m, V, 8));
}

TEST_CASE("render refuses foreign levels") {
  const auto V = box_alphabet(1, 0, 1);
  const MinimalRepresentation m(4.0, {{0}, {7}}, {2.0});
  CHECK_THROWS_AS(render_grid(m, V, 4), std::invalid_argument);
}

TEST_CASE("minimal representation validates its invariants") {
  CHECK_THROWS_AS(MinimalRepresentation(4.0, {{0}, {0}}, {2.0}), std::invalid_argument);
  CHECK_THROWS_AS(MinimalRepresentation(4.0, {{0}, {1}, {0}}, {3.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MinimalRepresentation(4.0, {{0}, {1}}, {5.0}), std::invalid_argument);
  CHECK_THROWS_AS(MinimalRepresentation(4.0, {{0}, {1}}, {0.0}), std::invalid_argument);
}

TEST_CASE("lambda_set on hand examples") {
  SUBCASE("midpoint on the diagonal") {
    const auto V = box_alphabet(2, 0, 2);
    const auto lams = lambda_set(std::vector<int>{0, 0}, std::vector<int>{2, 2}, *V);
    REQUIRE(lams.size() == 1);
    CHECK(lams[0].num == 1);
    CHECK(lams[0].den == 2);
  }
  SUBCASE("no interior lattice point") {
    const auto V = box_alphabet(2, 0, 1);
    CHECK(lambda_set(std::vector<int>{0, 0}, std::vector<int>{1, 0}, *V).empty());
    CHECK(lambda_set(std::vector<int>{0, 0}, std::vector<int>{1, 1}, *V).empty());
  }
  SUBCASE("thirds") {
    const auto V = box_alphabet(2, 0, 3);
    const auto lams = lambda_set(std::vector<int>{0, 0}, std::vector<int>{3, 3}, *V);
    REQUIRE(lams.size() == 2);
    CHECK(lams[0].value() == doctest::Approx(1.0 / 3.0));
    CHECK(lams[1].value() == doctest::Approx(2.0 / 3.0));
  }
  SUBCASE("coinciding endpoints are rejected") {
    const auto V = box_alphabet(2, 0, 2);
    CHECK_THROWS_AS(lambda_set(std::vector<int>{1, 1}, std::vector<int>{1, 1}, *V),
                    std::invalid_argument);
  }
}

TEST_CASE("lambda_set is complete against enumeration") {
  SplitMix64 rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto V = testing::random_alphabet(rng, 2, 6);
    const int i = static_cast<int>(rng.bounded(V->size()));
    int j = static_cast<int>(rng.bounded(V->size() - 1));
    if (j >= i) ++j;
    const auto got = lambda_set(V->value(i), V->value(j), *V);
    const auto expected = segment_interior_oracle(V->value(i), V->value(j), *V);
    REQUIRE(got.size() == expected.size());
    for (size_t k = 0; k < got.size(); ++k) {
      CHECK(got[k].value() == doctest::Approx(expected[k]).epsilon(1e-15));
    }
  }
}

TEST_CASE("extract_full duplicates times for segment-interior points") {
  const auto V = box_alphabet(2, 0, 2);
  const MinimalRepresentation m(4.0, {{0, 0}, {2, 2}}, {2.0});
  const FullRepresentation f = extract_full(m, *V);
  REQUIRE(f.count() == 3);
  CHECK(f.levels()[0] == std::vector<int>{0, 0});
  CHECK(f.levels()[1] == std::vector<int>{1, 1});
  CHECK(f.levels()[2] == std::vector<int>{2, 2});
  REQUIRE(f.times().size() == 2);
  CHECK(f.times()[0] == doctest::Approx(2.0));
  CHECK(f.times()[1] == doctest::Approx(2.0));
  REQUIRE(f.weights()[1].has_value());
  CHECK(f.weights()[1]->num == 1);
  CHECK(f.weights()[1]->den == 2);
  CHECK_NOTHROW(validate_full_representation(f, *V));
}

TEST_CASE("extract_full is the identity without segment points") {
  const auto V = box_alphabet(2, 0, 1);
  const MinimalRepresentation m(4.0, {{0, 0}, {1, 1}}, {2.0});
  const FullRepresentation f = extract_full(m, *V);
  CHECK(f.count() == 2);
  CHECK(f.times() == m.times());
  CHECK(f.levels() == m.levels());
}

TEST_CASE("full representation preserves the variation and is idempotent") {
  SplitMix64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto V = testing::random_alphabet(rng, 2, 5);
    const int n = 3 + static_cast<int>(rng.bounded(10));
    const ControlGrid u = testing::random_grid(rng, V, n, 2.0);
    const MinimalRepresentation m = extract_minimal(u);
    const FullRepresentation f = extract_full(m, *V);
    CHECK_NOTHROW(validate_full_representation(f, *V));
    for (const PNorm& p : {PNorm::finite(1), PNorm::finite(2), PNorm::inf()}) {
      CHECK(tvp(f, p) == doctest::Approx(tvp(m, p)).epsilon(1e-13));
    }
    const FullRepresentation again = extract_full(f, *V);
    CHECK(again.levels() == f.levels());
    CHECK(again.times() == f.times());
  }
}
