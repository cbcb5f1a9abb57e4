#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "modsum/gf.hpp"

using namespace modsum;

namespace {

// Independent determinant for the census tests: Leibniz expansion over all
// permutations, no elimination involved.
std::uint32_t leibniz_det(const gf::FieldMatrix& m) {
  const std::uint32_t q = m.modulus();
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::int64_t det = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    std::int64_t term = (inversions % 2 == 0) ? 1 : -1;
    for (std::size_t i = 0; i < n; ++i) {
      term = term * static_cast<std::int64_t>(m.at(i, perm[i])) % q;
    }
    det = (det + term) % q;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<std::uint32_t>((det % q + q) % q);
}

// A square matrix over F_q is invertible iff x -> Mx hits every vector.
bool is_bijection(const gf::FieldMatrix& m) {
  const std::uint32_t q = m.modulus();
  const std::size_t n = m.rows();
  const std::size_t total = static_cast<std::size_t>(gf::pow_u64(q, static_cast<std::uint32_t>(n)));
  std::vector<bool> hit(total, false);
  for (std::size_t v = 0; v < total; ++v) {
    gf::FieldVector x(n, q);
    std::size_t rest = v;
    for (std::size_t i = 0; i < n; ++i) {
      x.set(i, static_cast<std::uint32_t>(rest % q));
      rest /= q;
    }
    const gf::FieldVector y = m * x;
    std::size_t idx = 0;
    for (std::size_t i = n; i-- > 0;) idx = idx * q + y[i];
    if (hit[idx]) return false;
    hit[idx] = true;
  }
  return true;
}

gf::FieldVector vector_of(std::size_t dim, std::uint32_t q, std::uint64_t index) {
  gf::FieldVector v(dim, q);
  for (std::size_t i = 0; i < dim; ++i) {
    v.set(i, static_cast<std::uint32_t>(index % q));
    index /= q;
  }
  return v;
}

}  // namespace

TEST_CASE("field element arithmetic over F_7") {
  const gf::FieldElement a(3, 7), b(5, 7);
  CHECK((a + b).value() == 1);
  CHECK((a * b).value() == 1);
  CHECK((a - b).value() == 5);
  CHECK((-a).value() == 4);
  CHECK(a.inverse().value() == 5);
  CHECK_THROWS_AS(gf::FieldElement(0, 7).inverse(), std::domain_error);
}

TEST_CASE("field element contract checks") {
  CHECK_THROWS_AS(gf::FieldElement(1, 6), std::invalid_argument);  // not prime
  const gf::FieldElement a(1, 5), b(1, 7);
  CHECK_THROWS_AS(a + b, std::invalid_argument);
  CHECK(gf::FieldElement(12, 5).value() == 2);
}

TEST_CASE("vector and matrix dimension checks") {
  gf::FieldMatrix m(2, 3, 5);
  gf::FieldVector v(2, 5);
  CHECK_THROWS_AS(m * v, std::invalid_argument);
  gf::FieldMatrix other(2, 2, 5);
  CHECK_THROWS_AS(m * other, std::invalid_argument);
  CHECK_THROWS_AS(gf::FieldVector(2, 5) + gf::FieldVector(3, 5), std::invalid_argument);
  CHECK_THROWS_AS(gf::FieldMatrix(2, 3, 5).determinant(), std::invalid_argument);
}

TEST_CASE("invertible sampling: only unit exists at dim 1 over F_2") {
  std::mt19937_64 rng(1);
  const auto m = gf::sample_invertible(1, 2, rng);
  CHECK(m.at(0, 0) == 1);
}

TEST_CASE("identity passes the invertibility predicate") {
  CHECK(gf::FieldMatrix::identity(4, 3).invertible());
}

TEST_CASE("census: 6 of the 16 binary 2x2 matrices are invertible") {
  int invertible = 0;
  for (unsigned bits = 0; bits < 16; ++bits) {
    gf::FieldMatrix m(2, 2, 2);
    m.set(0, 0, bits & 1);
    m.set(0, 1, (bits >> 1) & 1);
    m.set(1, 0, (bits >> 2) & 1);
    m.set(1, 1, (bits >> 3) & 1);
    const bool oracle = is_bijection(m);
    CHECK(m.invertible() == oracle);
    if (oracle) ++invertible;
  }
  CHECK(invertible == 6);
}

TEST_CASE("determinant agrees with rank and with the permanent-style oracle") {
  std::mt19937_64 rng(42);
  const std::uint32_t moduli[] = {2, 3, 5, 7};
  int checked = 0;
  while (checked < 1000) {
    const std::uint32_t q = moduli[checked % 4];
    const std::size_t dim = 1 + checked % 4;
    const auto m = gf::sample_matrix(dim, dim, q, rng);
    const bool nonzero_det = m.determinant() != 0;
    CHECK(nonzero_det == (m.rank() == dim));
    CHECK(m.determinant() == leibniz_det(m));
    if (nonzero_det) {
      const auto prod = m * m.inverse();
      CHECK(prod == gf::FieldMatrix::identity(dim, q));
    }
    ++checked;
  }
}

TEST_CASE("code pair round trips exactly") {
  std::mt19937_64 rng(7);
  const auto pair = gf::make_code_pair(3, 2, 2, 1, 3, rng);
  const auto dims = pair.dims;
  REQUIRE(dims.coset_len() == 3);
  for (int rep = 0; rep < 100; ++rep) {
    const auto f = gf::sample_vector(static_cast<std::size_t>(dims.payload_len()), 3, rng);
    const auto e = gf::sample_vector(static_cast<std::size_t>(dims.coset_len()), 3, rng);
    CHECK(pair.g2 * (pair.g1 * gf::FieldVector::concat(f, e)) == e);
    const auto m = gf::sample_vector(static_cast<std::size_t>(dims.k), 3, rng);
    const auto l = gf::sample_vector(static_cast<std::size_t>(dims.kprime), 3, rng);
    CHECK(pair.g4 * (pair.g3 * gf::FieldVector::concat(m, l)) == m);
  }
}

TEST_CASE("code pair rejects impossible dimensions") {
  std::mt19937_64 rng(7);
  CHECK_THROWS_AS(gf::make_code_pair(1, 1, 1, 1, 2, rng), std::invalid_argument);
  CHECK_THROWS_AS(gf::make_code_pair(4, 1, 1, 1, 6, rng), std::invalid_argument);
}

// Hash-collision census for the projection maps. With g1 uniform over the
// invertible group, a g2-collision for fixed x != x' is exactly the event
// that g1^{-1}(x - x') lies in the payload block, so the empirical rate over
// all pairs must respect q^{-(nl-k-k')}; similarly g4 respects q^{-k'}.
TEST_CASE("universal hash collision bounds") {
  std::mt19937_64 rng(2024);
  const int draws = 200;
  const std::uint32_t q = 2;

  double g2_rate_sum = 0.0, g2_rate_sq = 0.0;
  double g4_rate_sum = 0.0, g4_rate_sq = 0.0;
  for (int d = 0; d < draws; ++d) {
    const auto pair = gf::make_code_pair(4, 1, 1, 1, q, rng);
    int g2_collisions = 0, g2_pairs = 0;
    for (std::uint64_t xa = 0; xa < 16; ++xa) {
      for (std::uint64_t xb = xa + 1; xb < 16; ++xb) {
        const auto va = vector_of(4, q, xa);
        const auto vb = vector_of(4, q, xb);
        ++g2_pairs;
        if (pair.g2 * va == pair.g2 * vb) ++g2_collisions;
      }
    }
    const double g2_rate = static_cast<double>(g2_collisions) / g2_pairs;
    g2_rate_sum += g2_rate;
    g2_rate_sq += g2_rate * g2_rate;

    int g4_collisions = 0, g4_pairs = 0;
    for (std::uint64_t fa = 0; fa < 4; ++fa) {
      for (std::uint64_t fb = fa + 1; fb < 4; ++fb) {
        ++g4_pairs;
        if (pair.g4 * vector_of(2, q, fa) == pair.g4 * vector_of(2, q, fb)) ++g4_collisions;
      }
    }
    const double g4_rate = static_cast<double>(g4_collisions) / g4_pairs;
    g4_rate_sum += g4_rate;
    g4_rate_sq += g4_rate * g4_rate;
  }

  const double g2_mean = g2_rate_sum / draws;
  const double g2_sd = std::sqrt(std::max(0.0, g2_rate_sq / draws - g2_mean * g2_mean));
  const double g2_se = g2_sd / std::sqrt(static_cast<double>(draws));
  CHECK(g2_mean <= 0.25 + 3.0 * g2_se);  // bound q^{-(nl-k-k')} = 1/4

  const double g4_mean = g4_rate_sum / draws;
  const double g4_sd = std::sqrt(std::max(0.0, g4_rate_sq / draws - g4_mean * g4_mean));
  const double g4_se = g4_sd / std::sqrt(static_cast<double>(draws));
  CHECK(g4_mean <= 0.5 + 3.0 * g4_se);  // bound q^{-k'} = 1/2
}

TEST_CASE("empty coset block at the boundary dimension") {
  std::mt19937_64 rng(3);
  const auto pair = gf::make_code_pair(2, 1, 1, 1, 2, rng);
  CHECK(pair.dims.coset_len() == 0);
  CHECK(pair.g2.rows() == 0);
  const gf::FieldVector empty(0, 2);
  const auto f = gf::sample_vector(2, 2, rng);
  CHECK(pair.g2 * (pair.g1 * gf::FieldVector::concat(f, empty)) == empty);
}

TEST_CASE("index arithmetic over F_3^2") {
  // (1,2) + (2,2) = (0,1) -> index 3
  CHECK(gf::index_add(7, 8, 3, 2) == 3);
  CHECK(gf::index_sub(3, 8, 3, 2) == 7);
  CHECK(gf::index_scale(2, 7, 3, 2) == 2 + 3 * 1);
}

TEST_CASE("uniform invertible sampling is reproducible per seed") {
  std::mt19937_64 a(99), b(99);
  CHECK(gf::sample_invertible(5, 5, a) == gf::sample_invertible(5, 5, b));
}
