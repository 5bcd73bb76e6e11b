// The oracles get their own sanity checks on hand-computable cases.
#include <random>

#include "doctest.h"
#include "dyadcov/variance.hpp"
#include "testkit.hpp"

using namespace dyadcov;
using namespace dyadcov::testkit;

namespace {
bool share_node(const Dyad& a, const Dyad& b) {
  return a.i == b.i || a.i == b.j || a.j == b.i || a.j == b.j;
}
}  // namespace

TEST_CASE("brute_meat_dn") {
  std::mt19937_64 rng(1);
  const auto dyads = complete_dyads(7);
  Matrix S = random_scores(rng, dyads.size(), 2);
  CHECK(rel_frobenius(brute_meat_dn(S, dyads, 1),
                      brute_pairwise_meat(S, dyads, share_node)) < 1e-14);

  // (1,2) and (2,3) share node 2: distance 0, weight 1 -> 2 self + 2 cross.
  std::vector<Dyad> two = {{1, 2}, {2, 3}};
  CHECK(brute_meat_dn(Matrix::Ones(2, 1), two, 3)(0, 0) == 4.0);
  // (1,2) and (4,5) are at distance 2: cross weight 1/3 each way.
  std::vector<Dyad> apart = {{1, 2}, {4, 5}};
  CHECK(brute_meat_dn(Matrix::Ones(2, 1), apart, 3)(0, 0) ==
        doctest::Approx(2.0 + 2.0 / 3.0));
}

TEST_CASE("brute_pairwise_meat predicates") {
  std::mt19937_64 rng(2);
  const auto dyads = complete_dyads(6);
  Matrix S = random_scores(rng, dyads.size(), 3);
  auto never = [](const Dyad&, const Dyad&) { return false; };
  CHECK(rel_frobenius(brute_pairwise_meat(S, dyads, never), meat_white(S)) < 1e-13);
  CHECK(rel_frobenius(brute_pairwise_meat(S, dyads, share_node),
                      meat_dyadic(S, dyads, 6)) < 1e-12);
  auto same_i = [](const Dyad& a, const Dyad& b) { return a.i == b.i; };
  auto same_j = [](const Dyad& a, const Dyad& b) { return a.j == b.j; };
  const Matrix composed = brute_pairwise_meat(S, dyads, same_i) +
                          brute_pairwise_meat(S, dyads, same_j) -
                          brute_pairwise_meat(S, dyads, never);
  CHECK(rel_frobenius(composed, meat_twoway(S, dyads, 6)) < 1e-12);
}

TEST_CASE("brute_jk") {
  const auto dyads = complete_dyads(5);
  Matrix X(10, 2);
  for (int m = 0; m < 10; ++m) X.row(m) << 1.0, 0.5 * m;
  Vector y = X * Eigen::Vector2d(1.0, 2.0);
  auto exact = make_ranked_dataset(5, dyads, y, X);
  CHECK(brute_jk(exact, 1).V0.norm() < 1e-20);

  Vector y2(10);
  for (int m = 0; m < 10; ++m) y2[m] = m + 1.0;
  auto hand = make_ranked_dataset(5, dyads, y2, Matrix::Ones(10, 1));
  CHECK(brute_jk(hand, 1).V0(0, 0) == doctest::Approx(246.0 / 36.0).epsilon(1e-12));
}
