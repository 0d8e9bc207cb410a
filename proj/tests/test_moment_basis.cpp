#include <catch2/catch_amalgamated.hpp>

#include "hme/moment_basis.hpp"

using hme::MomentBasis;
using hme::MultiIndex;

namespace {

// Literal transcription of the ordering definition, kept independent of
// the library comparator: a < b iff |a| < |b|, or the degrees agree and
// some position i has a_i > b_i with equal entries everywhere after i.
bool oracle_less(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree() < b.degree()) return true;
  if (a.degree() > b.degree()) return false;
  for (int i = 0; i < a.dim(); ++i) {
    bool tail_equal = true;
    for (int j = i + 1; j < a.dim(); ++j) tail_equal = tail_equal && a[j] == b[j];
    if (tail_equal && a[i] > b[i]) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("one-dimensional enumeration is plain degree order") {
  auto idx = hme::enumerate_indices(1, 3);
  REQUIRE(idx.size() == 4);
  for (int i = 0; i < 4; ++i) REQUIRE(idx[i][0] == i);
}

TEST_CASE("two-dimensional order-2 enumeration matches the oracle") {
  auto idx = hme::enumerate_indices(2, 2);
  std::vector<MultiIndex> expected = {{0, 0}, {0, 1}, {1, 0}, {0, 2}, {1, 1}, {2, 0}};
  REQUIRE(idx == expected);

  // selection sort with the oracle comparator reproduces the same order
  std::vector<MultiIndex> sorted = idx;
  for (size_t i = 0; i < sorted.size(); ++i)
    for (size_t j = i + 1; j < sorted.size(); ++j)
      if (oracle_less(sorted[j], sorted[i])) std::swap(sorted[i], sorted[j]);
  REQUIRE(sorted == idx);
}

TEST_CASE("three-dimensional counts match binomial(M+D, D)") {
  REQUIRE(hme::enumerate_indices(3, 3).size() == 20);
  int expected[] = {20, 35, 56, 84};
  for (int order = 3; order <= 6; ++order) {
    MomentBasis basis(3, order);
    REQUIRE(basis.size() == expected[order - 3]);
    REQUIRE(basis.size() == hme::binomial(order + 3, 3));
  }
}

TEST_CASE("ordering is a strict total order on small index sets") {
  for (int dim = 1; dim <= 3; ++dim)
    for (int order = 2; order <= 5; ++order) {
      auto idx = hme::enumerate_indices(dim, order);
      for (size_t i = 0; i < idx.size(); ++i)
        for (size_t j = 0; j < idx.size(); ++j) {
          bool lt = hme::grevlex_less(idx[i], idx[j]);
          bool gt = hme::grevlex_less(idx[j], idx[i]);
          REQUIRE(lt == oracle_less(idx[i], idx[j]));
          if (i == j) {
            REQUIRE_FALSE(lt);
          } else {
            REQUIRE(lt != gt);  // total and antisymmetric
          }
          // transitivity against every third element
          if (lt)
            for (size_t k = 0; k < idx.size(); ++k)
              if (hme::grevlex_less(idx[j], idx[k]))
                REQUIRE(hme::grevlex_less(idx[i], idx[k]));
        }
      // enumeration is strictly ascending
      for (size_t i = 0; i + 1 < idx.size(); ++i)
        REQUIRE(hme::grevlex_less(idx[i], idx[i + 1]));
    }
}

TEST_CASE("position map inverts the enumeration") {
  for (int dim = 1; dim <= 3; ++dim) {
    MomentBasis basis(dim, 4);
    for (int i = 0; i < basis.size(); ++i) REQUIRE(basis.position(basis.at(i)) == i);
  }
}

TEST_CASE("out-of-range lookups are absent") {
  MomentBasis basis(2, 3);
  REQUIRE(basis.position(MultiIndex{4, 0}) == MomentBasis::absent);
  REQUIRE(basis.position(MultiIndex{2, 2}) == MomentBasis::absent);
  MultiIndex negative{0, 0};
  negative[0] = -1;
  REQUIRE(basis.position(negative) == MomentBasis::absent);
  REQUIRE(basis.position(MultiIndex{1, 1}.shifted(0, -2)) == MomentBasis::absent);
}

TEST_CASE("invalid parameters are rejected") {
  REQUIRE_THROWS_AS(hme::enumerate_indices(0, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(hme::enumerate_indices(4, 3), std::invalid_argument);
  REQUIRE_THROWS_AS(hme::enumerate_indices(2, 1), std::invalid_argument);
}
