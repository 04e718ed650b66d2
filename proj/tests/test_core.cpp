#include <doctest.h>

#include <set>
#include <thread>

#include "subsel/dataset.hpp"
#include "subsel/index_set.hpp"
#include "subsel/oracle.hpp"
#include "subsel/parallel.hpp"
#include "subsel/rng.hpp"

using namespace subsel;

TEST_CASE("index set basics") {
  IndexSet s{3, 1, 2, 1};
  CHECK(s.size() == 3);
  CHECK(s.indices() == std::vector<std::size_t>{1, 2, 3});
  CHECK(s.contains(2));
  CHECK(!s.contains(0));
  CHECK(s.with(0).indices() == std::vector<std::size_t>{0, 1, 2, 3});
  CHECK(s.without(2).indices() == std::vector<std::size_t>{1, 3});
  CHECK(s.unioned(IndexSet{0, 3}).size() == 4);
  CHECK(s.minus(IndexSet{1, 3}).indices() == std::vector<std::size_t>{2});
  CHECK(IndexSet::full(4).size() == 4);
  CHECK_THROWS_AS(s.validate(3), DataError);
  CHECK_NOTHROW(s.validate(4));
}

TEST_CASE("index set lexicographic order") {
  CHECK(IndexSet{0, 1} < IndexSet{2});
  CHECK(IndexSet{0, 1} < IndexSet{0, 1, 2});
  CHECK(IndexSet{1} < IndexSet{1, 5});
}

TEST_CASE("index set mask round trip") {
  IndexSet s{0, 5, 63};
  CHECK(IndexSet::from_mask(s.as_mask()) == s);
  CHECK(IndexSet::from_mask(0).empty());
}

TEST_CASE("rng determinism and bounds") {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng r(7);
  for (int i = 0; i < 10000; ++i) {
    const auto x = r.next_index(13);
    CHECK(x < 13);
    const double u = r.next_unit();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("rng normal moments") {
  Rng r(11);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.next_normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
}

TEST_CASE("parallel map is worker-invariant") {
  std::vector<double> serial, parallel;
  auto fn = [](std::size_t i) { return std::sqrt(static_cast<double>(i) + 1.0); };
  parallel_map(257, 1, serial, fn);
  parallel_map(257, 8, parallel, fn);
  CHECK(serial == parallel);
}

TEST_CASE("parallel map propagates exceptions") {
  std::vector<int> out;
  CHECK_THROWS_AS(parallel_map(16, 4, out,
                               [](std::size_t i) -> int {
                                 if (i == 7) throw std::runtime_error("boom");
                                 return 0;
                               }),
                  std::runtime_error);
}

TEST_CASE("oracle counts queries and rounds; marginal uses two evals") {
  SetFunctionOracle oracle(5, [](const IndexSet& s) {
    return static_cast<double>(s.size());
  });
  CHECK(oracle.queries() == 0);
  CHECK(oracle.rounds() == 0);
  CHECK(oracle.eval(IndexSet{1, 2}) == 2.0);
  CHECK(oracle.queries() == 1);
  CHECK(marginal(oracle, IndexSet{0}, IndexSet{1, 2}) == 2.0);
  CHECK(oracle.queries() == 3);
  CHECK(marginal(oracle, IndexSet{}, IndexSet{}) == 0.0);
  oracle.note_round();
  CHECK(oracle.rounds() == 1);

  SUBCASE("marginal with overlap removes it silently") {
    CHECK(marginal(oracle, IndexSet{0, 1}, IndexSet{1, 2}) == 1.0);
  }
  SUBCASE("marginal of empty base is the plain value") {
    CHECK(marginal(oracle, IndexSet{}, IndexSet{2, 4}) == 2.0);
  }
}

TEST_CASE("dataset validation") {
  Dataset data;
  data.features = Eigen::MatrixXd::Ones(3, 2);
  data.response = Eigen::VectorXd::Zero(3);
  CHECK_NOTHROW(data.validate());

  SUBCASE("length mismatch") {
    data.response = Eigen::VectorXd::Zero(2);
    CHECK_THROWS_AS(data.validate(), DataError);
  }
  SUBCASE("non-finite entries rejected") {
    data.features(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(data.validate(), DataError);
  }
  SUBCASE("binary response detection") {
    CHECK(data.binary_response());
    data.response[0] = 0.5;
    CHECK(!data.binary_response());
  }
}

TEST_CASE("column standardization") {
  Eigen::MatrixXd m(4, 2);
  m << 1, 10, 2, 20, 3, 30, 4, 40;
  standardize_columns(m);
  CHECK(columns_standardized(m));
  for (int j = 0; j < 2; ++j) {
    CHECK(std::abs(m.col(j).mean()) < 1e-12);
    CHECK(std::abs(m.col(j).squaredNorm() / 4.0 - 1.0) < 1e-12);
  }
}
