#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <string>
#include <vector>

#include "autorisk/errors.hpp"
#include "autorisk/labeling.hpp"
#include "autorisk/rng.hpp"

using namespace autorisk;

namespace {

// One occupation with the given yes/no/skip counts.
ExpertVoteSet votes_of(std::size_t yes, std::size_t no, std::size_t skip,
                       const std::string& isco = "5223") {
  ExpertVoteSet v;
  v.occupations = {isco};
  std::vector<std::optional<bool>> row;
  for (std::size_t i = 0; i < yes; ++i) row.emplace_back(true);
  for (std::size_t i = 0; i < no; ++i) row.emplace_back(false);
  for (std::size_t i = 0; i < skip; ++i) row.emplace_back(std::nullopt);
  for (std::size_t e = 0; e < row.size(); ++e)
    v.expert_ids.push_back("e" + std::to_string(e));
  v.votes = {row};
  return v;
}

}  // namespace

TEST_CASE("expert-panel boundary cases") {
  // 28 yes / 2 no: near-unanimous automatable
  auto l = aggregate_labels(votes_of(28, 2, 0));
  REQUIRE(l.size() == 1);
  CHECK(l[0].mean == doctest::Approx(28.0 / 30.0).epsilon(1e-12));
  CHECK(l[0].mode == 1);
  REQUIRE(l[0].consensus.has_value());
  CHECK(*l[0].consensus == 1);
  CHECK(l[0].n_votes == 30);

  // 1 yes / 3 no: clear no
  l = aggregate_labels(votes_of(1, 3, 0));
  CHECK(l[0].mean == 0.25);
  CHECK(l[0].mode == 0);
  REQUIRE(l[0].consensus.has_value());
  CHECK(*l[0].consensus == 0);

  // 13 yes / 13 no: split panel, no consensus, tie mode resolves to 0
  l = aggregate_labels(votes_of(13, 13, 0));
  CHECK(l[0].mean == 0.5);
  CHECK(l[0].mode == 0);
  CHECK_FALSE(l[0].consensus.has_value());
  CHECK(l[0].n_votes == 26);
}

TEST_CASE("threshold boundary is inclusive") {
  // 3/4 = 0.75 exactly
  auto l = aggregate_labels(votes_of(3, 1, 0));
  REQUIRE(l[0].consensus.has_value());
  CHECK(*l[0].consensus == 1);
  // just below: 0.7 < 0.75 on either side, 7 yes 3 no
  l = aggregate_labels(votes_of(7, 3, 0));
  CHECK_FALSE(l[0].consensus.has_value());
  // custom threshold picks it back up
  l = aggregate_labels(votes_of(7, 3, 0), 0.7);
  REQUIRE(l[0].consensus.has_value());
  CHECK(*l[0].consensus == 1);
}

TEST_CASE("skipped votes leave the panel") {
  const auto l = aggregate_labels(votes_of(5, 1, 24));
  CHECK(l[0].n_votes == 6);
  CHECK(l[0].mean == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  REQUIRE(l[0].consensus.has_value());
  CHECK(*l[0].consensus == 1);
}

TEST_CASE("occupation with only skips raises") {
  CHECK_THROWS_AS((void)aggregate_labels(votes_of(0, 0, 5)), NoVotes);
}

TEST_CASE("duplicate occupation codes are rejected") {
  auto v = votes_of(3, 1, 0);
  v.occupations.push_back(v.occupations[0]);
  v.votes.push_back(v.votes[0]);
  CHECK_THROWS_AS((void)aggregate_labels(v), DuplicateLabel);
}

TEST_CASE("consensus rule holds on random panels") {
  Rng rng(2718);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t yes = rng.pick(30);
    const std::size_t no = rng.pick(30);
    const std::size_t skip = rng.pick(5);
    if (yes + no == 0) continue;
    const auto l = aggregate_labels(votes_of(yes, no, skip));
    const double n = static_cast<double>(yes + no);
    const double share_yes = static_cast<double>(yes) / n;
    const double share_no = static_cast<double>(no) / n;

    CHECK(l[0].n_votes == yes + no);
    CHECK(l[0].mean == doctest::Approx(share_yes).epsilon(1e-12));
    const int mode = yes > no ? 1 : 0;
    CHECK(l[0].mode == mode);
    const bool expect_consensus = std::max(share_yes, share_no) >= 0.75;
    CHECK(l[0].consensus.has_value() == expect_consensus);
    if (expect_consensus) CHECK(*l[0].consensus == mode);
  }
}

TEST_CASE("votes csv round-trips, keeping first-appearance order") {
  ExpertVoteSet v;
  v.occupations = {"5223", "2511", "9112"};
  v.expert_ids = {"e0", "e1", "e2", "e3"};
  v.votes = {
      {true, false, std::nullopt, true},
      {false, false, true, std::nullopt},
      {std::nullopt, std::nullopt, true, false},
  };
  const auto back = parse_votes_csv_string(votes_csv_string(v));
  CHECK(back.occupations == v.occupations);
  CHECK(back.expert_ids == v.expert_ids);
  CHECK(back.votes == v.votes);
}

TEST_CASE("labels csv round-trips with three-decimal means") {
  const auto labels = aggregate_labels(votes_of(28, 2, 0));
  const std::string text = labels_csv_string(labels);
  CHECK(text.find("0.933") != std::string::npos);
  const auto back = parse_labels_csv_string(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].isco4 == labels[0].isco4);
  CHECK(back[0].mode == labels[0].mode);
  CHECK(back[0].consensus == labels[0].consensus);
  CHECK(back[0].n_votes == labels[0].n_votes);
  CHECK(back[0].mean == doctest::Approx(labels[0].mean).epsilon(1e-3));

  // absent consensus stays absent through the file
  const auto split = aggregate_labels(votes_of(13, 13, 0));
  const auto split_back = parse_labels_csv_string(labels_csv_string(split));
  CHECK_FALSE(split_back[0].consensus.has_value());
}

TEST_CASE("attach_labels joins by exact code") {
  const auto labels = aggregate_labels(votes_of(4, 0, 0, "5223"));
  WorkerRecord a;
  a.id = "w1";
  a.isco4 = "5223";
  WorkerRecord b;
  b.id = "w2";
  b.isco4 = "2511";  // nobody judged this one
  const std::vector<WorkerRecord> records = {a, b};
  const auto join = attach_labels(records, labels);
  REQUIRE(join.worker_ids.size() == 2);
  CHECK(join.worker_ids[0] == "w1");
  REQUIRE(join.labels[0].has_value());
  CHECK(join.labels[0]->isco4 == "5223");
  CHECK_FALSE(join.labels[1].has_value());
}
