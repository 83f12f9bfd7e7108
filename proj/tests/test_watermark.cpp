#include <doctest.h>


#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "gamemark/error.hpp"
#include "gamemark/watermark/watermark.hpp"

using namespace gamemark;

namespace {
const std::vector<std::string> kAbcd = {"a", "b", "c", "d"};

wm::WatermarkParams params(double gamma, double delta, std::string key = "") {
  wm::WatermarkParams p;
  p.gamma = gamma;
  p.delta = delta;
  p.key = std::move(key);
  return p;
}
}  // namespace

TEST_CASE("fnv1a64 matches the published test vector") {
  CHECK(wm::fnv1a64("abc") == 0xe71fa2190541574bULL);
  CHECK(wm::fnv1a64("") == 0xcbf29ce484222325ULL);  // offset basis
}

TEST_CASE("seed_from_observation golden values and determinism") {
  // frozen from an independent reference implementation
  CHECK(wm::seed_from_observation("abc", "") == 0xb63a1b308d38cbaaULL);
  CHECK(wm::seed_from_observation("abc", "k") == 0xda499203845a88a1ULL);
  CHECK(wm::seed_from_observation("x", "") == 0x087a4e07b528c302ULL);

  CHECK(wm::seed_from_observation("abc", "key") ==
        wm::seed_from_observation("abc", "key"));
  CHECK_THROWS_AS(wm::seed_from_observation("", "key"), ContractError);
}

TEST_CASE("distinct keys give distinct seeds over a large corpus") {
  wm::SplitMix64 rng(7);
  std::set<std::uint64_t> seeds;
  for (int i = 0; i < 10'000; ++i) {
    std::string key(8, '\0');
    for (char& c : key) c = char(rng.next() & 0xFF);
    seeds.insert(wm::seed_from_observation("abc", key));
  }
  CHECK(seeds.size() == 10'000);
}

TEST_CASE("splitmix64 reference sequence") {
  wm::SplitMix64 rng(1234);
  CHECK(rng.next() == 0xbb0cf61b2f181cdbULL);
  CHECK(rng.next() == 0x97c7a1364df06524ULL);
  CHECK(rng.next() == 0x33befae49bc025daULL);
  CHECK(rng.next() == 0x4e6241f252d0a033ULL);
}

TEST_CASE("green list size rounds half up and clamps") {
  CHECK(wm::green_list_size(4, 0.25) == 1);
  CHECK(wm::green_list_size(2, 0.9) == 1);   // clamped below |A|
  CHECK(wm::green_list_size(2, 0.05) == 1);  // clamped above 0
  CHECK(wm::green_list_size(20, 0.25) == 5);
  CHECK(wm::green_list_size(10, 0.25) == 3);  // 2.5 rounds up
  CHECK(wm::green_list_size(3, 0.5) == 2);    // 1.5 rounds up
}

TEST_CASE("partition golden vector for obs 'x'") {
  const std::uint64_t seed = wm::seed_from_observation("x", "");
  SUBCASE("gamma 0.25") {
    const wm::Partition part = wm::partition_actions(kAbcd, seed, 0.25);
    CHECK(part.green == std::vector<std::string>{"c"});
    CHECK(part.red == std::vector<std::string>{"a", "b", "d"});
    CHECK(part.seed == seed);
  }
  SUBCASE("gamma 0.5") {
    const wm::Partition part = wm::partition_actions(kAbcd, seed, 0.5);
    CHECK(part.green == std::vector<std::string>{"a", "c"});
  }
  SUBCASE("gamma 0.75") {
    const wm::Partition part = wm::partition_actions(kAbcd, seed, 0.75);
    CHECK(part.green == std::vector<std::string>{"a", "c", "d"});
    CHECK(part.red == std::vector<std::string>{"b"});
  }
}

TEST_CASE("partition rejects bad input") {
  CHECK_THROWS_AS(wm::partition_actions(std::vector<std::string>{"a"}, 1, 0.25),
                  ContractError);
  CHECK_THROWS_AS(
      wm::partition_actions(std::vector<std::string>{"b", "a"}, 1, 0.25),
      ContractError);
  CHECK_THROWS_AS(
      wm::partition_actions(std::vector<std::string>{"a", "a"}, 1, 0.25),
      ContractError);
}

TEST_CASE("partition is a disjoint cover with the clamped green size") {
  wm::SplitMix64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const int count = 2 + int(rng.next_bounded(30));
    std::vector<std::string> actions;
    for (int a = 0; a < count; ++a)
      actions.push_back("m" + std::to_string(100 + a));
    const double gamma = 0.05 + 0.9 * rng.next_unit();
    const wm::Partition part = wm::partition_actions(actions, rng.next(), gamma);
    CHECK(part.green.size() + part.red.size() == actions.size());
    CHECK(part.green.size() == wm::green_list_size(actions.size(), gamma));
    CHECK(!part.green.empty());
    CHECK(!part.red.empty());
    std::set<std::string> all(part.green.begin(), part.green.end());
    all.insert(part.red.begin(), part.red.end());
    CHECK(all.size() == actions.size());
  }
}

TEST_CASE("adjust_values arithmetic") {
  const std::uint64_t seed = wm::seed_from_observation("x", "");
  const wm::Partition part = wm::partition_actions(kAbcd, seed, 0.25);
  // green = {c}
  const std::vector<double> u = {1.0, 2.0, 3.0, 4.0};

  SUBCASE("gamma 0.25, delta 0.5: green +0.5, red -1/6") {
    const auto v = wm::adjust_values(u, part, params(0.25, 0.5));
    CHECK(v[0] == doctest::Approx(1.0 - 1.0 / 6.0).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(2.0 - 1.0 / 6.0).epsilon(1e-12));
    CHECK(v[2] == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(v[3] == doctest::Approx(4.0 - 1.0 / 6.0).epsilon(1e-12));
  }
  SUBCASE("delta 0 is the identity") {
    CHECK(wm::adjust_values(u, part, params(0.25, 0.0)) == u);
  }
  SUBCASE("gamma 0.5, delta 1: symmetric +1/-1") {
    const wm::Partition half = wm::partition_actions(kAbcd, seed, 0.5);
    const auto v = wm::adjust_values(u, half, params(0.5, 1.0));
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(std::abs(v[i] - u[i]) == doctest::Approx(1.0));
    }
  }
  SUBCASE("length mismatch rejected") {
    CHECK_THROWS_AS(wm::adjust_values(std::vector<double>{1.0}, part,
                                      params(0.25, 0.5)),
                    ContractError);
  }
}

TEST_CASE("zero-mean adjustment identity across the parameter grid") {
  for (double gamma : {0.1, 0.25, 0.5, 0.75, 0.9}) {
    for (double delta : {0.0, 0.1, 0.5, 1.0, 10.0, 1e6}) {
      const auto p = params(gamma, delta);
      CHECK(std::abs(gamma * delta + (1.0 - gamma) * p.red_adjustment()) <= 1e-12);
    }
  }
}

TEST_CASE("next_action follows the adjusted argmax") {
  // obs "x": green = {c} at gamma 0.25, actions a b c d
  SUBCASE("watermark reinforces a clear argmax") {
    const auto d = wm::next_action("x", kAbcd, std::vector<double>{0.0, 0.0, 1.0, 0.0},
                                   params(0.25, 0.5));
    CHECK(d.action == "c");
    CHECK(d.watermarked);
    CHECK(d.green);
  }
  SUBCASE("watermark flips a near-tie toward green") {
    // u(c) = 0, u(d) = 0.3: v(c) = 0.5 > v(d) = 0.3 - 1/6
    const auto d = wm::next_action("x", kAbcd,
                                   std::vector<double>{-1.0, -1.0, 0.0, 0.3},
                                   params(0.25, 0.5));
    CHECK(d.action == "c");
    CHECK(d.green);
  }
  SUBCASE("a large gap survives the adjustment") {
    const auto d = wm::next_action("x", kAbcd,
                                   std::vector<double>{0.0, 10.0, 0.0, 0.0},
                                   params(0.25, 0.5));
    CHECK(d.action == "b");
    CHECK(!d.green);
  }
  SUBCASE("delta 0 breaks exact ties green-first") {
    const auto d = wm::next_action("x", kAbcd,
                                   std::vector<double>{0.5, 0.5, 0.5, 0.5},
                                   params(0.25, 0.0));
    CHECK(d.action == "c");
    CHECK(d.green);
  }
  SUBCASE("below min_branching passes through unwatermarked") {
    const auto d = wm::next_action("x", std::vector<std::string>{"z"},
                                   std::vector<double>{1.0}, params(0.25, 10.0));
    CHECK(d.action == "z");
    CHECK(!d.watermarked);
  }
  SUBCASE("empty action set rejected") {
    CHECK_THROWS_AS(wm::next_action("x", std::vector<std::string>{},
                                    std::vector<double>{}, params(0.25, 0.5)),
                    ContractError);
  }
}

TEST_CASE("next_action is deterministic bit for bit") {
  wm::SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> actions;
    const int count = 2 + int(rng.next_bounded(12));
    for (int a = 0; a < count; ++a) actions.push_back("x" + std::to_string(10 + a));
    std::vector<double> values(count);
    for (double& v : values) v = rng.next_unit();
    const std::string obs = "obs" + std::to_string(rng.next());
    const auto p = params(0.25, 0.5, "secret");
    const auto first = wm::next_action(obs, actions, values, p);
    const auto second = wm::next_action(obs, actions, values, p);
    CHECK(first.action == second.action);
    CHECK(first.green == second.green);
    CHECK(first.seed == second.seed);
  }
}

TEST_CASE("membership of a fixed action is calibrated to gamma") {
  // |A| = 20 at gamma 0.25 gives exactly 5 green slots, so any fixed action
  // is green with probability exactly 0.25; check the Monte-Carlo rate
  std::vector<std::string> actions;
  for (int a = 0; a < 20; ++a) actions.push_back("m" + std::to_string(10 + a));
  const int trials = 100'000;
  int green = 0;
  for (int i = 0; i < trials; ++i) {
    const std::string obs = "cal" + std::to_string(i);
    const auto part = wm::partition_actions(
        actions, wm::seed_from_observation(obs, ""), 0.25);
    if (part.is_green(7)) ++green;
  }
  const double rate = double(green) / trials;
  const double se = std::sqrt(0.25 * 0.75 / trials);
  CHECK(std::abs(rate - 0.25) <= 3 * se);
}

TEST_CASE("huge delta forces green almost always") {
  std::vector<std::string> actions;
  for (int a = 0; a < 20; ++a) actions.push_back("m" + std::to_string(10 + a));
  wm::SplitMix64 rng(11);
  const auto p = params(0.25, 1e6);
  int green = 0;
  const int trials = 10'000;
  for (int i = 0; i < trials; ++i) {
    std::vector<double> values(actions.size());
    for (double& v : values) v = rng.next_unit();
    const auto d = wm::next_action("g" + std::to_string(i), actions, values, p);
    if (d.green) ++green;
  }
  CHECK(double(green) / trials >= 0.999);
}

TEST_CASE("watermarked expected utility sums prefix adjustments") {
  const auto p = params(0.25, 0.5);
  const std::uint64_t seed_x = wm::seed_from_observation("x", "");
  const wm::Partition part = wm::partition_actions(kAbcd, seed_x, 0.25);
  REQUIRE(part.green == std::vector<std::string>{"c"});

  SUBCASE("empty trajectory is the raw oracle value") {
    CHECK(wm::watermarked_expected_utility({}, 3.25, p) == 3.25);
  }
  SUBCASE("delta 0 never adjusts") {
    const std::vector<wm::TrajectoryStep> traj = {{"x", kAbcd, "c"},
                                                  {"x", kAbcd, "a"}};
    CHECK(wm::watermarked_expected_utility(traj, 1.5, params(0.25, 0.0)) == 1.5);
  }
  SUBCASE("green then red adds delta - gamma*delta/(1-gamma)") {
    const std::vector<wm::TrajectoryStep> traj = {{"x", kAbcd, "c"},
                                                  {"x", kAbcd, "a"}};
    CHECK(wm::watermarked_expected_utility(traj, 2.0, p) ==
          doctest::Approx(2.0 + 0.5 - 1.0 / 6.0).epsilon(1e-12));
  }
  SUBCASE("forced steps contribute nothing") {
    const std::vector<wm::TrajectoryStep> traj = {
        {"x", {"only"}, "only"}, {"x", kAbcd, "c"}};
    CHECK(wm::watermarked_expected_utility(traj, 0.0, p) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("chosen action must be legal") {
    const std::vector<wm::TrajectoryStep> traj = {{"x", kAbcd, "zz"}};
    CHECK_THROWS_AS(wm::watermarked_expected_utility(traj, 0.0, p), ContractError);
  }
}

TEST_CASE("adjustments invert exactly under known parameters") {
  wm::SplitMix64 rng(21);
  const auto p = params(0.25, 0.5, "k");
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<wm::TrajectoryStep> traj;
    const int steps = 1 + int(rng.next_bounded(10));
    for (int s = 0; s < steps; ++s) {
      wm::TrajectoryStep step;
      step.observation = "t" + std::to_string(rng.next());
      const int count = 2 + int(rng.next_bounded(6));
      for (int a = 0; a < count; ++a)
        step.actions.push_back("a" + std::to_string(10 + a));
      step.chosen = step.actions[rng.next_bounded(count)];
      traj.push_back(std::move(step));
    }
    const double oracle = rng.next_unit() * 100.0;
    const double marked = wm::watermarked_expected_utility(traj, oracle, p);
    CHECK(std::abs((marked - wm::adjustment_sum(traj, p)) - oracle) <= 1e-12);
  }
}
