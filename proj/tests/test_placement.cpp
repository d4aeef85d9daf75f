// Copyright 2026 The sourceloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "sourceloc/error.hpp"
#include "sourceloc/placement.hpp"

using namespace sourceloc;

TEST_SUITE("placement") {
  TEST_CASE("observer set validation") {
    CHECK_THROWS_AS(ObserverSet({}, 3), InputError);
    CHECK_THROWS_AS(ObserverSet({1, 1}, 3), InputError);
    CHECK_THROWS_AS(ObserverSet({3}, 3), InputError);
    const ObserverSet s({2, 0}, 3);
    CHECK(s.nodes() == std::vector<NodeId>{0, 2});
    CHECK(s.contains(2));
    CHECK_FALSE(s.contains(1));
  }

  TEST_CASE("high degree picks hubs and breaks ties by index") {
    CHECK(place_high_degree(generate_star(5), 1).nodes() == std::vector<NodeId>{0});
    CHECK(place_high_degree(generate_cycle(4), 2).nodes() == std::vector<NodeId>{0, 1});
    CHECK(place_high_degree(generate_path(4), 4).size() == 4);
    CHECK_THROWS_AS(place_high_degree(generate_path(4), 5), InputError);
    CHECK_THROWS_AS(place_high_degree(generate_path(4), 0), InputError);
  }

  TEST_CASE("low degree picks leaves") {
    CHECK(place_low_degree(generate_path(10), 2).nodes() == std::vector<NodeId>{0, 9});
    CHECK(place_low_degree(generate_star(4), 2).nodes() == std::vector<NodeId>{1, 2});
    CHECK(place_low_degree(generate_cycle(5), 5).size() == 5);
    CHECK_THROWS_AS(place_low_degree(generate_path(4), 0), InputError);
  }

  TEST_CASE("high degree selection dominates the rest") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const Graph g = generate_ba(200, 2, s);
      const ObserverSet chosen = place_high_degree(g, 20);
      std::size_t min_in = SIZE_MAX, max_out = 0;
      for (NodeId v = 0; v < 200; ++v) {
        if (chosen.contains(v)) min_in = std::min(min_in, g.degree(v));
        else max_out = std::max(max_out, g.degree(v));
      }
      CHECK(min_in >= max_out);
    }
  }

  TEST_CASE("random placement is seeded and uniform") {
    const Graph g = generate_path(10);
    CHECK(place_random(g, 4, 9) == place_random(g, 4, 9));
    CHECK(place_random(g, 10, 1).size() == 10);
    std::vector<int> hits(10, 0);
    const int seeds = 10000;
    for (int s = 0; s < seeds; ++s) ++hits[place_random(g, 1, s).nodes()[0]];
    for (int h : hits) CHECK(std::abs(h / static_cast<double>(seeds) - 0.1) <= 0.01);
  }

  TEST_CASE("observer specs") {
    const Graph g = generate_star(6);
    CHECK(parse_observer_spec("degree:1", g, 0).nodes() == std::vector<NodeId>{0});
    CHECK(parse_observer_spec("random:3", g, 5) == place_random(g, 3, 5));
    CHECK(parse_observer_spec("low-degree:2", g, 0).nodes() == std::vector<NodeId>{1, 2});
    CHECK_THROWS_AS(parse_observer_spec("random:x", g, 0), InputError);
    CHECK_THROWS_AS(parse_observer_spec("degree:", g, 0), InputError);

    const auto dir = std::filesystem::temp_directory_path() / "sourceloc_placement_test";
    std::filesystem::create_directories(dir);
    const auto good = (dir / "good.txt").string();
    std::ofstream(good) << "# observers\n3\n1 \n";
    CHECK(parse_observer_spec(good, g, 0).nodes() == std::vector<NodeId>{1, 3});
    const auto bad = (dir / "bad.txt").string();
    std::ofstream(bad) << "1\n99\n";
    CHECK_THROWS_WITH_AS(read_observer_file(bad, g), doctest::Contains("bad.txt:2"), InputError);
    CHECK_THROWS_AS(parse_observer_spec((dir / "missing.txt").string(), g, 0), InputError);
    std::filesystem::remove_all(dir);
  }
}
