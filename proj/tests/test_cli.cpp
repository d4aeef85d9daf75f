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
#include <sstream>

#include "../tools/commands.hpp"
#include "sourceloc/diffusion.hpp"
#include "sourceloc/graph.hpp"

using namespace sourceloc;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result sl(std::vector<std::string> args) {
  args.insert(args.begin(), "sourceloc");
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Fresh scratch directory per test case.
struct Scratch {
  fs::path dir;
  explicit Scratch(const std::string& name)
      : dir(fs::temp_directory_path() / ("sourceloc_cli_" + name)) {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string operator/(const std::string& f) const { return (dir / f).string(); }
};

// Ranked CSV rows after the header, as (node, score) text pairs.
std::vector<std::string> rows(const std::string& csv) {
  std::vector<std::string> out;
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("generate") {
    Scratch s("generate");
    const auto r = sl({"generate", "apollonian", "--generations", "2", "--out", s / "a.txt"});
    CHECK(r.code == 0);
    CHECK(r.out == "nodes 7 edges 15\n");
    const Graph g = read_edge_list_file(s / "a.txt");
    CHECK(g.node_count() == 7);
    CHECK(g.edge_count() == 15);
    CHECK(slurp(s.dir / "a.txt").find("# command: generate") == 0);

    CHECK(sl({"generate", "er", "--n", "6", "--p", "0", "--out", s / "e.txt"}).code == 0);
    CHECK(read_edge_list_file(s / "e.txt").node_count() == 6);

    sl({"generate", "ba", "--n", "40", "--seed", "3", "--out", s / "b.txt"});
    const std::string first = slurp(s.dir / "b.txt");
    sl({"generate", "ba", "--n", "40", "--seed", "3", "--out", s / "b.txt"});
    CHECK(slurp(s.dir / "b.txt") == first);

    CHECK(sl({"generate", "torus"}).code == 2);
    CHECK(sl({"generate", "ba", "--n", "3", "--m", "5"}).code == 2);
    CHECK(sl({"frobnicate"}).code == 2);
  }

  TEST_CASE("simulate") {
    Scratch s("simulate");
    sl({"generate", "path", "--n", "5", "--out", s / "p.txt"});
    std::ofstream(s / "obs.txt") << "0\n4\n";
    const auto r = sl({"simulate", "--graph", s / "p.txt", "--source", "1", "--mu", "1", "--sigma", "0",
                       "--observers", s / "obs.txt", "--out", s / "o.csv", "--start-time", "2"});
    CHECK(r.code == 0);
    CHECK(slurp(s.dir / "o.csv") == "observer,from_node,time\n0,1,3.0\n4,3,5.0\n");
    CHECK(fs::exists(s / "o.csv.manifest.json"));

    const auto warn = sl({"simulate", "--graph", s / "p.txt", "--source", "4", "--mu", "1", "--sigma",
                          "0.5", "--observers", s / "obs.txt", "--out", s / "w.csv"});
    CHECK(warn.code == 0);
    CHECK(warn.err.find("source 4 is an observer") != std::string::npos);
    CHECK(warn.err.find("mu/sigma") != std::string::npos);

    const auto many = sl({"simulate", "--graph", s / "p.txt", "--source", "2", "--mu", "1", "--sigma",
                          "0.1", "--observers", "random:2", "--cascades", "3", "--out", s / "multi"});
    CHECK(many.code == 0);
    CHECK(fs::exists(s / "multi/cascade_0002.csv"));

    CHECK(sl({"simulate", "--graph", s / "p.txt", "--source", "9", "--mu", "1", "--sigma", "0",
              "--observers", "random:2", "--out", s / "x.csv"}).code == 2);
    CHECK(sl({"simulate", "--graph", s / "missing.txt", "--source", "0", "--mu", "1", "--sigma", "0",
              "--observers", "random:2", "--out", s / "x.csv"}).code == 2);
  }

  TEST_CASE("estimate") {
    Scratch s("estimate");
    sl({"generate", "path", "--n", "9", "--out", s / "p.txt"});
    std::ofstream(s / "obs.txt") << "0\n8\n";
    sl({"simulate", "--graph", s / "p.txt", "--source", "6", "--mu", "1", "--sigma", "1e-6",
        "--observers", s / "obs.txt", "--out", s / "o.csv"});
    const auto r = sl({"estimate", "--graph", s / "p.txt", "--observations", s / "o.csv", "--mu", "1",
                       "--sigma", "1e-6"});
    CHECK(r.code == 0);
    REQUIRE(rows(r.out).size() == 7);
    CHECK(rows(r.out)[0].rfind("1,6,", 0) == 0);
    CHECK(r.err == "estimate: 6\n");

    // One cascade in a directory gives the single-file ranking.
    fs::create_directories(s.dir / "one");
    fs::copy_file(s / "o.csv", s / "one/cascade_0000.csv");
    const auto dir = sl({"estimate", "--graph", s / "p.txt", "--cascades", s / "one", "--mu", "1",
                         "--sigma", "1e-6"});
    CHECK(dir.code == 0);
    CHECK(dir.out == r.out);

    sl({"generate", "cycle", "--n", "6", "--out", s / "c.txt"});
    std::ofstream(s / "c.csv") << "observer,from_node,time\n0,1,1.0\n3,2,1.0\n";
    CHECK(sl({"estimate", "--graph", s / "c.txt", "--observations", s / "c.csv", "--mu", "1", "--sigma",
              "0", "--mode", "tree"}).code == 2);
    const auto tie = sl({"estimate", "--graph", s / "c.txt", "--observations", s / "c.csv", "--mu", "1",
                         "--sigma", "0", "--mode", "graph"});
    CHECK(tie.code == 3);
    const auto blind = sl({"estimate", "--graph", s / "c.txt", "--observations", s / "c.csv", "--mu", "1",
                           "--sigma", "0", "--mode", "graph", "--no-graph-directions"});
    CHECK(rows(blind.out).size() == 4);
    CHECK(rows(tie.out).size() == 2);

    std::ofstream(s / "bad.csv") << "observer,from_node,time\n0,5,1.0\n";
    CHECK(sl({"estimate", "--graph", s / "p.txt", "--observations", s / "bad.csv", "--mu", "1", "--sigma",
              "0"}).code == 2);
    CHECK(sl({"estimate", "--graph", s / "p.txt", "--mu", "1", "--sigma", "0"}).code == 2);
  }

  TEST_CASE("experiment output ignores the thread count") {
    Scratch s("experiment");
    std::ofstream(s / "cfg.txt") << "experiment = sweep\nfamily = random_tree\nn = 30\n"
                                    "density_grid = 0.1, 0.2\ntrials = 100\nseed = 5\n";
    CHECK(sl({"experiment", "--config", s / "cfg.txt", "--out", s / "a.csv", "--threads", "1"}).code == 0);
    CHECK(sl({"experiment", "--config", s / "cfg.txt", "--out", s / "b.csv", "--threads", "8"}).code == 0);
    const std::string a = slurp(s.dir / "a.csv");
    CHECK(a == slurp(s.dir / "b.csv"));
    CHECK(a.find("param,p_loc,ci_low,ci_high,hop_err,trials\n") != std::string::npos);
    CHECK(a.find("# seed: 5") != std::string::npos);
    CHECK(fs::exists(s / "a.csv.manifest.json"));

    std::ofstream(s / "conv.txt") << "experiment = convergence\nfamily = random_tree\nn = 20\nk = 3\n"
                                     "sigma = 0.5\ncascade_grid = 1, 5\ntrials = 50\n";
    const auto conv = sl({"experiment", "--config", s / "conv.txt"});
    CHECK(conv.code == 0);
    CHECK(conv.out.find("# p_max: ") != std::string::npos);
    CHECK(conv.out.find("# gap C=5: ") != std::string::npos);

    std::ofstream(s / "bad.txt") << "n = 20\ncolour = blue\n";
    const auto bad = sl({"experiment", "--config", s / "bad.txt"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("colour") != std::string::npos);
  }
}
