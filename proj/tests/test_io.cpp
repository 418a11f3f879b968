#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "orthotour/geometry.hpp"
#include "orthotour/instances.hpp"
#include "orthotour/io.hpp"

using namespace orthotour;

namespace {

// All CLI fixtures and outputs live in a scratch directory so test runs
// never litter the working tree.
const bool kInScratchDir = [] {
  auto dir = std::filesystem::temp_directory_path() / "orthotour_io_test";
  std::filesystem::create_directories(dir);
  std::filesystem::current_path(dir);
  return true;
}();

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(bool(out));
}

int run(const std::string& args) {
  std::string cmd = std::string(ORTHOTOUR_BIN) + " " + args +
                    " >cli_stdout.txt 2>cli_stderr.txt";
  int rc = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(rc));
  return WEXITSTATUS(rc);
}

bool same_instance(const Instance& a, const Instance& b) {
  if (a.dims != b.dims || a.declared_class != b.declared_class) return false;
  if (a.polygons.size() != b.polygons.size()) return false;
  for (std::size_t i = 0; i < a.polygons.size(); ++i)
    if (a.polygons[i].vertices != b.polygons[i].vertices) return false;
  if (a.polytopes.size() != b.polytopes.size()) return false;
  for (std::size_t i = 0; i < a.polytopes.size(); ++i)
    if (a.polytopes[i].boxes != b.polytopes[i].boxes) return false;
  return true;
}

// Two unit squares at L1 distance 3; valid for every solver.
const char* kTwoSquares =
    R"({"class":"rectangles","dims":2,"polygons":[[[0,0],[1,0],[1,1],[0,1]],[[3,2],[4,2],[4,3],[3,3]]]})";

}  // namespace

TEST_CASE("instance files round-trip through the canonical form") {
  std::uint64_t seed = 100;
  int checked = 0;
  for (auto cls : {InstanceClass::kGeneral, InstanceClass::kStepDisjoint,
                   InstanceClass::kOrthoConvex, InstanceClass::kRectangles})
    for (int it = 0; it < 250; ++it) {
      Instance inst = gen_random(cls, 8 + it % 64, 1 + it % 7, seed++);
      std::string text = emit_instance(inst);
      Instance back = parse_instance(text);
      REQUIRE(same_instance(inst, back));
      REQUIRE(emit_instance(back) == text);
      REQUIRE(instance_hash(back) == instance_hash(inst));
      ++checked;
    }
  CHECK(checked == 1000);

  // 3-D: emission sorts the boxes of each polytope, so compare after one
  // canonicalizing round trip.
  Instance ov = gen_ov({{{1, 0}, {0, 1}}, {{1, 1}}});
  Instance back = parse_instance(emit_instance(ov));
  CHECK(emit_instance(back) == emit_instance(ov));
  CHECK(same_instance(back, parse_instance(emit_instance(back))));
  CHECK(instance_hash(back) == instance_hash(ov));
}

TEST_CASE("parse_instance rejects malformed input") {
  CHECK_THROWS_AS(parse_instance("not json"), ParseError);
  CHECK_THROWS_AS(parse_instance("[1,2]"), ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dims":4,"class":"general","polygons":[]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dims":2,"class":"bogus","polygons":[]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_instance(R"({"dims":2,"class":"general"})"),
                  ParseError);
  CHECK_THROWS_AS(
      parse_instance(
          R"({"dims":2,"class":"general","polygons":[[[0,0.5],[1,0],[1,1],[0,1]]]})"),
      ParseError);
  CHECK_THROWS_AS(
      parse_instance(
          R"({"dims":2,"class":"general","polygons":[[[0,1073741825],[1,0],[1,1],[0,1]]]})"),
      ParseError);
}

TEST_CASE("result records round-trip") {
  ResultRecord rec;
  rec.instance = "0123456789abcdef";
  rec.solver = "stepdisjoint";
  rec.length = 42;
  rec.wall_ms = 1.5;
  rec.hubs = 7;
  rec.fragments = 9;
  rec.stabbing = 3;
  rec.has_witness = true;
  rec.witness.entries = {{1, {0, 0}}, {2, {3, 4}}};
  ResultRecord back = parse_result(emit_result(rec));
  CHECK(back.instance == rec.instance);
  CHECK(back.solver == rec.solver);
  CHECK(back.length == rec.length);
  CHECK(back.wall_ms == rec.wall_ms);
  CHECK(back.hubs == rec.hubs);
  CHECK(back.fragments == rec.fragments);
  CHECK(back.stabbing == rec.stabbing);
  REQUIRE(back.has_witness);
  CHECK(back.witness.entries == rec.witness.entries);

  rec.witness.entries.clear();
  rec.witness3.points = {{1, 2, 3}, {4, 5, 6}};
  back = parse_result(emit_result(rec));
  REQUIRE(back.has_witness);
  CHECK(back.witness3.points == rec.witness3.points);

  rec.has_witness = false;
  back = parse_result(emit_result(rec));
  CHECK(!back.has_witness);
}

TEST_CASE("render_svg is structural and byte-deterministic") {
  Instance inst = gen_random(InstanceClass::kStepDisjoint, 60, 5, 11);
  Skeleton wit;
  for (std::size_t i = 1; i <= inst.k(); ++i)
    wit.entries.push_back({i, inst.polygons[i - 1].vertices.front()});
  std::string svg = render_svg(inst, &wit);
  CHECK(svg == render_svg(inst, &wit));
  CHECK(svg.rfind("<svg ", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  auto count = [&](const std::string& needle) {
    std::size_t c = 0;
    for (auto pos = svg.find(needle); pos != std::string::npos;
         pos = svg.find(needle, pos + 1))
      ++c;
    return c;
  };
  CHECK(count("<path ") == 5);
  CHECK(count("<text ") == 5);
  CHECK(count("<polyline ") == 1);
  std::string no_wit = render_svg(inst, nullptr);
  CHECK(no_wit.find("<polyline") == std::string::npos);
}

TEST_CASE("cli: solve agrees across all applicable algorithms") {
  spit("two_squares.json", kTwoSquares);
  for (const char* algo : {"auto", "oracle", "general", "rectangles",
                           "orthoconvex", "stepdisjoint"}) {
    CAPTURE(algo);
    REQUIRE(run(std::string("solve --algo ") + algo +
                " --in two_squares.json --witness --out res.json") == 0);
    ResultRecord rec = parse_result(slurp("res.json"));
    CHECK(rec.length == 3);
    REQUIRE(run("verify --in two_squares.json --result res.json") == 0);
  }
}

TEST_CASE("cli: exit codes for parse, class, and verify failures") {
  spit("garbage.json", "{nope");
  CHECK(run("solve --in garbage.json") == 2);
  CHECK(run("solve --in does_not_exist.json") == 2);

  // An L-shape declared as rectangles fails class validation.
  spit("bad_class.json",
       R"({"class":"rectangles","dims":2,"polygons":[[[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]]})");
  CHECK(run("solve --in bad_class.json") == 3);

  // Valid general instance with an L-shape: --algo rectangles rejects it.
  spit("lshape.json",
       R"({"class":"general","dims":2,"polygons":[[[0,0],[2,0],[2,1],[1,1],[1,2],[0,2]]]})");
  CHECK(run("solve --algo rectangles --in lshape.json") == 3);
  CHECK(run("solve --algo general --in lshape.json --out res.json") == 0);

  // Tampering with the record: wrong length, then a waypoint outside its
  // polygon; verify names the offending entry on stderr.
  REQUIRE(run("solve --in two_squares.json --witness --out res.json") == 0);
  std::string good = slurp("res.json");
  std::string bad_len = good;
  auto pos = bad_len.find("\"length\":3");
  REQUIRE(pos != std::string::npos);
  bad_len.replace(pos, 10, "\"length\":4");
  spit("res_bad.json", bad_len);
  CHECK(run("verify --in two_squares.json --result res_bad.json") == 5);

  ResultRecord rec = parse_result(good);
  REQUIRE(rec.witness.entries.size() >= 2);
  rec.witness.entries[1].point = {100, 100};
  spit("res_bad.json", emit_result(rec));
  CHECK(run("verify --in two_squares.json --result res_bad.json") == 5);
  std::string err = slurp("cli_stderr.txt");
  CHECK(err.find("entry 1") != std::string::npos);

  // A record for a different instance is rejected even if self-consistent.
  spit("lonely.json",
       R"({"class":"rectangles","dims":2,"polygons":[[[0,0],[1,0],[1,1],[0,1]]]})");
  CHECK(run("verify --in lonely.json --result res.json") == 5);
}

TEST_CASE("cli: gen is deterministic and bench emits one row per entry") {
  REQUIRE(run("gen --class ortho_convex --n 48 --k 4 --seed 9 --out g1.json") ==
          0);
  REQUIRE(run("gen --class ortho_convex --n 48 --k 4 --seed 9 --out g2.json") ==
          0);
  CHECK(slurp("g1.json") == slurp("g2.json"));
  CHECK(run("gen --class ortho_convex --n 48 --k 0") == 2);

  spit("suite.csv", "g1.json,auto\ng1.json,oracle\ntwo_squares.json,rectangles\n");
  REQUIRE(run("bench --suite suite.csv --repeat 3 --jobs 2 --out bench.csv") ==
          0);
  std::istringstream csv(slurp("bench.csv"));
  std::string line;
  REQUIRE(std::getline(csv, line));
  CHECK(line == "instance,algo,k,n,length,median_ms,hubs,fragments,stabbing");
  int rows = 0;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
  CHECK(run("bench --suite missing.csv") == 2);
}

TEST_CASE("cli: render writes one path per polygon and a witness polyline") {
  REQUIRE(run("gen --class general --n 50 --k 5 --seed 21 --out five.json") ==
          0);
  REQUIRE(run("solve --in five.json --witness --out five_res.json") == 0);
  REQUIRE(
      run("render --in five.json --result five_res.json --svg five.svg") == 0);
  std::string svg = slurp("five.svg");
  auto count = [&](const std::string& needle) {
    std::size_t c = 0;
    for (auto pos = svg.find(needle); pos != std::string::npos;
         pos = svg.find(needle, pos + 1))
      ++c;
    return c;
  };
  CHECK(count("<path ") == 5);
  CHECK(count("<polyline ") == 1);
  REQUIRE(run("render --in five.json --result five_res.json --svg f2.svg") ==
          0);
  CHECK(slurp("f2.svg") == svg);
}
