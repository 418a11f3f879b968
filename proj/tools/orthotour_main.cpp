#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "orthotour/geometry.hpp"
#include "orthotour/instances.hpp"
#include "orthotour/io.hpp"
#include "orthotour/oracle.hpp"
#include "orthotour/solver_general.hpp"
#include "orthotour/solver_orthoconvex.hpp"
#include "orthotour/solver_rectangles.hpp"
#include "orthotour/solver_stepdisjoint.hpp"

namespace {

using namespace orthotour;

// Exit codes: 0 ok, 2 parse / missing file, 3 class validation, 4 resource
// budget, 5 verification mismatch.
constexpr int kOk = 0, kParse = 2, kClass = 3, kBudget = 4, kMismatch = 5;

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  return bool(out);
}

struct SolveOutcome {
  std::string solver;
  TourResult result;
  std::uint64_t hubs = 0, fragments = 0, stabbing = 0;
};

std::string resolve_algo(const std::string& algo, const Instance& inst) {
  if (algo != "auto") return algo;
  if (inst.dims == 3) return "oracle";
  switch (inst.declared_class) {
    case InstanceClass::kRectangles:
      return "rectangles";
    case InstanceClass::kOrthoConvex:
      return "orthoconvex";
    case InstanceClass::kStepDisjoint:
      return "stepdisjoint";
    case InstanceClass::kGeneral:
      break;
  }
  return "general";
}

SolveOutcome run_solver(const std::string& algo, const Instance& inst) {
  SolveOutcome out;
  out.solver = resolve_algo(algo, inst);
  if (inst.dims == 3) {
    if (out.solver != "oracle")
      throw ClassError("3-D instances are solved by --algo oracle only");
    out.result = solve_oracle_3d(inst);
    return out;
  }
  if (out.solver == "oracle") {
    out.result = solve_oracle_2d(inst);
  } else if (out.solver == "rectangles") {
    out.result = solve_rectangles(inst);
  } else if (out.solver == "orthoconvex") {
    OrthoConvexStats stats;
    out.result = solve_orthoconvex(inst, &stats);
    out.fragments = stats.max_iteration_fragments;
  } else if (out.solver == "stepdisjoint") {
    StepDisjointStats stats;
    out.result = solve_stepdisjoint(inst, {}, &stats);
    out.hubs = stats.hubs;
    out.stabbing = stats.stabbing;
  } else {
    out.result = solve_general(inst);
  }
  return out;
}

int fail(int code, const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return code;
}

struct SolveArgs {
  std::string algo = "auto", in, out;
  bool witness = false;
};

int solved_record(const SolveArgs& a, ResultRecord& rec, Instance& inst) {
  auto text = read_file(a.in);
  if (!text) return fail(kParse, "cannot read " + a.in);
  try {
    inst = parse_instance(*text);
  } catch (const ParseError& e) {
    return fail(kParse, e.what());
  }
  if (auto err = validate_instance(inst)) return fail(kClass, *err);
  try {
    auto t0 = std::chrono::steady_clock::now();
    SolveOutcome res = run_solver(a.algo, inst);
    auto t1 = std::chrono::steady_clock::now();
    rec.instance = instance_hash(inst);
    rec.solver = res.solver;
    rec.length = res.result.length;
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rec.hubs = res.hubs;
    rec.fragments = res.fragments;
    rec.stabbing = res.stabbing;
    if (a.witness) {
      rec.has_witness = true;
      rec.witness = res.result.skeleton;
      rec.witness3 = res.result.skeleton3;
    }
  } catch (const ClassError& e) {
    return fail(kClass, e.what());
  } catch (const ResourceError& e) {
    return fail(kBudget, e.what());
  }
  return kOk;
}

int cmd_solve(const SolveArgs& a) {
  ResultRecord rec;
  Instance inst;
  if (int code = solved_record(a, rec, inst); code != kOk) return code;
  if (!write_output(a.out, emit_result(rec) + "\n"))
    return fail(kParse, "cannot write " + a.out);
  return kOk;
}

int cmd_verify(const std::string& in, const std::string& result) {
  auto itext = read_file(in), rtext = read_file(result);
  if (!itext) return fail(kParse, "cannot read " + in);
  if (!rtext) return fail(kParse, "cannot read " + result);
  Instance inst;
  ResultRecord rec;
  try {
    inst = parse_instance(*itext);
    rec = parse_result(*rtext);
  } catch (const ParseError& e) {
    return fail(kParse, e.what());
  }
  if (rec.instance != instance_hash(inst))
    return fail(kMismatch, "record was produced for a different instance");
  if (!rec.has_witness) return fail(kMismatch, "record carries no witness");
  Length length = 0;
  if (inst.dims == 2) {
    if (auto v = validate_skeleton(inst, rec.witness, &length))
      return fail(kMismatch, "witness entry " + std::to_string(v->entry) +
                                 ": " + v->message);
  } else {
    if (auto v = validate_skeleton3(inst, rec.witness3, &length))
      return fail(kMismatch, "witness entry " + std::to_string(v->entry) +
                                 ": " + v->message);
  }
  if (length != rec.length)
    return fail(kMismatch, "recorded length " + std::to_string(rec.length) +
                               " but witness has length " +
                               std::to_string(length));
  std::cout << "ok " << length << "\n";
  return kOk;
}

int cmd_gen(const std::string& cls, std::size_t n, std::size_t k,
            std::uint64_t seed, const std::string& out) {
  auto parsed = instance_class_from_string(cls);
  if (!parsed) return fail(kParse, "unknown class: " + cls);
  Instance inst;
  try {
    inst = gen_random(*parsed, n, k, seed);
  } catch (const std::invalid_argument& e) {
    return fail(kParse, e.what());
  }
  if (!write_output(out, emit_instance(inst) + "\n"))
    return fail(kParse, "cannot write " + out);
  return kOk;
}

int cmd_render(const std::string& in, const std::string& result,
               const std::string& svg) {
  auto itext = read_file(in);
  if (!itext) return fail(kParse, "cannot read " + in);
  Instance inst;
  ResultRecord rec;
  try {
    inst = parse_instance(*itext);
    if (!result.empty()) {
      auto rtext = read_file(result);
      if (!rtext) return fail(kParse, "cannot read " + result);
      rec = parse_result(*rtext);
    }
  } catch (const ParseError& e) {
    return fail(kParse, e.what());
  }
  if (inst.dims != 2) return fail(kClass, "render supports 2-D instances only");
  const Skeleton* witness = rec.has_witness ? &rec.witness : nullptr;
  if (!write_output(svg, render_svg(inst, witness)))
    return fail(kParse, "cannot write " + svg);
  return kOk;
}

int cmd_bench(const std::string& suite, int repeat, int jobs,
              const std::string& out) {
  auto text = read_file(suite);
  if (!text) return fail(kParse, "cannot read " + suite);
  struct Entry {
    std::string path, algo;
  };
  std::vector<Entry> entries;
  std::istringstream lines(*text);
  for (std::string line; std::getline(lines, line);) {
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      return fail(kParse, "suite line must be 'instance,algo': " + line);
    entries.push_back({line.substr(0, comma), line.substr(comma + 1)});
  }
  std::vector<std::string> rows(entries.size());
  std::vector<int> codes(entries.size(), kOk);
  auto work = [&](std::size_t e) {
    SolveArgs args;
    args.in = entries[e].path;
    args.algo = entries[e].algo;
    std::vector<double> times;
    ResultRecord rec;
    Instance inst;
    for (int r = 0; r < repeat; ++r) {
      if (int code = solved_record(args, rec, inst); code != kOk) {
        codes[e] = code;
        return;
      }
      times.push_back(rec.wall_ms);
    }
    std::sort(times.begin(), times.end());
    std::ostringstream row;
    row << entries[e].path << "," << rec.solver << "," << inst.k() << ","
        << inst.total_vertices() << "," << rec.length << ","
        << times[times.size() / 2] << "," << rec.hubs << "," << rec.fragments
        << "," << rec.stabbing;
    rows[e] = row.str();
  };
  if (jobs <= 1) {
    for (std::size_t e = 0; e < entries.size(); ++e) work(e);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t e; (e = next++) < entries.size();) work(e);
      });
    for (auto& t : pool) t.join();
  }
  for (int code : codes)
    if (code != kOk) return code;
  std::ostringstream csv;
  csv << "instance,algo,k,n,length,median_ms,hubs,fragments,stabbing\n";
  for (const auto& row : rows) csv << row << "\n";
  if (!write_output(out, csv.str())) return fail(kParse, "cannot write " + out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact L1 touring of orthogonal polygon sequences"};
  app.require_subcommand(1);

  std::string cls = "general", in, out, result, svg, suite;
  std::string algo = "auto";
  std::size_t n = 40, k = 4;
  std::uint64_t seed = 0;
  bool witness = false;
  int repeat = 3, jobs = 1;

  auto* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  gen->add_option("--class", cls,
                  "general|step_disjoint|ortho_convex|rectangles");
  gen->add_option("--n", n, "target total vertex count");
  gen->add_option("--k", k, "number of polygons");
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--out", out, "output file (default stdout)");

  auto* solve = app.add_subcommand("solve", "Solve an instance file");
  solve
      ->add_option("--algo", algo,
                   "auto|oracle|general|rectangles|orthoconvex|stepdisjoint")
      ->check(CLI::IsMember({"auto", "oracle", "general", "rectangles",
                             "orthoconvex", "stepdisjoint"}));
  solve->add_option("--in", in, "instance file")->required();
  solve->add_option("--out", out, "result file (default stdout)");
  solve->add_flag("--witness", witness, "include the witness skeleton");

  auto* verify = app.add_subcommand("verify", "Re-verify a result record");
  verify->add_option("--in", in, "instance file")->required();
  verify->add_option("--result", result, "result file")->required();

  auto* bench =
      app.add_subcommand("bench", "Time a suite of (instance, algo) pairs");
  bench->add_option("--suite", suite, "CSV file of instance,algo lines")
      ->required();
  bench->add_option("--repeat", repeat, "repetitions per entry")
      ->check(CLI::PositiveNumber);
  bench->add_option("--jobs", jobs, "parallel workers")
      ->check(CLI::PositiveNumber);
  bench->add_option("--out", out, "CSV output file (default stdout)");

  auto* render =
      app.add_subcommand("render", "Render instance and witness as SVG");
  render->add_option("--in", in, "instance file")->required();
  render->add_option("--result", result, "result file with witness");
  render->add_option("--svg", svg, "SVG output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) return cmd_gen(cls, n, k, seed, out);
  if (solve->parsed()) return cmd_solve({algo, in, out, witness});
  if (verify->parsed()) return cmd_verify(in, result);
  if (bench->parsed()) return cmd_bench(suite, repeat, jobs, out);
  if (render->parsed()) return cmd_render(in, result, svg);
  return kOk;
}
