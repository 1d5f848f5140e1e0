// chordaut: automorphism groups and isomorphism of chordal graphs.

#include <chrono>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chordaut/chordal.hpp"
#include "chordaut/io.hpp"
#include "chordaut/testkit.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace chordaut;

namespace {

enum Exit : int { kOk = 0, kMismatch = 1, kNotChordal = 2, kBadInput = 3 };

// Input problems all surface as ParseError so that they map to one exit code.
Graph load_graph(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const std::runtime_error& e) {
    throw ParseError(e.what());
  }
  return parse_graph(text);
}

Coloring load_coloring(const std::optional<std::string>& path, int n) {
  if (!path) return Coloring::uniform(n);
  std::string text;
  try {
    text = read_file(*path);
  } catch (const std::runtime_error& e) {
    throw ParseError(e.what());
  }
  return parse_coloring(text, n);
}

std::optional<int> bound_opt(int l) { return l > 0 ? std::optional<int>(l) : std::nullopt; }

int cmd_aut(const std::string& path, const std::optional<std::string>& colors, int bound, bool as_json) {
  Graph g = load_graph(path);
  Coloring pi = load_coloring(colors, g.n());
  auto t0 = std::chrono::steady_clock::now();
  AutResult r = aut_report(g, pi, bound_opt(bound));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto& gens = r.group.generators();
  for (const auto& s : gens)
    if (!is_automorphism(g, &pi, s.images())) throw std::logic_error("emitted generator is not an automorphism");
  if (as_json) {
    json out;
    out["order"] = r.group.order().str();
    out["generators"] = json::array();
    for (const auto& s : gens) out["generators"].push_back(s.images());
    out["leafage_bound"] = r.leafage_bound;
    out["n"] = g.n();
    std::cout << out.dump() << '\n';
    return kOk;
  }
  std::cout << "n " << g.n() << '\n'
            << "order " << r.group.order().str() << '\n'
            << "leafage_bound " << r.leafage_bound << '\n'
            << "critical_iterations " << r.critical_iterations << '\n'
            << "twin_levels " << r.twin_levels << '\n'
            << "seconds " << secs << '\n'
            << "generators " << gens.size() << '\n';
  for (const auto& s : gens) std::cout << s.cycle_string() << '\n';
  return kOk;
}

int cmd_iso(const std::string& a, const std::string& b, int bound, bool as_json) {
  Graph x = load_graph(a), y = load_graph(b);
  auto m = iso(x, y, bound_opt(bound));
  if (!m) {
    std::cout << "non-isomorphic\n";
    return kMismatch;
  }
  if (as_json) {
    std::cout << json{{"isomorphic", true}, {"mapping", m->images()}}.dump() << '\n';
  } else {
    for (int v = 0; v < x.n(); ++v) std::cout << v << ' ' << (*m)[v] << '\n';
  }
  return kOk;
}

int cmd_gen(int n, int leaves, std::uint64_t seed, const std::string& out, bool twinless, int colors) {
  testkit::GeneratorConfig cfg;
  cfg.n = n;
  cfg.leaf_bound = leaves;
  cfg.seed = seed;
  cfg.twinless = twinless;
  cfg.colored = colors > 1;
  cfg.num_colors = colors;
  auto in = testkit::gen_chordal(cfg);
  const fs::path p(out);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream(p) << write_edge_list(in.graph);
  if (in.coloring.size() > 1) {
    fs::path cp = p;
    cp.replace_extension(".colors");
    std::ofstream(cp) << write_coloring(in.coloring);
  }
  return kOk;
}

// Cross-checks every corpus entry against the brute-force oracles. An
// optional <name>.order file pins the expected group order.
int cmd_verify(const std::string& dir, int bound, std::uint64_t seed) {
  if (!fs::is_directory(dir)) throw ParseError("not a directory: " + dir);
  std::mt19937_64 rng(seed);
  int bad = 0, checked = 0;
  for (const auto& e : testkit::load_corpus(dir)) {
    std::vector<std::string> problems;
    const auto& g = e.graph;
    PermGroup grp = aut(g, e.coloring, bound_opt(bound));
    for (const auto& s : grp.generators())
      if (!is_automorphism(g, &e.coloring, s.images())) problems.push_back("generator fails");
    const std::string order = grp.order().str();
    if (g.n() <= testkit::kBruteLimit) {
      auto ref = testkit::brute_aut(g, e.coloring).order().str();
      if (ref != order) problems.push_back("order " + order + " vs brute " + ref);
    }
    const fs::path pinned = fs::path(dir) / (e.name + ".order");
    if (fs::exists(pinned)) {
      auto want = detail::trim(read_file(pinned.string()));
      if (want != order) problems.push_back("order " + order + " vs pinned " + want);
    }
    Graph shuffled = testkit::relabel(g, testkit::random_permutation(rng, g.n()));
    auto m = iso(g, shuffled, bound_opt(bound));
    if (!m || !is_isomorphism(g, shuffled, m->images())) problems.push_back("relabeled copy not matched");
    ++checked;
    if (problems.empty()) {
      std::cout << "ok " << e.name << " order " << order << '\n';
    } else {
      ++bad;
      std::cout << "MISMATCH " << e.name;
      for (const auto& p : problems) std::cout << " | " << p;
      std::cout << '\n';
    }
  }
  std::cout << checked << " checked, " << bad << " mismatches\n";
  return bad == 0 ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Automorphism groups and isomorphism of chordal graphs.\n"
               "Graphs are read as graph6 when the first byte is a graph6 byte, else as an\n"
               "edge list (\"n m\" then m lines \"u v\", 0-based). Colorings are lines \"v c\".\n"
               "Without --leafage-bound the critical-set threshold starts at 2 and doubles\n"
               "whenever the refinement loop deadlocks (iterative deepening). Exit codes:\n"
               "0 success, 1 non-isomorphic or verification mismatch, 2 non-chordal input,\n"
               "3 unreadable or malformed input."};
  app.require_subcommand(1);
  int bound = 0;
  bool as_json = false;
  app.add_option("--leafage-bound,-L", bound, "fixed threshold L (default: iterative deepening)")->check(CLI::NonNegativeNumber);
  app.add_flag("--json", as_json, "machine-readable output");

  auto* a = app.add_subcommand("aut", "generating set of the automorphism group");
  std::string graph_path;
  std::optional<std::string> color_path;
  a->add_option("graph", graph_path, "graph file")->required();
  a->add_option("coloring", color_path, "optional vertex coloring file");

  auto* i = app.add_subcommand("iso", "isomorphism test with certificate");
  std::string path_a, path_b;
  i->add_option("graph_a", path_a)->required();
  i->add_option("graph_b", path_b)->required();

  auto* gcmd = app.add_subcommand("gen", "write a random chordal graph with a bounded-leaf host tree");
  int gen_n = 0, gen_leaves = 0, gen_colors = 1;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  bool gen_twinless = false;
  gcmd->add_option("n", gen_n)->required()->check(CLI::PositiveNumber);
  gcmd->add_option("leaves", gen_leaves)->required()->check(CLI::PositiveNumber);
  gcmd->add_option("seed", gen_seed)->required();
  gcmd->add_option("out", gen_out)->required();
  gcmd->add_flag("--twinless", gen_twinless, "collapse equally colored twins");
  gcmd->add_option("--colors", gen_colors, "number of random vertex colors")->check(CLI::PositiveNumber);

  auto* v = app.add_subcommand("verify", "cross-check a corpus directory against brute force");
  std::string corpus;
  std::uint64_t verify_seed = 1;
  v->add_option("corpus", corpus)->required();
  v->add_option("--seed", verify_seed, "seed for the relabeled copies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*a) return cmd_aut(graph_path, color_path, bound, as_json);
    if (*i) return cmd_iso(path_a, path_b, bound, as_json);
    if (*gcmd) return cmd_gen(gen_n, gen_leaves, gen_seed, gen_out, gen_twinless, gen_colors);
    if (*v) return cmd_verify(corpus, bound, verify_seed);
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kBadInput;
  } catch (const GraphError& e) {
    std::cerr << "not chordal: " << e.what() << '\n';
    return kNotChordal;
  }
  return kOk;
}
