//
// cosetpack - certified coset-packing workbench for finitely generated groups
// SPDX-License-Identifier: Apache-2.0
//
// Batch front door: reads an experiment config (JSON), dispatches to the
// library, writes a JSON or CSV report. No interactive mode. Exit codes:
// 0 ok, 2 config error, 3 oracle refusal, 4 budget exhausted.

#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "cosetpack/ball.hpp"
#include "cosetpack/median.hpp"
#include "cosetpack/packing.hpp"
#include "cosetpack/quotient.hpp"
#include "cosetpack/relhyp.hpp"
#include "cosetpack/report.hpp"
#include "cosetpack/stallings.hpp"
#include "cosetpack/subgroup.hpp"

using nlohmann::json;
using namespace cosetpack;

namespace {

struct Options {
  std::string configPath;
  std::string outPath;
  std::optional<long long> seed;
  std::optional<long long> budget;
  bool noTimestamp = false;
};

struct Output {
  bool isCsv = false;
  json body;
  std::string csv;
};

json loadConfig(const Options& opts) {
  std::ifstream in(opts.configPath);
  if (!in) throw ConfigError("cannot open config file " + opts.configPath);
  json config;
  try {
    in >> config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (opts.seed) config["seed"] = *opts.seed;
  if (opts.budget) config["budget"] = *opts.budget;
  return config;
}

GroupPtr backendOf(const json& config) {
  if (!config.contains("backend")) throw ConfigError("config needs a \"backend\" descriptor");
  try {
    return Group::fromJson(config.at("backend"));
  } catch (const GroupError& e) {
    throw ConfigError(std::string("bad backend descriptor: ") + e.what());
  }
}

std::vector<Word> wordsOf(const Group& g, const json& arr) {
  std::vector<Word> out;
  for (const auto& s : arr) out.push_back(g.parse(s.get<std::string>()));
  return out;
}

long long budgetOf(const json& config, long long fallback = 2'000'000) {
  return config.contains("budget") ? config.at("budget").get<long long>() : fallback;
}

int intField(const json& config, const std::string& name) {
  if (!config.contains(name)) throw ConfigError("config needs \"" + name + "\"");
  return config.at(name).get<int>();
}

cube::MedianGraph graphOf(const json& config) {
  if (!config.contains("graph")) throw ConfigError("config needs a \"graph\"");
  const auto& g = config.at("graph");
  if (g.is_string()) {
    std::ifstream in(g.get<std::string>());
    if (!in) throw ConfigError("cannot open graph file " + g.get<std::string>());
    json j;
    in >> j;
    return cube::MedianGraph::fromJson(j);
  }
  return cube::MedianGraph::fromJson(g);
}

cube::MedianGraph verifiedGraphOf(const json& config) {
  auto g = graphOf(config);
  if (!g.verifyMedian().median) {
    throw OracleRefusal("input graph is not a median graph");
  }
  return g;
}

VertexSet setOf(const json& arr, int n) {
  VertexSet s(n);
  for (const auto& v : arr) s.set(v.get<int>());
  return s;
}

stallings::CoreGraph coreOf(const json& config, const Group& free) {
  return stallings::CoreGraph::fold(free.rank(), wordsOf(free, config.at("generators")));
}

Output dispatch(const std::string& command, const json& config) {
  Output out;
  // --- cayley ---
  if (command == "ball") {
    auto g = backendOf(config);
    std::vector<Word> gens;
    if (config.contains("generators")) gens = wordsOf(*g, config.at("generators"));
    out.body = Ball::create(g, intField(config, "R"), gens, budgetOf(config)).toJson();
    return out;
  }
  if (command == "dist") {
    auto g = backendOf(config);
    Ball ball = Ball::create(g, intField(config, "R"), {}, budgetOf(config));
    out.body = ball.dist(g->parseElement(config.at("x").get<std::string>()),
                         g->parseElement(config.at("y").get<std::string>()))
                   .toJson();
    return out;
  }
  if (command == "geodesic") {
    auto g = backendOf(config);
    Ball ball = Ball::create(g, intField(config, "R"), {}, budgetOf(config));
    Word w = ball.geodesic(g->parseElement(config.at("x").get<std::string>()),
                           g->parseElement(config.at("y").get<std::string>()));
    out.body = {{"word", g->render(w)}, {"length", w.size()}};
    return out;
  }
  // --- packing ---
  if (command == "coset-dist") {
    auto g = backendOf(config);
    auto h = SubgroupHandle::make(g, wordsOf(*g, config.at("subgroup")),
                                  config.value("enum_radius", 2 * intField(config, "R") + 2));
    out.body = cosetDistance(h, g->parseElement(config.at("g1").get<std::string>()),
                             g->parseElement(config.at("g2").get<std::string>()),
                             intField(config, "R"))
                   .toJson();
    return out;
  }
  if (command == "packing-profile") {
    auto g = backendOf(config);
    const int radius = intField(config, "R");
    auto h = SubgroupHandle::make(g, wordsOf(*g, config.at("subgroup")),
                                  config.value("enum_radius", 2 * radius + 6));
    auto profile = packingProfile(h, intField(config, "D_max"), radius,
                                  config.value("saturation_step", 2), budgetOf(config));
    out.isCsv = true;
    out.csv = "# config_hash=" + configHash(config) + "\n" + profile.toCsv();
    out.body = profile.toJson();
    return out;
  }
  if (command == "normal-count") {
    auto g = backendOf(config);
    const int radius = intField(config, "R");
    auto h = SubgroupHandle::make(g, wordsOf(*g, config.at("subgroup")),
                                  config.value("enum_radius", 2 * radius + 6));
    auto r = normalCloseCount(h, intField(config, "D"), radius, config.value("saturation_step", 2));
    out.body = {{"count", r.count}, {"saturated", r.saturated}, {"radius", r.radius}};
    return out;
  }
  if (command == "transfer-check") {
    out.body = checkTransferLaw(config.at("law").get<std::string>(), config.at("instance"));
    return out;
  }
  // --- stallings ---
  if (command.rfind("stallings.", 0) == 0) {
    auto g = makeFree(config.value("rank", 2));
    const std::string op = command.substr(10);
    if (op == "fold") {
      out.body = coreOf(config, *g).toJson();
      return out;
    }
    if (op == "member") {
      out.body = {{"member", coreOf(config, *g).member(g->parse(config.at("word").get<std::string>()))}};
      return out;
    }
    if (op == "dcs") {
      auto h = stallings::CoreGraph::fold(g->rank(), wordsOf(*g, config.at("H")));
      auto k = config.contains("K")
                   ? stallings::CoreGraph::fold(g->rank(), wordsOf(*g, config.at("K")))
                   : h;
      auto r = stallings::doubleCosetShortest(h, g->parse(config.at("g").get<std::string>()), k);
      std::string w = g->render(r.element);
      out.body = {{"element", w.empty() ? "1" : w}, {"length", r.length}};
      return out;
    }
    if (op == "fiber") {
      auto h = stallings::CoreGraph::fold(g->rank(), wordsOf(*g, config.at("H")));
      auto k = config.contains("K")
                   ? stallings::CoreGraph::fold(g->rank(), wordsOf(*g, config.at("K")))
                   : h;
      out.body = {{"entries", stallings::fiberProduct(h, k).toJson(*g)}};
      return out;
    }
    if (op == "height") {
      out.body = stallings::height(coreOf(config, *g)).toJson(*g);
      return out;
    }
    if (op == "width") {
      out.body =
          stallings::width(coreOf(config, *g), intField(config, "search_bound")).toJson(*g);
      return out;
    }
    if (op == "commensurator") {
      auto elems = stallings::commensuratorBall(coreOf(config, *g), intField(config, "R"));
      json arr = json::array();
      for (const auto& w : elems) {
        std::string s = g->render(w);
        arr.push_back(s.empty() ? "1" : s);
      }
      out.body = {{"elements", arr}};
      return out;
    }
    throw ConfigError("unknown stallings op '" + op + "'");
  }
  // --- cube ---
  if (command.rfind("cube.", 0) == 0) {
    const std::string op = command.substr(5);
    if (op == "verify-median") {
      auto g = graphOf(config);
      const auto& v = g.verifyMedian(config.value("exhaustive_limit", 400),
                                     config.value("seed", 1ULL), config.value("samples", 200000));
      out.body = {{"median", v.median}, {"exhaustive", v.exhaustive}};
      if (!v.median) {
        out.body["counterexample"] = {v.counterexample[0], v.counterexample[1], v.counterexample[2]};
      }
      return out;
    }
    auto g = verifiedGraphOf(config);
    if (op == "median") {
      out.body = {{"median", g.median(intField(config, "u"), intField(config, "v"),
                                      intField(config, "w"))}};
      return out;
    }
    if (op == "interval") {
      out.body = {{"vertices", g.interval(intField(config, "u"), intField(config, "v")).toVector()}};
      return out;
    }
    if (op == "hull") {
      VertexSet s = setOf(config.at("set"), g.vertexCount());
      out.body = {{"vertices", g.hull(s).toVector()},
                  {"convex", g.isConvex(setOf(config.at("set"), g.vertexCount()))}};
      return out;
    }
    if (op == "hyperplanes") {
      json arr = json::array();
      for (const auto& p : g.hyperplanes()) {
        json edges = json::array();
        for (auto [a, b] : p.edges) edges.push_back({a, b});
        arr.push_back({{"edges", edges},
                       {"side0", p.side0.toVector()},
                       {"side1", p.side1.toVector()},
                       {"carrier", p.carrier.toVector()}});
      }
      out.body = {{"count", arr.size()}, {"hyperplanes", arr}};
      return out;
    }
    if (op == "delta") {
      if (config.contains("set")) {
        VertexSet s = setOf(config.at("set"), g.vertexCount());
        out.body = {{"neighborhood", g.deltaNeighborhood(s, config.value("n", 1)).toVector()}};
      } else {
        json adj = json::array();
        for (int v = 0; v < g.vertexCount(); ++v) adj.push_back(g.deltaAdjacency()[static_cast<size_t>(v)]);
        out.body = {{"delta_adjacency", adj}};
      }
      return out;
    }
    if (op == "helly") {
      std::vector<VertexSet> sets;
      for (const auto& arr : config.at("sets")) sets.push_back(setOf(arr, g.vertexCount()));
      out.body = {{"vertex", g.helly(sets)}};
      return out;
    }
    if (op == "dual") {
      auto ws = cube::Wallspace::fromJson(config.at("wallspace"));
      auto d = cube::dual(ws);
      out.body = d.graph.toJson();
      out.body["median"] = d.graph.verifyMedian().median;
      return out;
    }
    if (op == "dimension") {
      out.body = {{"dimension", g.dimension()}};
      return out;
    }
    if (op == "packing-check") {
      std::vector<int> ids;
      if (config.contains("hyperplanes")) {
        ids = config.at("hyperplanes").get<std::vector<int>>();
      } else {
        for (size_t i = 0; i < g.hyperplanes().size(); ++i) ids.push_back(static_cast<int>(i));
      }
      auto r = g.hyperplanePacking(ids, intField(config, "d_prime"));
      out.body = {{"precondition_ok", r.preconditionOk},
                  {"vertex", r.vertex},
                  {"crossing_count", r.crossingCount}};
      return out;
    }
    throw ConfigError("unknown cube op '" + op + "'");
  }
  // --- rel ---
  if (command.rfind("rel.", 0) == 0) {
    const std::string op = command.substr(4);
    auto g = backendOf(config);
    auto ps = rel::PeripheralStructure::make(g);
    if (op == "dist") {
      Element x = g->parseElement(config.at("x").get<std::string>());
      Element y = g->parseElement(config.at("y").get<std::string>());
      auto cert = rel::relDist(ps, x, y);
      out.body = cert.toJson();
      if (config.contains("R")) {
        Ball ball = Ball::create(g, config.at("R").get<int>(), {}, budgetOf(config));
        out.body["bfs_value"] = rel::relDistBfs(ps, ball, x, y);
      }
      return out;
    }
    if (op == "saturation") {
      Ball ball = Ball::create(g, intField(config, "R"), {}, budgetOf(config));
      std::vector<Element> y;
      for (const auto& s : config.at("Y")) y.push_back(g->parseElement(s.get<std::string>()));
      out.body = rel::saturation(ps, y, intField(config, "nu"), ball).toJson(ps);
      return out;
    }
    if (op == "transition") {
      out.body = rel::transitionPoints(ps, g->parse(config.at("word").get<std::string>()),
                                       intField(config, "epsilon"), intField(config, "R_deep"))
                     .toJson(ps);
      return out;
    }
    if (op == "sigma") {
      auto h = SubgroupHandle::make(g, wordsOf(*g, config.at("subgroup")),
                                    config.value("enum_radius", 24));
      out.body = rel::relQcSigma(ps, h, config.value("sample_radius", 6),
                                 config.value("pairs", 200), config.value("seed", 7ULL))
                     .toJson();
      return out;
    }
    if (op == "constants") {
      rel::CampaignConfig cc;
      cc.radius = config.value("radius", 6);
      cc.triangles = config.value("triangles", 200);
      cc.ngons = config.value("ngons", 60);
      cc.pairs = config.value("pairs", 150);
      cc.seed = config.value("seed", 1ULL);
      out.body = rel::measureConstants(ps, cc).toJson();
      return out;
    }
    if (op == "packing") {
      const int radius = intField(config, "R");
      auto h = SubgroupHandle::make(g, wordsOf(*g, config.at("subgroup")),
                                    config.value("enum_radius", 2 * radius + 2));
      out.body = rel::relPackingProfile(ps, h, intField(config, "D_max"), radius).toJson(ps);
      return out;
    }
    throw ConfigError("unknown rel op '" + op + "'");
  }
  throw ConfigError("unknown command '" + command + "'");
}

int runCommand(const std::string& command, const Options& opts) {
  json config;
  try {
    config = loadConfig(opts);
    if (config.contains("command") && config.at("command").get<std::string>() != command) {
      throw ConfigError("config command '" + config.at("command").get<std::string>() +
                        "' does not match subcommand '" + command + "'");
    }
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump(1) << "\n";
    return 2;
  }
  try {
    Output out = dispatch(command, config);
    std::string text;
    if (out.isCsv) {
      text = out.csv;
    } else {
      text = reportEnvelope(command, config, out.body, !opts.noTimestamp).dump(1) + "\n";
    }
    if (opts.outPath.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(opts.outPath, std::ios::binary);
      if (!f) {
        std::cerr << json{{"error", {{"kind", "config"}, {"message", "cannot open output path"}}}}
                         .dump(1)
                  << "\n";
        return 2;
      }
      f << text;
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump(1) << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << json{{"error",
                       {{"kind", "budget"},
                        {"message", e.what()},
                        {"layer_reached", e.layer_reached}}}}
                     .dump(1)
              << "\n";
    return 4;
  } catch (const OracleRefusal& e) {
    std::cerr << json{{"error", {{"kind", "oracle_refusal"}, {"message", e.what()}}}}.dump(1)
              << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"kind", "oracle_refusal"}, {"message", e.what()}}}}.dump(1)
              << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cosetpack: certified coset packing, Stallings graphs, median-graph "
               "combinatorics and relative Cayley geometry"};
  app.require_subcommand(1);

  Options opts;
  const std::vector<std::string> commands = {
      "ball",          "dist",          "geodesic",      "coset-dist",
      "packing-profile", "normal-count", "transfer-check", "run"};
  const std::vector<std::string> stallingsOps = {"fold",  "member", "dcs",          "fiber",
                                                 "height", "width",  "commensurator"};
  const std::vector<std::string> cubeOps = {"verify-median", "median",     "interval", "hull",
                                            "hyperplanes",   "delta",      "helly",    "dual",
                                            "dimension",     "packing-check"};
  const std::vector<std::string> relOps = {"dist", "saturation", "transition",
                                           "sigma", "constants",  "packing"};

  auto addCommonFlags = [&](CLI::App* cmd) {
    cmd->add_option("--config", opts.configPath, "experiment config JSON")->required();
    cmd->add_option("--seed", [&opts](const CLI::results_t& r) {
      opts.seed = std::stoll(r[0]);
      return true;
    }, "override the config seed");
    cmd->add_option("--budget", [&opts](const CLI::results_t& r) {
      opts.budget = std::stoll(r[0]);
      return true;
    }, "override the element budget");
    cmd->add_option("--out", opts.outPath, "output path (default stdout)");
    cmd->add_flag("--no-timestamp", opts.noTimestamp, "omit the timestamp for byte-stable reports");
  };

  std::vector<std::pair<CLI::App*, std::string>> leaves;
  for (const auto& name : commands) {
    auto* cmd = app.add_subcommand(name);
    addCommonFlags(cmd);
    leaves.push_back({cmd, name});
  }
  auto* st = app.add_subcommand("stallings");
  st->require_subcommand(1);
  for (const auto& op : stallingsOps) {
    auto* cmd = st->add_subcommand(op);
    addCommonFlags(cmd);
    leaves.push_back({cmd, "stallings." + op});
  }
  auto* cb = app.add_subcommand("cube");
  cb->require_subcommand(1);
  for (const auto& op : cubeOps) {
    auto* cmd = cb->add_subcommand(op);
    addCommonFlags(cmd);
    leaves.push_back({cmd, "cube." + op});
  }
  auto* rl = app.add_subcommand("rel");
  rl->require_subcommand(1);
  for (const auto& op : relOps) {
    auto* cmd = rl->add_subcommand(op);
    addCommonFlags(cmd);
    leaves.push_back({cmd, "rel." + op});
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [cmd, name] : leaves) {
    if (cmd->parsed()) {
      if (name == "run") {
        // command comes from the config itself
        json config;
        try {
          config = loadConfig(opts);
          if (!config.contains("command")) throw ConfigError("config needs a \"command\"");
        } catch (const ConfigError& e) {
          std::cerr << json{{"error", {{"kind", "config"}, {"message", e.what()}}}}.dump(1) << "\n";
          return 2;
        }
        return runCommand(config.at("command").get<std::string>(), opts);
      }
      return runCommand(name, opts);
    }
  }
  return 2;
}
