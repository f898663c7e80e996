// mvcheck -- bounded consistency checking of networks of interrelated models.
//
// Exit codes: 0 consistent, 1 inconsistent, 2 unknown, 3 usage/IO/parse
// error. With --all, inconsistent dominates unknown.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mvcheck/checker.hpp"
#include "mvcheck/report.hpp"
#include "mvcheck/resolver.hpp"
#include "mvcheck/witness.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

int fail_usage(const std::string& msg) {
  std::cerr << "mvcheck: " << msg << "\n";
  return 3;
}

bool load_library(const std::string& path, mvcheck::Library& lib,
                  mvcheck::Diagnostics& diags) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "mvcheck: cannot open '" << path << "'\n";
    return false;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  lib.rootDir = std::filesystem::path(path).parent_path().string();
  lib.dol = mvcheck::parse_dol(ss.str(), diags);
  return true;
}

void flush_diags(const mvcheck::Diagnostics& diags) {
  if (!diags.items.empty()) std::cerr << diags.str();
}

bool emit(const std::string& text, const std::string& outFile) {
  if (outFile.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream out(outFile, std::ios::binary);
  if (!out) {
    std::cerr << "mvcheck: cannot write '" << outFile << "'\n";
    return false;
  }
  out << text;
  return true;
}

struct CheckArgs {
  std::string file;
  std::string network;
  bool all = false;
  std::string strategy = "incremental";
  std::string format = "text";
  std::string witnessDir;   // single network
  std::string witnessesDir; // base dir with --all
  std::string outFile;
  bool timings = false;
  mvcheck::Bounds bounds;
};

std::vector<std::string> network_names(const mvcheck::DolFile& dol) {
  std::vector<std::string> names;
  for (const auto& d : dol.decls)
    if (d.kind == mvcheck::DolDecl::Kind::Network) names.push_back(d.name);
  return names;
}

int run_check(const CheckArgs& a) {
  mvcheck::Diagnostics diags;
  mvcheck::Library lib;
  if (!load_library(a.file, lib, diags)) return 3;
  if (!diags.ok()) {
    flush_diags(diags);
    return 3;
  }
  auto strat = mvcheck::strategy_from(a.strategy);
  if (!strat)
    return fail_usage("unknown strategy '" + a.strategy +
                      "' (incremental, monolithic, decentralized)");
  if (a.format != "text" && a.format != "structured")
    return fail_usage("unknown format '" + a.format + "' (text, structured)");

  std::vector<std::string> names;
  if (a.all) {
    names = network_names(lib.dol);
    if (names.empty()) return fail_usage("'" + a.file + "' declares no networks");
  } else if (!a.network.empty()) {
    names.push_back(a.network);
  } else {
    names = network_names(lib.dol);
    if (names.size() != 1)
      return fail_usage(names.empty()
                            ? "'" + a.file + "' declares no networks"
                            : "several networks declared; pick one with "
                              "--network or check all with --all");
  }

  mvcheck::Resolver resolver(lib, diags);
  mvcheck::CheckOptions opts;
  opts.bounds = a.bounds;
  opts.strategy = *strat;
  opts.wantWitness = !a.witnessDir.empty() || !a.witnessesDir.empty();

  std::vector<mvcheck::ConsistencyReport> reports;
  bool sawInconsistent = false, sawUnknown = false;
  for (const auto& name : names) {
    auto net = resolver.network(name);
    if (!diags.ok()) {
      flush_diags(diags);
      return 3;
    }
    if (!net) {
      std::cerr << "mvcheck: no network named '" << name << "' in '" << a.file
                << "'\n";
      return 3;
    }
    auto t0 = std::chrono::steady_clock::now();
    mvcheck::Diagnostics cdiags;
    mvcheck::CheckResult r = mvcheck::check_network(*net, opts, cdiags);
    if (!cdiags.ok()) {
      flush_diags(cdiags);
      return 3;
    }
    flush_diags(cdiags);  // warnings only
    if (a.timings) {
      std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      r.report.wallSeconds = dt.count();
    }
    if (r.witness) {
      std::string dir = a.witnessDir;
      if (!a.witnessesDir.empty())
        dir = (std::filesystem::path(a.witnessesDir) / name).string();
      if (!dir.empty()) {
        mvcheck::Diagnostics wdiags;
        if (!mvcheck::write_witness(*r.witness, dir, wdiags)) {
          flush_diags(wdiags);
          return 3;
        }
      }
    }
    sawInconsistent = sawInconsistent ||
                      r.report.verdict == mvcheck::VerdictKind::Inconsistent;
    sawUnknown =
        sawUnknown || r.report.verdict == mvcheck::VerdictKind::Unknown;
    reports.push_back(std::move(r.report));
  }

  std::string text;
  if (a.format == "structured") {
    if (reports.size() == 1) {
      text = mvcheck::to_json(reports[0]);
    } else {
      auto arr = nlohmann::ordered_json::array();
      for (const auto& r : reports)
        arr.push_back(nlohmann::ordered_json::parse(mvcheck::to_json(r)));
      text = arr.dump(2) + "\n";
    }
  } else {
    for (size_t i = 0; i < reports.size(); ++i) {
      if (i) text += "\n";
      text += mvcheck::to_text(reports[i]);
    }
  }
  if (!emit(text, a.outFile)) return 3;
  if (sawInconsistent) return 1;
  if (sawUnknown) return 2;
  return 0;
}

int run_parse(const std::string& file, bool print) {
  mvcheck::Diagnostics diags;
  mvcheck::Library lib;
  if (!load_library(file, lib, diags)) return 3;
  mvcheck::Resolver resolver(lib, diags);
  mvcheck::ResolvedGraph g = resolver.resolve_all();
  flush_diags(diags);
  if (!diags.ok()) return 3;
  if (print) {
    std::cout << mvcheck::print_dol(lib.dol);
    return 0;
  }
  std::ostringstream out;
  out << "library " << (lib.dol.library.empty() ? "(unnamed)" : lib.dol.library)
      << ": " << g.models.size() << " models, " << g.refinements.size()
      << " refinements, " << g.networks.size() << " networks\n";
  for (const auto& [name, t] : g.models)
    out << "  model " << name << " : " << mvcheck::institution_name(t.institution)
        << "\n";
  for (const auto& r : g.refinements) out << "  refinement " << r.name << "\n";
  for (const auto& n : g.networks)
    out << "  network " << n.name << " (" << n.nodes.size() << " views, "
        << n.links.size() << " refinements)"
        << (n.expectConsistent ? " %consistent" : "") << "\n";
  std::cout << out.str();
  return 0;
}

int run_graph(const std::string& file, const std::string& outFile) {
  mvcheck::Diagnostics diags;
  mvcheck::Library lib;
  if (!load_library(file, lib, diags)) return 3;
  mvcheck::Resolver resolver(lib, diags);
  mvcheck::ResolvedGraph g = resolver.resolve_all();
  flush_diags(diags);
  if (!diags.ok()) return 3;
  if (!emit(mvcheck::export_dot(g), outFile)) return 3;
  return 0;
}

int run_witness(const std::string& file, const std::string& dir,
                std::string network, const mvcheck::Bounds& cliBounds,
                bool boundsSet) {
  mvcheck::Diagnostics diags;
  mvcheck::Library lib;
  if (!load_library(file, lib, diags)) return 3;
  if (!diags.ok()) {
    flush_diags(diags);
    return 3;
  }
  mvcheck::Diagnostics wdiags;
  auto bundle = mvcheck::read_witness(dir, wdiags);
  if (!bundle) {
    flush_diags(wdiags);
    return 3;
  }
  if (network.empty()) network = bundle->network;
  if (boundsSet) bundle->bounds = cliBounds;
  mvcheck::Resolver resolver(lib, diags);
  auto net = resolver.network(network);
  if (!diags.ok()) {
    flush_diags(diags);
    return 3;
  }
  if (!net) {
    std::cerr << "mvcheck: no network named '" << network << "' in '" << file
              << "'\n";
    return 3;
  }
  std::string why;
  mvcheck::Diagnostics vdiags;
  if (!mvcheck::verify_witness(*net, *bundle, vdiags, &why)) {
    std::cout << "witness for network " << network << ": INVALID -- " << why
              << "\n";
    return 1;
  }
  std::cout << "witness for network " << network << ": VALID\n";
  return 0;
}

void add_bounds_flags(CLI::App* cmd, mvcheck::Bounds& b) {
  cmd->add_option("--max-objects", b.maxObjectsPerClass,
                  "objects enumerated per class beyond the anchors");
  cmd->add_option("--depth", b.depth, "trace materialization horizon");
  cmd->add_option("--queue-depth", b.queueDepth,
                  "event queue capacity per object");
  cmd->add_option("--max-states", b.maxStates,
                  "transition-system state cap (resource bound)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounded consistency checking of networks of interrelated "
               "models"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::simple);

  CheckArgs ca;
  CLI::App* check = app.add_subcommand("check", "check a network's consistency");
  check->add_option("file", ca.file, "structuring file (.dol)")->required();
  check->add_option("--network", ca.network, "network to check");
  check->add_flag("--all", ca.all, "check every declared network");
  check->add_option("--strategy", ca.strategy,
                    "incremental | monolithic | decentralized");
  check->add_option("--format", ca.format, "text | structured");
  check->add_option("--witness", ca.witnessDir,
                    "directory for the witness bundle");
  check->add_option("--witnesses", ca.witnessesDir,
                    "base directory for per-network bundles (with --all)");
  check->add_option("--out", ca.outFile, "write the report here");
  check->add_flag("--timings", ca.timings,
                  "include wall-clock time (breaks byte determinism)");
  add_bounds_flags(check, ca.bounds);

  std::string parseFile;
  bool parsePrint = false;
  CLI::App* parse = app.add_subcommand("parse", "parse and resolve a library");
  parse->add_option("file", parseFile, "structuring file (.dol)")->required();
  parse->add_flag("--print", parsePrint, "pretty-print the library text");

  std::string graphFile, graphOut;
  CLI::App* graph =
      app.add_subcommand("graph", "export the model graph as GraphViz");
  graph->add_option("file", graphFile, "structuring file (.dol)")->required();
  graph->add_option("--out", graphOut, "write the graph here");

  std::string witFile, witDir, witNetwork;
  mvcheck::Bounds witBounds;
  CLI::App* witness =
      app.add_subcommand("witness", "re-verify a recorded witness bundle");
  witness->add_option("file", witFile, "structuring file (.dol)")->required();
  witness->add_option("dir", witDir, "witness bundle directory")->required();
  witness->add_option("--network", witNetwork,
                      "network to verify against (default: as recorded)");
  add_bounds_flags(witness, witBounds);

  CLI::App* version = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  if (version->parsed()) {
    std::cout << "mvcheck " << kVersion << "\n";
    return 0;
  }
  if (check->parsed()) {
    if (ca.all && !ca.network.empty())
      return fail_usage("--all and --network exclude each other");
    return run_check(ca);
  }
  if (parse->parsed()) return run_parse(parseFile, parsePrint);
  if (graph->parsed()) return run_graph(graphFile, graphOut);
  if (witness->parsed()) {
    bool boundsSet = witness->count("--max-objects") ||
                     witness->count("--depth") ||
                     witness->count("--queue-depth") ||
                     witness->count("--max-states");
    return run_witness(witFile, witDir, witNetwork, witBounds, boundsSet);
  }
  return 3;
}
