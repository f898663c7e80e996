#include "mvcheck/witness.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "mvcheck/snapshot.hpp"

namespace mvcheck {

using ordered_json = nlohmann::ordered_json;

std::string hex_digest(std::uint64_t d) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << d;
  return os.str();
}

namespace {

bool write_file(const std::string& path, const std::string& content,
                Diagnostics& diags) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    diags.error(0, 0, "cannot write '" + path + "'");
    return false;
  }
  out << content;
  return true;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// The filmstrip replays the trace through the system: each observable event
// followed by the snapshot it leads to. Hidden moves in between are elided.
std::string filmstrip(const WitnessBundle& b) {
  std::ostringstream os;
  os << "network " << b.network << "\n";
  os << "initial\n" << snapshot_text(b.init(), "  ");
  if (b.trace.empty()) {
    os << "(empty trace)\n";
    return os.str();
  }
  const TransitionSystem& ts = b.systemTs;
  auto out = ts.out_edges();
  // breadth-first over hidden moves to find the next observable event
  std::vector<int> frontier = {ts.initial.at(0)};
  int at = ts.initial.at(0);
  bool lost = false;
  for (const auto& ev : b.trace) {
    std::vector<int> seen;
    std::vector<int> queue = {at};
    int next = -1;
    while (!queue.empty() && next < 0) {
      int s = queue.front();
      queue.erase(queue.begin());
      if (std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
      seen.push_back(s);
      for (int ti : out[s]) {
        const TsTransition& t = ts.transitions[ti];
        if (t.observable && t.label == ev) {
          next = t.to;
          break;
        }
        if (!t.observable) queue.push_back(t.to);
      }
    }
    if (next < 0) {
      os << ev.str() << "\n  (state not reproduced)\n";
      lost = true;
      break;
    }
    at = next;
    os << ev.str() << "\n" << snapshot_text(ts.states[at].snapshot, "  ");
  }
  if (!lost) os << "(end of trace)\n";
  return os.str();
}

}  // namespace

bool write_witness(const WitnessBundle& b, const std::string& dir,
                   Diagnostics& diags) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    diags.error(0, 0, "cannot create '" + dir + "': " + ec.message());
    return false;
  }
  ordered_json j;
  j["network"] = b.network;
  j["bounds"] = {{"maxObjectsPerClass", b.bounds.maxObjectsPerClass},
                 {"depth", b.bounds.depth},
                 {"queueDepth", b.bounds.queueDepth},
                 {"maxStates", b.bounds.maxStates}};
  ordered_json tr = ordered_json::array();
  for (const auto& ev : b.trace) tr.push_back(ev.str());
  j["trace"] = tr;
  ordered_json dg = ordered_json::object();
  for (const auto& [k, v] : b.digests) dg[k] = v;
  j["digests"] = dg;
  bool ok = write_file(dir + "/manifest.json", j.dump(2) + "\n", diags);
  ok = write_file(dir + "/system_ts.txt", ts_text(b.systemTs), diags) && ok;
  ok = write_file(dir + "/trace.txt", filmstrip(b), diags) && ok;
  return ok;
}

std::optional<WitnessBundle> read_witness(const std::string& dir,
                                          Diagnostics& diags) {
  auto manifest = read_file(dir + "/manifest.json");
  if (!manifest) {
    diags.error(0, 0, "cannot read '" + dir + "/manifest.json'");
    return std::nullopt;
  }
  auto tsText = read_file(dir + "/system_ts.txt");
  if (!tsText) {
    diags.error(0, 0, "cannot read '" + dir + "/system_ts.txt'");
    return std::nullopt;
  }
  WitnessBundle b;
  try {
    ordered_json j = ordered_json::parse(*manifest);
    b.network = j.at("network").get<std::string>();
    const auto& bounds = j.at("bounds");
    b.bounds.maxObjectsPerClass = bounds.at("maxObjectsPerClass").get<int>();
    b.bounds.depth = bounds.at("depth").get<int>();
    b.bounds.queueDepth = bounds.at("queueDepth").get<int>();
    b.bounds.maxStates = bounds.at("maxStates").get<int>();
    for (const auto& line : j.at("trace")) {
      EventLabel ev;
      std::string err;
      if (!parse_event_line(line.get<std::string>(), ev, err)) {
        diags.error(0, 0, "bad trace line '" + line.get<std::string>() +
                              "': " + err);
        return std::nullopt;
      }
      b.trace.push_back(std::move(ev));
    }
    for (const auto& [k, v] : j.at("digests").items())
      b.digests[k] = v.get<std::string>();
  } catch (const std::exception& e) {
    diags.error(0, 0, "bad manifest in '" + dir + "': " + e.what());
    return std::nullopt;
  }
  size_t before = diags.items.size();
  b.systemTs = parse_ts_text(*tsText, diags);
  if (diags.items.size() != before) return std::nullopt;
  if (b.systemTs.initial.empty() || b.systemTs.states.empty()) {
    diags.error(0, 0, "witness system in '" + dir + "' has no initial state");
    return std::nullopt;
  }
  return b;
}

}  // namespace mvcheck
