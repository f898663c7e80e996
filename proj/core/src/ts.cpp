#include "mvcheck/ts.hpp"

#include <algorithm>
#include <sstream>

namespace mvcheck {

bool EventLabel::operator<(const EventLabel& o) const {
  if (sender != o.sender) return sender < o.sender;
  if (receiver != o.receiver) return receiver < o.receiver;
  if (message != o.message) return message < o.message;
  return args < o.args;
}

std::string EventLabel::str() const {
  std::string out = sender + " -> " + receiver + " : " + message + "(";
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += value_str(args[i]);
  }
  return out + ")";
}

std::string trace_str(const Trace& t) {
  std::string out;
  for (const auto& e : t) {
    if (!out.empty()) out += "; ";
    out += e.str();
  }
  return "<" + out + ">";
}

std::string TsState::encode() const {
  std::string out = snapshot.encode();
  for (const auto& [id, rt] : runtime) {
    out += "|" + id + "@" + rt.control + "[";
    for (const auto& e : rt.queue) out += e.str() + ";";
    out += "]";
  }
  out += "|env[";
  for (const auto& e : envInbox) out += e.str() + ";";
  out += "]";
  return out;
}

std::vector<std::vector<int>> TransitionSystem::out_edges() const {
  std::vector<std::vector<int>> out(states.size());
  for (size_t i = 0; i < transitions.size(); ++i)
    out[(size_t)transitions[i].from].push_back((int)i);
  return out;
}

std::string TransitionSystem::canonical_text() const {
  // State numbering independent: sort state encodings, edges by encoding
  // triples. Duplicate-content states collapse in this view, which is also
  // the equality notion used for compatibility checks.
  std::vector<std::string> enc(states.size());
  for (size_t i = 0; i < states.size(); ++i) enc[i] = states[i].encode();
  std::vector<std::string> stateLines(enc);
  std::sort(stateLines.begin(), stateLines.end());
  stateLines.erase(std::unique(stateLines.begin(), stateLines.end()),
                   stateLines.end());
  std::set<std::string> initLines;
  for (int i : initial) initLines.insert(enc[(size_t)i]);
  std::set<std::string> edgeLines;
  for (const auto& t : transitions)
    edgeLines.insert(enc[(size_t)t.from] + " --" +
                     (t.observable ? t.label.str() : "tau") + "--> " +
                     enc[(size_t)t.to]);
  std::string out;
  for (const auto& s : stateLines) out += "state " + s + "\n";
  for (const auto& s : initLines) out += "init " + s + "\n";
  for (const auto& s : edgeLines) out += "edge " + s + "\n";
  return out;
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t TransitionSystem::digest() const {
  return fnv1a64(canonical_text());
}

TraceSet ts_traces(const TransitionSystem& ts, int depth, long long maxTraces,
                   bool* cut) {
  TraceSet out;
  out.depth = depth;
  if (cut) *cut = false;
  std::set<Trace> seen;
  seen.insert({});
  auto edges = ts.out_edges();
  // BFS over (state, trace) pairs; a visited set on pairs keeps silent
  // cycles from looping since they never extend the trace.
  std::set<std::pair<int, Trace>> visited;
  std::vector<std::pair<int, Trace>> frontier;
  for (int i : ts.initial) {
    frontier.push_back({i, {}});
    visited.insert({i, {}});
  }
  bool full = false;
  while (!frontier.empty() && !full) {
    std::vector<std::pair<int, Trace>> next;
    for (const auto& [st, tr] : frontier) {
      if (full) break;
      for (int ei : edges[(size_t)st]) {
        const auto& t = ts.transitions[(size_t)ei];
        Trace ext = tr;
        if (t.observable) {
          if ((int)tr.size() >= depth) {
            if (cut) *cut = true;  // an extension exists beyond the horizon
            continue;
          }
          if (maxTraces >= 0 && (long long)seen.size() >= maxTraces) {
            if (cut) *cut = true;
            full = true;
            break;
          }
          ext.push_back(t.label);
          seen.insert(ext);
        }
        if (visited.insert({t.to, ext}).second) next.push_back({t.to, ext});
      }
    }
    frontier = std::move(next);
  }
  out.traces.assign(seen.begin(), seen.end());
  return out;
}

Snapshot snapshot_reduct(const Snapshot& s, const SignatureFilter& f) {
  Snapshot r;
  for (const auto& [id, st] : s.objects) {
    if (!f.classes.count(st.cls)) continue;
    ObjectState o;
    o.cls = st.cls;
    for (const auto& [a, v] : st.attrs)
      if (f.attrs.count({st.cls, a})) o.attrs[a] = v;
    r.objects[id] = std::move(o);
  }
  for (const auto& [assoc, ls] : s.links) {
    if (!f.assocs.count(assoc)) continue;
    for (const auto& [x, y] : ls)
      if (r.objects.count(x) && r.objects.count(y))
        r.links[assoc].insert({x, y});
  }
  return r;
}

namespace {

bool event_visible(const EventLabel& e, const Snapshot& reducedSnapshot,
                   const SignatureFilter& f) {
  if (!f.messages.count(e.message)) return false;
  auto endpoint_kept = [&](const std::string& id) {
    return id == "env" || reducedSnapshot.objects.count(id) > 0;
  };
  return endpoint_kept(e.sender) && endpoint_kept(e.receiver);
}

}  // namespace

TransitionSystem ts_reduct(const TransitionSystem& ts,
                           const SignatureFilter& f) {
  TransitionSystem r;
  std::vector<int> stateMap(ts.states.size(), -1);
  std::map<std::string, int> byKey;
  for (size_t i = 0; i < ts.states.size(); ++i) {
    TsState ns;
    ns.snapshot = snapshot_reduct(ts.states[i].snapshot, f);
    for (const auto& [id, rt] : ts.states[i].runtime) {
      auto it = ts.states[i].snapshot.objects.find(id);
      if (it == ts.states[i].snapshot.objects.end()) continue;
      if (!f.keepRuntime.count(it->second.cls)) continue;
      ObjectRuntime nr;
      nr.control = rt.control;
      for (const auto& e : rt.queue)
        if (f.messages.count(e.message)) nr.queue.push_back(e);
      ns.runtime[id] = std::move(nr);
    }
    // env inbox is machine-level bookkeeping; reducts at the data level drop
    // it, machine-level reducts keep visible events.
    if (!f.keepRuntime.empty())
      for (const auto& e : ts.states[i].envInbox)
        if (f.messages.count(e.message)) ns.envInbox.push_back(e);
    std::string key = ns.encode();
    auto it = byKey.find(key);
    if (it == byKey.end()) {
      byKey[key] = (int)r.states.size();
      stateMap[i] = (int)r.states.size();
      r.states.push_back(std::move(ns));
    } else {
      stateMap[i] = it->second;
    }
  }
  std::set<int> inits;
  for (int i : ts.initial) inits.insert(stateMap[(size_t)i]);
  r.initial.assign(inits.begin(), inits.end());
  std::set<std::tuple<int, std::string, int>> seen;
  for (const auto& t : ts.transitions) {
    TsTransition nt;
    nt.from = stateMap[(size_t)t.from];
    nt.to = stateMap[(size_t)t.to];
    nt.observable =
        t.observable &&
        event_visible(t.label, r.states[(size_t)nt.from].snapshot, f);
    if (nt.observable) nt.label = t.label;
    if (!nt.observable && nt.from == nt.to) continue;  // silent self-loop
    std::string lk = nt.observable ? nt.label.str() : "~";
    if (seen.insert({nt.from, lk, nt.to}).second) r.transitions.push_back(nt);
  }
  r.exploredCompletely = ts.exploredCompletely;
  r.boundNote = ts.boundNote;
  return r;
}

TraceSet traceset_reduct(const TraceSet& t, const SignatureFilter& f) {
  TraceSet out;
  out.depth = t.depth;
  std::set<Trace> seen;
  for (const auto& tr : t.traces) {
    Trace nt;
    for (const auto& e : tr)
      if (f.messages.count(e.message)) nt.push_back(e);
    seen.insert(std::move(nt));
  }
  out.traces.assign(seen.begin(), seen.end());
  return out;
}

// ---- text serialization ----------------------------------------------------

std::string ts_text(const TransitionSystem& ts) {
  std::ostringstream out;
  out << "transitionsystem states=" << ts.states.size()
      << " transitions=" << ts.transitions.size()
      << " complete=" << (ts.exploredCompletely ? "true" : "false") << "\n";
  for (size_t i = 0; i < ts.states.size(); ++i) {
    out << "state s" << i << "\n";
    out << snapshot_text(ts.states[i].snapshot, "  ");
    for (const auto& [id, rt] : ts.states[i].runtime) {
      out << "  control " << id << " = " << rt.control << "\n";
      for (const auto& e : rt.queue) out << "  queued " << id << " : " << e.str() << "\n";
    }
    for (const auto& e : ts.states[i].envInbox)
      out << "  queued env : " << e.str() << "\n";
  }
  for (int i : ts.initial) out << "initial s" << i << "\n";
  for (const auto& t : ts.transitions) {
    out << "trans s" << t.from << " s" << t.to << " ";
    if (t.observable)
      out << t.label.str() << "\n";
    else
      out << "tau" << "\n";
  }
  return out.str();
}

bool parse_event_line(const std::string& line, EventLabel& out,
                      std::string& err) {
  Diagnostics d;
  auto toks = lex(line, d);
  TokenCursor cur(toks, d);
  out = EventLabel{};
  out.sender = cur.expect_ident("sender").text;
  cur.expect(Tok::Arrow, "'->'");
  out.receiver = cur.expect_ident("receiver").text;
  cur.expect(Tok::Colon, "':'");
  out.message = cur.expect_ident("message").text;
  if (cur.accept(Tok::LParen)) {
    while (!cur.at(Tok::RParen) && !cur.done()) {
      if (cur.at(Tok::Int)) {
        out.args.push_back(cur.get().value);
      } else if (cur.accept(Tok::Minus)) {
        out.args.push_back(-cur.expect(Tok::Int, "integer").value);
      } else if (cur.accept_ident("true")) {
        out.args.push_back(true);
      } else if (cur.accept_ident("false")) {
        out.args.push_back(false);
      } else {
        out.args.push_back(cur.expect_ident("argument").text);
      }
      if (!cur.accept(Tok::Comma)) break;
    }
    cur.expect(Tok::RParen, "')'");
  }
  if (!d.ok()) {
    err = d.str();
    return false;
  }
  return true;
}

TransitionSystem parse_ts_text(const std::string& text, Diagnostics& diags) {
  TransitionSystem ts;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  TsState* cur = nullptr;
  auto trim = [](std::string s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineNo;
    std::string t = trim(line);
    if (t.empty() || t.rfind("//", 0) == 0) continue;
    if (t.rfind("transitionsystem", 0) == 0) {
      ts.exploredCompletely = t.find("complete=true") != std::string::npos;
      continue;
    }
    std::istringstream ls(t);
    std::string word;
    ls >> word;
    if (word == "state") {
      ts.states.emplace_back();
      cur = &ts.states.back();
    } else if (word == "initial") {
      std::string sid;
      ls >> sid;
      ts.initial.push_back(std::stoi(sid.substr(1)));
    } else if (word == "control") {
      std::string id, eq, st;
      ls >> id >> eq >> st;
      if (cur) cur->runtime[id].control = st;
    } else if (word == "queued") {
      std::string id, colon;
      ls >> id >> colon;
      std::string rest;
      std::getline(ls, rest);
      EventLabel e;
      std::string err;
      if (!parse_event_line(trim(rest), e, err)) {
        diags.error(lineNo, 0, "bad queued event: " + err);
        continue;
      }
      if (!cur) continue;
      if (id == "env")
        cur->envInbox.push_back(e);
      else
        cur->runtime[id].queue.push_back(e);
    } else if (word == "trans") {
      std::string a, b;
      ls >> a >> b;
      std::string rest;
      std::getline(ls, rest);
      rest = trim(rest);
      TsTransition tr;
      tr.from = std::stoi(a.substr(1));
      tr.to = std::stoi(b.substr(1));
      if (rest == "tau") {
        tr.observable = false;
      } else {
        std::string err;
        if (!parse_event_line(rest, tr.label, err)) {
          diags.error(lineNo, 0, "bad transition label: " + err);
          continue;
        }
      }
      ts.transitions.push_back(std::move(tr));
    } else if (word == "link") {
      // link ASSOC (a, b)
      Diagnostics d2;
      auto toks = lex(t, d2);
      TokenCursor c2(toks, d2);
      c2.expect_keyword("link");
      std::string assoc = c2.expect_ident("assoc").text;
      c2.expect(Tok::LParen, "'('");
      std::string x = c2.expect_ident("id").text;
      c2.expect(Tok::Comma, "','");
      std::string y = c2.expect_ident("id").text;
      c2.expect(Tok::RParen, "')'");
      if (cur && d2.ok()) cur->snapshot.links[assoc].insert({x, y});
    } else {
      // object line: id: CLASS { a = v, ... }
      Diagnostics d2;
      auto toks = lex(t, d2);
      TokenCursor c2(toks, d2);
      std::string id = c2.expect_ident("object id").text;
      c2.expect(Tok::Colon, "':'");
      ObjectState st;
      st.cls = c2.expect_ident("class").text;
      c2.expect(Tok::LBrace, "'{'");
      while (!c2.at(Tok::RBrace) && !c2.done()) {
        std::string attr = c2.expect_ident("attr").text;
        c2.expect(Tok::Eq, "'='");
        if (c2.at(Tok::Int))
          st.attrs[attr] = c2.get().value;
        else if (c2.accept(Tok::Minus))
          st.attrs[attr] = -c2.expect(Tok::Int, "integer").value;
        else if (c2.accept_ident("true"))
          st.attrs[attr] = true;
        else if (c2.accept_ident("false"))
          st.attrs[attr] = false;
        else
          st.attrs[attr] = c2.expect_ident("value").text;
        c2.accept(Tok::Comma);
      }
      c2.expect(Tok::RBrace, "'}'");
      if (!d2.ok()) {
        diags.error(lineNo, 0, "unrecognized line in transition system text");
        continue;
      }
      if (cur) cur->snapshot.objects[id] = std::move(st);
    }
  }
  if (ts.initial.empty() && !ts.states.empty())
    diags.error(0, 0, "transition system text has no initial state");
  return ts;
}

}  // namespace mvcheck
