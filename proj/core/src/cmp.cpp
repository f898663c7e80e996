#include "mvcheck/cmp.hpp"

#include <algorithm>
#include <set>

namespace mvcheck {

const PartDef* Component::find_part(const std::string& n) const {
  for (const auto& p : parts)
    if (p.name == n) return &p;
  return nullptr;
}

namespace {

std::vector<std::string> parse_message_list(TokenCursor& cur) {
  std::vector<std::string> out;
  if (cur.accept(Tok::Colon)) {
    do {
      out.push_back(cur.expect_ident("message").text);
    } while (cur.accept(Tok::Comma));
  }
  return out;
}

}  // namespace

Component parse_cmp(const std::string& text, Diagnostics& diags) {
  auto toks = lex(text, diags);
  if (!diags.ok()) return {};
  TokenCursor cur(toks, diags);
  Component c;
  cur.expect_keyword("component");
  c.line = cur.peek().line;
  c.name = cur.expect_ident("component name").text;
  cur.expect(Tok::LBrace, "'{'");
  while (!cur.at(Tok::RBrace) && !cur.done() && diags.ok()) {
    if (cur.accept_ident("part")) {
      PartDef p;
      p.line = cur.peek().line;
      p.name = cur.expect_ident("part name").text;
      cur.expect(Tok::Colon, "':'");
      p.cls = cur.expect_ident("part class").text;
      if (cur.accept_ident("machine"))
        p.machine = cur.expect_ident("machine name").text;
      c.parts.push_back(std::move(p));
    } else if (cur.accept_ident("connector")) {
      ConnectorDef k;
      k.line = cur.peek().line;
      k.a = cur.expect_ident("part").text;
      cur.expect(Tok::DashDash, "'--'");
      k.b = cur.expect_ident("part").text;
      k.messages = parse_message_list(cur);
      c.connectors.push_back(std::move(k));
    } else if (cur.accept_ident("gate")) {
      GateDef g;
      g.line = cur.peek().line;
      g.name = cur.expect_ident("gate name").text;
      cur.expect(Tok::Arrow, "'->'");
      g.part = cur.expect_ident("part").text;
      g.messages = parse_message_list(cur);
      c.gates.push_back(std::move(g));
    } else {
      cur.error_here("expected part, connector, or gate");
      break;
    }
    cur.accept(Tok::Semi);
  }
  cur.expect(Tok::RBrace, "'}'");
  if (!diags.ok()) return {};
  return c;
}

void wellformed_cmp(const Component& c, const ClassModel& m,
                    const std::map<std::string, const StateMachine*>& machines,
                    Diagnostics& diags) {
  std::set<std::string> names;
  for (const auto& p : c.parts) {
    if (!names.insert(p.name).second)
      diags.error(p.line, 0, "duplicate part '" + p.name + "'");
    if (!m.find_class(p.cls))
      diags.error(p.line, 0, "part '" + p.name + "' has unknown class '" +
                                 p.cls + "'");
    if (!p.machine.empty()) {
      auto it = machines.find(p.machine);
      if (it == machines.end()) {
        diags.error(p.line, 0, "part '" + p.name + "' names unknown machine '" +
                                   p.machine + "'");
      } else if (it->second->contextClass != p.cls) {
        diags.error(p.line, 0,
                    "part '" + p.name + "' of class '" + p.cls +
                        "' runs machine '" + p.machine + "' for class '" +
                        it->second->contextClass + "'");
      }
    }
  }
  // A part-less component is a fragment; its connector/gate part names are
  // resolved after composition.
  bool fragment = c.parts.empty();
  auto known_reception = [&](const std::string& cls, const std::string& msg) {
    return m.find_class(cls) && m.find_reception(cls, msg) != nullptr;
  };
  for (const auto& k : c.connectors) {
    const PartDef* pa = c.find_part(k.a);
    const PartDef* pb = c.find_part(k.b);
    if (!fragment) {
      if (!pa) diags.error(k.line, 0, "connector end '" + k.a + "' is not a part");
      if (!pb) diags.error(k.line, 0, "connector end '" + k.b + "' is not a part");
    }
    if (pa && pb)
      for (const auto& msg : k.messages)
        if (!known_reception(pa->cls, msg) && !known_reception(pb->cls, msg))
          diags.error(k.line, 0,
                      "connector message '" + msg +
                          "' is not a reception of '" + pa->cls + "' or '" +
                          pb->cls + "'");
  }
  for (const auto& g : c.gates) {
    const PartDef* p = c.find_part(g.part);
    if (!fragment && !p)
      diags.error(g.line, 0, "gate target '" + g.part + "' is not a part");
    if (p)
      for (const auto& msg : g.messages)
        if (!known_reception(p->cls, msg))
          diags.error(g.line, 0, "gate message '" + msg +
                                     "' is not a reception of '" + p->cls +
                                     "'");
  }
  if (fragment) return;
  // Every role-send of every part machine must be carried by a connector to
  // each part of the partner class.
  auto carried = [&](const std::string& pa, const std::string& pb,
                     const std::string& msg) {
    for (const auto& k : c.connectors) {
      bool touches = (k.a == pa && k.b == pb) || (k.a == pb && k.b == pa);
      if (!touches) continue;
      if (k.messages.empty() ||
          std::find(k.messages.begin(), k.messages.end(), msg) !=
              k.messages.end())
        return true;
    }
    return false;
  };
  for (const auto& p : c.parts) {
    if (p.machine.empty()) continue;
    auto it = machines.find(p.machine);
    if (it == machines.end()) continue;
    for (const auto& t : it->second->transitions)
      for (const auto& e : t.effects) {
        if (e.kind != Effect::Kind::Send || e.target == "env") continue;
        for (const auto& [assoc, atA] : roles_from(m, p.cls, e.target)) {
          const std::string& partnerCls = atA ? assoc->b.cls : assoc->a.cls;
          for (const auto& q : c.parts) {
            if (!m.is_subclass_of(q.cls, partnerCls)) continue;
            if (!carried(p.name, q.name, e.message))
              diags.error(e.line, 0,
                          "machine of part '" + p.name + "' sends '" +
                              e.message + "' to role '" + e.target +
                              "' but no connector to part '" + q.name +
                              "' carries it");
          }
        }
      }
  }
}

std::vector<std::string> cmp_sentences(const Component& c) {
  std::vector<std::string> out;
  for (const auto& p : c.parts) {
    std::string s = "part " + p.name + " : " + p.cls;
    if (!p.machine.empty()) s += " machine " + p.machine;
    out.push_back(s);
  }
  for (const auto& k : c.connectors) {
    std::string s = "connector " + k.a + " -- " + k.b;
    for (size_t i = 0; i < k.messages.size(); ++i)
      s += (i ? ", " : " : ") + k.messages[i];
    out.push_back(s);
  }
  for (const auto& g : c.gates) {
    std::string s = "gate " + g.name + " -> " + g.part;
    for (size_t i = 0; i < g.messages.size(); ++i)
      s += (i ? ", " : " : ") + g.messages[i];
    out.push_back(s);
  }
  return out;
}

}  // namespace mvcheck
