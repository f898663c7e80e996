#include "mvcheck/snapshot.hpp"

#include <algorithm>

namespace mvcheck {

std::vector<std::string> Snapshot::objects_of_class(
    const ClassModel& m, const std::string& cls) const {
  std::vector<std::string> out;
  for (const auto& [id, st] : objects)
    if (st.cls == cls || m.is_subclass_of(st.cls, cls)) out.push_back(id);
  return out;
}

std::string Snapshot::encode() const {
  std::string out;
  for (const auto& [id, st] : objects) {
    out += id + ":" + st.cls;
    for (const auto& [a, v] : st.attrs) out += "," + a + "=" + value_str(v);
    out += ";";
  }
  for (const auto& [assoc, ls] : links) {
    out += assoc + "{";
    for (const auto& [x, y] : ls) out += "(" + x + "," + y + ")";
    out += "}";
  }
  return out;
}

namespace {

// Enumerate all per-class permutations of object ids, rename, encode, and
// take the least encoding. Objects are renamed to <class>_<i>.
void permute_classes(
    const std::vector<std::pair<std::string, std::vector<std::string>>>& groups,
    size_t gi, std::map<std::string, std::string>& rename, const Snapshot& s,
    std::string& best) {
  if (gi == groups.size()) {
    Snapshot r;
    for (const auto& [id, st] : s.objects) r.objects[rename[id]] = st;
    for (const auto& [assoc, ls] : s.links) {
      auto& out = r.links[assoc];
      for (const auto& [x, y] : ls) out.insert({rename[x], rename[y]});
    }
    std::string enc = r.encode();
    if (best.empty() || enc < best) best = enc;
    return;
  }
  std::vector<std::string> ids = groups[gi].second;
  std::sort(ids.begin(), ids.end());
  do {
    for (size_t i = 0; i < ids.size(); ++i)
      rename[ids[i]] = groups[gi].first + "_" + std::to_string(i + 1);
    permute_classes(groups, gi + 1, rename, s, best);
  } while (std::next_permutation(ids.begin(), ids.end()));
}

}  // namespace

std::string Snapshot::canonical_key() const {
  std::map<std::string, std::vector<std::string>> byClass;
  for (const auto& [id, st] : objects) byClass[st.cls].push_back(id);
  std::vector<std::pair<std::string, std::vector<std::string>>> groups(
      byClass.begin(), byClass.end());
  std::map<std::string, std::string> rename;
  std::string best;
  permute_classes(groups, 0, rename, *this, best);
  return best;
}

namespace {

bool check_typing(const Snapshot& s, const ClassModel& m, Diagnostics* diags) {
  bool ok = true;
  auto err = [&](const std::string& msg) {
    ok = false;
    if (diags)
      diags->error(0, 0, msg, CheckNature::Semantic, CheckScope::Structural);
  };
  for (const auto& [id, st] : s.objects) {
    const ClassDef* c = m.find_class(st.cls);
    if (!c) {
      err("object '" + id + "' has unknown class '" + st.cls + "'");
      continue;
    }
    auto attrs = m.all_attrs(st.cls);
    for (const auto& a : attrs) {
      auto it = st.attrs.find(a.name);
      if (it == st.attrs.end()) {
        err("object '" + id + "' misses a value for attribute '" + a.name + "'");
        continue;
      }
      if (!value_in_type(it->second, a.type))
        err("object '" + id + "': value " + value_str(it->second) +
            " outside type " + a.type.str() + " of attribute '" + a.name + "'");
    }
    for (const auto& [an, _] : st.attrs) {
      bool known = false;
      for (const auto& a : attrs)
        if (a.name == an) known = true;
      if (!known)
        err("object '" + id + "' values unknown attribute '" + an + "'");
    }
  }
  for (const auto& [assoc, ls] : s.links) {
    const AssocDef* a = m.find_assoc(assoc);
    if (!a) {
      err("link set references unknown association '" + assoc + "'");
      continue;
    }
    for (const auto& [x, y] : ls) {
      auto xi = s.objects.find(x);
      auto yi = s.objects.find(y);
      if (xi == s.objects.end() || yi == s.objects.end()) {
        err("link " + assoc + "(" + x + "," + y + ") references missing object");
        continue;
      }
      if (!m.is_subclass_of(xi->second.cls, a->a.cls))
        err("link " + assoc + "(" + x + "," + y + "): '" + x +
            "' is not a " + a->a.cls);
      if (!m.is_subclass_of(yi->second.cls, a->b.cls))
        err("link " + assoc + "(" + x + "," + y + "): '" + y +
            "' is not a " + a->b.cls);
    }
  }
  return ok;
}

}  // namespace

bool holds_sentence(const Snapshot& s, const ClassModel& m,
                    const CdSentence& st) {
  if (st.kind == CdSentence::Kind::Invariant) {
    for (const auto& id : s.objects_of_class(m, st.inv.cls)) {
      ExprEnv env;
      env.attrs = &s.objects.at(id).attrs;
      Value v = eval_expr(*st.inv.expr, env);
      if (!std::get<bool>(v)) return false;
    }
    return true;
  }
  const AssocDef* a = m.find_assoc(st.mult.assoc);
  if (!a) return false;
  auto linksIt = s.links.find(st.mult.assoc);
  static const std::set<std::pair<std::string, std::string>> kNoLinks;
  const auto& ls = linksIt == s.links.end() ? kNoLinks : linksIt->second;
  // The bound written at one end constrains, for every object at the other
  // end, how many partners it has at this end.
  const std::string& srcCls = st.mult.at_end_b ? a->a.cls : a->b.cls;
  const std::string& endCls = st.mult.at_end_b ? a->b.cls : a->a.cls;
  for (const auto& id : s.objects_of_class(m, srcCls)) {
    long long n = 0;
    for (const auto& [x, y] : ls)
      if ((st.mult.at_end_b ? x : y) == id) ++n;
    if (n < st.mult.mult.lo) return false;
    if (!st.mult.mult.unbounded() && n > st.mult.mult.hi) return false;
  }
  // A mandatory end (lower bound >= 1) asserts its class is inhabited.
  if (st.mult.mult.lo >= 1 && s.objects_of_class(m, endCls).empty())
    return false;
  return true;
}

bool conforms(const Snapshot& s, const ClassModel& m, Diagnostics& diags) {
  bool ok = check_typing(s, m, &diags);
  for (const auto& st : cd_sentences(m)) {
    if (!holds_sentence(s, m, st)) {
      ok = false;
      diags.error(0, 0, "snapshot violates " + st.str(), CheckNature::Semantic,
                  CheckScope::Structural);
    }
  }
  return ok;
}

bool conforms(const Snapshot& s, const ClassModel& m) {
  if (!check_typing(s, m, nullptr)) return false;
  for (const auto& st : cd_sentences(m))
    if (!holds_sentence(s, m, st)) return false;
  return true;
}

// ---- object diagrams -------------------------------------------------------

ObjectDiagram parse_od(const std::string& text, Diagnostics& diags) {
  ObjectDiagram od;
  auto toks = lex(text, diags);
  TokenCursor cur(toks, diags);
  cur.expect_keyword("objectdiagram");
  od.name = cur.expect_ident("object diagram name").text;
  cur.expect_keyword("for");
  od.context = cur.expect_ident("class diagram name").text;
  cur.expect(Tok::LBrace, "'{'");
  while (!cur.at(Tok::RBrace) && !cur.done()) {
    if (cur.accept_ident("link")) {
      std::string assoc = cur.expect_ident("association name").text;
      cur.expect(Tok::LParen, "'('");
      std::string x = cur.expect_ident("object id").text;
      cur.expect(Tok::Comma, "','");
      std::string y = cur.expect_ident("object id").text;
      cur.expect(Tok::RParen, "')'");
      od.snapshot.links[assoc].insert({x, y});
    } else if (cur.at(Tok::Ident)) {
      std::string id = cur.get().text;
      cur.expect(Tok::Colon, "':'");
      ObjectState st;
      st.cls = cur.expect_ident("class name").text;
      cur.expect(Tok::LBrace, "'{'");
      while (!cur.at(Tok::RBrace) && !cur.done()) {
        std::string attr = cur.expect_ident("attribute name").text;
        cur.expect(Tok::Eq, "'='");
        if (cur.at(Tok::Int)) {
          st.attrs[attr] = cur.get().value;
        } else if (cur.accept(Tok::Minus)) {
          st.attrs[attr] = -cur.expect(Tok::Int, "integer").value;
        } else if (cur.accept_ident("true")) {
          st.attrs[attr] = true;
        } else if (cur.accept_ident("false")) {
          st.attrs[attr] = false;
        } else {
          st.attrs[attr] = cur.expect_ident("value").text;  // enum literal
        }
        cur.accept(Tok::Comma);
        cur.accept(Tok::Semi);
      }
      cur.expect(Tok::RBrace, "'}'");
      if (od.snapshot.objects.count(id))
        diags.error(cur.peek().line, 0, "duplicate object id '" + id + "'");
      od.snapshot.objects[id] = std::move(st);
    } else {
      cur.error_here("expected object declaration or 'link'");
      cur.get();
    }
  }
  cur.expect(Tok::RBrace, "'}'");
  return od;
}

bool wellformed_od(const ObjectDiagram& od, const ClassModel& m,
                   Diagnostics& diags) {
  size_t before = diags.items.size();
  if (!m.name.empty() && od.context != m.name)
    diags.error(0, 0, "object diagram '" + od.name + "' is for '" +
                          od.context + "', not '" + m.name + "'");
  check_typing(od.snapshot, m, &diags);
  return diags.items.size() == before;
}

bool embeds(const Snapshot& s, const Snapshot& part) {
  for (const auto& [id, st] : part.objects) {
    auto it = s.objects.find(id);
    if (it == s.objects.end() || !(it->second == st)) return false;
  }
  for (const auto& [assoc, ls] : part.links) {
    auto it = s.links.find(assoc);
    if (it == s.links.end()) {
      if (!ls.empty()) return false;
      continue;
    }
    for (const auto& l : ls)
      if (!it->second.count(l)) return false;
  }
  return true;
}

std::string snapshot_text(const Snapshot& s, const std::string& indent) {
  std::string out;
  for (const auto& [id, st] : s.objects) {
    out += indent + id + ": " + st.cls + " {";
    bool first = true;
    for (const auto& [a, v] : st.attrs) {
      out += first ? " " : ", ";
      out += a + " = " + value_str(v);
      first = false;
    }
    out += first ? "}" : " }";
    out += "\n";
  }
  for (const auto& [assoc, ls] : s.links)
    for (const auto& [x, y] : ls)
      out += indent + "link " + assoc + " (" + x + ", " + y + ")\n";
  return out;
}

std::string od_text(const ObjectDiagram& od) {
  std::string out = "objectdiagram " + od.name + " for " + od.context + " {\n";
  out += snapshot_text(od.snapshot, "  ");
  out += "}\n";
  return out;
}

}  // namespace mvcheck
