#include "mvcheck/resolver.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace mvcheck {

namespace {

std::string join(const std::string& dir, const std::string& file) {
  if (dir.empty()) return file;
  return dir + "/" + file;
}

void collect_refs(const ModelExpr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case ModelExpr::Kind::Ref:
      out.push_back(e.name);
      return;
    case ModelExpr::Kind::Reveal:
      collect_refs(*e.lhs, out);
      out.push_back(e.name);  // the window is a model too
      return;
    case ModelExpr::Kind::And:
    case ModelExpr::Kind::Then:
      collect_refs(*e.lhs, out);
      collect_refs(*e.rhs, out);
      return;
    default:
      if (e.lhs) collect_refs(*e.lhs, out);
      return;
  }
}

void collect_self_attrs(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::SelfAttr) out.insert(e.text);
  if (e.lhs) collect_self_attrs(*e.lhs, out);
  if (e.rhs) collect_self_attrs(*e.rhs, out);
}

}  // namespace

std::optional<std::string> Library::read(const std::string& filename) const {
  auto it = overrides.find(filename);
  if (it != overrides.end()) return it->second;
  std::ifstream in(join(rootDir, filename), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool Library::exists(const std::string& filename) const {
  if (overrides.count(filename)) return true;
  return std::filesystem::exists(join(rootDir, filename));
}

Resolver::Resolver(const Library& lib, Diagnostics& diags,
                   const MorphismRegistry& reg)
    : lib_(lib), diags_(diags), reg_(reg) {}

Theory Resolver::model(const std::string& name) {
  auto it = cache_.find(name);
  if (it != cache_.end()) return it->second;
  if (!inProgress_.insert(name).second) {
    diags_.error(0, 0, "cyclic model reference involving '" + name + "'");
    return {};
  }
  Theory t;
  const DolDecl* d = lib_.dol.find(name);
  if (d && d->kind == DolDecl::Kind::Model) {
    t = eval(*d->expr);
  } else if (d) {
    diags_.error(d->line, 0,
                 "'" + name + "' is declared as a " +
                     (d->kind == DolDecl::Kind::Refinement ? "refinement"
                                                           : "network") +
                     ", not a model");
  } else {
    t = load_file(name, 0);
  }
  t.name = name;
  inProgress_.erase(name);
  cache_.emplace(name, t);
  order_.push_back(name);
  return t;
}

Theory Resolver::load_file(const std::string& name, int line) {
  static const char* kExts[] = {".cd", ".od", ".stm", ".sd", ".cmp"};
  std::vector<std::string> found;
  for (const char* e : kExts)
    if (lib_.exists(name + e)) found.push_back(name + e);
  if (found.empty()) {
    diags_.error(line, 0,
                 "no model named '" + name + "': not declared, and none of " +
                     name + ".{cd,od,stm,sd,cmp} exists" +
                     (lib_.rootDir.empty() ? "" : " in " + lib_.rootDir));
    return {};
  }
  if (found.size() > 1) {
    std::string all;
    for (const auto& f : found) all += (all.empty() ? "" : ", ") + f;
    diags_.error(line, 0, "ambiguous model '" + name + "': " + all);
    return {};
  }
  std::string text = *lib_.read(found[0]);
  std::string ext = found[0].substr(found[0].rfind('.'));

  Theory t;
  t.name = name;
  if (ext == ".cd") {
    t.institution = InstitutionId::CD;
    t.data = parse_cd(text, diags_);
    wellformed_cd(t.data, diags_);
  } else if (ext == ".od") {
    ObjectDiagram od = parse_od(text, diags_);
    Theory ctx = model(od.context);
    if (ctx.institution != InstitutionId::CD || ctx.data.empty()) {
      diags_.error(line, 0, "object diagram '" + name + "' needs a class" +
                                "-diagram context, but '" + od.context +
                                "' is not one");
      return t;
    }
    wellformed_od(od, ctx.data, diags_);
    // An object-diagram node contributes typing and an initial-state anchor;
    // invariants and multiplicities stay with the class-diagram node.
    t.institution = InstitutionId::CD;
    t.data = ctx.data;
    t.data.invariants.clear();
    for (auto& a : t.data.assocs) {
      a.a.mult = Mult{0, Mult::kUnbounded};
      a.b.mult = Mult{0, Mult::kUnbounded};
    }
    t.dataSentences = false;
    t.anchors = {od};
  } else if (ext == ".stm") {
    t.institution = InstitutionId::STM;
    t.machines.push_back(parse_stm(text, diags_));
  } else if (ext == ".sd") {
    t.institution = InstitutionId::SD;
    InteractionModel sd = parse_sd(text, diags_);
    wellformed_sd(sd, diags_);
    t.interaction = std::make_shared<InteractionModel>(std::move(sd));
  } else {  // .cmp
    t.institution = InstitutionId::CMP;
    t.component = parse_cmp(text, diags_);
  }
  return t;
}

Theory Resolver::eval(const ModelExpr& e) {
  switch (e.kind) {
    case ModelExpr::Kind::Ref:
      return model(e.name);
    case ModelExpr::Kind::Braced:
      return eval(*e.lhs);
    case ModelExpr::Kind::And:
    case ModelExpr::Kind::Then: {
      Theory a = eval(*e.lhs);
      Theory b = eval(*e.rhs);
      Theory m = merge_theories(a, b, diags_);
      validate_theory(m, diags_);
      return m;
    }
    case ModelExpr::Kind::WithTranslation: {
      Theory a = eval(*e.lhs);
      auto it = reg_.comorphisms.find(e.name);
      if (it == reg_.comorphisms.end()) {
        if (reg_.morphisms.count(e.name))
          diags_.error(e.line, 0,
                       "'" + e.name + "' projects theories; use 'hide along " +
                           e.name + "'");
        else
          diags_.error(e.line, 0, "unknown translation '" + e.name + "'");
        return a;
      }
      if (it->second.from != a.institution) {
        diags_.error(e.line, 0,
                     "translation '" + e.name + "' starts from " +
                         institution_name(it->second.from) + ", got a " +
                         institution_name(a.institution) + " theory");
        return a;
      }
      return it->second.embed(a, diags_);
    }
    case ModelExpr::Kind::WithRename: {
      Theory a = eval(*e.lhs);
      return rename(a, e.renames, e.line);
    }
    case ModelExpr::Kind::HideAlong: {
      Theory a = eval(*e.lhs);
      auto it = reg_.morphisms.find(e.name);
      if (it == reg_.morphisms.end()) {
        if (reg_.comorphisms.count(e.name))
          diags_.error(e.line, 0,
                       "'" + e.name + "' embeds theories; use 'with " +
                           "translation " + e.name + "'");
        else
          diags_.error(e.line, 0, "unknown morphism '" + e.name + "'");
        return a;
      }
      if (it->second.from != a.institution) {
        diags_.error(e.line, 0,
                     "morphism '" + e.name + "' starts from " +
                         institution_name(it->second.from) + ", got a " +
                         institution_name(a.institution) + " theory");
        return a;
      }
      Theory t = it->second.project(a, diags_);
      t.hiddenSource = std::make_shared<Theory>(std::move(a));
      t.hideMorph = e.name;
      return t;
    }
    case ModelExpr::Kind::Reveal: {
      Theory a = eval(*e.lhs);
      return reveal(a, e.name, e.line);
    }
  }
  return {};
}

Theory Resolver::rename(
    const Theory& base,
    const std::vector<std::pair<std::string, std::string>>& renames,
    int line) {
  SignatureMorphism s;
  s.institution = base.institution;
  for (const auto& [from, to] : renames) {
    auto dot = from.find('.');
    if (dot != std::string::npos) {
      std::string cls = from.substr(0, dot), attr = from.substr(dot + 1);
      bool known = false;
      for (const auto& a : base.data.all_attrs(cls)) known |= a.name == attr;
      if (!known) {
        diags_.error(line, 0, "unknown attribute '" + from + "' in rename");
        continue;
      }
      s.attrMap[{cls, attr}] = to;
      continue;
    }
    if (base.component.find_part(from) ||
        (base.interaction && base.interaction->find_lifeline(from))) {
      s.partMap[from] = to;
      continue;
    }
    if (base.data.find_class(from)) {
      s.classMap[from] = to;
      continue;
    }
    if (base.data.find_assoc(from)) {
      s.assocMap[from] = to;
      continue;
    }
    bool isMsg = false;
    for (const auto& c : base.data.classes)
      isMsg |= base.data.find_reception(c.name, from) != nullptr;
    if (base.interaction) isMsg |= sd_messages(*base.interaction).count(from) > 0;
    if (isMsg) {
      s.msgMap[from] = to;
      continue;
    }
    diags_.error(line, 0, "unknown symbol '" + from + "' in rename");
  }
  return translate_theory(base, s);
}

Theory Resolver::reveal(const Theory& base, const std::string& window,
                        int line) {
  Theory w = model(window);
  if (base.institution != InstitutionId::CD ||
      w.institution != InstitutionId::CD || !base.machines.empty()) {
    diags_.error(line, 0, "reveal applies to class-diagram theories");
    return base;
  }

  Theory t;
  t.institution = InstitutionId::CD;
  t.name = base.name;
  t.dataSentences = base.dataSentences;
  t.data.name = base.data.name;
  for (const auto& c : base.data.classes) {
    if (!w.data.find_class(c.name)) continue;
    ClassDef kept;
    kept.name = c.name;
    kept.line = c.line;
    if (!c.parent.empty() && w.data.find_class(c.parent))
      kept.parent = c.parent;
    for (const auto& a : c.attrs)
      for (const auto& wa : w.data.all_attrs(c.name))
        if (wa.name == a.name) {
          kept.attrs.push_back(a);
          break;
        }
    for (const auto& r : c.receptions)
      if (w.data.find_reception(c.name, r.name))
        kept.receptions.push_back(r);
    t.data.classes.push_back(std::move(kept));
  }
  for (const auto& a : base.data.assocs) {
    if (!w.data.find_assoc(a.name)) continue;
    if (!t.data.find_class(a.a.cls) || !t.data.find_class(a.b.cls)) continue;
    t.data.assocs.push_back(a);  // base multiplicities survive
  }
  for (const auto& inv : base.data.invariants) {
    if (!t.data.find_class(inv.cls)) continue;
    std::set<std::string> used;
    collect_self_attrs(*inv.expr, used);
    bool expressible = true;
    for (const auto& u : used) {
      bool kept = false;
      for (const auto& a : t.data.all_attrs(inv.cls)) kept |= a.name == u;
      expressible &= kept;
    }
    if (expressible) t.data.invariants.push_back(inv);
  }
  for (const auto& od : base.anchors) {
    bool expressible = true;
    for (const auto& [id, st] : od.snapshot.objects) {
      const ClassDef* c = t.data.find_class(st.cls);
      if (!c) {
        expressible = false;
        break;
      }
      for (const auto& [attr, v] : st.attrs) {
        bool kept = false;
        for (const auto& a : t.data.all_attrs(st.cls)) kept |= a.name == attr;
        expressible &= kept;
      }
    }
    for (const auto& [assoc, ls] : od.snapshot.links)
      expressible &= t.data.find_assoc(assoc) != nullptr || ls.empty();
    if (expressible)
      t.anchors.push_back(od);
    else
      diags_.warning(line, 0, "anchor '" + od.name +
                                  "' mentions hidden symbols; dropped");
  }
  return t;
}

std::optional<ResolvedLink> Resolver::refinement(const std::string& name) {
  auto cached = linkCache_.find(name);
  if (cached != linkCache_.end()) return cached->second;
  const DolDecl* d = lib_.dol.find(name);
  if (!d || d->kind != DolDecl::Kind::Refinement) {
    diags_.error(d ? d->line : 0, 0, "no refinement named '" + name + "'");
    return std::nullopt;
  }
  ResolvedLink l;
  l.name = name;
  l.abstractTheory = eval(*d->abstractSide);
  l.concreteTheory = eval(*d->concreteSide);
  collect_refs(*d->abstractSide, l.abstractRefs);
  collect_refs(*d->concreteSide, l.concreteRefs);
  if (l.abstractTheory.institution != l.concreteTheory.institution) {
    diags_.error(d->line, 0,
                 "refinement '" + name + "' relates a " +
                     institution_name(l.abstractTheory.institution) +
                     " theory to a " +
                     institution_name(l.concreteTheory.institution) +
                     " theory");
    linkCache_[name] = std::nullopt;
    return std::nullopt;
  }
  std::string sa = l.abstractTheory.signature_text();
  std::string sc = l.concreteTheory.signature_text();
  if (sa != sc) {
    diags_.error(d->line, 0,
                 "refinement '" + name +
                     "': signatures differ\n-- abstract --\n" + sa +
                     "-- concrete --\n" + sc);
    linkCache_[name] = std::nullopt;
    return std::nullopt;
  }
  linkCache_[name] = l;
  return l;
}

std::optional<ResolvedNetwork> Resolver::network(const std::string& name) {
  const DolDecl* d = lib_.dol.find(name);
  if (!d || d->kind != DolDecl::Kind::Network) {
    diags_.error(d ? d->line : 0, 0, "no network named '" + name + "'");
    return std::nullopt;
  }
  ResolvedNetwork n;
  n.name = name;
  for (const auto& a : d->annotations)
    if (a == "consistent") n.expectConsistent = true;
  for (const auto& el : d->elements) {
    const DolDecl* ed = lib_.dol.find(el);
    if (ed && ed->kind == DolDecl::Kind::Refinement) {
      if (auto l = refinement(el)) n.links.push_back(std::move(*l));
    } else if (ed && ed->kind == DolDecl::Kind::Network) {
      diags_.error(d->line, 0, "network '" + name +
                                   "' cannot contain network '" + el + "'");
    } else {
      n.nodes.push_back({el, model(el)});
    }
  }
  return n;
}

ResolvedGraph Resolver::resolve_all() {
  ResolvedGraph g;
  for (const auto& d : lib_.dol.decls) {
    switch (d.kind) {
      case DolDecl::Kind::Model: {
        model(d.name);
        std::vector<std::string> refs;
        collect_refs(*d.expr, refs);
        for (const auto& r : refs) g.deps.push_back({r, d.name});
        break;
      }
      case DolDecl::Kind::Refinement:
        if (auto l = refinement(d.name)) g.refinements.push_back(std::move(*l));
        break;
      case DolDecl::Kind::Network:
        if (auto n = network(d.name)) g.networks.push_back(std::move(*n));
        break;
    }
  }
  for (const auto& n : order_) g.models.push_back({n, cache_.at(n)});
  return g;
}

}  // namespace mvcheck
