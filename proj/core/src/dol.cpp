#include "mvcheck/dol.hpp"

#include "mvcheck/lexer.hpp"

namespace mvcheck {

const DolDecl* DolFile::find(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

namespace {

// Precedence: `then` = 0, `and` = 1, postfix operators = 2, atoms = 3.
int prec(ModelExpr::Kind k) {
  switch (k) {
    case ModelExpr::Kind::Then: return 0;
    case ModelExpr::Kind::And: return 1;
    case ModelExpr::Kind::WithTranslation:
    case ModelExpr::Kind::WithRename:
    case ModelExpr::Kind::HideAlong:
    case ModelExpr::Kind::Reveal: return 2;
    case ModelExpr::Kind::Ref:
    case ModelExpr::Kind::Braced: return 3;
  }
  return 3;
}

std::string print_expr(const ModelExpr& e, int minPrec) {
  std::string s;
  switch (e.kind) {
    case ModelExpr::Kind::Ref: return e.name;
    case ModelExpr::Kind::Braced:
      return "{ " + print_expr(*e.lhs, 0) + " }";
    case ModelExpr::Kind::Then:
      s = print_expr(*e.lhs, 0) + " then " + print_expr(*e.rhs, 1);
      break;
    case ModelExpr::Kind::And:
      s = print_expr(*e.lhs, 1) + " and " + print_expr(*e.rhs, 2);
      break;
    case ModelExpr::Kind::WithTranslation:
      s = print_expr(*e.lhs, 2) + " with translation " + e.name;
      break;
    case ModelExpr::Kind::WithRename: {
      s = print_expr(*e.lhs, 2) + " with ";
      for (size_t i = 0; i < e.renames.size(); ++i) {
        if (i) s += ", ";
        s += e.renames[i].first + " |-> " + e.renames[i].second;
      }
      break;
    }
    case ModelExpr::Kind::HideAlong:
      s = print_expr(*e.lhs, 2) + " hide along " + e.name;
      break;
    case ModelExpr::Kind::Reveal:
      s = print_expr(*e.lhs, 2) + " reveal " + e.name;
      break;
  }
  if (prec(e.kind) < minPrec) return "{ " + s + " }";
  return s;
}

// `then` and `and` bind looser than the postfix operators, so
//   A with translation cd2stm then B  ==  { A with translation cd2stm } then B
struct DolParser {
  TokenCursor& cur;

  ModelExprPtr primary() {
    auto e = std::make_shared<ModelExpr>();
    e->line = cur.peek().line;
    if (cur.accept(Tok::LBrace)) {
      e->kind = ModelExpr::Kind::Braced;
      e->lhs = expr();
      cur.expect(Tok::RBrace, "'}'");
      return e;
    }
    e->kind = ModelExpr::Kind::Ref;
    e->name = cur.expect_ident("model name").text;
    return e;
  }

  ModelExprPtr suffixed() {
    auto e = primary();
    for (;;) {
      auto n = std::make_shared<ModelExpr>();
      n->line = cur.peek().line;
      n->lhs = e;
      if (cur.at_ident("with")) {
        cur.get();
        if (cur.accept_ident("translation")) {
          n->kind = ModelExpr::Kind::WithTranslation;
          n->name = cur.expect_ident("translation name").text;
        } else {
          n->kind = ModelExpr::Kind::WithRename;
          do {
            std::string from = cur.expect_ident("symbol").text;
            if (cur.accept(Tok::Dot))  // qualified attribute: Class.attr
              from += "." + cur.expect_ident("attribute name").text;
            cur.expect(Tok::MapsTo, "'|->'");
            std::string to = cur.expect_ident("symbol").text;
            n->renames.push_back({from, to});
          } while (cur.accept(Tok::Comma));
        }
      } else if (cur.at_ident("hide")) {
        cur.get();
        cur.expect_keyword("along");
        n->kind = ModelExpr::Kind::HideAlong;
        n->name = cur.expect_ident("morphism name").text;
      } else if (cur.at_ident("reveal")) {
        cur.get();
        n->kind = ModelExpr::Kind::Reveal;
        n->name = cur.expect_ident("model name").text;
      } else {
        return e;
      }
      e = n;
    }
  }

  ModelExprPtr andExpr() {
    auto e = suffixed();
    while (cur.at_ident("and")) {
      auto n = std::make_shared<ModelExpr>();
      n->kind = ModelExpr::Kind::And;
      n->line = cur.peek().line;
      cur.get();
      n->lhs = e;
      n->rhs = suffixed();
      e = n;
    }
    return e;
  }

  ModelExprPtr expr() {
    auto e = andExpr();
    // `refined` terminates the abstract side of a refinement.
    while (cur.at_ident("then")) {
      auto n = std::make_shared<ModelExpr>();
      n->kind = ModelExpr::Kind::Then;
      n->line = cur.peek().line;
      cur.get();
      n->lhs = e;
      n->rhs = andExpr();
      e = n;
    }
    return e;
  }
};

}  // namespace

std::string ModelExpr::str() const { return print_expr(*this, 0); }

DolFile parse_dol(const std::string& text, Diagnostics& diags) {
  DolFile f;
  auto toks = lex(text, diags);
  TokenCursor cur(toks, diags);
  DolParser p{cur};
  if (cur.accept_ident("library"))
    f.library = cur.expect_ident("library name").text;
  while (!cur.done()) {
    size_t before = cur.pos();
    DolDecl d;
    d.line = cur.peek().line;
    if (cur.accept_ident("model")) {
      d.kind = DolDecl::Kind::Model;
      d.name = cur.expect_ident("model name").text;
      cur.expect(Tok::Eq, "'='");
      while (cur.at(Tok::Annotation)) d.annotations.push_back(cur.get().text);
      d.expr = p.expr();
      cur.expect_keyword("end");
      f.decls.push_back(std::move(d));
    } else if (cur.accept_ident("refinement")) {
      d.kind = DolDecl::Kind::Refinement;
      d.name = cur.expect_ident("refinement name").text;
      cur.expect(Tok::Eq, "'='");
      while (cur.at(Tok::Annotation)) d.annotations.push_back(cur.get().text);
      d.abstractSide = p.expr();
      cur.expect_keyword("refined");
      cur.expect_keyword("to");
      d.concreteSide = p.expr();
      cur.expect_keyword("end");
      f.decls.push_back(std::move(d));
    } else if (cur.accept_ident("network")) {
      d.kind = DolDecl::Kind::Network;
      d.name = cur.expect_ident("network name").text;
      cur.expect(Tok::Eq, "'='");
      while (cur.at(Tok::Annotation)) d.annotations.push_back(cur.get().text);
      do {
        d.elements.push_back(cur.expect_ident("network element").text);
      } while (cur.accept(Tok::Comma));
      cur.expect_keyword("end");
      f.decls.push_back(std::move(d));
    } else {
      cur.error_here("expected 'model', 'refinement', or 'network'");
      cur.get();
    }
    if (cur.pos() == before) cur.get();  // guarantee progress on bad input
  }
  return f;
}

std::string print_dol(const DolFile& f) {
  std::string out;
  if (!f.library.empty()) out += "library " + f.library + "\n\n";
  for (const auto& d : f.decls) {
    switch (d.kind) {
      case DolDecl::Kind::Model:
        out += "model " + d.name + " =";
        for (const auto& a : d.annotations) out += " %" + a;
        out += "\n  " + d.expr->str() + "\nend\n\n";
        break;
      case DolDecl::Kind::Refinement:
        out += "refinement " + d.name + " =";
        for (const auto& a : d.annotations) out += " %" + a;
        out += "\n  " + d.abstractSide->str() + "\n  refined to " +
               d.concreteSide->str() + "\nend\n\n";
        break;
      case DolDecl::Kind::Network: {
        out += "network " + d.name + " =";
        for (const auto& a : d.annotations) out += " %" + a;
        out += "\n  ";
        for (size_t i = 0; i < d.elements.size(); ++i) {
          if (i) out += ", ";
          out += d.elements[i];
        }
        out += "\nend\n\n";
        break;
      }
    }
  }
  return out;
}

}  // namespace mvcheck
