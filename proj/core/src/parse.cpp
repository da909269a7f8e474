#include "stitch/parse.hpp"

#include <cctype>
#include <cstdlib>

#include "stitch/typecheck.hpp"

namespace stitch {

namespace {

enum class Tok {
  End,
  Ident,
  Int,
  MutGenLimit,  // //mutGenLimit k, with the budget in `ival`
  KwRecord,
  KwMethod,
  KwVar,
  KwIf,
  KwElse,
  KwWhile,
  KwReturn,
  KwNew,
  KwSkip,
  KwTrue,
  KwFalse,
  KwNull,
  KwRequires,
  KwEnsures,
  KwInvariant,
  KwReach,
  KwInt,
  KwBool,
  KwOld,     // \old
  KwResult,  // \result
  LParen,
  RParen,
  LBrace,
  RBrace,
  Semi,
  Colon,
  Comma,
  Dot,
  Assign,  // =
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
  Lt,
  Le,
  Gt,
  Ge,
  EqEq,
  Ne,
  AndAnd,
  OrOr,
  Caret,
  Bang,
};

struct Token {
  Tok kind;
  std::string text;
  int64_t ival = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skipSpaceAndComments();
    if (pendingMutLimit_) {
      pendingMutLimit_ = false;
      return mutTok_;
    }
    Token t;
    t.line = line_;
    t.col = col_;
    if (atEnd()) {
      t.kind = Tok::End;
      return t;
    }
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string id;
      while (!atEnd() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
        id.push_back(get());
      t.text = id;
      t.kind = keyword(id);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      int64_t v = 0;
      while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) {
        v = v * 10 + (get() - '0');
        if (v < 0) throw ParseError("integer literal overflow", t.line, t.col);
      }
      t.kind = Tok::Int;
      t.ival = v;
      return t;
    }
    if (c == '\\') {
      get();
      std::string id;
      while (!atEnd() && std::isalpha(static_cast<unsigned char>(peek()))) id.push_back(get());
      if (id == "old") {
        t.kind = Tok::KwOld;
        return t;
      }
      if (id == "result") {
        t.kind = Tok::KwResult;
        return t;
      }
      throw ParseError("unknown escape '\\" + id + "'", t.line, t.col);
    }
    get();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '{': t.kind = Tok::LBrace; return t;
      case '}': t.kind = Tok::RBrace; return t;
      case ';': t.kind = Tok::Semi; return t;
      case ':': t.kind = Tok::Colon; return t;
      case ',': t.kind = Tok::Comma; return t;
      case '.': t.kind = Tok::Dot; return t;
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '%': t.kind = Tok::Percent; return t;
      case '^': t.kind = Tok::Caret; return t;
      case '=':
        if (!atEnd() && peek() == '=') {
          get();
          t.kind = Tok::EqEq;
        } else {
          t.kind = Tok::Assign;
        }
        return t;
      case '<':
        if (!atEnd() && peek() == '=') {
          get();
          t.kind = Tok::Le;
        } else {
          t.kind = Tok::Lt;
        }
        return t;
      case '>':
        if (!atEnd() && peek() == '=') {
          get();
          t.kind = Tok::Ge;
        } else {
          t.kind = Tok::Gt;
        }
        return t;
      case '!':
        if (!atEnd() && peek() == '=') {
          get();
          t.kind = Tok::Ne;
        } else {
          t.kind = Tok::Bang;
        }
        return t;
      case '&':
        if (!atEnd() && peek() == '&') {
          get();
          t.kind = Tok::AndAnd;
          return t;
        }
        throw ParseError("expected '&&'", t.line, t.col);
      case '|':
        if (!atEnd() && peek() == '|') {
          get();
          t.kind = Tok::OrOr;
          return t;
        }
        throw ParseError("expected '||'", t.line, t.col);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.col);
  }

 private:
  Tok keyword(const std::string& id) {
    if (id == "record") return Tok::KwRecord;
    if (id == "method") return Tok::KwMethod;
    if (id == "var") return Tok::KwVar;
    if (id == "if") return Tok::KwIf;
    if (id == "else") return Tok::KwElse;
    if (id == "while") return Tok::KwWhile;
    if (id == "return") return Tok::KwReturn;
    if (id == "new") return Tok::KwNew;
    if (id == "skip") return Tok::KwSkip;
    if (id == "true") return Tok::KwTrue;
    if (id == "false") return Tok::KwFalse;
    if (id == "null") return Tok::KwNull;
    if (id == "requires") return Tok::KwRequires;
    if (id == "ensures") return Tok::KwEnsures;
    if (id == "invariant") return Tok::KwInvariant;
    if (id == "reach") return Tok::KwReach;
    if (id == "int") return Tok::KwInt;
    if (id == "bool") return Tok::KwBool;
    return Tok::Ident;
  }

  void skipSpaceAndComments() {
    while (!atEnd()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        get();
        continue;
      }
      if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        int cline = line_, ccol = col_;
        get();
        get();
        std::string body;
        while (!atEnd() && peek() != '\n') body.push_back(get());
        // `//mutGenLimit k` is normative syntax, not a comment.
        size_t i = 0;
        while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) i++;
        static const std::string kw = "mutGenLimit";
        if (body.compare(i, kw.size(), kw) == 0) {
          i += kw.size();
          while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) i++;
          if (i >= body.size() || !std::isdigit(static_cast<unsigned char>(body[i])))
            throw ParseError("mutGenLimit expects a nonnegative integer", cline, ccol);
          int64_t v = 0;
          while (i < body.size() && std::isdigit(static_cast<unsigned char>(body[i])))
            v = v * 10 + (body[i++] - '0');
          while (i < body.size() && (body[i] == ' ' || body[i] == '\t')) i++;
          if (i != body.size())
            throw ParseError("trailing text after mutGenLimit budget", cline, ccol);
          mutTok_ = Token{Tok::MutGenLimit, kw, v, cline, ccol};
          pendingMutLimit_ = true;
          return;
        }
        continue;  // ordinary comment
      }
      break;
    }
  }

  bool atEnd() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  char get() {
    char c = src_[pos_++];
    if (c == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    return c;
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  bool pendingMutLimit_ = false;
  Token mutTok_;
};

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) { advance(); }

  Program program() {
    Program p;
    while (cur_.kind != Tok::End) {
      if (cur_.kind == Tok::KwRecord) {
        p.records.push_back(record());
      } else if (cur_.kind == Tok::KwMethod) {
        p.methods.push_back(method());
      } else {
        fail("expected 'record' or 'method'");
      }
    }
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur_.line, cur_.col); }

  void advance() { cur_ = lex_.next(); }

  bool accept(Tok k) {
    if (cur_.kind != k) return false;
    advance();
    return true;
  }

  Token expect(Tok k, const char* what) {
    if (cur_.kind != k) fail(std::string("expected ") + what);
    Token t = cur_;
    advance();
    return t;
  }

  std::string ident() { return expect(Tok::Ident, "identifier").text; }

  Type type() {
    if (accept(Tok::KwInt)) return Type::intType();
    if (accept(Tok::KwBool)) return Type::boolType();
    if (cur_.kind == Tok::Ident) {
      std::string n = cur_.text;
      advance();
      return Type::refType(n);
    }
    fail("expected a type");
  }

  RecordDecl record() {
    expect(Tok::KwRecord, "'record'");
    RecordDecl r;
    r.name = ident();
    expect(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) {
      Param f;
      f.name = ident();
      expect(Tok::Colon, "':'");
      f.type = type();
      expect(Tok::Semi, "';'");
      r.fields.push_back(std::move(f));
    }
    return r;
  }

  Method method() {
    expect(Tok::KwMethod, "'method'");
    Method m;
    nextStmtId_ = 1;
    spans_ = &m.spans;
    m.name = ident();
    expect(Tok::LParen, "'('");
    bool first = true;
    while (cur_.kind != Tok::RParen) {
      if (!first) expect(Tok::Comma, "','");
      first = false;
      Token nameTok = cur_;
      std::string pname = ident();
      expect(Tok::Colon, "':'");
      Param p{pname, type()};
      if (pname == "this") {
        if (m.receiver || !m.params.empty())
          throw ParseError("'this' must be the first parameter", nameTok.line, nameTok.col);
        m.receiver = p;
      } else {
        m.params.push_back(p);
      }
    }
    expect(Tok::RParen, "')'");
    if (accept(Tok::Colon)) m.returnType = type();
    while (true) {
      if (accept(Tok::KwRequires)) {
        m.contract.requiresClause = conjoin(m.contract.requiresClause, expr());
        expect(Tok::Semi, "';'");
      } else if (accept(Tok::KwEnsures)) {
        m.contract.ensuresClause = conjoin(m.contract.ensuresClause, expr());
        expect(Tok::Semi, "';'");
      } else if (accept(Tok::KwInvariant)) {
        m.contract.invariantClause = conjoin(m.contract.invariantClause, expr());
        expect(Tok::Semi, "';'");
      } else {
        break;
      }
    }
    expect(Tok::LBrace, "'{'");
    while (cur_.kind == Tok::KwVar) {
      advance();
      Param l;
      l.name = ident();
      expect(Tok::Colon, "':'");
      l.type = type();
      expect(Tok::Semi, "';'");
      m.locals.push_back(std::move(l));
    }
    m.body = stmtList();
    expect(Tok::RBrace, "'}'");
    spans_ = nullptr;
    return m;
  }

  static Expr conjoin(Expr a, Expr b) {
    // First clause of each kind replaces the default `true`.
    if (a.kind == ExprKind::BoolLit && a.intVal == 1) return b;
    return Expr::binary(BinOp::And, std::move(a), std::move(b));
  }

  std::vector<Statement> stmtList() {
    std::vector<Statement> out;
    while (cur_.kind != Tok::RBrace && cur_.kind != Tok::End) out.push_back(stmt());
    return out;
  }

  // Attaches an optional //mutGenLimit annotation to s.
  void maybeBudget(Statement& s) {
    if (cur_.kind == Tok::MutGenLimit) {
      s.mutGenLimit = static_cast<int>(cur_.ival);
      advance();
    }
  }

  Statement stmt() {
    Token start = cur_;
    Statement s;
    if (accept(Tok::Semi)) {
      s = Statement::skip();
    } else if (accept(Tok::KwSkip)) {
      expect(Tok::Semi, "';'");
      s = Statement::skip();
    } else if (accept(Tok::KwReturn)) {
      if (cur_.kind == Tok::Semi) {
        advance();
        s = Statement::ret(std::nullopt);
      } else {
        Expr e = expr();
        expect(Tok::Semi, "';'");
        s = Statement::ret(std::move(e));
      }
    } else if (cur_.kind == Tok::KwIf) {
      return ifStmt(start);
    } else if (cur_.kind == Tok::KwWhile) {
      return whileStmt(start);
    } else if (cur_.kind == Tok::Ident) {
      std::string base = cur_.text;
      advance();
      std::vector<std::string> chain;
      while (accept(Tok::Dot)) chain.push_back(ident());
      expect(Tok::Assign, "'='");
      if (accept(Tok::KwNew)) {
        if (!chain.empty()) fail("'new' target must be a variable");
        std::string rec = ident();
        expect(Tok::Semi, "';'");
        s = Statement::newStmt(base, rec);
      } else {
        Expr rhs = expr();
        expect(Tok::Semi, "';'");
        if (chain.empty()) {
          s = Statement::assign(base, std::move(rhs));
        } else {
          std::string written = chain.back();
          chain.pop_back();
          Expr lhs = chain.empty() ? Expr::var(base) : Expr::nav(base, chain);
          s = Statement::fieldAssign(std::move(lhs), written, std::move(rhs));
        }
      }
    } else {
      fail("expected a statement");
    }
    maybeBudget(s);
    finish(s, start);
    return s;
  }

  Statement ifStmt(const Token& start) {
    expect(Tok::KwIf, "'if'");
    expect(Tok::LParen, "'('");
    Expr c = expr();
    expect(Tok::RParen, "')'");
    Statement s;
    s.kind = StmtKind::If;
    s.cond = std::move(c);
    maybeBudget(s);
    finish(s, start);  // id precedes the nested statements' ids
    expect(Tok::LBrace, "'{'");
    maybeBudget(s);
    s.thenBlock = stmtList();
    expect(Tok::RBrace, "'}'");
    if (accept(Tok::KwElse)) {
      expect(Tok::LBrace, "'{'");
      s.elseBlock = stmtList();
      expect(Tok::RBrace, "'}'");
    }
    return s;
  }

  Statement whileStmt(const Token& start) {
    expect(Tok::KwWhile, "'while'");
    expect(Tok::LParen, "'('");
    Expr c = expr();
    expect(Tok::RParen, "')'");
    Statement s;
    s.kind = StmtKind::While;
    s.cond = std::move(c);
    maybeBudget(s);
    finish(s, start);
    expect(Tok::LBrace, "'{'");
    maybeBudget(s);
    s.body = stmtList();
    expect(Tok::RBrace, "'}'");
    return s;
  }

  void finish(Statement& s, const Token& start) {
    s.id = nextStmtId_++;
    if (spans_) (*spans_)[s.id] = SrcPos{start.line, start.col};
  }

  // Precedence, low to high: || ^ && (==/!=) (< <= > >=) (+ -) (* / %) unary.
  Expr expr() { return orExpr(); }

  Expr orExpr() {
    Expr e = xorExpr();
    while (accept(Tok::OrOr)) e = Expr::binary(BinOp::Or, std::move(e), xorExpr());
    return e;
  }
  Expr xorExpr() {
    Expr e = andExpr();
    while (accept(Tok::Caret)) e = Expr::binary(BinOp::Xor, std::move(e), andExpr());
    return e;
  }
  Expr andExpr() {
    Expr e = eqExpr();
    while (accept(Tok::AndAnd)) e = Expr::binary(BinOp::And, std::move(e), eqExpr());
    return e;
  }
  Expr eqExpr() {
    Expr e = relExpr();
    while (true) {
      if (accept(Tok::EqEq))
        e = Expr::binary(BinOp::Eq, std::move(e), relExpr());
      else if (accept(Tok::Ne))
        e = Expr::binary(BinOp::Ne, std::move(e), relExpr());
      else
        return e;
    }
  }
  Expr relExpr() {
    Expr e = addExpr();
    while (true) {
      if (accept(Tok::Lt))
        e = Expr::binary(BinOp::Lt, std::move(e), addExpr());
      else if (accept(Tok::Le))
        e = Expr::binary(BinOp::Le, std::move(e), addExpr());
      else if (accept(Tok::Gt))
        e = Expr::binary(BinOp::Gt, std::move(e), addExpr());
      else if (accept(Tok::Ge))
        e = Expr::binary(BinOp::Ge, std::move(e), addExpr());
      else
        return e;
    }
  }
  Expr addExpr() {
    Expr e = mulExpr();
    while (true) {
      if (accept(Tok::Plus))
        e = Expr::binary(BinOp::Add, std::move(e), mulExpr());
      else if (accept(Tok::Minus))
        e = Expr::binary(BinOp::Sub, std::move(e), mulExpr());
      else
        return e;
    }
  }
  Expr mulExpr() {
    Expr e = unaryExpr();
    while (true) {
      if (accept(Tok::Star))
        e = Expr::binary(BinOp::Mul, std::move(e), unaryExpr());
      else if (accept(Tok::Slash))
        e = Expr::binary(BinOp::Div, std::move(e), unaryExpr());
      else if (accept(Tok::Percent))
        e = Expr::binary(BinOp::Mod, std::move(e), unaryExpr());
      else
        return e;
    }
  }
  Expr unaryExpr() {
    if (accept(Tok::Minus)) return Expr::unary(UnOp::Neg, unaryExpr());
    if (accept(Tok::Bang)) return Expr::unary(UnOp::Not, unaryExpr());
    return postfix();
  }
  Expr postfix() {
    Expr e = primary();
    std::vector<std::string> chain;
    while (accept(Tok::Dot)) chain.push_back(ident());
    if (chain.empty()) return e;
    if (e.kind == ExprKind::Var) return Expr::nav(e.name, std::move(chain));
    fail("navigation base must be a variable");
  }
  Expr primary() {
    switch (cur_.kind) {
      case Tok::Int: {
        int64_t v = cur_.ival;
        advance();
        return Expr::intLit(v);
      }
      case Tok::KwTrue: advance(); return Expr::boolLit(true);
      case Tok::KwFalse: advance(); return Expr::boolLit(false);
      case Tok::KwNull: advance(); return Expr::nullLit();
      case Tok::KwResult: advance(); return Expr::resultRef();
      case Tok::KwOld: {
        advance();
        expect(Tok::LParen, "'('");
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return Expr::oldOf(std::move(e));
      }
      case Tok::KwReach: {
        advance();
        expect(Tok::LParen, "'('");
        Expr x = expr();
        expect(Tok::Comma, "','");
        std::string f = ident();
        expect(Tok::Comma, "','");
        Expr y = expr();
        expect(Tok::RParen, "')'");
        return Expr::reach(std::move(x), std::move(f), std::move(y));
      }
      case Tok::Ident: {
        std::string n = cur_.text;
        advance();
        return Expr::var(n);
      }
      case Tok::LParen: {
        advance();
        Expr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default: fail("expected an expression");
    }
  }

  Lexer lex_;
  Token cur_;
  int nextStmtId_ = 1;
  std::map<int, SrcPos>* spans_ = nullptr;
};

}  // namespace

Program parse(const std::string& source) {
  Parser p(source);
  return p.program();
}

Program parseAndCheck(const std::string& source) {
  Program p = parse(source);
  typecheck(p);
  return p;
}

}  // namespace stitch
