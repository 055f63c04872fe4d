// Copyright 2026 The qrv authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QRV_PARSER_HPP
#define QRV_PARSER_HPP

#include <cctype>
#include <sstream>
#include <string>
#include <vector>

#include "qrv/ast.hpp"

namespace qrv {

namespace detail {

enum class Tok {
  Ident,
  Int,
  KwVar,
  KwBool,
  KwInt,
  KwProc,
  KwEnd,
  KwBot,
  KwSkip,
  KwCase,
  KwLocal,
  KwRelease,
  KwCall,
  Colon,
  ColonColon,
  InitOp,   // :=|0>
  StarEq,   // *=
  Arrow,    // ->
  Semi,
  Comma,
  Eq,
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string text) : text_(std::move(text)) { advance(); }

  const Token& peek() const { return cur_; }
  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::SyntaxError,
         msg + " at line " + std::to_string(line_) + ", column " +
             std::to_string(col_));
  }

  int get() {
    if (pos_ >= text_.size()) return -1;
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return static_cast<unsigned char>(c);
  }

  int look(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size()
               ? static_cast<unsigned char>(text_[pos_ + ahead])
               : -1;
  }

  void skip_space() {
    for (;;) {
      while (look() != -1 && std::isspace(look())) get();
      if (look() == '/' && look(1) == '/') {
        while (look() != -1 && look() != '\n') get();
        continue;
      }
      break;
    }
  }

  void advance() {
    skip_space();
    cur_ = Token{};
    cur_.line = line_;
    cur_.col = col_;
    int c = look();
    if (c == -1) {
      cur_.kind = Tok::End;
      return;
    }
    if (std::isalpha(c) || c == '_') {
      std::string word;
      while (look() != -1 && (std::isalnum(look()) || look() == '_'))
        word.push_back(static_cast<char>(get()));
      cur_.text = word;
      if (word == "var") cur_.kind = Tok::KwVar;
      else if (word == "bool") cur_.kind = Tok::KwBool;
      else if (word == "int") cur_.kind = Tok::KwInt;
      else if (word == "proc") cur_.kind = Tok::KwProc;
      else if (word == "end") cur_.kind = Tok::KwEnd;
      else if (word == "bot") cur_.kind = Tok::KwBot;
      else if (word == "skip") cur_.kind = Tok::KwSkip;
      else if (word == "case") cur_.kind = Tok::KwCase;
      else if (word == "local") cur_.kind = Tok::KwLocal;
      else if (word == "release") cur_.kind = Tok::KwRelease;
      else if (word == "call") cur_.kind = Tok::KwCall;
      else cur_.kind = Tok::Ident;
      return;
    }
    if (std::isdigit(c)) {
      std::string num;
      while (look() != -1 && std::isdigit(look()))
        num.push_back(static_cast<char>(get()));
      cur_.kind = Tok::Int;
      cur_.text = num;
      try {
        cur_.value = std::stoll(num);
      } catch (const std::exception&) {
        error("integer literal out of range");
      }
      return;
    }
    switch (c) {
      case ':':
        get();
        if (look() == ':') {
          get();
          cur_.kind = Tok::ColonColon;
        } else if (look() == '=' && look(1) == '|' && look(2) == '0' &&
                   look(3) == '>') {
          get();
          get();
          get();
          get();
          cur_.kind = Tok::InitOp;
        } else {
          cur_.kind = Tok::Colon;
        }
        return;
      case '*':
        get();
        if (look() != '=') error("expected '=' after '*'");
        get();
        cur_.kind = Tok::StarEq;
        return;
      case '-':
        get();
        if (look() != '>') error("expected '>' after '-'");
        get();
        cur_.kind = Tok::Arrow;
        return;
      case ';': get(); cur_.kind = Tok::Semi; return;
      case ',': get(); cur_.kind = Tok::Comma; return;
      case '=': get(); cur_.kind = Tok::Eq; return;
      case '(': get(); cur_.kind = Tok::LParen; return;
      case ')': get(); cur_.kind = Tok::RParen; return;
      case '[': get(); cur_.kind = Tok::LBrack; return;
      case ']': get(); cur_.kind = Tok::RBrack; return;
      case '{': get(); cur_.kind = Tok::LBrace; return;
      case '}': get(); cur_.kind = Tok::RBrace; return;
      default:
        error(std::string("unexpected character '") +
              static_cast<char>(c) + "'");
    }
  }

  std::string text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_;
};

class ProgramParser {
 public:
  explicit ProgramParser(const std::string& text) : lex_(text) {}

  Program parse() {
    Program prog;
    for (;;) {
      if (at(Tok::KwVar)) {
        parse_vardecl(prog);
      } else if (at(Tok::KwProc)) {
        parse_procdecl(prog);
      } else {
        break;
      }
    }
    expect(Tok::ColonColon, "'::' before the main statement");
    prog.main = parse_seq();
    if (!at(Tok::End)) error_here("trailing input after the main statement");
    return prog;
  }

 private:
  bool at(Tok k) const { return lex_.peek().kind == k; }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) error_here("expected " + what);
    return lex_.next();
  }

  [[noreturn]] void error_here(const std::string& msg) const {
    const auto& t = lex_.peek();
    fail(ErrorKind::SyntaxError, msg + " at line " + std::to_string(t.line) +
                                     ", column " + std::to_string(t.col));
  }

  std::string ident() {
    Token t = expect(Tok::Ident, "an identifier");
    return t.text;
  }

  void parse_vardecl(Program& prog) {
    lex_.next();  // var
    VarDecl v;
    v.name = ident();
    expect(Tok::Colon, "':' after the register name");
    if (at(Tok::KwBool)) {
      lex_.next();
      v.kind = VarKind::Boolean;
      v.dim = 2;
    } else if (at(Tok::KwInt)) {
      lex_.next();
      expect(Tok::LBrack, "'[' after int");
      Token d = expect(Tok::Int, "a dimension");
      expect(Tok::RBrack, "']' after the dimension");
      v.kind = VarKind::Integer;
      v.dim = d.value;
    } else {
      error_here("expected bool or int[N]");
    }
    prog.var_decls.push_back(std::move(v));
  }

  void parse_procdecl(Program& prog) {
    lex_.next();  // proc
    ProcDecl p;
    p.name = ident();
    expect(Tok::LParen, "'(' after the procedure name");
    if (!at(Tok::RParen)) {
      p.formals.push_back(ident());
      while (at(Tok::Comma)) {
        lex_.next();
        p.formals.push_back(ident());
      }
    }
    expect(Tok::RParen, "')' after the parameter list");
    expect(Tok::Eq, "'=' before the procedure body");
    p.body = parse_seq();
    expect(Tok::KwEnd, "'end' after the procedure body");
    prog.procs.push_back(std::move(p));
  }

  // stmt (";" stmt)*, folded to the right. The sequence stops before
  // "; release", which belongs to the enclosing local block.
  StmtPtr parse_seq() {
    std::vector<StmtPtr> parts;
    parts.push_back(parse_atom());
    while (at(Tok::Semi)) {
      Lexer save = lex_;
      lex_.next();
      if (at(Tok::KwRelease)) {
        lex_ = save;
        break;
      }
      parts.push_back(parse_atom());
    }
    StmtPtr out = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;)
      out = stmt_seq(parts[i], out);
    return out;
  }

  StmtPtr parse_atom() {
    const auto& t = lex_.peek();
    const int line = t.line, col = t.col;
    auto mark = [&](StmtPtr s) {
      auto copy = std::make_shared<Stmt>(*s);
      copy->line = line;
      copy->col = col;
      return StmtPtr(copy);
    };
    switch (t.kind) {
      case Tok::KwBot:
        lex_.next();
        return mark(stmt_bottom());
      case Tok::KwSkip:
        lex_.next();
        return mark(stmt_skip());
      case Tok::KwCall: {
        lex_.next();
        std::string proc = ident();
        expect(Tok::LParen, "'(' after the procedure name");
        std::vector<std::string> actuals;
        if (!at(Tok::RParen)) {
          actuals.push_back(ident());
          while (at(Tok::Comma)) {
            lex_.next();
            actuals.push_back(ident());
          }
        }
        expect(Tok::RParen, "')' after the argument list");
        return mark(stmt_call(std::move(proc), std::move(actuals)));
      }
      case Tok::KwCase: {
        lex_.next();
        std::string meas = ident();
        expect(Tok::LBrack, "'[' after the measurement name");
        std::vector<std::string> vars;
        vars.push_back(ident());
        while (at(Tok::Ident)) vars.push_back(ident());
        expect(Tok::RBrack, "']' after the measured registers");
        expect(Tok::LBrace, "'{' before the outcome arms");
        std::vector<CaseArm> arms;
        if (!at(Tok::Int)) error_here("expected at least one outcome arm");
        while (at(Tok::Int)) {
          Token m = lex_.next();
          expect(Tok::Arrow, "'->' after the outcome");
          arms.push_back({static_cast<int>(m.value), parse_seq()});
        }
        expect(Tok::RBrace, "'}' after the outcome arms");
        std::sort(arms.begin(), arms.end(),
                  [](const CaseArm& a, const CaseArm& b) {
                    return a.outcome < b.outcome;
                  });
        return mark(stmt_case(std::move(meas), std::move(vars), std::move(arms)));
      }
      case Tok::KwLocal: {
        lex_.next();
        std::vector<std::string> vars;
        vars.push_back(ident());
        while (at(Tok::Ident)) vars.push_back(ident());
        expect(Tok::Semi, "';' after the local registers");
        StmtPtr body = parse_seq();
        expect(Tok::Semi, "';' before release");
        expect(Tok::KwRelease, "'release' closing the local block");
        std::vector<std::string> released;
        released.push_back(ident());
        while (at(Tok::Ident)) released.push_back(ident());
        if (released != vars)
          error_here("release list must repeat the local list");
        return mark(stmt_local(std::move(vars), std::move(body)));
      }
      case Tok::LBrack: {
        lex_.next();
        std::vector<std::string> vars;
        vars.push_back(ident());
        while (at(Tok::Ident)) vars.push_back(ident());
        expect(Tok::RBrack, "']' after the register list");
        expect(Tok::StarEq, "'*=' after the register list");
        std::string op = ident();
        return mark(stmt_unit(std::move(vars), std::move(op)));
      }
      case Tok::Ident: {
        std::string q = ident();
        expect(Tok::InitOp, "':=|0>' after the register name");
        return mark(stmt_init(std::move(q)));
      }
      default:
        error_here("expected a statement");
    }
  }

  Lexer lex_;
};

inline void print_stmt(std::ostream& os, const StmtPtr& s, int indent);

inline void print_seq(std::ostream& os, const StmtPtr& s, int indent) {
  if (const auto* seq = std::get_if<SeqS>(&s->node)) {
    print_seq(os, seq->first, indent);
    os << ";\n";
    print_seq(os, seq->second, indent);
  } else {
    print_stmt(os, s, indent);
  }
}

inline void print_stmt(std::ostream& os, const StmtPtr& s, int indent) {
  std::string pad(indent, ' ');
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BottomS>) {
          os << pad << "bot";
        } else if constexpr (std::is_same_v<T, SkipS>) {
          os << pad << "skip";
        } else if constexpr (std::is_same_v<T, InitS>) {
          os << pad << n.var << " :=|0>";
        } else if constexpr (std::is_same_v<T, UnitS>) {
          os << pad << "[";
          for (std::size_t i = 0; i < n.vars.size(); ++i)
            os << (i ? " " : "") << n.vars[i];
          os << "] *= " << n.op;
        } else if constexpr (std::is_same_v<T, SeqS>) {
          print_seq(os, s, indent);
        } else if constexpr (std::is_same_v<T, CaseS>) {
          os << pad << "case " << n.meas << " [";
          for (std::size_t i = 0; i < n.vars.size(); ++i)
            os << (i ? " " : "") << n.vars[i];
          os << "] {\n";
          for (const auto& arm : n.arms) {
            os << pad << "  " << arm.outcome << " ->\n";
            print_seq(os, arm.body, indent + 4);
            os << "\n";
          }
          os << pad << "}";
        } else if constexpr (std::is_same_v<T, LocalS>) {
          os << pad << "local";
          for (const auto& v : n.vars) os << " " << v;
          os << ";\n";
          print_seq(os, n.body, indent + 2);
          os << ";\n" << pad << "release";
          for (const auto& v : n.vars) os << " " << v;
        } else if constexpr (std::is_same_v<T, CallS>) {
          os << pad << "call " << n.proc << "(";
          for (std::size_t i = 0; i < n.actuals.size(); ++i)
            os << (i ? ", " : "") << n.actuals[i];
          os << ")";
        } else if constexpr (std::is_same_v<T, ReleaseS>) {
          os << pad << "release";
          for (const auto& v : n.vars) os << " " << v;
        } else {
          static_assert(std::is_same_v<T, ParamHoleS>);
          // Internal placeholder; printed for diagnostics only.
          os << pad << "param " << n.name << "(";
          for (std::size_t i = 0; i < n.vars.size(); ++i)
            os << (i ? ", " : "") << n.vars[i];
          os << ")";
        }
      },
      s->node);
}

}  // namespace detail

// Parses a program in the concrete syntax. Name resolution and dimension
// checks are deferred to typecheck.
inline Program parse_program(const std::string& text) {
  detail::ProgramParser parser(text);
  return parser.parse();
}

// Parses a single statement in the context of zero or more declarations.
inline StmtPtr parse_statement(const std::string& text) {
  detail::ProgramParser parser(":: " + text);
  return parser.parse().main;
}

inline std::string pretty_print(const StmtPtr& s) {
  std::ostringstream os;
  detail::print_seq(os, s, 0);
  return os.str();
}

// Source form of a program; nested sequences print flattened, so the
// round-trip guarantee covers parser-produced (right-folded) trees.
inline std::string pretty_print(const Program& prog) {
  std::ostringstream os;
  for (const auto& v : prog.var_decls) {
    os << "var " << v.name << " : ";
    if (v.kind == VarKind::Boolean)
      os << "bool";
    else
      os << "int[" << v.dim << "]";
    os << "\n";
  }
  if (!prog.var_decls.empty()) os << "\n";
  for (const auto& p : prog.procs) {
    os << "proc " << p.name << "(";
    for (std::size_t i = 0; i < p.formals.size(); ++i)
      os << (i ? ", " : "") << p.formals[i];
    os << ") =\n";
    detail::print_seq(os, p.body, 2);
    os << "\nend\n\n";
  }
  os << "::\n";
  detail::print_seq(os, prog.main, 2);
  os << "\n";
  return os.str();
}

}  // namespace qrv

#endif  // QRV_PARSER_HPP
