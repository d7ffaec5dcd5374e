#include "diracwb/deffile.hpp"

#include <cctype>
#include <sstream>

namespace diracwb {

std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Mu: return "mu";
    case BlockKind::Gamma: return "gamma";
    case BlockKind::Phi: return "phi";
    case BlockKind::Psi: return "psi";
    case BlockKind::Bivector: return "bivector";
    case BlockKind::TwoForm: return "twoform";
    case BlockKind::Endo: return "endo";
    case BlockKind::Subbundle: return "subbundle";
    case BlockKind::Cosubbundle: return "cosubbundle";
    case BlockKind::DoubleBundle: return "doublebundle";
  }
  return "?";
}

namespace {

struct Token {
  enum Kind { Ident, Integer, Symbol, End } kind;
  std::string text;
  int line;
  int col;
};

class Lexer {
 public:
  Lexer(const std::string& line_text, int line_no) : s_(line_text), line_(line_no) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ >= s_.size() || s_[pos_] == '#') return {Token::End, "", line_, col()};
    const int c0 = col();
    char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' ||
              s_[pos_] == '-'))
        ++pos_;
      return {Token::Ident, s_.substr(start, pos_ - start), line_, c0};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return {Token::Integer, s_.substr(start, pos_ - start), line_, c0};
    }
    static const std::string symbols = "+-*^()[],=/";
    if (symbols.find(c) != std::string::npos) {
      ++pos_;
      return {Token::Symbol, std::string(1, c), line_, c0};
    }
    throw ParseError(ParseErrorKind::Lexical, line_, c0,
                     std::string("unexpected character '") + c + "'");
  }

  Token peek() {
    std::size_t saved = pos_;
    Token t = next();
    pos_ = saved;
    return t;
  }

  int col() const { return static_cast<int>(pos_) + 1; }

 private:
  const std::string& s_;
  int line_;
  std::size_t pos_ = 0;
};

enum class SymKind { Base, Momentum, Frame, Coframe };

struct SymbolTable {
  std::map<std::string, std::pair<SymKind, int>> table;

  void declare(const std::string& name, SymKind kind, int idx, int line) {
    auto [it, inserted] = table.try_emplace(name, kind, idx);
    if (!inserted)
      throw ParseError(ParseErrorKind::Duplicate, line, 1,
                       "symbol '" + name + "' declared twice");
  }
};

// expr := term (('+'|'-') term)*
// term := factor (('*'|'^') factor)*
// factor := ['-'|'+'] atom
// atom := rational | symbol | '(' expr ')'
class ExprParser {
 public:
  ExprParser(Lexer& lex, const SymbolTable& syms) : lex_(lex), syms_(syms) {}

  Superfunction parse() {
    Superfunction e = term();
    for (Token t = lex_.peek(); t.kind == Token::Symbol && (t.text == "+" || t.text == "-");
         t = lex_.peek()) {
      lex_.next();
      Superfunction rhs = term();
      e = (t.text == "+") ? e + rhs : e - rhs;
    }
    return e;
  }

 private:
  Superfunction term() {
    Superfunction e = factor();
    for (Token t = lex_.peek(); t.kind == Token::Symbol && (t.text == "*" || t.text == "^");
         t = lex_.peek()) {
      lex_.next();
      e = e * factor();
    }
    return e;
  }

  Superfunction factor() {
    Token t = lex_.peek();
    if (t.kind == Token::Symbol && (t.text == "-" || t.text == "+")) {
      lex_.next();
      Superfunction e = factor();
      return t.text == "-" ? -e : e;
    }
    return atom();
  }

  Superfunction atom() {
    Token t = lex_.next();
    if (t.kind == Token::Integer) {
      Rat v(t.text);
      Token nxt = lex_.peek();
      if (nxt.kind == Token::Symbol && nxt.text == "/") {
        lex_.next();
        Token den = lex_.next();
        if (den.kind != Token::Integer)
          throw ParseError(ParseErrorKind::Syntax, den.line, den.col,
                           "expected integer denominator");
        Rat d(den.text);
        if (sgn(d) == 0)
          throw ParseError(ParseErrorKind::Syntax, den.line, den.col, "zero denominator");
        v /= d;
      }
      v.canonicalize();
      return Superfunction::constant(v);
    }
    if (t.kind == Token::Ident) {
      auto it = syms_.table.find(t.text);
      if (it == syms_.table.end())
        throw ParseError(ParseErrorKind::UndeclaredIdentifier, t.line, t.col,
                         "undeclared identifier '" + t.text + "'");
      switch (it->second.first) {
        case SymKind::Base: return Superfunction::x(it->second.second);
        case SymKind::Momentum: return Superfunction::p(it->second.second);
        case SymKind::Frame: return Superfunction::theta(it->second.second);
        case SymKind::Coframe: return Superfunction::xi(it->second.second);
      }
    }
    if (t.kind == Token::Symbol && t.text == "(") {
      Superfunction e = parse();
      Token close = lex_.next();
      if (!(close.kind == Token::Symbol && close.text == ")"))
        throw ParseError(ParseErrorKind::Syntax, close.line, close.col, "expected ')'");
      return e;
    }
    throw ParseError(ParseErrorKind::Syntax, t.line, t.col,
                     t.kind == Token::End ? "unexpected end of line" : "unexpected '" + t.text + "'");
  }

  Lexer& lex_;
  const SymbolTable& syms_;
};

Poly expr_to_poly(const Superfunction& f, int line) {
  try {
    return Poly::from_superfunction(f);
  } catch (const std::domain_error&) {
    throw ParseError(ParseErrorKind::BidegreeMismatch, line, 1,
                     "matrix entries must be base polynomials: " + f.render());
  }
}

PolyMat parse_matrix(Lexer& lex, const SymbolTable& syms, int line) {
  auto expect = [&](const std::string& sym) {
    Token t = lex.next();
    if (!(t.kind == Token::Symbol && t.text == sym))
      throw ParseError(ParseErrorKind::Syntax, t.line, t.col, "expected '" + sym + "'");
  };
  expect("[");
  PolyMat m;
  bool first_row = true;
  for (;;) {
    expect("[");
    std::vector<Poly> row;
    for (;;) {
      ExprParser ep(lex, syms);
      row.push_back(expr_to_poly(ep.parse(), line));
      Token t = lex.next();
      if (t.kind == Token::Symbol && t.text == ",") continue;
      if (t.kind == Token::Symbol && t.text == "]") break;
      throw ParseError(ParseErrorKind::Syntax, t.line, t.col, "expected ',' or ']'");
    }
    if (!first_row && row.size() != m[0].size())
      throw ParseError(ParseErrorKind::Dimension, line, lex.col(), "ragged matrix rows");
    m.push_back(std::move(row));
    first_row = false;
    Token t = lex.next();
    if (t.kind == Token::Symbol && t.text == ",") continue;
    if (t.kind == Token::Symbol && t.text == "]") break;
    throw ParseError(ParseErrorKind::Syntax, t.line, t.col, "expected ',' or ']'");
  }
  return m;
}

void expect_end(Lexer& lex) {
  Token t = lex.next();
  if (t.kind != Token::End)
    throw ParseError(ParseErrorKind::Syntax, t.line, t.col, "trailing input: '" + t.text + "'");
}

const std::map<std::string, BlockKind>& block_keywords() {
  static const std::map<std::string, BlockKind> k = {
      {"mu", BlockKind::Mu},           {"gamma", BlockKind::Gamma},
      {"phi", BlockKind::Phi},         {"psi", BlockKind::Psi},
      {"bivector", BlockKind::Bivector}, {"twoform", BlockKind::TwoForm},
      {"endo", BlockKind::Endo},       {"subbundle", BlockKind::Subbundle},
      {"cosubbundle", BlockKind::Cosubbundle}, {"doublebundle", BlockKind::DoubleBundle},
  };
  return k;
}

Bidegree expected_bidegree(BlockKind k) {
  switch (k) {
    case BlockKind::Mu: return {1, 2};
    case BlockKind::Gamma: return {2, 1};
    case BlockKind::Phi: return {3, 0};
    case BlockKind::Psi: return {0, 3};
    case BlockKind::Bivector: return {2, 0};
    case BlockKind::TwoForm: return {0, 2};
    default: return {0, 0};
  }
}

bool is_matrix_kind(BlockKind k) {
  return k == BlockKind::Endo || k == BlockKind::Subbundle || k == BlockKind::Cosubbundle ||
         k == BlockKind::DoubleBundle;
}

}  // namespace

const StructureBlock* DefinitionFile::find(const std::string& name) const {
  for (const auto& b : structures)
    if (b.name == name) return &b;
  return nullptr;
}

const StructureBlock& DefinitionFile::require(const std::string& name, BlockKind kind) const {
  const StructureBlock* b = find(name);
  if (!b)
    throw std::invalid_argument("no structure named '" + name + "' in the definition file");
  if (b->kind != kind)
    throw std::invalid_argument("structure '" + name + "' has kind " + to_string(b->kind) +
                                ", expected " + to_string(kind));
  return *b;
}

const StructureBlock& DefinitionFile::resolve_mu(const std::string& name_or_empty) const {
  if (!name_or_empty.empty()) return require(name_or_empty, BlockKind::Mu);
  const StructureBlock* found = nullptr;
  for (const auto& b : structures)
    if (b.kind == BlockKind::Mu) {
      if (found) throw std::invalid_argument("several mu blocks; pass mu=<name>");
      found = &b;
    }
  if (!found) throw std::invalid_argument("no mu block in the definition file");
  return *found;
}

DefinitionFile parse_definition(const std::string& text) {
  DefinitionFile f;
  SymbolTable syms;
  bool saw_format = false, saw_base = false, saw_frame = false;
  bool saw_momenta = false, saw_coframe = false;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    Lexer lex(line, line_no);
    Token head = lex.next();
    if (head.kind == Token::End) continue;
    if (head.kind != Token::Ident)
      throw ParseError(ParseErrorKind::Syntax, head.line, head.col, "expected a keyword");

    if (head.text == "format") {
      Token name = lex.next(), ver = lex.next();
      if (name.kind != Token::Ident || name.text != "diracwb" || ver.kind != Token::Integer)
        throw ParseError(ParseErrorKind::Syntax, head.line, head.col,
                         "expected 'format diracwb 1'");
      f.format_version = std::stoi(ver.text);
      expect_end(lex);
      saw_format = true;
      continue;
    }

    auto read_names = [&](SymKind kind, std::vector<std::string>& out, bool& seen) {
      if (seen)
        throw ParseError(ParseErrorKind::Duplicate, head.line, head.col,
                         "duplicate '" + head.text + "' block");
      seen = true;
      for (Token t = lex.next(); t.kind != Token::End; t = lex.next()) {
        if (t.kind != Token::Ident)
          throw ParseError(ParseErrorKind::Syntax, t.line, t.col, "expected a symbol name");
        syms.declare(t.text, kind, static_cast<int>(out.size()), t.line);
        out.push_back(t.text);
      }
    };

    if (head.text == "base") {
      read_names(SymKind::Base, f.names.base, saw_base);
      f.base_dim = static_cast<int>(f.names.base.size());
      continue;
    }
    if (head.text == "momenta") {
      read_names(SymKind::Momentum, f.names.momenta, saw_momenta);
      continue;
    }
    if (head.text == "frame") {
      read_names(SymKind::Frame, f.names.frame, saw_frame);
      f.fiber_rank = static_cast<int>(f.names.frame.size());
      continue;
    }
    if (head.text == "coframe") {
      read_names(SymKind::Coframe, f.names.coframe, saw_coframe);
      continue;
    }

    if (head.text == "check") {
      if (!saw_base)
        throw ParseError(ParseErrorKind::MissingBlock, head.line, head.col,
                         "missing base block");
      CheckBlock cb;
      Token cmd = lex.next();
      if (cmd.kind != Token::Ident)
        throw ParseError(ParseErrorKind::Syntax, cmd.line, cmd.col, "expected a check name");
      cb.command = cmd.text;
      for (Token t = lex.next(); t.kind != Token::End; t = lex.next()) {
        if (t.kind != Token::Ident)
          throw ParseError(ParseErrorKind::Syntax, t.line, t.col, "expected key=value");
        Token eq = lex.next();
        if (!(eq.kind == Token::Symbol && eq.text == "="))
          throw ParseError(ParseErrorKind::Syntax, eq.line, eq.col, "expected '='");
        Token val = lex.next();
        if (val.kind != Token::Ident && val.kind != Token::Integer)
          throw ParseError(ParseErrorKind::Syntax, val.line, val.col, "expected a value");
        cb.params.emplace_back(t.text, val.text);
      }
      f.checks.push_back(std::move(cb));
      continue;
    }

    auto kw = block_keywords().find(head.text);
    if (kw == block_keywords().end())
      throw ParseError(ParseErrorKind::Syntax, head.line, head.col,
                       "unknown keyword '" + head.text + "'");
    if (!saw_base)
      throw ParseError(ParseErrorKind::MissingBlock, head.line, head.col, "missing base block");
    if (!saw_frame)
      throw ParseError(ParseErrorKind::MissingBlock, head.line, head.col, "missing frame block");

    StructureBlock b;
    b.kind = kw->second;
    Token name = lex.next();
    if (name.kind != Token::Ident)
      throw ParseError(ParseErrorKind::Syntax, name.line, name.col, "expected a structure name");
    if (f.find(name.text) || syms.table.count(name.text))
      throw ParseError(ParseErrorKind::Duplicate, name.line, name.col,
                       "name '" + name.text + "' already in use");
    b.name = name.text;
    Token eq = lex.next();
    if (!(eq.kind == Token::Symbol && eq.text == "="))
      throw ParseError(ParseErrorKind::Syntax, eq.line, eq.col, "expected '='");

    if (is_matrix_kind(b.kind)) {
      b.matrix = parse_matrix(lex, syms, line_no);
      expect_end(lex);
      const int r = f.fiber_rank;
      const std::size_t nrows = rows(b.matrix);
      if (b.kind == BlockKind::Endo && (nrows != static_cast<std::size_t>(r) ||
                                        cols(b.matrix) != static_cast<std::size_t>(r)))
        throw ParseError(ParseErrorKind::Dimension, line_no, 1,
                         "endo matrix must be rank x rank");
      if ((b.kind == BlockKind::Subbundle || b.kind == BlockKind::Cosubbundle) &&
          nrows != static_cast<std::size_t>(r))
        throw ParseError(ParseErrorKind::Dimension, line_no, 1,
                         "subbundle generators must have rank rows");
      if (b.kind == BlockKind::DoubleBundle && nrows != static_cast<std::size_t>(2 * r))
        throw ParseError(ParseErrorKind::Dimension, line_no, 1,
                         "doublebundle generators must have 2*rank rows");
    } else {
      ExprParser ep(lex, syms);
      b.value = ep.parse();
      expect_end(lex);
      Bidegree want = expected_bidegree(b.kind);
      if (!b.value.is_homogeneous_of(want))
        throw ParseError(ParseErrorKind::BidegreeMismatch, line_no, 1,
                         to_string(b.kind) + " '" + b.name + "' must have bidegree (" +
                             std::to_string(want.p) + "," + std::to_string(want.q) +
                             "): " + b.value.render(&f.names));
    }
    f.structures.push_back(std::move(b));
  }

  if (!saw_base) throw ParseError(ParseErrorKind::MissingBlock, line_no, 1, "missing base block");
  if (!saw_frame)
    throw ParseError(ParseErrorKind::MissingBlock, line_no, 1, "missing frame block");
  (void)saw_format;
  return f;
}

std::string DefinitionFile::render() const {
  std::ostringstream os;
  os << "format diracwb " << format_version << "\n\n";
  auto emit_names = [&](const char* kw, const std::vector<std::string>& ns) {
    if (ns.empty()) return;
    os << kw;
    for (const auto& n : ns) os << " " << n;
    os << "\n";
  };
  os << "base";
  for (const auto& n : names.base) os << " " << n;
  os << "\n";
  emit_names("momenta", names.momenta);
  os << "frame";
  for (const auto& n : names.frame) os << " " << n;
  os << "\n";
  emit_names("coframe", names.coframe);
  os << "\n";
  for (const auto& b : structures) {
    os << to_string(b.kind) << " " << b.name << " = ";
    if (is_matrix_kind(b.kind)) {
      os << "[";
      for (std::size_t i = 0; i < rows(b.matrix); ++i) {
        os << (i ? ",[" : "[");
        for (std::size_t j = 0; j < cols(b.matrix); ++j)
          os << (j ? "," : "") << b.matrix[i][j].render(&names);
        os << "]";
      }
      os << "]";
    } else {
      os << b.value.render(&names);
    }
    os << "\n";
  }
  if (!checks.empty()) os << "\n";
  for (const auto& c : checks) {
    os << "check " << c.command;
    for (const auto& [k, v] : c.params) os << " " << k << "=" << v;
    os << "\n";
  }
  return os.str();
}

}  // namespace diracwb
