#include "idiom/parse.hpp"

#include <cctype>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace idiom {

namespace {

enum class Tok {
  LParen,
  RParen,
  Comma,
  Lambda,
  Arrow,
  ApOp,
  Ident,
  Nat,
  KwPure,
  KwFmap,
  KwLiftA,  // arity in `nat` when written fused (liftA2)
  KwPrim,   // id/fst/snd/add/neg/pair, which one in `prim`
  End,
};

struct Token {
  Tok kind;
  SourceSpan span;
  std::string text;
  std::int64_t nat = -1;  // Nat value, or fused liftA arity (-1 if bare)
  Prim prim = Prim::Id;
};

const char* tok_label(Tok k) {
  switch (k) {
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Lambda: return "'\\'";
    case Tok::Arrow: return "'->'";
    case Tok::ApOp: return "'<*>'";
    case Tok::Ident: return "identifier";
    case Tok::Nat: return "number";
    case Tok::KwPure: return "'pure'";
    case Tok::KwFmap: return "'fmap'";
    case Tok::KwLiftA: return "'liftA'";
    case Tok::KwPrim: return "primitive";
    case Tok::End: return "end of input";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        out.push_back(make(Tok::End, pos_ ? pos_ - 1 : 0, pos_));
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
      } else if (c == '\n') {
        advance();
      } else if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token next() {
    std::size_t begin = pos_;
    std::size_t bline = line_, bcol = col_;
    char c = src_[pos_];
    auto tok = [&](Tok kind) {
      Token t = make(kind, begin, pos_);
      t.span.line = bline;
      t.span.column = bcol;
      return t;
    };

    if (c == '(') { advance(); return tok(Tok::LParen); }
    if (c == ')') { advance(); return tok(Tok::RParen); }
    if (c == ',') { advance(); return tok(Tok::Comma); }
    if (c == '\\') { advance(); return tok(Tok::Lambda); }
    if (starts_with("\xce\xbb")) {  // λ
      advance(); advance();
      return tok(Tok::Lambda);
    }
    if (starts_with("<*>")) {
      advance(); advance(); advance();
      return tok(Tok::ApOp);
    }
    if (starts_with("\xe2\x8a\x9b")) {  // ⊛
      advance(); advance(); advance();
      return tok(Tok::ApOp);
    }
    if (c == '-') {
      if (pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
        advance(); advance();
        return tok(Tok::Arrow);
      }
      throw err(begin, bline, bcol, "unexpected '-'", {"'->'"});
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t value = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        value = value * 10 + (src_[pos_] - '0');
        advance();
      }
      Token t = tok(Tok::Nat);
      t.nat = value;
      return t;
    }
    if (c >= 'a' && c <= 'z') {
      while (pos_ < src_.size() && ident_char(src_[pos_])) advance();
      Token t = tok(Tok::Ident);
      t.text = std::string(src_.substr(begin, pos_ - begin));
      classify(t);
      return t;
    }
    throw err(begin, bline, bcol,
              std::string("unexpected character '") + c + "'",
              {"identifier", "number", "'('", "'\\'"});
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '\'';
  }

  void classify(Token& t) {
    const std::string& s = t.text;
    if (s == "pure") { t.kind = Tok::KwPure; return; }
    if (s == "fmap") { t.kind = Tok::KwFmap; return; }
    if (s == "id") { t.kind = Tok::KwPrim; t.prim = Prim::Id; return; }
    if (s == "fst") { t.kind = Tok::KwPrim; t.prim = Prim::Fst; return; }
    if (s == "snd") { t.kind = Tok::KwPrim; t.prim = Prim::Snd; return; }
    if (s == "pair") { t.kind = Tok::KwPrim; t.prim = Prim::Pair; return; }
    if (s == "add") { t.kind = Tok::KwPrim; t.prim = Prim::Add; return; }
    if (s == "neg") { t.kind = Tok::KwPrim; t.prim = Prim::Neg; return; }
    if (s == "liftA") { t.kind = Tok::KwLiftA; t.nat = -1; return; }
    if (s.size() > 5 && s.compare(0, 5, "liftA") == 0) {
      std::int64_t arity = 0;
      for (std::size_t i = 5; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return;  // plain ident
        arity = arity * 10 + (s[i] - '0');
      }
      t.kind = Tok::KwLiftA;
      t.nat = arity;
    }
  }

  bool starts_with(std::string_view what) const {
    return src_.compare(pos_, what.size(), what) == 0;
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  Token make(Tok kind, std::size_t begin, std::size_t end) const {
    Token t;
    t.kind = kind;
    t.span = SourceSpan{begin, end, line_, col_};
    return t;
  }

  ParseError err(std::size_t begin, std::size_t line, std::size_t col,
                 const std::string& msg, std::vector<std::string> expected) const {
    SourceSpan span{begin, begin + 1 > src_.size() ? src_.size() : begin + 1, line, col};
    return ParseError(msg + " at " + std::to_string(line) + ":" + std::to_string(col),
                      span, std::move(expected));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::string_view src, const ParseOpts& opts)
      : opts_(opts), toks_(Lexer(src).run()) {}

  ExprPtr expr_top() {
    ExprPtr e = expr();
    expect_end();
    return e;
  }

  TermPtr term_top() {
    TermPtr t = term();
    expect_end();
    return t;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token eat() { return toks_[pos_++]; }

  [[noreturn]] void fail(const Token& at, std::vector<std::string> expected) {
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found ";
    msg += at.kind == Tok::Ident ? "'" + at.text + "'" : tok_label(at.kind);
    msg += " at " + std::to_string(at.span.line) + ":" + std::to_string(at.span.column);
    throw ParseError(msg, at.span, std::move(expected));
  }

  void expect_end() {
    if (peek().kind != Tok::End) fail(peek(), {"'<*>'", "end of input"});
  }

  static bool starts_aexpr(Tok k) {
    return k == Tok::Ident || k == Tok::KwPure || k == Tok::KwFmap ||
           k == Tok::KwLiftA || k == Tok::LParen;
  }

  static bool starts_term_atom(Tok k) {
    return k == Tok::Ident || k == Tok::Nat || k == Tok::KwPrim || k == Tok::LParen;
  }

  ExprPtr expr() {
    ExprPtr e = aexpr();
    while (peek().kind == Tok::ApOp) {
      eat();
      e = mk_ap(e, aexpr());
    }
    return e;
  }

  ExprPtr aexpr() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::KwPure: {
        eat();
        return mk_pure(term_atom());
      }
      case Tok::KwFmap: {
        eat();
        TermPtr fn = term_atom();
        return mk_fmap(fn, aexpr());
      }
      case Tok::KwLiftA: {
        Token kw = eat();
        std::int64_t arity = kw.nat;
        if (arity < 0) {
          if (peek().kind != Tok::Nat) fail(peek(), {"number"});
          arity = eat().nat;
        }
        if (static_cast<std::size_t>(arity) > opts_.arity_cap)
          throw ArityCapExceeded(static_cast<std::size_t>(arity), opts_.arity_cap);
        TermPtr head = term_atom();
        std::vector<ExprPtr> args;
        while (starts_aexpr(peek().kind)) args.push_back(aexpr());
        if (args.size() != static_cast<std::size_t>(arity))
          throw ArityMismatch("liftA" + std::to_string(arity) + " expects " +
                                  std::to_string(arity) + " arguments, got " +
                                  std::to_string(args.size()) + " at " +
                                  std::to_string(kw.span.line) + ":" +
                                  std::to_string(kw.span.column),
                              kw.span, {"matching argument count"});
        return mk_lift(head, std::move(args));
      }
      case Tok::Ident:
        return mk_evar(eat().text);
      case Tok::LParen: {
        eat();
        ExprPtr e = expr();
        if (peek().kind != Tok::RParen) fail(peek(), {"')'", "'<*>'"});
        eat();
        return e;
      }
      default:
        fail(t, {"'pure'", "'fmap'", "'liftA'", "identifier", "'('"});
    }
  }

  struct Pat {
    bool is_pair = false;
    std::string a, b;
    SourceSpan span;
  };

  Pat pattern() {
    const Token& t = peek();
    if (t.kind == Tok::Ident) {
      Token id = eat();
      return Pat{false, id.text, "", id.span};
    }
    if (t.kind == Tok::LParen) {
      Token open = eat();
      if (peek().kind != Tok::Ident) fail(peek(), {"identifier"});
      std::string a = eat().text;
      if (peek().kind != Tok::Comma) fail(peek(), {"','"});
      eat();
      if (peek().kind != Tok::Ident) fail(peek(), {"identifier"});
      std::string b = eat().text;
      if (peek().kind != Tok::RParen) fail(peek(), {"')'"});
      eat();
      if (a == b)
        throw ParseError("duplicate variable '" + a + "' in pair pattern at " +
                             std::to_string(open.span.line) + ":" +
                             std::to_string(open.span.column),
                         open.span, {"distinct identifiers"});
      return Pat{true, a, b, open.span};
    }
    fail(t, {"identifier", "'('"});
  }

  TermPtr term() {
    if (peek().kind == Tok::Lambda) {
      eat();
      std::vector<Pat> pats;
      pats.push_back(pattern());
      while (peek().kind == Tok::Ident || peek().kind == Tok::LParen)
        pats.push_back(pattern());
      if (peek().kind != Tok::Arrow) fail(peek(), {"'->'", "identifier", "'('"});
      eat();
      TermPtr body = term();
      for (std::size_t i = pats.size(); i-- > 0;) body = bind_pattern(pats[i], body);
      return body;
    }
    return term_app();
  }

  static TermPtr bind_pattern(const Pat& p, const TermPtr& body) {
    if (!p.is_pair) return mk_lam(p.a, body);
    std::set<std::string> avoid = free_vars(body);
    avoid.insert(p.a);
    avoid.insert(p.b);
    FreshNames names;
    std::string binder = names.fresh("p", avoid);
    TermPtr replaced =
        substitute(body, p.a, mk_app(mk_prim(Prim::Fst), mk_var(binder)));
    replaced = substitute(replaced, p.b, mk_app(mk_prim(Prim::Snd), mk_var(binder)));
    return mk_lam(binder, replaced);
  }

  TermPtr term_app() {
    TermPtr t = term_atom();
    while (starts_term_atom(peek().kind)) t = mk_app(t, term_atom());
    return t;
  }

  TermPtr term_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Ident:
        return mk_var(eat().text);
      case Tok::Nat:
        return mk_int(eat().nat);
      case Tok::KwPrim:
        return mk_prim(eat().prim);
      case Tok::LParen: {
        eat();
        TermPtr first = term();
        if (peek().kind == Tok::Comma) {
          eat();
          TermPtr second = term();
          if (peek().kind != Tok::RParen) fail(peek(), {"')'"});
          eat();
          return mk_pair(first, second);
        }
        if (peek().kind != Tok::RParen) fail(peek(), {"')'", "','"});
        eat();
        return first;
      }
      default:
        fail(t, {"identifier", "number", "'id'", "'fst'", "'snd'", "'add'",
                 "'neg'", "'('"});
    }
  }

  ParseOpts opts_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expr(std::string_view input, const ParseOpts& opts) {
  Parser p(input, opts);
  return p.expr_top();
}

TermPtr parse_term(std::string_view input) {
  Parser p(input, ParseOpts{});
  return p.term_top();
}

}  // namespace idiom
