#include "idiom/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

namespace idiom {

ValuePtr v_int(std::int64_t n) { return std::make_shared<Value>(Value{n}); }

ValuePtr v_pair(ValuePtr a, ValuePtr b) {
  return std::make_shared<Value>(Value{PairVal{std::move(a), std::move(b)}});
}

ValuePtr v_prim(Prim op, std::vector<ValuePtr> args) {
  return std::make_shared<Value>(Value{PrimVal{op, std::move(args)}});
}

bool value_eq(const ValuePtr& a, const ValuePtr& b) {
  if (a == b) return true;
  if (a->v.index() != b->v.index()) return false;
  if (const std::int64_t* n = std::get_if<std::int64_t>(&a->v))
    return *n == std::get<std::int64_t>(b->v);
  if (const PairVal* p = std::get_if<PairVal>(&a->v)) {
    const PairVal& q = std::get<PairVal>(b->v);
    return value_eq(p->first, q.first) && value_eq(p->second, q.second);
  }
  if (const PrimVal* p = std::get_if<PrimVal>(&a->v)) {
    const PrimVal& q = std::get<PrimVal>(b->v);
    if (p->op != q.op || p->args.size() != q.args.size()) return false;
    for (std::size_t i = 0; i < p->args.size(); ++i)
      if (!value_eq(p->args[i], q.args[i])) return false;
    return true;
  }
  const Closure& ca = std::get<Closure>(a->v);
  const Closure& cb = std::get<Closure>(b->v);
  if (!alpha_eq(mk_lam(ca.binder, ca.body), mk_lam(cb.binder, cb.body)))
    return false;
  if (ca.env.size() != cb.env.size()) return false;
  for (const auto& [name, val] : ca.env) {
    auto it = cb.env.find(name);
    if (it == cb.env.end() || !value_eq(val, it->second)) return false;
  }
  return true;
}

std::string show_value(const ValuePtr& v) {
  if (const std::int64_t* n = std::get_if<std::int64_t>(&v->v))
    return std::to_string(*n);
  if (const PairVal* p = std::get_if<PairVal>(&v->v))
    return "(" + show_value(p->first) + ", " + show_value(p->second) + ")";
  return "<function>";
}

namespace {

std::size_t prim_arity(Prim op) {
  switch (op) {
    case Prim::Id:
    case Prim::Fst:
    case Prim::Snd:
    case Prim::Neg: return 1;
    case Prim::Add:
    case Prim::Pair: return 2;
  }
  return 1;
}

std::int64_t want_int(const ValuePtr& v, const char* who) {
  const std::int64_t* n = std::get_if<std::int64_t>(&v->v);
  if (!n) throw StuckError(std::string(who) + " applied to a non-integer");
  return *n;
}

ValuePtr run_prim(Prim op, const std::vector<ValuePtr>& args) {
  switch (op) {
    case Prim::Id: return args[0];
    case Prim::Fst:
    case Prim::Snd: {
      const PairVal* p = std::get_if<PairVal>(&args[0]->v);
      if (!p) throw StuckError("projection of a non-pair value");
      return op == Prim::Fst ? p->first : p->second;
    }
    case Prim::Pair: return v_pair(args[0], args[1]);
    case Prim::Add:
      return v_int(want_int(args[0], "add") + want_int(args[1], "add"));
    case Prim::Neg: return v_int(-want_int(args[0], "neg"));
  }
  throw StuckError("unknown primitive");
}

}  // namespace

ValuePtr apply_value(const ValuePtr& f, const ValuePtr& x) {
  if (const Closure* c = std::get_if<Closure>(&f->v)) {
    ValueEnv env = c->env;
    env[c->binder] = x;
    return eval_term(c->body, env);
  }
  if (const PrimVal* p = std::get_if<PrimVal>(&f->v)) {
    std::vector<ValuePtr> args = p->args;
    args.push_back(x);
    if (args.size() == prim_arity(p->op)) return run_prim(p->op, args);
    return v_prim(p->op, std::move(args));
  }
  throw StuckError("applied a non-function value");
}

ValuePtr eval_term(const TermPtr& t, const ValueEnv& env) {
  if (const Var* v = std::get_if<Var>(&t->node)) {
    auto it = env.find(v->name);
    if (it == env.end()) throw StuckError("unbound variable '" + v->name + "'");
    return it->second;
  }
  if (const Lam* l = std::get_if<Lam>(&t->node)) {
    ValueEnv captured;
    for (const std::string& name : free_vars(t)) {
      auto it = env.find(name);
      if (it != env.end()) captured.emplace(name, it->second);
    }
    return std::make_shared<Value>(Value{Closure{l->binder, l->body, std::move(captured)}});
  }
  if (const App* a = std::get_if<App>(&t->node))
    return apply_value(eval_term(a->fun, env), eval_term(a->arg, env));
  const Const& c = std::get<Const>(t->node);
  if (const std::int64_t* n = std::get_if<std::int64_t>(&c.lit)) return v_int(*n);
  return v_prim(std::get<Prim>(c.lit));
}

const char* instance_name(InstanceKind k) {
  switch (k) {
    case InstanceKind::Identity: return "identity";
    case InstanceKind::Option: return "option";
    case InstanceKind::List: return "list";
    case InstanceKind::Writer: return "writer";
  }
  return "?";
}

bool instance_from_name(std::string_view name, InstanceKind& out) {
  for (InstanceKind k : kAllInstances) {
    if (name == instance_name(k)) {
      out = k;
      return true;
    }
  }
  return false;
}

namespace {

Effect pure_effect(InstanceKind kind, ValuePtr v) {
  Effect e;
  e.kind = kind;
  e.items.push_back(std::move(v));
  return e;  // writer: empty log; option/identity/list: singleton
}

Effect ap_effect(const Effect& f, const Effect& x) {
  if (f.kind != x.kind) throw Error("mixed applicative instances in ap");
  Effect out;
  out.kind = f.kind;
  switch (f.kind) {
    case InstanceKind::Identity:
      out.items.push_back(apply_value(f.items.at(0), x.items.at(0)));
      return out;
    case InstanceKind::Option:
      if (!f.items.empty() && !x.items.empty())
        out.items.push_back(apply_value(f.items[0], x.items[0]));
      return out;
    case InstanceKind::List:
      for (const ValuePtr& fn : f.items)
        for (const ValuePtr& arg : x.items)
          out.items.push_back(apply_value(fn, arg));
      return out;
    case InstanceKind::Writer:
      out.log = f.log + x.log;
      out.items.push_back(apply_value(f.items.at(0), x.items.at(0)));
      return out;
  }
  throw Error("unknown instance");
}

}  // namespace

Effect Instance::pure_v(ValuePtr v) const { return pure_effect(kind, std::move(v)); }

Effect Instance::ap_v(const Effect& f, const Effect& x) const {
  return ap_effect(f, x);
}

const Instance& instance(InstanceKind k) {
  static const Instance table[] = {
      {InstanceKind::Identity, "identity"},
      {InstanceKind::Option, "option"},
      {InstanceKind::List, "list"},
      {InstanceKind::Writer, "writer"},
  };
  return table[static_cast<std::size_t>(k)];
}

bool effect_eq(const Effect& a, const Effect& b) {
  if (a.kind != b.kind || a.log != b.log || a.items.size() != b.items.size())
    return false;
  for (std::size_t i = 0; i < a.items.size(); ++i)
    if (!value_eq(a.items[i], b.items[i])) return false;
  return true;
}

std::string show_effect(const Effect& e) {
  switch (e.kind) {
    case InstanceKind::Identity: return show_value(e.items.at(0));
    case InstanceKind::Option:
      return e.items.empty() ? "none" : "some " + show_value(e.items[0]);
    case InstanceKind::List: {
      std::string out = "[";
      for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) out += ", ";
        out += show_value(e.items[i]);
      }
      return out + "]";
    }
    case InstanceKind::Writer:
      return "(\"" + e.log + "\", " + show_value(e.items.at(0)) + ")";
  }
  return "?";
}

namespace {

Effect eval_rec(const ExprPtr& e, InstanceKind inst, const EffectEnv& env,
                const ValueEnv& term_env) {
  if (const EffectVar* v = std::get_if<EffectVar>(&e->node)) {
    auto it = env.find(v->name);
    if (it == env.end()) throw UnboundEffectVar(v->name);
    return it->second;
  }
  if (const PureE* p = std::get_if<PureE>(&e->node))
    return pure_effect(inst, eval_term(p->term, term_env));
  const ApE& a = std::get<ApE>(e->node);
  Effect f = eval_rec(a.fun, inst, env, term_env);
  Effect x = eval_rec(a.arg, inst, env, term_env);
  return ap_effect(f, x);
}

}  // namespace

Effect eval_expr(const ExprPtr& e, InstanceKind inst, const EffectEnv& env,
                 const ValueEnv& term_env) {
  return eval_rec(expand_lift(e), inst, env, term_env);
}

namespace {

struct LiteralParser {
  std::string_view s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  bool eat_word(std::string_view w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) == 0) {
      pos += w.size();
      return true;
    }
    return false;
  }

  std::int64_t integer() {
    skip_ws();
    bool negative = pos < s.size() && s[pos] == '-';
    if (negative) ++pos;
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      throw Error("expected an integer in effect literal: '" + std::string(s) + "'");
    std::int64_t value = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      value = value * 10 + (s[pos] - '0');
      ++pos;
    }
    return negative ? -value : value;
  }

  void done() {
    skip_ws();
    if (pos != s.size())
      throw Error("trailing input in effect literal: '" + std::string(s) + "'");
  }
};

}  // namespace

Effect parse_effect_literal(InstanceKind kind, std::string_view text) {
  LiteralParser p{text};
  Effect e;
  e.kind = kind;
  switch (kind) {
    case InstanceKind::Identity:
      e.items.push_back(v_int(p.integer()));
      break;
    case InstanceKind::Option:
      if (p.eat_word("none")) break;
      if (!p.eat_word("some"))
        throw Error("option literal must be 'none' or 'some <int>': '" +
                    std::string(text) + "'");
      e.items.push_back(v_int(p.integer()));
      break;
    case InstanceKind::List: {
      if (!p.eat('[')) throw Error("list literal must look like [1, 2]");
      p.skip_ws();
      if (!p.eat(']')) {
        for (;;) {
          e.items.push_back(v_int(p.integer()));
          if (p.eat(']')) break;
          if (!p.eat(',')) throw Error("expected ',' or ']' in list literal");
        }
      }
      break;
    }
    case InstanceKind::Writer: {
      if (!p.eat('(') || !p.eat('"'))
        throw Error("writer literal must look like (\"log\", 5)");
      std::string log;
      while (p.pos < p.s.size() && p.s[p.pos] != '"') log += p.s[p.pos++];
      if (!p.eat('"') || !p.eat(','))
        throw Error("writer literal must look like (\"log\", 5)");
      e.log = log;
      e.items.push_back(v_int(p.integer()));
      if (!p.eat(')')) throw Error("writer literal must look like (\"log\", 5)");
      break;
    }
  }
  p.done();
  return e;
}

EffectEnv parse_env_file(InstanceKind kind, std::string_view content) {
  EffectEnv env;
  std::size_t line_start = 0;
  while (line_start <= content.size()) {
    std::size_t nl = content.find('\n', line_start);
    std::string_view line = content.substr(
        line_start, nl == std::string_view::npos ? content.size() - line_start
                                                 : nl - line_start);
    line_start = nl == std::string_view::npos ? content.size() + 1 : nl + 1;
    std::size_t a = 0, b = line.size();
    while (a < b && std::isspace(static_cast<unsigned char>(line[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(line[b - 1]))) --b;
    line = line.substr(a, b - a);
    if (line.empty() || line.substr(0, 2) == "--") continue;
    std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error("environment line missing '=': '" + std::string(line) + "'");
    std::string name(line.substr(0, eq));
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back())))
      name.pop_back();
    if (name.empty()) throw Error("environment line missing a name");
    env[name] = parse_effect_literal(kind, line.substr(eq + 1));
  }
  return env;
}

// ---- types ----

TypePtr ty_int() {
  static const TypePtr t = std::make_shared<Type>(Type{Type::Int, nullptr, nullptr});
  return t;
}

TypePtr ty_pair(TypePtr a, TypePtr b) {
  return std::make_shared<Type>(Type{Type::Pair, std::move(a), std::move(b)});
}

TypePtr ty_fn(TypePtr a, TypePtr b) {
  return std::make_shared<Type>(Type{Type::Fn, std::move(a), std::move(b)});
}

bool type_eq(const TypePtr& a, const TypePtr& b) {
  if (a == b) return true;
  if (a->kind != b->kind) return false;
  if (a->kind == Type::Int) return true;
  return type_eq(a->a, b->a) && type_eq(a->b, b->b);
}

std::string show_type(const TypePtr& t) {
  switch (t->kind) {
    case Type::Int: return "int";
    case Type::Pair: return "(" + show_type(t->a) + ", " + show_type(t->b) + ")";
    case Type::Fn: return show_type(t->a) + " -> " + show_type(t->b);
  }
  return "?";
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// ---- typed term generation ----

namespace {

struct ScopeVar {
  std::string name;
  TypePtr type;
};

TermPtr gen_term_rec(const TypePtr& ty, std::vector<ScopeVar>& scope, Rng& rng,
                     std::size_t depth);

std::vector<std::size_t> scope_matches(const std::vector<ScopeVar>& scope,
                                       const TypePtr& ty) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scope.size(); ++i)
    if (type_eq(scope[i].type, ty)) out.push_back(i);
  return out;
}

TermPtr gen_int_term(std::vector<ScopeVar>& scope, Rng& rng, std::size_t depth) {
  std::vector<std::size_t> vars = scope_matches(scope, ty_int());
  // candidate shapes: literal, scope var, add, neg, projection, fn-var app
  for (;;) {
    switch (rng.below(depth == 0 ? 2 : 6)) {
      case 0:
        return mk_int(static_cast<std::int64_t>(rng.below(10)));
      case 1:
        if (!vars.empty()) return mk_var(scope[vars[rng.below(vars.size())]].name);
        break;
      case 2:
        return mk_app(mk_app(mk_prim(Prim::Add),
                             gen_term_rec(ty_int(), scope, rng, depth - 1)),
                      gen_term_rec(ty_int(), scope, rng, depth - 1));
      case 3:
        return mk_app(mk_prim(Prim::Neg),
                      gen_term_rec(ty_int(), scope, rng, depth - 1));
      case 4: {
        bool first = rng.below(2) == 0;
        TermPtr pair = gen_term_rec(ty_pair(ty_int(), ty_int()), scope, rng, depth - 1);
        return mk_app(mk_prim(first ? Prim::Fst : Prim::Snd), pair);
      }
      case 5: {
        std::vector<std::size_t> fns = scope_matches(scope, ty_fn(ty_int(), ty_int()));
        if (!fns.empty())
          return mk_app(mk_var(scope[fns[rng.below(fns.size())]].name),
                        gen_term_rec(ty_int(), scope, rng, depth - 1));
        break;
      }
    }
  }
}

TermPtr gen_term_rec(const TypePtr& ty, std::vector<ScopeVar>& scope, Rng& rng,
                     std::size_t depth) {
  switch (ty->kind) {
    case Type::Int:
      return gen_int_term(scope, rng, depth);
    case Type::Pair: {
      std::vector<std::size_t> vars = scope_matches(scope, ty);
      if (!vars.empty() && rng.below(3) == 0)
        return mk_var(scope[vars[rng.below(vars.size())]].name);
      if (depth == 0)
        return mk_pair(gen_term_rec(ty->a, scope, rng, 0),
                       gen_term_rec(ty->b, scope, rng, 0));
      return mk_pair(gen_term_rec(ty->a, scope, rng, depth - 1),
                     gen_term_rec(ty->b, scope, rng, depth - 1));
    }
    case Type::Fn: {
      if (type_eq(ty->a, ty->b) && rng.chance_one_in(6)) return mk_prim(Prim::Id);
      if (ty->a->kind == Type::Int && ty->b->kind == Type::Int &&
          rng.chance_one_in(4))
        return mk_app(mk_prim(Prim::Add),
                      mk_int(static_cast<std::int64_t>(rng.below(10))));
      std::string binder = "v" + std::to_string(scope.size()) + "'";
      scope.push_back(ScopeVar{binder, ty->a});
      TermPtr body = gen_term_rec(ty->b, scope, rng, depth == 0 ? 0 : depth - 1);
      scope.pop_back();
      return mk_lam(binder, body);
    }
  }
  throw Error("unreachable type kind");
}

}  // namespace

TermPtr sample_term(const TypePtr& ty, Rng& rng) {
  std::vector<ScopeVar> scope;
  return gen_term_rec(ty, scope, rng, 2);
}

ValuePtr sample_value(const TypePtr& ty, Rng& rng) {
  switch (ty->kind) {
    case Type::Int: return v_int(rng.small_int());
    case Type::Pair:
      return v_pair(sample_value(ty->a, rng), sample_value(ty->b, rng));
    case Type::Fn: return eval_term(sample_term(ty, rng));
  }
  throw Error("unreachable type kind");
}

Effect sample_effect(InstanceKind kind, const TypePtr& elem, Rng& rng,
                     const std::string& tag) {
  Effect e;
  e.kind = kind;
  switch (kind) {
    case InstanceKind::Identity:
      e.items.push_back(sample_value(elem, rng));
      break;
    case InstanceKind::Option:
      if (rng.below(4) != 0) e.items.push_back(sample_value(elem, rng));
      break;
    case InstanceKind::List: {
      std::size_t len = rng.below(4);
      for (std::size_t i = 0; i < len; ++i)
        e.items.push_back(sample_value(elem, rng));
      break;
    }
    case InstanceKind::Writer:
      e.log = "<" + tag + std::to_string(rng.below(100)) + ">";
      e.items.push_back(sample_value(elem, rng));
      break;
  }
  return e;
}

// ---- typed expression generation ----

namespace {

struct ExprGen {
  Rng rng;
  std::size_t max_depth;
  std::size_t max_arity;
  std::map<std::string, TypePtr> effect_vars;
  std::size_t next_var = 0;

  explicit ExprGen(const GenSpec& spec)
      : rng(mix_seed(spec.seed, 0x1d10u)), max_depth(spec.max_depth),
        max_arity(spec.max_arity > 4 ? 4 : spec.max_arity) {}

  TypePtr element_type() {
    switch (rng.below(3)) {
      case 0: return ty_int();
      case 1: return ty_pair(ty_int(), ty_int());
      default: return ty_fn(ty_int(), ty_int());
    }
  }

  // leaf_budget bounds the number of effect-variable occurrences in the
  // subtree, which also bounds the fused arity of the whole expression.
  ExprPtr leaf(const TypePtr& ty, std::size_t leaf_budget) {
    if (leaf_budget > 0 && rng.below(4) != 0) {
      std::vector<std::string> matching;
      for (const auto& [name, t] : effect_vars)
        if (type_eq(t, ty)) matching.push_back(name);
      if (!matching.empty() && rng.below(3) != 0)
        return mk_evar(matching[rng.below(matching.size())]);
      std::string name = "u" + std::to_string(next_var++);
      effect_vars[name] = ty;
      return mk_evar(name);
    }
    return mk_pure(sample_term(ty, rng));
  }

  ExprPtr gen(const TypePtr& ty, std::size_t depth, std::size_t leaf_budget) {
    if (depth == 0) return leaf(ty, leaf_budget);
    switch (rng.below(5)) {
      case 0:
      case 1:
        return leaf(ty, leaf_budget);
      case 2: {
        TypePtr a = element_type();
        return mk_fmap(sample_term(ty_fn(a, ty), rng), gen(a, depth - 1, leaf_budget));
      }
      case 3: {
        TypePtr a = element_type();
        std::size_t half = leaf_budget / 2;
        return mk_ap(gen(ty_fn(a, ty), depth - 1, leaf_budget - half),
                     gen(a, depth - 1, half));
      }
      default: {
        std::size_t arity = rng.below(max_arity + 1);
        std::vector<TypePtr> doms;
        TypePtr head_ty = ty;
        for (std::size_t i = 0; i < arity; ++i) doms.push_back(element_type());
        for (std::size_t i = arity; i-- > 0;) head_ty = ty_fn(doms[i], head_ty);
        std::vector<ExprPtr> args;
        std::size_t share = arity ? leaf_budget / arity : 0;
        for (std::size_t i = 0; i < arity; ++i)
          args.push_back(gen(doms[i], depth - 1, share));
        return mk_lift(sample_term(head_ty, rng), std::move(args));
      }
    }
  }
};

}  // namespace

GeneratedExpr generate(const GenSpec& spec) {
  ExprGen g(spec);
  TypePtr root =
      g.rng.below(4) == 0 ? ty_pair(ty_int(), ty_int()) : ty_int();
  GeneratedExpr out;
  out.expr = g.gen(root, spec.max_depth, 12);
  out.effect_vars = std::move(g.effect_vars);
  out.root_type = root;
  out.has_effects = !out.effect_vars.empty();
  return out;
}

EffectEnv sample_effect_env(const GeneratedExpr& g, InstanceKind kind, Rng& rng) {
  EffectEnv env;
  for (const auto& [name, ty] : g.effect_vars)
    env[name] = sample_effect(kind, ty, rng, name);
  return env;
}

FuzzReport soundness_fuzz(std::size_t count, std::size_t envs_per_instance,
                          std::uint64_t seed, const Options& opts,
                          const GenSpec& base) {
  FuzzReport report;
  for (std::size_t i = 0; i < count; ++i) {
    std::uint64_t case_seed = mix_seed(seed, i);
    GenSpec spec = base;
    spec.seed = case_seed;
    GeneratedExpr g = generate(spec);
    ++report.count;
    if (g.has_effects) ++report.with_effects;

    ExprPtr normalized;
    try {
      auto [canon, trace] = canonicalize(g.expr, opts);
      normalized = expand_lift(canon.to_lift());
    } catch (const Error& err) {
      report.ok = false;
      report.failing_seed = case_seed;
      report.message = std::string("canonicalize failed: ") + err.what() +
                       "\n  expr: " + print_expr(g.expr);
      return report;
    }

    for (InstanceKind kind : kAllInstances) {
      for (std::size_t j = 0; j < envs_per_instance; ++j) {
        Rng env_rng(mix_seed(case_seed, 1000 + 10 * j + static_cast<int>(kind)));
        EffectEnv env = sample_effect_env(g, kind, env_rng);
        Effect before, after;
        try {
          before = eval_expr(g.expr, kind, env);
          after = eval_expr(normalized, kind, env);
        } catch (const Error& err) {
          report.ok = false;
          report.failing_seed = case_seed;
          report.message = std::string("evaluation failed: ") + err.what() +
                           "\n  expr: " + print_expr(g.expr) +
                           "\n  instance: " + instance_name(kind);
          return report;
        }
        ++report.comparisons;
        if (!effect_eq(before, after)) {
          report.ok = false;
          report.failing_seed = case_seed;
          report.message =
              std::string("semantics changed by normalization") +
              "\n  expr:       " + print_expr(g.expr) +
              "\n  normalized: " + print_expr(normalized) +
              "\n  instance:   " + instance_name(kind) +
              "\n  before:     " + show_effect(before) +
              "\n  after:      " + show_effect(after);
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace idiom
