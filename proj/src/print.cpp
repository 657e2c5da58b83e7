#include <map>
#include <set>
#include <string>
#include <vector>

#include "idiom/expr.hpp"
#include "idiom/term.hpp"

namespace idiom {

namespace {

bool pair_shaped(const TermPtr& t) {
  const App* outer = std::get_if<App>(&t->node);
  if (!outer) return false;
  const App* inner = std::get_if<App>(&outer->fun->node);
  return inner && is_prim(inner->fun, Prim::Pair);
}

bool internal_name(const std::string& name) {
  return name.find('$') != std::string::npos;
}

void collect_names(const TermPtr& t, std::set<std::string>& out) {
  if (const Var* v = std::get_if<Var>(&t->node)) {
    out.insert(v->name);
  } else if (const Lam* l = std::get_if<Lam>(&t->node)) {
    out.insert(l->binder);
    collect_names(l->body, out);
  } else if (const App* a = std::get_if<App>(&t->node)) {
    collect_names(a->fun, out);
    collect_names(a->arg, out);
  }
}

// Replaces internally generated binders ($-suffixed) with the first
// unused compact names: a..z, a1..z1, a2..
class CompactRenamer {
 public:
  explicit CompactRenamer(const TermPtr& t) { collect_names(t, used_); }

  TermPtr run(const TermPtr& t, std::map<std::string, std::string>& env) {
    if (const Var* v = std::get_if<Var>(&t->node)) {
      auto it = env.find(v->name);
      return it == env.end() ? t : mk_var(it->second);
    }
    if (const App* a = std::get_if<App>(&t->node))
      return mk_app(run(a->fun, env), run(a->arg, env));
    if (const Lam* l = std::get_if<Lam>(&t->node)) {
      std::string binder = l->binder;
      bool shadowed = env.count(binder) > 0;
      std::string saved = shadowed ? env[binder] : "";
      if (internal_name(binder)) {
        std::string compact = next_name();
        env[binder] = compact;
        TermPtr body = run(l->body, env);
        if (shadowed)
          env[l->binder] = saved;
        else
          env.erase(l->binder);
        return mk_lam(compact, body);
      }
      // A user binder shadows any outer rename of the same name.
      if (shadowed) env.erase(binder);
      TermPtr body = run(l->body, env);
      if (shadowed) env[binder] = saved;
      return mk_lam(binder, body);
    }
    return t;
  }

 private:
  std::string next_name() {
    for (;;) {
      std::string cand(1, static_cast<char>('a' + letter_));
      if (round_ > 0) cand += std::to_string(round_);
      if (++letter_ == 26) {
        letter_ = 0;
        ++round_;
      }
      if (!used_.count(cand)) {
        used_.insert(cand);
        return cand;
      }
    }
  }

  std::set<std::string> used_;
  int letter_ = 0;
  int round_ = 0;
};

TermPtr compact_binders(const TermPtr& t) {
  CompactRenamer r(t);
  std::map<std::string, std::string> env;
  return r.run(t, env);
}

enum class TermCtx { Top, AppLeft, Atom };

std::string term_rec(const TermPtr& t, TermCtx ctx);

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string term_rec(const TermPtr& t, TermCtx ctx) {
  if (const Var* v = std::get_if<Var>(&t->node)) return v->name;
  if (const Const* c = std::get_if<Const>(&t->node)) {
    if (const std::int64_t* n = std::get_if<std::int64_t>(&c->lit)) {
      if (*n >= 0) return std::to_string(*n);
      std::string s = "neg " + std::to_string(-*n);
      return ctx == TermCtx::Atom ? paren(s) : s;
    }
    return prim_name(std::get<Prim>(c->lit));
  }
  if (pair_shaped(t)) {
    const App& outer = std::get<App>(t->node);
    const App& inner = std::get<App>(outer.fun->node);
    return "(" + term_rec(inner.arg, TermCtx::Top) + ", " +
           term_rec(outer.arg, TermCtx::Top) + ")";
  }
  if (const App* a = std::get_if<App>(&t->node)) {
    std::string s =
        term_rec(a->fun, TermCtx::AppLeft) + " " + term_rec(a->arg, TermCtx::Atom);
    return ctx == TermCtx::Atom ? paren(s) : s;
  }
  const Lam* l = std::get_if<Lam>(&t->node);
  std::string binders = l->binder;
  TermPtr body = l->body;
  while (const Lam* inner = std::get_if<Lam>(&body->node)) {
    binders += " " + inner->binder;
    body = inner->body;
  }
  std::string s = "\\" + binders + " -> " + term_rec(body, TermCtx::Top);
  return ctx == TermCtx::Top ? s : paren(s);
}

std::string term_atom(const TermPtr& t) {
  return term_rec(compact_binders(t), TermCtx::Atom);
}

enum class ExprCtx { ApLeft, ApRight, ArgAtom };

std::string expr_rec(const ExprPtr& e, ExprCtx ctx) {
  if (const EffectVar* v = std::get_if<EffectVar>(&e->node)) return v->name;
  if (const ApE* a = std::get_if<ApE>(&e->node)) {
    std::string s = expr_rec(a->fun, ExprCtx::ApLeft) + " <*> " +
                    expr_rec(a->arg, ExprCtx::ApRight);
    return ctx == ExprCtx::ApLeft ? s : paren(s);
  }
  std::string s;
  if (const PureE* p = std::get_if<PureE>(&e->node)) {
    s = "pure " + term_atom(p->term);
  } else if (const FmapE* f = std::get_if<FmapE>(&e->node)) {
    s = "fmap " + term_atom(f->fn) + " " + expr_rec(f->arg, ExprCtx::ArgAtom);
  } else {
    const LiftE& l = std::get<LiftE>(e->node);
    s = "liftA" + std::to_string(l.arity) + " " + term_atom(l.head);
    for (const ExprPtr& arg : l.args) s += " " + expr_rec(arg, ExprCtx::ArgAtom);
  }
  return ctx == ExprCtx::ArgAtom ? paren(s) : s;
}

}  // namespace

std::string print_term(const TermPtr& t) {
  return term_rec(compact_binders(t), TermCtx::Top);
}

std::string print_expr(const ExprPtr& e) { return expr_rec(e, ExprCtx::ApLeft); }

}  // namespace idiom
