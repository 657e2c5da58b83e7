#include "idiom/term.hpp"

#include <algorithm>
#include <optional>
#include <utility>

namespace idiom {

TermPtr mk_var(std::string name) {
  return std::make_shared<Term>(Term{Var{std::move(name)}});
}

TermPtr mk_lam(std::string binder, TermPtr body) {
  return std::make_shared<Term>(Term{Lam{std::move(binder), std::move(body)}});
}

TermPtr mk_app(TermPtr fun, TermPtr arg) {
  return std::make_shared<Term>(Term{App{std::move(fun), std::move(arg)}});
}

TermPtr mk_app(TermPtr fun, const std::vector<TermPtr>& args) {
  TermPtr t = std::move(fun);
  for (const auto& a : args) t = mk_app(t, a);
  return t;
}

TermPtr mk_int(std::int64_t value) {
  return std::make_shared<Term>(Term{Const{value}});
}

TermPtr mk_prim(Prim p) {
  return std::make_shared<Term>(Term{Const{p}});
}

TermPtr mk_pair(TermPtr first, TermPtr second) {
  return mk_app(mk_app(mk_prim(Prim::Pair), std::move(first)), std::move(second));
}

TermPtr identity_term() {
  static const TermPtr id = mk_lam("x", mk_var("x"));
  return id;
}

const char* prim_name(Prim p) {
  switch (p) {
    case Prim::Id: return "id";
    case Prim::Fst: return "fst";
    case Prim::Snd: return "snd";
    case Prim::Pair: return "pair";
    case Prim::Add: return "add";
    case Prim::Neg: return "neg";
  }
  return "?";
}

bool is_var(const TermPtr& t) { return std::holds_alternative<Var>(t->node); }
bool is_lam(const TermPtr& t) { return std::holds_alternative<Lam>(t->node); }
bool is_app(const TermPtr& t) { return std::holds_alternative<App>(t->node); }
bool is_const(const TermPtr& t) { return std::holds_alternative<Const>(t->node); }

bool is_prim(const TermPtr& t, Prim p) {
  const Const* c = std::get_if<Const>(&t->node);
  if (!c) return false;
  const Prim* q = std::get_if<Prim>(&c->lit);
  return q && *q == p;
}

bool is_int_const(const TermPtr& t) {
  const Const* c = std::get_if<Const>(&t->node);
  return c && std::holds_alternative<std::int64_t>(c->lit);
}

namespace {

void free_vars_rec(const TermPtr& t, std::vector<std::string>& bound,
                   std::set<std::string>& out) {
  if (const Var* v = std::get_if<Var>(&t->node)) {
    if (std::find(bound.rbegin(), bound.rend(), v->name) == bound.rend())
      out.insert(v->name);
  } else if (const Lam* l = std::get_if<Lam>(&t->node)) {
    bound.push_back(l->binder);
    free_vars_rec(l->body, bound, out);
    bound.pop_back();
  } else if (const App* a = std::get_if<App>(&t->node)) {
    free_vars_rec(a->fun, bound, out);
    free_vars_rec(a->arg, bound, out);
  }
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  free_vars_rec(t, bound, out);
  return out;
}

bool occurs_free(const TermPtr& t, const std::string& name) {
  if (const Var* v = std::get_if<Var>(&t->node)) return v->name == name;
  if (const Lam* l = std::get_if<Lam>(&t->node))
    return l->binder != name && occurs_free(l->body, name);
  if (const App* a = std::get_if<App>(&t->node))
    return occurs_free(a->fun, name) || occurs_free(a->arg, name);
  return false;
}

namespace {

// Position of name in the binder stack, innermost first.
std::optional<std::size_t> bound_index(const std::vector<std::string>& stack,
                                       const std::string& name) {
  for (std::size_t i = stack.size(); i-- > 0;)
    if (stack[i] == name) return stack.size() - 1 - i;
  return std::nullopt;
}

bool alpha_rec(const TermPtr& a, const TermPtr& b, std::vector<std::string>& sa,
               std::vector<std::string>& sb) {
  if (a->node.index() != b->node.index()) return false;
  if (const Var* va = std::get_if<Var>(&a->node)) {
    const Var& vb = std::get<Var>(b->node);
    auto ia = bound_index(sa, va->name);
    auto ib = bound_index(sb, vb.name);
    if (ia.has_value() != ib.has_value()) return false;
    return ia ? *ia == *ib : va->name == vb.name;
  }
  if (const Lam* la = std::get_if<Lam>(&a->node)) {
    const Lam& lb = std::get<Lam>(b->node);
    sa.push_back(la->binder);
    sb.push_back(lb.binder);
    bool ok = alpha_rec(la->body, lb.body, sa, sb);
    sa.pop_back();
    sb.pop_back();
    return ok;
  }
  if (const App* aa = std::get_if<App>(&a->node)) {
    const App& ab = std::get<App>(b->node);
    return alpha_rec(aa->fun, ab.fun, sa, sb) && alpha_rec(aa->arg, ab.arg, sa, sb);
  }
  return std::get<Const>(a->node).lit == std::get<Const>(b->node).lit;
}

}  // namespace

bool alpha_eq(const TermPtr& a, const TermPtr& b) {
  std::vector<std::string> sa, sb;
  return alpha_rec(a, b, sa, sb);
}

std::string FreshNames::fresh(const std::string& base,
                              const std::set<std::string>& avoid) {
  std::string stem = base.substr(0, base.find('$'));
  if (stem.empty()) stem = "x";
  for (;;) {
    std::string cand = stem + "$" + std::to_string(next_++);
    if (!avoid.count(cand)) return cand;
  }
}

namespace {

struct Subst {
  const std::string& x;
  const TermPtr& s;
  std::set<std::string> fv_s;
  FreshNames& names;

  TermPtr run(const TermPtr& t) {
    if (!occurs_free(t, x)) return t;
    if (std::holds_alternative<Var>(t->node)) return s;  // must be x here
    if (const App* a = std::get_if<App>(&t->node))
      return mk_app(run(a->fun), run(a->arg));
    const Lam& l = std::get<Lam>(t->node);
    if (fv_s.count(l.binder)) {
      std::set<std::string> avoid = free_vars(l.body);
      avoid.insert(fv_s.begin(), fv_s.end());
      avoid.insert(x);
      std::string renamed = names.fresh(l.binder, avoid);
      TermPtr fresh_var = mk_var(renamed);
      Subst ren{l.binder, fresh_var, {renamed}, names};
      return mk_lam(renamed, run(ren.run(l.body)));
    }
    return mk_lam(l.binder, run(l.body));
  }
};

}  // namespace

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s,
                   FreshNames& names) {
  Subst sub{x, s, free_vars(s), names};
  return sub.run(t);
}

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s) {
  FreshNames names;
  return substitute(t, x, s, names);
}

namespace {

class Normalizer {
 public:
  explicit Normalizer(const TermNormOpts& opts) : opts_(opts) {}

  TermPtr nf(const TermPtr& t0) {
    TermPtr t = whnf(t0);
    if (const Lam* l = std::get_if<Lam>(&t->node)) {
      TermPtr body = nf(l->body);
      if (opts_.eta) {
        if (const App* a = std::get_if<App>(&body->node)) {
          const Var* v = std::get_if<Var>(&a->arg->node);
          if (v && v->name == l->binder && !occurs_free(a->fun, l->binder)) {
            count();
            return a->fun;
          }
        }
      }
      return body == l->body ? t : mk_lam(l->binder, body);
    }
    if (const App* a = std::get_if<App>(&t->node)) {
      TermPtr fun = nf(a->fun);
      TermPtr arg = nf(a->arg);
      return (fun == a->fun && arg == a->arg) ? t : mk_app(fun, arg);
    }
    return t;
  }

 private:
  void count() {
    if (++steps_ > opts_.step_budget) throw DivergenceError(opts_.step_budget);
  }

  TermPtr whnf(TermPtr t) {
    for (;;) {
      if (is_prim(t, Prim::Id)) {
        count();
        t = identity_term();
        continue;
      }
      const App* a = std::get_if<App>(&t->node);
      if (!a) return t;
      TermPtr fun = whnf(a->fun);
      if (const Lam* l = std::get_if<Lam>(&fun->node)) {
        count();
        t = substitute(l->body, l->binder, a->arg, names_);
        continue;
      }
      if (auto r = delta(fun, a->arg)) {
        t = *r;
        continue;
      }
      return fun == a->fun ? t : mk_app(fun, a->arg);
    }
  }

  // Contractions of saturated primitives; nullopt when nothing fires.
  std::optional<TermPtr> delta(const TermPtr& fun, const TermPtr& arg) {
    if (is_prim(fun, Prim::Fst) || is_prim(fun, Prim::Snd)) {
      TermPtr p = whnf(arg);
      if (const App* outer = std::get_if<App>(&p->node)) {
        if (const App* inner = std::get_if<App>(&outer->fun->node)) {
          if (is_prim(inner->fun, Prim::Pair)) {
            count();
            return is_prim(fun, Prim::Fst) ? inner->arg : outer->arg;
          }
        }
      }
      return std::nullopt;
    }
    if (is_prim(fun, Prim::Neg)) {
      TermPtr v = whnf(arg);
      if (is_int_const(v)) {
        count();
        return mk_int(-std::get<std::int64_t>(std::get<Const>(v->node).lit));
      }
      return std::nullopt;
    }
    if (const App* f = std::get_if<App>(&fun->node); f && is_prim(f->fun, Prim::Add)) {
      TermPtr x = whnf(f->arg);
      TermPtr y = whnf(arg);
      if (is_int_const(x) && is_int_const(y)) {
        count();
        return mk_int(std::get<std::int64_t>(std::get<Const>(x->node).lit) +
                      std::get<std::int64_t>(std::get<Const>(y->node).lit));
      }
    }
    return std::nullopt;
  }

  const TermNormOpts& opts_;
  std::size_t steps_ = 0;
  FreshNames names_;
};

}  // namespace

TermPtr normalize_term(const TermPtr& t, const TermNormOpts& opts) {
  Normalizer n(opts);
  return n.nf(t);
}

namespace {

bool pair_shaped(const TermPtr& t) {
  const App* outer = std::get_if<App>(&t->node);
  if (!outer) return false;
  const App* inner = std::get_if<App>(&outer->fun->node);
  return inner && is_prim(inner->fun, Prim::Pair);
}

}  // namespace

bool is_normal(const TermPtr& t, bool eta) {
  if (is_prim(t, Prim::Id)) return false;
  if (const Lam* l = std::get_if<Lam>(&t->node)) {
    if (eta) {
      if (const App* a = std::get_if<App>(&l->body->node)) {
        const Var* v = std::get_if<Var>(&a->arg->node);
        if (v && v->name == l->binder && !occurs_free(a->fun, l->binder))
          return false;
      }
    }
    return is_normal(l->body, eta);
  }
  if (const App* a = std::get_if<App>(&t->node)) {
    if (is_lam(a->fun)) return false;
    if ((is_prim(a->fun, Prim::Fst) || is_prim(a->fun, Prim::Snd)) &&
        pair_shaped(a->arg))
      return false;
    if (is_prim(a->fun, Prim::Neg) && is_int_const(a->arg)) return false;
    if (const App* f = std::get_if<App>(&a->fun->node))
      if (is_prim(f->fun, Prim::Add) && is_int_const(f->arg) && is_int_const(a->arg))
        return false;
    return is_normal(a->fun, eta) && is_normal(a->arg, eta);
  }
  return true;
}

TermPtr compose_nm(const TermPtr& f, const TermPtr& g, std::size_t n,
                   std::size_t m, std::size_t arity_cap,
                   std::size_t step_budget) {
  if (n + m > arity_cap) throw ArityCapExceeded(n + m, arity_cap);
  std::set<std::string> avoid = free_vars(f);
  {
    std::set<std::string> fg = free_vars(g);
    avoid.insert(fg.begin(), fg.end());
  }
  FreshNames names;
  std::vector<std::string> binders;
  std::vector<TermPtr> f_args, g_args;
  for (std::size_t i = 0; i < n; ++i) {
    std::string a = names.fresh("a", avoid);
    avoid.insert(a);
    binders.push_back(a);
    f_args.push_back(mk_var(a));
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::string b = names.fresh("b", avoid);
    avoid.insert(b);
    binders.push_back(b);
    g_args.push_back(mk_var(b));
  }
  TermPtr body = mk_app(mk_app(f, f_args), mk_app(g, g_args));
  TermPtr t = std::move(body);
  for (std::size_t i = binders.size(); i-- > 0;) t = mk_lam(binders[i], t);
  return normalize_term(t, TermNormOpts{/*eta=*/false, step_budget});
}

}  // namespace idiom
