#include "idiom/expr.hpp"

#include <utility>

namespace idiom {

ExprPtr mk_evar(std::string name) {
  return std::make_shared<Expr>(Expr{EffectVar{std::move(name)}});
}

ExprPtr mk_pure(TermPtr term) {
  return std::make_shared<Expr>(Expr{PureE{std::move(term)}});
}

ExprPtr mk_ap(ExprPtr fun, ExprPtr arg) {
  return std::make_shared<Expr>(Expr{ApE{std::move(fun), std::move(arg)}});
}

ExprPtr mk_fmap(TermPtr fn, ExprPtr arg) {
  return std::make_shared<Expr>(Expr{FmapE{std::move(fn), std::move(arg)}});
}

ExprPtr mk_lift(TermPtr head, std::vector<ExprPtr> args) {
  std::size_t n = args.size();
  return std::make_shared<Expr>(Expr{LiftE{n, std::move(head), std::move(args)}});
}

bool is_evar(const ExprPtr& e) { return std::holds_alternative<EffectVar>(e->node); }
bool is_lift(const ExprPtr& e) { return std::holds_alternative<LiftE>(e->node); }

bool expr_eq(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (a->node.index() != b->node.index()) return false;
  if (const EffectVar* va = std::get_if<EffectVar>(&a->node))
    return va->name == std::get<EffectVar>(b->node).name;
  if (const PureE* pa = std::get_if<PureE>(&a->node))
    return alpha_eq(pa->term, std::get<PureE>(b->node).term);
  if (const ApE* aa = std::get_if<ApE>(&a->node)) {
    const ApE& ab = std::get<ApE>(b->node);
    return expr_eq(aa->fun, ab.fun) && expr_eq(aa->arg, ab.arg);
  }
  if (const FmapE* fa = std::get_if<FmapE>(&a->node)) {
    const FmapE& fb = std::get<FmapE>(b->node);
    return alpha_eq(fa->fn, fb.fn) && expr_eq(fa->arg, fb.arg);
  }
  const LiftE& la = std::get<LiftE>(a->node);
  const LiftE& lb = std::get<LiftE>(b->node);
  if (la.arity != lb.arity || !alpha_eq(la.head, lb.head)) return false;
  for (std::size_t i = 0; i < la.args.size(); ++i)
    if (!expr_eq(la.args[i], lb.args[i])) return false;
  return true;
}

std::vector<ExprPtr> children(const ExprPtr& e) {
  if (const ApE* a = std::get_if<ApE>(&e->node)) return {a->fun, a->arg};
  if (const FmapE* f = std::get_if<FmapE>(&e->node)) return {f->arg};
  if (const LiftE* l = std::get_if<LiftE>(&e->node)) return l->args;
  return {};
}

ExprPtr subexpr_at(const ExprPtr& e, const Position& p) {
  ExprPtr cur = e;
  for (std::size_t step : p) {
    std::vector<ExprPtr> kids = children(cur);
    if (step >= kids.size())
      throw InvalidPosition("position " + position_to_string(p) +
                            " does not address a subexpression");
    cur = kids[step];
  }
  return cur;
}

namespace {

ExprPtr replace_rec(const ExprPtr& e, const Position& p, std::size_t depth,
                    const ExprPtr& r) {
  if (depth == p.size()) return r;
  std::size_t step = p[depth];
  if (const ApE* a = std::get_if<ApE>(&e->node)) {
    if (step == 0) return mk_ap(replace_rec(a->fun, p, depth + 1, r), a->arg);
    if (step == 1) return mk_ap(a->fun, replace_rec(a->arg, p, depth + 1, r));
  } else if (const FmapE* f = std::get_if<FmapE>(&e->node)) {
    if (step == 0) return mk_fmap(f->fn, replace_rec(f->arg, p, depth + 1, r));
  } else if (const LiftE* l = std::get_if<LiftE>(&e->node)) {
    if (step < l->args.size()) {
      std::vector<ExprPtr> args = l->args;
      args[step] = replace_rec(args[step], p, depth + 1, r);
      return mk_lift(l->head, std::move(args));
    }
  }
  throw InvalidPosition("position " + position_to_string(p) +
                        " does not address a subexpression");
}

}  // namespace

ExprPtr replace_at(const ExprPtr& e, const Position& p, const ExprPtr& r) {
  return replace_rec(e, p, 0, r);
}

namespace {

void positions_rec(const ExprPtr& e, Position& here, std::vector<Position>& out) {
  out.push_back(here);
  std::vector<ExprPtr> kids = children(e);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    here.push_back(i);
    positions_rec(kids[i], here, out);
    here.pop_back();
  }
}

}  // namespace

std::vector<Position> all_positions(const ExprPtr& e) {
  std::vector<Position> out;
  Position here;
  positions_rec(e, here, out);
  return out;
}

namespace {

void leaves_rec(const ExprPtr& e, std::vector<std::string>& out) {
  if (const EffectVar* v = std::get_if<EffectVar>(&e->node)) {
    out.push_back(v->name);
    return;
  }
  for (const ExprPtr& c : children(e)) leaves_rec(c, out);
}

}  // namespace

std::vector<std::string> effect_leaves(const ExprPtr& e) {
  std::vector<std::string> out;
  leaves_rec(e, out);
  return out;
}

ExprPtr CanonicalForm::to_lift() const {
  std::vector<ExprPtr> args;
  args.reserve(leaves.size());
  for (const std::string& name : leaves) args.push_back(mk_evar(name));
  return mk_lift(head, std::move(args));
}

bool canonical_eq(const CanonicalForm& a, const CanonicalForm& b) {
  return a.leaves == b.leaves && alpha_eq(a.head, b.head);
}

std::string position_to_string(const Position& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p[i]);
  }
  return out + "]";
}

}  // namespace idiom
