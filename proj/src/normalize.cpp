#include "idiom/normalize.hpp"

#include <optional>

#include <json.hpp>

namespace idiom {

std::string law_name(const RewriteStep& s) {
  switch (s.law) {
    case LawKind::DesugarPure: return "desugar-pure";
    case LawKind::DesugarFmap: return "desugar-fmap";
    case LawKind::DesugarAp: return "desugar-ap";
    case LawKind::Identity: return "identity";
    case LawKind::Composition:
      return "composition(" + std::to_string(s.n) + "," + std::to_string(s.k) +
             "," + std::to_string(s.m) + ")";
    case LawKind::HeadNormalize: return "head-normalize";
    case LawKind::WrapEffectVar: return "wrap-effectvar";
  }
  return "?";
}

namespace {

bool is_desugared_node(const ExprPtr& e) {
  return std::holds_alternative<EffectVar>(e->node) ||
         std::holds_alternative<LiftE>(e->node);
}

// Preorder position of the first Pure/Fmap/Ap node, if any.
std::optional<Position> find_sugar(const ExprPtr& e, Position& here) {
  if (!is_desugared_node(e)) return here;
  std::vector<ExprPtr> kids = children(e);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    here.push_back(i);
    if (auto p = find_sugar(kids[i], here)) return p;
    here.pop_back();
  }
  return std::nullopt;
}

// Single desugaring rewrite of the node itself (children untouched).
std::pair<LawKind, ExprPtr> desugar_node(const ExprPtr& e) {
  if (const PureE* p = std::get_if<PureE>(&e->node))
    return {LawKind::DesugarPure, mk_lift(p->term, {})};
  if (const FmapE* f = std::get_if<FmapE>(&e->node))
    return {LawKind::DesugarFmap, mk_lift(f->fn, {f->arg})};
  const ApE& a = std::get<ApE>(e->node);
  return {LawKind::DesugarAp, mk_lift(mk_prim(Prim::Id), {a.fun, a.arg})};
}

}  // namespace

std::pair<ExprPtr, std::vector<RewriteStep>> desugar(const ExprPtr& e) {
  ExprPtr cur = e;
  std::vector<RewriteStep> steps;
  for (;;) {
    Position scratch;
    auto pos = find_sugar(cur, scratch);
    if (!pos) return {cur, std::move(steps)};
    ExprPtr node = subexpr_at(cur, *pos);
    auto [law, rewritten] = desugar_node(node);
    ExprPtr next = replace_at(cur, *pos, rewritten);
    steps.push_back(RewriteStep{law, 0, 0, 0, *pos, cur, next});
    cur = next;
  }
}

namespace {

struct Redex {
  Position parent;
  std::size_t child;
};

// Post-order search for a LiftA node with a LiftA argument; children are
// scanned left-to-right (or right-to-left), so the first hit is the
// leftmost- (rightmost-) innermost redex.
std::optional<Redex> find_redex(const ExprPtr& e, Position& here, bool rightmost) {
  const LiftE* l = std::get_if<LiftE>(&e->node);
  if (!l) return std::nullopt;
  std::size_t n = l->args.size();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t i = rightmost ? n - 1 - j : j;
    here.push_back(i);
    if (auto r = find_redex(l->args[i], here, rightmost)) return r;
    here.pop_back();
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t i = rightmost ? n - 1 - j : j;
    if (is_lift(l->args[i])) return Redex{here, i};
  }
  return std::nullopt;
}

}  // namespace

std::pair<ExprPtr, std::vector<RewriteStep>> fuse(const ExprPtr& e,
                                                  const Options& opts,
                                                  FuseStrategy strategy) {
  ExprPtr cur = e;
  std::vector<RewriteStep> steps;
  bool rightmost = strategy == FuseStrategy::RightmostInnermost;
  for (;;) {
    Position scratch;
    auto redex = find_redex(cur, scratch, rightmost);
    if (!redex) return {cur, std::move(steps)};
    const LiftE& parent = std::get<LiftE>(subexpr_at(cur, redex->parent)->node);
    const LiftE& child = std::get<LiftE>(parent.args[redex->child]->node);
    std::size_t n = redex->child;
    std::size_t k = child.arity;
    std::size_t m = parent.arity - 1 - n;
    if (n + k + m > opts.arity_cap) throw ArityCapExceeded(n + k + m, opts.arity_cap);
    TermPtr head = compose_nm(parent.head, child.head, n, k, opts.arity_cap,
                              opts.step_budget);
    std::vector<ExprPtr> args;
    args.reserve(n + k + m);
    for (std::size_t i = 0; i < n; ++i) args.push_back(parent.args[i]);
    for (const ExprPtr& a : child.args) args.push_back(a);
    for (std::size_t i = n + 1; i < parent.arity; ++i) args.push_back(parent.args[i]);
    ExprPtr fused = mk_lift(head, std::move(args));
    ExprPtr next = replace_at(cur, redex->parent, fused);
    steps.push_back(
        RewriteStep{LawKind::Composition, n, k, m, redex->parent, cur, next});
    cur = next;
  }
}

std::pair<CanonicalForm, DerivationTrace> canonicalize(const ExprPtr& e,
                                                       const Options& opts,
                                                       FuseStrategy strategy) {
  DerivationTrace trace;
  trace.initial = e;
  trace.eta = opts.eta;

  auto [flat, dsteps] = desugar(e);
  trace.steps = std::move(dsteps);

  auto [fusedExpr, fsteps] = fuse(flat, opts, strategy);
  for (auto& s : fsteps) trace.steps.push_back(std::move(s));
  ExprPtr cur = fusedExpr;

  if (std::holds_alternative<EffectVar>(cur->node)) {
    ExprPtr wrapped = mk_lift(identity_term(), {cur});
    trace.steps.push_back(
        RewriteStep{LawKind::WrapEffectVar, 0, 0, 0, {}, cur, wrapped});
    cur = wrapped;
  }

  const LiftE& root = std::get<LiftE>(cur->node);
  TermPtr head = normalize_term(root.head, opts.term_opts());
  ExprPtr final_expr = mk_lift(head, root.args);
  trace.steps.push_back(
      RewriteStep{LawKind::HeadNormalize, 0, 0, 0, {}, cur, final_expr});

  CanonicalForm canon{head, effect_leaves(final_expr)};
  trace.final_form = canon;
  return {canon, std::move(trace)};
}

EquivalenceResult equivalent(const ExprPtr& a, const ExprPtr& b,
                             const Options& opts) {
  auto [ca, ta] = canonicalize(a, opts);
  auto [cb, tb] = canonicalize(b, opts);
  return EquivalenceResult{canonical_eq(ca, cb), std::move(ta), std::move(tb)};
}

ExprPtr expand_lift(const ExprPtr& e) {
  if (const ApE* a = std::get_if<ApE>(&e->node))
    return mk_ap(expand_lift(a->fun), expand_lift(a->arg));
  if (const FmapE* f = std::get_if<FmapE>(&e->node))
    return mk_ap(mk_pure(f->fn), expand_lift(f->arg));
  if (const LiftE* l = std::get_if<LiftE>(&e->node)) {
    ExprPtr acc = mk_pure(l->head);
    for (const ExprPtr& arg : l->args) acc = mk_ap(acc, expand_lift(arg));
    return acc;
  }
  return e;
}

bool replay_step(const RewriteStep& s, const Options& opts) {
  ExprPtr node;
  try {
    node = subexpr_at(s.before, s.position);
  } catch (const InvalidPosition&) {
    return false;
  }
  ExprPtr rewritten;
  switch (s.law) {
    case LawKind::DesugarPure:
    case LawKind::DesugarFmap:
    case LawKind::DesugarAp: {
      if (is_desugared_node(node)) return false;
      auto [law, r] = desugar_node(node);
      if (law != s.law) return false;
      rewritten = r;
      break;
    }
    case LawKind::Composition: {
      const LiftE* parent = std::get_if<LiftE>(&node->node);
      if (!parent || s.n >= parent->arity) return false;
      const LiftE* child = std::get_if<LiftE>(&parent->args[s.n]->node);
      if (!child || child->arity != s.k || parent->arity != s.n + 1 + s.m)
        return false;
      TermPtr head = compose_nm(parent->head, child->head, s.n, s.k,
                                opts.arity_cap, opts.step_budget);
      std::vector<ExprPtr> args;
      for (std::size_t i = 0; i < s.n; ++i) args.push_back(parent->args[i]);
      for (const ExprPtr& a : child->args) args.push_back(a);
      for (std::size_t i = s.n + 1; i < parent->arity; ++i)
        args.push_back(parent->args[i]);
      rewritten = mk_lift(head, std::move(args));
      break;
    }
    case LawKind::WrapEffectVar: {
      if (!is_evar(node)) return false;
      rewritten = mk_lift(identity_term(), {node});
      break;
    }
    case LawKind::HeadNormalize: {
      const LiftE* l = std::get_if<LiftE>(&node->node);
      if (!l) return false;
      rewritten = mk_lift(normalize_term(l->head, opts.term_opts()), l->args);
      break;
    }
    case LawKind::Identity: {
      // liftA1 with an identity head collapses to its argument.
      const LiftE* l = std::get_if<LiftE>(&node->node);
      if (!l || l->arity != 1) return false;
      if (!alpha_eq(normalize_term(l->head, opts.term_opts()), identity_term()))
        return false;
      rewritten = l->args[0];
      break;
    }
  }
  return expr_eq(replace_at(s.before, s.position, rewritten), s.after);
}

bool validate_trace(const DerivationTrace& t, const Options& opts) {
  const ExprPtr* prev = &t.initial;
  for (const RewriteStep& s : t.steps) {
    if (!expr_eq(*prev, s.before)) return false;
    if (!replay_step(s, opts)) return false;
    prev = &s.after;
  }
  const LiftE* l = std::get_if<LiftE>(&(*prev)->node);
  if (!l) return false;
  if (!alpha_eq(l->head, t.final_form.head)) return false;
  return effect_leaves(*prev) == t.final_form.leaves;
}

std::string trace_to_jsonl(const DerivationTrace& t, const Options& opts) {
  using json = nlohmann::ordered_json;
  std::string out;
  json header;
  header["type"] = "header";
  header["eta"] = t.eta;
  header["arity_cap"] = opts.arity_cap;
  header["step_budget"] = opts.step_budget;
  header["initial"] = print_expr(t.initial);
  out += header.dump() + "\n";
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const RewriteStep& s = t.steps[i];
    json rec;
    rec["type"] = "step";
    rec["index"] = i;
    rec["law"] = law_name(s);
    rec["position"] = s.position;
    rec["before"] = print_expr(s.before);
    rec["after"] = print_expr(s.after);
    out += rec.dump() + "\n";
  }
  json fin;
  fin["type"] = "final";
  fin["arity"] = t.final_form.leaves.size();
  fin["head"] = print_term(t.final_form.head);
  fin["leaves"] = t.final_form.leaves;
  fin["expr"] = print_expr(t.final_form.to_lift());
  out += fin.dump() + "\n";
  return out;
}

}  // namespace idiom
