#include "idiom/laws.hpp"

#include <utility>

#include "idiom/parse.hpp"

namespace idiom {

namespace {

using VS = std::map<std::string, VarSpec>;

std::vector<LawCase> build_corpus() {
  std::vector<LawCase> c;
  auto add = [&](std::string name, std::string lhs, std::string rhs,
                 std::string family, VS vars) {
    c.push_back(LawCase{std::move(name), std::move(lhs), std::move(rhs),
                        std::move(family), std::move(vars)});
  };

  // The four classic applicative laws.
  add("ap_identity", "pure id <*> u", "u", "applicative identity",
      {{"u", effect_var(0)}});
  add("ap_composition", "pure (\\f g x -> f (g x)) <*> u <*> v <*> w",
      "u <*> (v <*> w)", "applicative composition",
      {{"u", effect_var(1)}, {"v", effect_var(1)}, {"w", effect_var(0)}});
  add("ap_homomorphism", "pure f <*> pure x", "pure (f x)",
      "applicative homomorphism", {{"f", term_var(1)}, {"x", term_var(0)}});
  add("ap_interchange", "pure (\\f -> f x) <*> u", "u <*> pure x",
      "applicative interchange", {{"u", effect_var(1)}, {"x", term_var(0)}});

  // Functor laws recovered through fmap.
  add("functor_identity", "fmap id u", "u", "first functor law",
      {{"u", effect_var(0)}});
  add("functor_composition", "fmap f (fmap g u)", "fmap (\\x -> f (g x)) u",
      "second functor law",
      {{"f", term_var(1)}, {"g", term_var(1)}, {"u", effect_var(0)}});

  // Truncated (n <= 2) system. The two cases whose sides are partial
  // applications are eta-expanded with a trailing effect argument.
  add("trunc_hom_unary", "liftA1 f (liftA0 x)", "liftA0 (f x)",
      "truncated homomorphism", {{"f", term_var(1)}, {"x", term_var(0)}});
  add("trunc_hom_binary", "liftA2 f (liftA0 x) v", "liftA1 (f x) v",
      "truncated homomorphism",
      {{"f", term_var(2)}, {"x", term_var(0)}, {"v", effect_var(0)}});
  add("trunc_exchange", "liftA2 f u (liftA0 y)", "liftA1 (\\x -> f x y) u",
      "truncated exchange",
      {{"f", term_var(2)}, {"u", effect_var(0)}, {"y", term_var(0)}});
  add("trunc_compose_left", "liftA2 f (liftA1 g u) v",
      "liftA2 (\\x -> f (g x)) u v", "truncated second functor law",
      {{"f", term_var(2)},
       {"g", term_var(1)},
       {"u", effect_var(0)},
       {"v", effect_var(0)}});
  add("trunc_compose_right", "liftA2 f u (liftA1 h v)",
      "liftA2 (\\x y -> f x (h y)) u v", "truncated composition, right",
      {{"f", term_var(2)},
       {"h", term_var(1)},
       {"u", effect_var(0)},
       {"v", effect_var(0)}});
  add("trunc_unary_outer", "liftA1 f (liftA2 g u v)",
      "liftA2 (\\x y -> f (g x y)) u v", "truncated composition, outer fmap",
      {{"f", term_var(1)},
       {"g", term_var(2)},
       {"u", effect_var(0)},
       {"v", effect_var(0)}});
  add("trunc_pair_left", "liftA2 f (liftA2 g u v) w",
      "liftA2 (\\x (y, z) -> f (g x y) z) u (liftA2 (\\a b -> (a, b)) v w)",
      "truncated composition, pair-encoded left",
      {{"f", term_var(2)},
       {"g", term_var(2)},
       {"u", effect_var(0)},
       {"v", effect_var(0)},
       {"w", effect_var(0)}});
  add("trunc_pair_right", "liftA2 f u (liftA2 g v w)",
      "liftA2 (\\(x, y) z -> f x (g y z)) (liftA2 (\\a b -> (a, b)) u v) w",
      "truncated composition, pair-encoded right",
      {{"f", term_var(2)},
       {"g", term_var(2)},
       {"u", effect_var(0)},
       {"v", effect_var(0)},
       {"w", effect_var(0)}});

  // Interdefinitions of the two presentations.
  add("ap_via_lift", "u <*> v", "liftA2 id u v", "idiomatic application as liftA2",
      {{"u", effect_var(1)}, {"v", effect_var(0)}});
  add("lift2_via_ap", "liftA2 f u v", "pure f <*> u <*> v",
      "liftA2 as idiomatic application",
      {{"f", term_var(2)}, {"u", effect_var(0)}, {"v", effect_var(0)}});
  add("pure_via_lift", "pure x", "liftA0 x", "pure as liftA0",
      {{"x", term_var(0)}});
  add("fmap_via_lift", "fmap f u", "liftA1 f u", "fmap as liftA1",
      {{"f", term_var(1)}, {"u", effect_var(0)}});
  add("fmap_via_pure", "fmap f u", "pure f <*> u", "fmap through pure",
      {{"f", term_var(1)}, {"u", effect_var(0)}});
  add("fmap_pure", "fmap f (pure x)", "pure (f x)", "fmap of a pure value",
      {{"f", term_var(1)}, {"x", term_var(0)}});

  // A pure trailing argument is absorbed into the head.
  add("pure_absorption", "liftA2 f u (pure x)", "liftA1 (\\a -> f a x) u",
      "pure-argument absorption",
      {{"f", term_var(2)}, {"u", effect_var(0)}, {"x", term_var(0)}});

  // Iterated pure arguments collapse to a single pure computation.
  add("pure_iterated_1", "liftA1 f (pure x)", "pure (f x)", "iterated pure",
      {{"f", term_var(1)}, {"x", term_var(0)}});
  add("pure_iterated_2", "liftA2 f (pure x) (pure y)", "pure (f x y)",
      "iterated pure",
      {{"f", term_var(2)}, {"x", term_var(0)}, {"y", term_var(0)}});
  add("pure_iterated_3", "liftA3 f (pure x) (pure y) (pure z)",
      "pure (f x y z)", "iterated pure",
      {{"f", term_var(3)},
       {"x", term_var(0)},
       {"y", term_var(0)},
       {"z", term_var(0)}});

  return c;
}

TypePtr fn_type(std::size_t arity) {
  TypePtr t = ty_int();
  for (std::size_t i = 0; i < arity; ++i) t = ty_fn(ty_int(), t);
  return t;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

const std::vector<LawCase>& builtin_corpus() {
  static const std::vector<LawCase> corpus = build_corpus();
  return corpus;
}

LawResult check_law(const LawCase& c, const Options& opts) {
  ParseOpts popts{opts.arity_cap};
  ExprPtr lhs = parse_expr(c.lhs, popts);
  ExprPtr rhs = parse_expr(c.rhs, popts);
  EquivalenceResult r = equivalent(lhs, rhs, opts);
  return LawResult{c.name, r.equal, std::move(r.lhs), std::move(r.rhs)};
}

bool check_law_oracle(const LawCase& c, InstanceKind kind, std::size_t envs,
                      std::uint64_t seed, const Options& opts,
                      std::string* detail) {
  ParseOpts popts{opts.arity_cap};
  ExprPtr lhs = parse_expr(c.lhs, popts);
  ExprPtr rhs = parse_expr(c.rhs, popts);
  std::uint64_t law_seed = mix_seed(seed, fnv1a(c.name));
  for (std::size_t j = 0; j < envs; ++j) {
    Rng rng(mix_seed(law_seed, j * 8 + static_cast<std::size_t>(kind)));
    ValueEnv term_env;
    EffectEnv effect_env;
    for (const auto& [name, spec] : c.vars) {
      if (spec.effect)
        effect_env[name] = sample_effect(kind, fn_type(spec.fn_arity), rng, name);
      else
        term_env[name] = sample_value(fn_type(spec.fn_arity), rng);
    }
    Effect a = eval_expr(lhs, kind, effect_env, term_env);
    Effect b = eval_expr(rhs, kind, effect_env, term_env);
    if (!effect_eq(a, b)) {
      if (detail)
        *detail = c.name + " under " + instance_name(kind) +
                  ": lhs = " + show_effect(a) + ", rhs = " + show_effect(b);
      return false;
    }
  }
  return true;
}

namespace {

std::string cell_tag(std::size_t n, std::size_t k, std::size_t m) {
  if (n == 0 && k == 0 && m == 0) return "homomorphism";
  if (n == 0 && k == 1 && m == 0) return "second-functor-law";
  if (k == 0 && m == 0) return "pure-absorption";
  if (n == 0 && m == 0) return "unary-composition";
  return "";
}

}  // namespace

std::vector<MatrixCell> composition_matrix(std::size_t max_n, std::size_t max_k,
                                           std::size_t max_m,
                                           std::size_t oracle_envs,
                                           std::uint64_t seed,
                                           const Options& opts) {
  std::vector<MatrixCell> cells;
  for (std::size_t n = 0; n <= max_n; ++n) {
    for (std::size_t k = 0; k <= max_k; ++k) {
      for (std::size_t m = 0; m <= max_m; ++m) {
        MatrixCell cell{n, k, m, false, true, cell_tag(n, k, m)};

        TermPtr f = mk_var("f");
        TermPtr g = mk_var("g");
        std::vector<ExprPtr> us, vs, ws;
        for (std::size_t i = 0; i < n; ++i) us.push_back(mk_evar("u" + std::to_string(i)));
        for (std::size_t i = 0; i < k; ++i) vs.push_back(mk_evar("v" + std::to_string(i)));
        for (std::size_t i = 0; i < m; ++i) ws.push_back(mk_evar("w" + std::to_string(i)));

        std::vector<ExprPtr> lhs_args = us;
        lhs_args.push_back(mk_lift(g, vs));
        for (const ExprPtr& w : ws) lhs_args.push_back(w);
        ExprPtr lhs = mk_lift(f, lhs_args);

        std::vector<ExprPtr> rhs_args = us;
        for (const ExprPtr& v : vs) rhs_args.push_back(v);
        for (const ExprPtr& w : ws) rhs_args.push_back(w);
        ExprPtr rhs = mk_lift(compose_nm(f, g, n, k, opts.arity_cap), rhs_args);

        // The expansion route: both sides unfolded to pure/<*> form first.
        ExprPtr lhs_x = expand_lift(lhs);
        ExprPtr rhs_x = expand_lift(rhs);
        cell.symbolic_equal = equivalent(lhs_x, rhs_x, opts).equal &&
                              equivalent(lhs, rhs, opts).equal;

        // Concrete semantics: f is (n+1+m)-ary, g is k-ary over ints.
        ValueEnv term_env;
        for (std::size_t j = 0; j < oracle_envs && cell.oracle_equal; ++j) {
          for (InstanceKind kind : kAllInstances) {
            Rng rng(mix_seed(seed, (n * 16 + k * 4 + m) * 1000 + j * 8 +
                                       static_cast<std::size_t>(kind)));
            term_env["f"] = sample_value(fn_type(n + 1 + m), rng);
            term_env["g"] = sample_value(fn_type(k), rng);
            EffectEnv env;
            for (std::size_t i = 0; i < n; ++i)
              env["u" + std::to_string(i)] =
                  sample_effect(kind, ty_int(), rng, "u" + std::to_string(i));
            for (std::size_t i = 0; i < k; ++i)
              env["v" + std::to_string(i)] =
                  sample_effect(kind, ty_int(), rng, "v" + std::to_string(i));
            for (std::size_t i = 0; i < m; ++i)
              env["w" + std::to_string(i)] =
                  sample_effect(kind, ty_int(), rng, "w" + std::to_string(i));
            Effect a = eval_expr(lhs_x, kind, env, term_env);
            Effect b = eval_expr(rhs_x, kind, env, term_env);
            if (!effect_eq(a, b)) {
              cell.oracle_equal = false;
              break;
            }
          }
        }
        cells.push_back(std::move(cell));
      }
    }
  }
  return cells;
}

FrameReport frame_extension_check(std::size_t pairs, std::size_t max_extra,
                                  std::uint64_t seed, const Options& opts) {
  FrameReport report;
  GenSpec spec;
  spec.max_depth = 3;
  for (std::size_t i = 0; report.checked < pairs && i < pairs * 4; ++i) {
    spec.seed = mix_seed(seed, i);
    Rng rng(mix_seed(spec.seed, 0xf1));
    GeneratedExpr g = generate(spec);

    CanonicalForm canon;
    try {
      canon = canonicalize(g.expr, opts).first;
    } catch (const Error&) {
      continue;  // cap-limited outlier; frame needs a canonical base
    }
    ExprPtr a = canon.to_lift();

    // An equal-canonical variant that is still liftA-rooted.
    const LiftE& root = std::get<LiftE>(a->node);
    ExprPtr b;
    if (!root.args.empty()) {
      std::vector<ExprPtr> args = root.args;
      std::size_t slot = rng.below(args.size());
      args[slot] = mk_lift(identity_term(), {args[slot]});
      b = mk_lift(root.head, std::move(args));
    } else {
      b = mk_lift(mk_app(identity_term(), root.head), {});
    }

    if (!equivalent(a, b, opts).equal) {
      report.ok = false;
      report.message = "variant is not canonically equal before extension: " +
                       print_expr(g.expr);
      return report;
    }

    std::size_t extra = 1 + rng.below(max_extra);
    if (canon.leaves.size() + 1 + extra > opts.arity_cap) continue;
    std::vector<ExprPtr> ext;
    for (std::size_t j = 0; j < extra; ++j)
      ext.push_back(mk_evar("fw" + std::to_string(j)));

    auto extend = [&](const ExprPtr& e) {
      const LiftE& l = std::get<LiftE>(e->node);
      std::vector<ExprPtr> args = l.args;
      for (const ExprPtr& w : ext) args.push_back(w);
      return mk_lift(l.head, std::move(args));
    };

    if (!equivalent(extend(a), extend(b), opts).equal) {
      report.ok = false;
      report.message = "frame extension broke canonical equality for: " +
                       print_expr(a) + "  vs  " + print_expr(b);
      return report;
    }
    ++report.checked;
  }
  return report;
}

namespace {

struct DerivationSpec {
  std::string name;
  std::string lhs;
  std::string rhs;
  std::string head_src;  // canonical head both sides reach
  std::vector<std::string> leaves;
  std::vector<std::string> outline;  // expected engine laws, in order
};

const std::vector<DerivationSpec>& derivation_specs() {
  static const std::vector<DerivationSpec> specs = {
      {"identity", "pure id <*> u", "u", "\\x -> x", {"u"},
       {"desugar-ap", "desugar-pure", "composition(0,0,1)", "head-normalize"}},
      {"composition", "pure (\\f g x -> f (g x)) <*> u <*> v <*> w",
       "u <*> (v <*> w)", "\\a b c -> a (b c)", {"u", "v", "w"},
       {"desugar-ap", "desugar-ap", "desugar-ap", "desugar-pure",
        "composition(0,0,1)", "composition(0,1,1)", "composition(0,2,1)",
        "head-normalize"}},
      {"homomorphism", "pure f <*> pure x", "pure (f x)", "f x", {},
       {"desugar-ap", "desugar-pure", "desugar-pure", "composition(0,0,1)",
        "composition(0,0,0)", "head-normalize"}},
      {"interchange", "u <*> pure x", "pure (\\f -> f x) <*> u", "\\f -> f x",
       {"u"},
       {"desugar-ap", "desugar-pure", "composition(1,0,0)", "head-normalize"}},
  };
  return specs;
}

}  // namespace

std::vector<DerivationReport> replay_derivations(const Options& opts) {
  std::vector<DerivationReport> out;
  for (const DerivationSpec& spec : derivation_specs()) {
    DerivationReport rep;
    rep.name = spec.name;
    rep.lhs = spec.lhs;
    rep.rhs = spec.rhs;
    rep.expected_head = parse_term(spec.head_src);
    rep.expected_leaves = spec.leaves;
    rep.expected_steps = spec.outline;

    ExprPtr lhs = parse_expr(spec.lhs);
    ExprPtr rhs = parse_expr(spec.rhs);
    auto [canon, trace] = canonicalize(lhs, opts);
    rep.trace = trace;
    rep.head_ok = alpha_eq(canon.head, normalize_term(rep.expected_head,
                                                      opts.term_opts()));
    rep.leaves_ok = canon.leaves == spec.leaves;
    rep.rhs_equal = equivalent(lhs, rhs, opts).equal;

    std::size_t upper = std::max(trace.steps.size(), spec.outline.size());
    for (std::size_t i = 0; i < upper; ++i) {
      std::string engine = i < trace.steps.size() ? law_name(trace.steps[i]) : "";
      std::string expected = i < spec.outline.size() ? spec.outline[i] : "";
      if (engine != expected) ++rep.unaligned;
      rep.alignment.emplace_back(engine, expected);
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace idiom
