#include <doctest.h>

#include "idiom/normalize.hpp"
#include "idiom/oracle.hpp"
#include "idiom/parse.hpp"

using namespace idiom;

namespace {

std::size_t count_lifts(const ExprPtr& e) {
  std::size_t n = is_lift(e) ? 1 : 0;
  for (const ExprPtr& c : children(e)) n += count_lifts(c);
  return n;
}

std::size_t count_law(const DerivationTrace& t, LawKind law) {
  std::size_t n = 0;
  for (const RewriteStep& s : t.steps)
    if (s.law == law) ++n;
  return n;
}

}  // namespace

TEST_CASE("desugar rewrites into liftA form") {
  auto [a, steps_a] = desugar(parse_expr("pure id <*> u"));
  CHECK(expr_eq(a, mk_lift(mk_prim(Prim::Id),
                           {mk_lift(mk_prim(Prim::Id), {}), mk_evar("u")})));
  CHECK(steps_a.size() == 2);
  CHECK(steps_a[0].law == LawKind::DesugarAp);
  CHECK(steps_a[1].law == LawKind::DesugarPure);

  auto [b, steps_b] = desugar(mk_pure(mk_var("x")));
  CHECK(expr_eq(b, mk_lift(mk_var("x"), {})));
  CHECK(steps_b.size() == 1);

  auto [c, steps_c] = desugar(parse_expr("fmap f (u <*> v)"));
  CHECK(expr_eq(c, mk_lift(mk_var("f"),
                           {mk_lift(mk_prim(Prim::Id),
                                    {mk_evar("u"), mk_evar("v")})})));
  CHECK(steps_c.size() == 2);
}

TEST_CASE("desugar records replayable whole-expression steps") {
  auto [flat, steps] = desugar(parse_expr("fmap f (pure x <*> (u <*> pure y))"));
  CHECK(is_lift(flat));
  for (const RewriteStep& s : steps) CHECK(replay_step(s));
  for (std::size_t i = 0; i + 1 < steps.size(); ++i)
    CHECK(expr_eq(steps[i].after, steps[i + 1].before));
}

TEST_CASE("fuse absorbs nested lifts") {
  // pure f <*> pure x, desugared: collapses to a single pure computation
  ExprPtr e1 = mk_lift(mk_prim(Prim::Id),
                       {mk_lift(mk_var("f"), {}), mk_lift(mk_var("x"), {})});
  auto [r1, s1] = fuse(e1);
  CHECK(expr_eq(r1, mk_lift(parse_term("f x"), {})));
  CHECK(s1.size() == 2);

  ExprPtr e2 =
      mk_lift(mk_prim(Prim::Id), {mk_evar("u"), mk_lift(mk_var("x"), {})});
  auto [r2, s2] = fuse(e2);
  const LiftE& l2 = std::get<LiftE>(r2->node);
  REQUIRE(l2.arity == 1);
  CHECK(alpha_eq(normalize_term(l2.head), parse_term("\\f -> f x")));
  REQUIRE(s2.size() == 1);
  CHECK(s2[0].n == 1);
  CHECK(s2[0].k == 0);
  CHECK(s2[0].m == 0);

  ExprPtr e3 = mk_lift(mk_var("f"), {mk_lift(mk_var("g"), {mk_evar("v")})});
  auto [r3, s3] = fuse(e3);
  const LiftE& l3 = std::get<LiftE>(r3->node);
  REQUIRE(l3.arity == 1);
  CHECK(alpha_eq(l3.head, compose_nm(mk_var("f"), mk_var("g"), 0, 1)));
}

TEST_CASE("fuse step count matches the lift count") {
  const char* sources[] = {
      "pure f <*> pure x",
      "pure (\\f g x -> f (g x)) <*> u <*> v <*> w",
      "liftA2 f (liftA2 g u v) (fmap h w)",
      "u",
      "u <*> v",
  };
  for (const char* src : sources) {
    CAPTURE(src);
    auto [flat, dsteps] = desugar(parse_expr(src));
    std::size_t lifts = count_lifts(flat);
    auto [fused, fsteps] = fuse(flat);
    if (is_lift(flat))
      CHECK(fsteps.size() == lifts - 1);
    else
      CHECK(fsteps.size() == lifts);  // a bare effect variable: zero of each
    CHECK(count_lifts(fused) <= 1);
  }
}

TEST_CASE("canonicalize reaches the single-lift form") {
  Options opts;
  auto [c1, t1] = canonicalize(parse_expr("pure id <*> u"), opts);
  CHECK(alpha_eq(c1.head, identity_term()));
  CHECK(c1.leaves == std::vector<std::string>{"u"});

  auto [c2, t2] = canonicalize(parse_expr("u"), opts);
  CHECK(alpha_eq(c2.head, identity_term()));
  CHECK(c2.leaves == std::vector<std::string>{"u"});
  CHECK(count_law(t2, LawKind::WrapEffectVar) == 1);

  auto [c3, t3] = canonicalize(
      parse_expr("pure (\\f g x -> f (g x)) <*> u <*> v <*> w"), opts);
  CHECK(alpha_eq(c3.head, parse_term("\\a b c -> a (b c)")));
  CHECK(c3.leaves == std::vector<std::string>({"u", "v", "w"}));

  // the head of the canonical form is always in normal form
  CHECK(is_normal(c1.head, opts.eta));
  CHECK(is_normal(c3.head, opts.eta));
}

TEST_CASE("equivalent decides the classic laws") {
  CHECK(equivalent(parse_expr("pure (\\f -> f x) <*> u"),
                   parse_expr("u <*> pure x"))
            .equal);
  CHECK(equivalent(parse_expr("pure f <*> pure x"), parse_expr("pure (f x)"))
            .equal);
  EquivalenceResult r =
      equivalent(parse_expr("u <*> v"), parse_expr("v <*> u"));
  CHECK_FALSE(r.equal);  // effects never commute
  CHECK(r.lhs.final_form.leaves != r.rhs.final_form.leaves);
}

TEST_CASE("distinct symbolic heads stay distinct") {
  CHECK_FALSE(
      equivalent(parse_expr("liftA1 f u"), parse_expr("liftA1 g u")).equal);
}

TEST_CASE("expand_lift unfolds into pure/ap form") {
  CHECK(expr_eq(expand_lift(mk_lift(mk_var("x"), {})), mk_pure(mk_var("x"))));
  CHECK(expr_eq(
      expand_lift(mk_lift(mk_var("f"), {mk_evar("u"), mk_evar("v")})),
      parse_expr("pure f <*> u <*> v")));
  CHECK(expr_eq(expand_lift(mk_lift(mk_prim(Prim::Id), {mk_evar("u")})),
                parse_expr("pure id <*> u")));
  CHECK(expr_eq(expand_lift(parse_expr("fmap f u")), parse_expr("pure f <*> u")));
  // no liftA (or fmap) nodes remain
  ExprPtr big = expand_lift(parse_expr("liftA3 f u (liftA2 g v w) (fmap h z)"));
  for (const Position& p : all_positions(big)) {
    ExprPtr node = subexpr_at(big, p);
    CHECK_FALSE(is_lift(node));
    CHECK_FALSE(std::holds_alternative<FmapE>(node->node));
  }
}

TEST_CASE("fusion strategies agree on the canonical form") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenSpec spec;
    spec.seed = mix_seed(seed, 1001);
    ExprPtr e = generate(spec).expr;
    auto left = canonicalize(e, {}, FuseStrategy::LeftmostInnermost);
    auto right = canonicalize(e, {}, FuseStrategy::RightmostInnermost);
    CAPTURE(print_expr(e));
    CHECK(canonical_eq(left.first, right.first));
  }
}

TEST_CASE("expansion round-trips through the canonical form") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenSpec spec;
    spec.seed = mix_seed(seed, 2002);
    ExprPtr e = generate(spec).expr;
    auto [canon, trace] = canonicalize(e);
    auto [again, trace2] = canonicalize(expand_lift(canon.to_lift()));
    CAPTURE(print_expr(e));
    CHECK(canonical_eq(canon, again));
  }
}

TEST_CASE("canonical leaves are the source effect variables in order") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    GenSpec spec;
    spec.seed = mix_seed(seed, 3003);
    ExprPtr e = generate(spec).expr;
    auto [canon, trace] = canonicalize(e);
    CHECK(canon.leaves == effect_leaves(e));
  }
}

TEST_CASE("every recorded step re-validates") {
  const char* sources[] = {
      "pure id <*> u",
      "u",
      "pure (\\f g x -> f (g x)) <*> u <*> v <*> w",
      "liftA2 f (liftA2 g u v) w",
      "fmap f (fmap g (pure 5))",
  };
  for (const char* src : sources) {
    CAPTURE(src);
    auto [canon, trace] = canonicalize(parse_expr(src));
    CHECK(validate_trace(trace));
    for (const RewriteStep& s : trace.steps) CHECK(replay_step(s));
  }
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    GenSpec spec;
    spec.seed = mix_seed(seed, 4004);
    ExprPtr e = generate(spec).expr;
    auto [canon, trace] = canonicalize(e);
    CAPTURE(print_expr(e));
    CHECK(validate_trace(trace));
  }
}

TEST_CASE("a corrupted step fails replay") {
  auto [canon, trace] = canonicalize(parse_expr("pure f <*> u"));
  REQUIRE(!trace.steps.empty());
  RewriteStep bad = trace.steps[0];
  bad.after = mk_evar("nonsense");
  CHECK_FALSE(replay_step(bad));
}

TEST_CASE("divergent heads raise DivergenceError") {
  Options opts;
  opts.step_budget = 1000;
  CHECK_THROWS_AS(
      canonicalize(parse_expr("pure ((\\x -> x x) (\\x -> x x))"), opts),
      DivergenceError);
  // divergence surfacing inside a fusion's composition, not just the
  // final head normalization
  CHECK_THROWS_AS(
      canonicalize(parse_expr("liftA1 (\\x -> x x) (liftA0 (\\x -> x x))"), opts),
      DivergenceError);
}

TEST_CASE("fusion past the arity cap raises ArityCapExceeded") {
  Options opts;
  opts.arity_cap = 2;
  CHECK_THROWS_AS(canonicalize(parse_expr("liftA2 f (liftA2 g u v) w",
                                          ParseOpts{opts.arity_cap}),
                               opts),
                  ArityCapExceeded);
}

TEST_CASE("eta flag changes head comparison where it should") {
  // \a b -> f a b and f differ without eta, agree with it
  Options eta_on;
  Options eta_off;
  eta_off.eta = false;
  ExprPtr a = parse_expr("liftA2 (\\a b -> f a b) u v");
  ExprPtr b = parse_expr("liftA2 f u v");
  CHECK(equivalent(a, b, eta_on).equal);
  CHECK_FALSE(equivalent(a, b, eta_off).equal);
}

TEST_CASE("traces serialize deterministically") {
  Options opts;
  auto [canon, trace] = canonicalize(parse_expr("pure id <*> u"), opts);
  std::string once = trace_to_jsonl(trace, opts);
  auto [canon2, trace2] = canonicalize(parse_expr("pure id <*> u"), opts);
  CHECK(once == trace_to_jsonl(trace2, opts));
  CHECK(once.find("\"type\":\"header\"") != std::string::npos);
  CHECK(once.find("\"eta\":true") != std::string::npos);
  CHECK(once.find("\"type\":\"final\"") != std::string::npos);
  CHECK(once.find("composition(0,0,1)") != std::string::npos);
}
