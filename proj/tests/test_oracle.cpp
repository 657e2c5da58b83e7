#include <doctest.h>

#include "idiom/laws.hpp"
#include "idiom/oracle.hpp"
#include "idiom/parse.hpp"

using namespace idiom;

namespace {

Effect list_of(std::initializer_list<std::int64_t> xs) {
  Effect e;
  e.kind = InstanceKind::List;
  for (std::int64_t x : xs) e.items.push_back(v_int(x));
  return e;
}

}  // namespace

TEST_CASE("eval_term computes with primitives") {
  CHECK(value_eq(eval_term(parse_term("add 2 3")), v_int(5)));
  ValueEnv env{{"v", v_int(7)}};
  CHECK(value_eq(eval_term(parse_term("(\\x -> x) v"), env), v_int(7)));
  CHECK(value_eq(eval_term(parse_term("fst (1, 2)")), v_int(1)));
  CHECK(value_eq(eval_term(parse_term("snd (neg 1, neg 2)")), v_int(-2)));
  CHECK(value_eq(eval_term(parse_term("(\\(a, b) -> add a b) (3, 4)")), v_int(7)));
}

TEST_CASE("eval_term reports stuck applications") {
  CHECK_THROWS_AS(eval_term(parse_term("1 2")), StuckError);
  CHECK_THROWS_AS(eval_term(parse_term("fst 3")), StuckError);
  CHECK_THROWS_AS(eval_term(parse_term("add (1, 2) 3")), StuckError);
  CHECK_THROWS_AS(eval_term(mk_var("nope")), StuckError);
}

TEST_CASE("closures capture only free variables") {
  ValueEnv env{{"a", v_int(1)}, {"b", v_int(2)}};
  ValuePtr f = eval_term(parse_term("\\x -> add x a"), env);
  const Closure& c = std::get<Closure>(f->v);
  CHECK(c.env.size() == 1);
  CHECK(c.env.count("a") == 1);
  CHECK(value_eq(apply_value(f, v_int(10)), v_int(11)));
}

TEST_CASE("partial primitive application") {
  ValuePtr addOne = apply_value(v_prim(Prim::Add), v_int(1));
  CHECK(std::holds_alternative<PrimVal>(addOne->v));
  CHECK(value_eq(apply_value(addOne, v_int(41)), v_int(42)));
}

TEST_CASE("eval_expr under each instance") {
  // absent option absorbs
  ExprPtr e1 = parse_expr("pure (add 1) <*> u");
  EffectEnv none{{"u", parse_effect_literal(InstanceKind::Option, "none")}};
  Effect r1 = eval_expr(e1, InstanceKind::Option, none);
  CHECK(r1.items.empty());

  // list cross product in order
  ExprPtr e2 = parse_expr("liftA2 add u v");
  EffectEnv lists{{"u", list_of({1, 2})}, {"v", list_of({10})}};
  Effect r2 = eval_expr(e2, InstanceKind::List, lists);
  CHECK(effect_eq(r2, list_of({11, 12})));

  // pure writes nothing
  Effect r3 = eval_expr(parse_expr("pure 5"), InstanceKind::Writer, {});
  CHECK(r3.log.empty());
  CHECK(value_eq(r3.items.at(0), v_int(5)));
}

TEST_CASE("eval_expr reports unbound effect variables") {
  CHECK_THROWS_AS(eval_expr(parse_expr("u"), InstanceKind::Identity, {}),
                  UnboundEffectVar);
}

TEST_CASE("writer concatenates logs left to right") {
  Effect u = parse_effect_literal(InstanceKind::Writer, "(\"u\", 1)");
  Effect v = parse_effect_literal(InstanceKind::Writer, "(\"v\", 2)");
  EffectEnv env{{"u", u}, {"v", v}};
  Effect r = eval_expr(parse_expr("liftA2 add u v"), InstanceKind::Writer, env);
  CHECK(r.log == "uv");
  CHECK(value_eq(r.items.at(0), v_int(3)));
  // order is preserved by normalization
  auto [canon, trace] = canonicalize(parse_expr("liftA2 add u v"));
  Effect rn = eval_expr(canon.to_lift(), InstanceKind::Writer, env);
  CHECK(rn.log == r.log);
}

TEST_CASE("each instance satisfies the four applicative laws extensionally") {
  TermPtr comp = parse_term("\\f g x -> f (g x)");
  for (InstanceKind kind : kAllInstances) {
    const Instance& inst = instance(kind);
    for (std::uint64_t round = 0; round < 25; ++round) {
      Rng rng(mix_seed(0xacce97, round * 8 + static_cast<std::size_t>(kind)));
      TypePtr fn1 = ty_fn(ty_int(), ty_int());
      Effect u_int = sample_effect(kind, ty_int(), rng, "u");
      Effect u_fn = sample_effect(kind, fn1, rng, "uf");
      Effect v_fn = sample_effect(kind, fn1, rng, "vf");
      Effect w_int = sample_effect(kind, ty_int(), rng, "w");
      ValuePtr f = sample_value(fn1, rng);
      ValuePtr x = v_int(rng.small_int());

      // identity
      CHECK(effect_eq(inst.ap_v(inst.pure_v(v_prim(Prim::Id)), u_int), u_int));
      // composition
      Effect lhs = inst.ap_v(
          inst.ap_v(inst.ap_v(inst.pure_v(eval_term(comp)), u_fn), v_fn), w_int);
      Effect rhs = inst.ap_v(u_fn, inst.ap_v(v_fn, w_int));
      CHECK(effect_eq(lhs, rhs));
      // homomorphism
      CHECK(effect_eq(inst.ap_v(inst.pure_v(f), inst.pure_v(x)),
                      inst.pure_v(apply_value(f, x))));
      // interchange
      ValueEnv tenv{{"x", x}};
      ValuePtr applyX = eval_term(parse_term("\\f -> f x"), tenv);
      CHECK(effect_eq(inst.ap_v(u_fn, inst.pure_v(x)),
                      inst.ap_v(inst.pure_v(applyX), u_fn)));
    }
  }
}

TEST_CASE("generator is deterministic and typed") {
  GenSpec spec;
  spec.seed = 12345;
  GeneratedExpr a = generate(spec);
  GeneratedExpr b = generate(spec);
  CHECK(expr_eq(a.expr, b.expr));
  CHECK(a.effect_vars.size() == b.effect_vars.size());

  std::size_t with_effects = 0;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    GenSpec s;
    s.seed = mix_seed(seed, 99);
    GeneratedExpr g = generate(s);
    if (g.has_effects) ++with_effects;
    // canonicalization succeeds within the default caps
    CHECK_NOTHROW(canonicalize(g.expr));
    // evaluation never sticks under any instance
    for (InstanceKind kind : kAllInstances) {
      Rng rng(mix_seed(seed, 5 + static_cast<std::size_t>(kind)));
      EffectEnv env = sample_effect_env(g, kind, rng);
      CHECK_NOTHROW(eval_expr(g.expr, kind, env));
    }
  }
  // the generator actually produces effectful expressions most of the time
  CHECK(with_effects > 100);
}

TEST_CASE("depth zero forces a leaf") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenSpec spec;
    spec.max_depth = 0;
    spec.seed = mix_seed(seed, 17);
    GeneratedExpr g = generate(spec);
    bool leaf = is_evar(g.expr) || std::holds_alternative<PureE>(g.expr->node);
    CHECK(leaf);
  }
}

TEST_CASE("soundness fuzzing holds on a quick run") {
  FuzzReport report = soundness_fuzz(200, 3, 2024);
  CHECK(report.ok);
  CHECK(report.count == 200);
  CHECK(report.comparisons == 200 * 4 * 3);
  if (!report.ok) {
    MESSAGE(report.message);
  }
}

TEST_CASE("effect literals parse and print") {
  CHECK(show_effect(parse_effect_literal(InstanceKind::Identity, " 7 ")) == "7");
  CHECK(show_effect(parse_effect_literal(InstanceKind::Option, "none")) == "none");
  CHECK(show_effect(parse_effect_literal(InstanceKind::Option, "some -3")) ==
        "some -3");
  CHECK(show_effect(parse_effect_literal(InstanceKind::List, "[1, 2, 3]")) ==
        "[1, 2, 3]");
  CHECK(show_effect(parse_effect_literal(InstanceKind::List, "[]")) == "[]");
  CHECK(show_effect(parse_effect_literal(InstanceKind::Writer, "(\"ab\", 4)")) ==
        "(\"ab\", 4)");
  CHECK_THROWS_AS(parse_effect_literal(InstanceKind::Option, "maybe 3"), Error);
  CHECK_THROWS_AS(parse_effect_literal(InstanceKind::List, "[1, "), Error);

  EffectEnv env = parse_env_file(InstanceKind::List,
                                 "u = [1, 2]\n\n-- comment\nv = []\n");
  CHECK(env.size() == 2);
  CHECK(effect_eq(env.at("u"), list_of({1, 2})));
  CHECK(env.at("v").items.empty());
}
