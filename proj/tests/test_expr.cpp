#include <doctest.h>

#include "idiom/expr.hpp"
#include "idiom/oracle.hpp"
#include "idiom/parse.hpp"

using namespace idiom;

TEST_CASE("subexpr_at addresses children") {
  ExprPtr u = mk_evar("u");
  ExprPtr v = mk_evar("v");
  ExprPtr ap = mk_ap(u, v);
  CHECK(expr_eq(subexpr_at(ap, {0}), u));
  CHECK(expr_eq(subexpr_at(ap, {1}), v));
  ExprPtr lift = mk_lift(mk_var("f"), {u, v});
  CHECK(expr_eq(subexpr_at(lift, {1}), v));
  CHECK(expr_eq(subexpr_at(lift, {}), lift));
  CHECK_THROWS_AS(subexpr_at(mk_pure(mk_var("x")), {0}), InvalidPosition);
  CHECK_THROWS_AS(subexpr_at(lift, {2}), InvalidPosition);
  CHECK_THROWS_AS(subexpr_at(ap, {0, 0}), InvalidPosition);
}

TEST_CASE("replace_at rewrites exactly one node") {
  ExprPtr u = mk_evar("u");
  ExprPtr v = mk_evar("v");
  ExprPtr w = mk_evar("w");
  CHECK(expr_eq(replace_at(mk_ap(u, v), {1}, w), mk_ap(u, w)));
  CHECK(expr_eq(replace_at(u, {}, mk_pure(mk_prim(Prim::Id))),
                mk_pure(mk_prim(Prim::Id))));
  ExprPtr f = mk_fmap(mk_var("f"), u);
  CHECK(expr_eq(replace_at(f, {0}, v), mk_fmap(mk_var("f"), v)));
  CHECK_THROWS_AS(replace_at(f, {1}, v), InvalidPosition);
}

TEST_CASE("replacing a node with itself is the identity") {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GenSpec spec;
    spec.seed = mix_seed(seed, 11);
    ExprPtr e = generate(spec).expr;
    for (const Position& p : all_positions(e)) {
      ExprPtr same = replace_at(e, p, subexpr_at(e, p));
      CHECK(expr_eq(same, e));
    }
  }
}

TEST_CASE("pretty prints the concrete syntax") {
  CHECK(print_expr(mk_lift(mk_prim(Prim::Id), {mk_evar("u"), mk_evar("v")})) ==
        "liftA2 id u v");
  CHECK(print_expr(mk_ap(mk_pure(mk_prim(Prim::Id)), mk_evar("u"))) ==
        "pure id <*> u");
  CHECK(print_expr(mk_fmap(identity_term(), mk_evar("u"))) ==
        "fmap (\\x -> x) u");
  CHECK(print_expr(mk_lift(mk_int(5), {})) == "liftA0 5");
  CHECK(print_expr(mk_ap(mk_evar("u"), mk_pure(mk_var("x")))) ==
        "u <*> pure x");
  CHECK(print_expr(mk_ap(mk_evar("u"), mk_ap(mk_evar("v"), mk_evar("w")))) ==
        "u <*> (v <*> w)");
}

TEST_CASE("effect leaves are reported in source order") {
  ExprPtr e = parse_expr("liftA2 f (u <*> v) (fmap g u)");
  CHECK(effect_leaves(e) == std::vector<std::string>({"u", "v", "u"}));
}

TEST_CASE("canonical forms compare by head and leaf sequence") {
  CanonicalForm a{identity_term(), {"u"}};
  CanonicalForm b{parse_term("\\y -> y"), {"u"}};
  CanonicalForm c{identity_term(), {"v"}};
  CHECK(canonical_eq(a, b));
  CHECK_FALSE(canonical_eq(a, c));
  CHECK(print_expr(a.to_lift()) == "liftA1 (\\x -> x) u");
}
