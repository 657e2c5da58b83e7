#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "idiom/term.hpp"

namespace idiom {

// Applicative expressions over a symbolic functor. EffectVar leaves are
// opaque effectful computations; everything else combines them.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct EffectVar {
  std::string name;
};
struct PureE {
  TermPtr term;
};
struct ApE {
  ExprPtr fun;
  ExprPtr arg;
};
struct FmapE {
  TermPtr fn;
  ExprPtr arg;
};
struct LiftE {
  std::size_t arity;  // always equals args.size()
  TermPtr head;
  std::vector<ExprPtr> args;
};

struct Expr {
  std::variant<EffectVar, PureE, ApE, FmapE, LiftE> node;
};

ExprPtr mk_evar(std::string name);
ExprPtr mk_pure(TermPtr term);
ExprPtr mk_ap(ExprPtr fun, ExprPtr arg);
ExprPtr mk_fmap(TermPtr fn, ExprPtr arg);
ExprPtr mk_lift(TermPtr head, std::vector<ExprPtr> args);

bool is_evar(const ExprPtr& e);
bool is_lift(const ExprPtr& e);

// Structural equality; embedded terms compare up to alpha.
bool expr_eq(const ExprPtr& a, const ExprPtr& b);

// Path of child indices from the root. Ap has children {0: fun, 1: arg},
// Fmap {0: arg}, LiftA {0..n-1: args}; Pure and EffectVar are leaves.
using Position = std::vector<std::size_t>;

std::vector<ExprPtr> children(const ExprPtr& e);
ExprPtr subexpr_at(const ExprPtr& e, const Position& p);
ExprPtr replace_at(const ExprPtr& e, const Position& p, const ExprPtr& r);

// All valid positions of e in preorder, root first.
std::vector<Position> all_positions(const ExprPtr& e);

// Effect-variable names in left-to-right source order, duplicates kept.
std::vector<std::string> effect_leaves(const ExprPtr& e);

// A fully fused expression: one liftA head plus its effect leaves.
// arity 0 means a pure computation.
struct CanonicalForm {
  TermPtr head;
  std::vector<std::string> leaves;

  ExprPtr to_lift() const;
};

bool canonical_eq(const CanonicalForm& a, const CanonicalForm& b);

// Concrete syntax (the parser's input language, canonically spaced).
std::string print_expr(const ExprPtr& e);
inline std::string pretty(const ExprPtr& e) { return print_expr(e); }

std::string position_to_string(const Position& p);

}  // namespace idiom
