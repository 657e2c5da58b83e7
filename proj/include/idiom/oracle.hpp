#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "idiom/expr.hpp"
#include "idiom/normalize.hpp"

namespace idiom {

// Concrete semantics used to cross-check the rewriter: a call-by-value
// evaluator over a small value domain plus four applicative instances.

struct Value;
using ValuePtr = std::shared_ptr<const Value>;
using ValueEnv = std::map<std::string, ValuePtr>;

struct PairVal {
  ValuePtr first, second;
};
struct Closure {
  std::string binder;
  TermPtr body;
  ValueEnv env;  // only variables free in body
};
struct PrimVal {
  Prim op;
  std::vector<ValuePtr> args;  // partial application
};

struct Value {
  std::variant<std::int64_t, PairVal, Closure, PrimVal> v;
};

ValuePtr v_int(std::int64_t n);
ValuePtr v_pair(ValuePtr a, ValuePtr b);
ValuePtr v_prim(Prim op, std::vector<ValuePtr> args = {});

bool value_eq(const ValuePtr& a, const ValuePtr& b);
std::string show_value(const ValuePtr& v);

ValuePtr eval_term(const TermPtr& t, const ValueEnv& env = {});
ValuePtr apply_value(const ValuePtr& f, const ValuePtr& x);

enum class InstanceKind { Identity, Option, List, Writer };

constexpr std::array<InstanceKind, 4> kAllInstances = {
    InstanceKind::Identity, InstanceKind::Option, InstanceKind::List,
    InstanceKind::Writer};

const char* instance_name(InstanceKind k);
bool instance_from_name(std::string_view name, InstanceKind& out);

// Effectful container. identity holds exactly one value; option zero or
// one; list any number (ap is the ordered cross product); writer one
// value plus a log, ap concatenating logs left-then-right.
struct Effect {
  InstanceKind kind = InstanceKind::Identity;
  std::vector<ValuePtr> items;
  std::string log;
};

struct Instance {
  InstanceKind kind;
  const char* name;
  Effect pure_v(ValuePtr v) const;
  Effect ap_v(const Effect& f, const Effect& x) const;
};

const Instance& instance(InstanceKind k);

bool effect_eq(const Effect& a, const Effect& b);
std::string show_effect(const Effect& e);

using EffectEnv = std::map<std::string, Effect>;

// Evaluates via pure/ap only: fmap and liftA nodes are expanded first.
// term_env supplies values for free term variables in heads.
Effect eval_expr(const ExprPtr& e, InstanceKind inst, const EffectEnv& env,
                 const ValueEnv& term_env = {});

// One `name = literal` binding per line; literals per instance:
// identity 5, option none|some 5, list [1, 2], writer ("log", 5).
Effect parse_effect_literal(InstanceKind kind, std::string_view text);
EffectEnv parse_env_file(InstanceKind kind, std::string_view content);

// ---- typed generation ----

struct Type;
using TypePtr = std::shared_ptr<const Type>;
struct Type {
  enum Kind { Int, Pair, Fn } kind;
  TypePtr a, b;  // Pair components / Fn domain, codomain
};

TypePtr ty_int();
TypePtr ty_pair(TypePtr a, TypePtr b);
TypePtr ty_fn(TypePtr a, TypePtr b);
bool type_eq(const TypePtr& a, const TypePtr& b);
std::string show_type(const TypePtr& t);

// Deterministic RNG wrapper; avoids std::distribution variability.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  std::size_t below(std::size_t n) { return n ? next() % n : 0; }
  std::int64_t small_int() { return static_cast<std::int64_t>(next() % 21) - 10; }
  bool chance_one_in(std::size_t n) { return below(n) == 0; }

 private:
  std::mt19937_64 eng_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

struct GenSpec {
  std::size_t max_depth = 4;
  std::size_t max_arity = 3;  // at most 4
  std::uint64_t seed = 0;
};

// A generated expression is simply typed (base int, pairs, functions),
// every head term is closed, and the root type is observable (int or
// pair), so evaluation never sticks and results compare structurally.
struct GeneratedExpr {
  ExprPtr expr;
  std::map<std::string, TypePtr> effect_vars;  // element type per leaf
  TypePtr root_type;
  bool has_effects = false;
};

GeneratedExpr generate(const GenSpec& spec);

// Closed, well-typed term of the given type.
TermPtr sample_term(const TypePtr& ty, Rng& rng);
ValuePtr sample_value(const TypePtr& ty, Rng& rng);
Effect sample_effect(InstanceKind kind, const TypePtr& elem, Rng& rng,
                     const std::string& tag);

EffectEnv sample_effect_env(const GeneratedExpr& g, InstanceKind kind, Rng& rng);

// Evaluates every generated expression before and after canonicalization
// under all four instances and compares the results structurally.
struct FuzzReport {
  std::size_t count = 0;
  std::size_t with_effects = 0;
  std::size_t comparisons = 0;
  bool ok = true;
  std::uint64_t failing_seed = 0;
  std::string message;
};

FuzzReport soundness_fuzz(std::size_t count, std::size_t envs_per_instance,
                          std::uint64_t seed, const Options& opts = {},
                          const GenSpec& base = {});

}  // namespace idiom
