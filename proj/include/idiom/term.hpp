#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "idiom/errors.hpp"

namespace idiom {

// Untyped lambda terms with a handful of base constants. Immutable,
// structurally shared; every operation returns a fresh tree.

enum class Prim { Id, Fst, Snd, Pair, Add, Neg };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Var {
  std::string name;
};
struct Lam {
  std::string binder;
  TermPtr body;
};
struct App {
  TermPtr fun;
  TermPtr arg;
};
struct Const {
  std::variant<std::int64_t, Prim> lit;
};

struct Term {
  std::variant<Var, Lam, App, Const> node;
};

TermPtr mk_var(std::string name);
TermPtr mk_lam(std::string binder, TermPtr body);
TermPtr mk_app(TermPtr fun, TermPtr arg);
TermPtr mk_app(TermPtr fun, const std::vector<TermPtr>& args);
TermPtr mk_int(std::int64_t value);
TermPtr mk_prim(Prim p);
TermPtr mk_pair(TermPtr first, TermPtr second);

// The identity lambda \x -> x. Normal forms use this shape; the surface
// constant `id` unfolds to it during normalization.
TermPtr identity_term();

const char* prim_name(Prim p);

bool is_var(const TermPtr& t);
bool is_lam(const TermPtr& t);
bool is_app(const TermPtr& t);
bool is_const(const TermPtr& t);
bool is_prim(const TermPtr& t, Prim p);
bool is_int_const(const TermPtr& t);

std::set<std::string> free_vars(const TermPtr& t);
bool occurs_free(const TermPtr& t, const std::string& name);

// Equality up to consistent renaming of bound variables. Free variables
// and constants compare by name/value.
bool alpha_eq(const TermPtr& a, const TermPtr& b);

// Deterministic fresh-name supply: base name plus a monotone counter,
// joined by '$' which the surface grammar cannot produce.
class FreshNames {
 public:
  std::string fresh(const std::string& base, const std::set<std::string>& avoid);

 private:
  std::size_t next_ = 0;
};

// Capture-avoiding substitution of s for free occurrences of x in t.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s);
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s,
                   FreshNames& names);

struct TermNormOpts {
  bool eta = true;
  std::size_t step_budget = 1'000'000;
};

// Normal-order reduction to beta(-eta) normal form. Saturated primitive
// applications (projections of pairs, integer add/neg) reduce as well,
// and the `id` constant unfolds to \x -> x. Throws DivergenceError when
// the step budget runs out.
TermPtr normalize_term(const TermPtr& t, const TermNormOpts& opts = {});

// True when t contains no beta redex, no reducible primitive
// application, no bare `id`, and (if eta) no eta redex.
bool is_normal(const TermPtr& t, bool eta = true);

// Generalized composition: \a1..an b1..bm -> f a1..an (g b1..bm), beta
// normalized. For m = 0 the result plugs g itself in as f's (n+1)st
// argument; n = m = 0 is plain application.
TermPtr compose_nm(const TermPtr& f, const TermPtr& g, std::size_t n,
                   std::size_t m, std::size_t arity_cap = 16,
                   std::size_t step_budget = 1'000'000);

// Concrete syntax; binders whose names were invented internally are
// renamed to compact ones (a, b, c, ...).
std::string print_term(const TermPtr& t);

}  // namespace idiom
