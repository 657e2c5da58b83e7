#pragma once

#include <string>
#include <string_view>

#include "idiom/errors.hpp"
#include "idiom/expr.hpp"

namespace idiom {

struct ParseOpts {
  std::size_t arity_cap = 16;
};

// Parses the concrete expression syntax:
//
//   expr    := aexpr ( '<*>' aexpr )*
//   aexpr   := 'pure' termAtom | 'fmap' termAtom aexpr
//            | 'liftA' NAT termAtom aexpr*   (liftA0, liftA1, ... fused too)
//            | IDENT | '(' expr ')'
//   term    := '\' pat+ '->' term | termApp
//   termApp := termAtom+
//   termAtom:= IDENT | NAT | 'id' | 'fst' | 'snd' | 'add' | 'neg' | 'pair'
//            | '(' term (',' term)? ')'
//   pat     := IDENT | '(' IDENT ',' IDENT ')'
//
// Identifiers are [a-z][A-Za-z0-9']*, '--' starts a line comment, and
// the Unicode aliases λ (for \) and ⊛ (for <*>) are accepted. Pair
// patterns desugar to fst/snd projections of a fresh binder.
//
// Throws ParseError (with span and expected-token set), ArityMismatch
// when liftA<n> is given other than n arguments, or ArityCapExceeded.
ExprPtr parse_expr(std::string_view input, const ParseOpts& opts = {});

// Parses a standalone lambda term in the same syntax.
TermPtr parse_term(std::string_view input);

}  // namespace idiom
