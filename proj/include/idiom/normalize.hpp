#pragma once

#include <string>
#include <utility>
#include <vector>

#include "idiom/expr.hpp"

namespace idiom {

// Session configuration shared by the rewrite pipeline.
struct Options {
  bool eta = true;
  std::size_t arity_cap = 16;
  std::size_t step_budget = 1'000'000;

  TermNormOpts term_opts() const { return TermNormOpts{eta, step_budget}; }
};

enum class LawKind {
  DesugarPure,
  DesugarFmap,
  DesugarAp,
  Identity,
  Composition,
  HeadNormalize,
  WrapEffectVar,
};

// One rewrite of the whole expression: applying `law` at `position` in
// `before` yields `after`. For Composition, (n, k, m) are the argument
// counts before, inside, and after the fused child.
struct RewriteStep {
  LawKind law;
  std::size_t n = 0, k = 0, m = 0;
  Position position;
  ExprPtr before;
  ExprPtr after;
};

std::string law_name(const RewriteStep& s);

struct DerivationTrace {
  ExprPtr initial;
  std::vector<RewriteStep> steps;
  CanonicalForm final_form;
  bool eta = true;
};

enum class FuseStrategy { LeftmostInnermost, RightmostInnermost };

// Rewrites Pure/Fmap/Ap nodes into their liftA forms until only LiftA
// and EffectVar nodes remain.
std::pair<ExprPtr, std::vector<RewriteStep>> desugar(const ExprPtr& e);

// Repeatedly absorbs nested liftA arguments into their parent's head
// via generalized composition. Requires a desugared input; terminates
// because every step removes one LiftA node.
std::pair<ExprPtr, std::vector<RewriteStep>> fuse(
    const ExprPtr& e, const Options& opts = {},
    FuseStrategy strategy = FuseStrategy::LeftmostInnermost);

// Full pipeline: desugar, fuse, normalize the head. A bare effect
// variable is wrapped as liftA1 (\x -> x) u first.
std::pair<CanonicalForm, DerivationTrace> canonicalize(
    const ExprPtr& e, const Options& opts = {},
    FuseStrategy strategy = FuseStrategy::LeftmostInnermost);

struct EquivalenceResult {
  bool equal = false;
  DerivationTrace lhs;
  DerivationTrace rhs;
};

// Decides canonical-form equality: alpha-equal heads and identical
// effect-leaf sequences.
EquivalenceResult equivalent(const ExprPtr& a, const ExprPtr& b,
                             const Options& opts = {});

// Unfolds every liftA node into its pure/<*> encoding (liftA0 x = pure x,
// liftA(n+1) f us v = liftAn f us <*> v); fmap f u becomes pure f <*> u.
ExprPtr expand_lift(const ExprPtr& e);

// Re-applies the step's law at its position in `before` and checks the
// result matches `after`.
bool replay_step(const RewriteStep& s, const Options& opts = {});

// Chain + replay validation of a whole trace.
bool validate_trace(const DerivationTrace& t, const Options& opts = {});

// Newline-delimited records: a header (eta flag, caps, initial
// expression), one record per step, and a final record with the
// canonical form. Stable across runs.
std::string trace_to_jsonl(const DerivationTrace& t, const Options& opts = {});

}  // namespace idiom
