#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "idiom/normalize.hpp"
#include "idiom/oracle.hpp"

namespace idiom {

// Sampling shape for a law variable: either a term-level value (an
// fn_arity-ary integer function; 0 means a plain integer) or an effect
// whose elements have that shape.
struct VarSpec {
  bool effect = false;
  std::size_t fn_arity = 0;
};

inline VarSpec term_var(std::size_t fn_arity = 0) { return {false, fn_arity}; }
inline VarSpec effect_var(std::size_t fn_arity = 0) { return {true, fn_arity}; }

// An equation over symbolic heads and effect variables, expected to
// canonicalize to the same form on both sides.
struct LawCase {
  std::string name;
  std::string lhs;
  std::string rhs;
  std::string family;  // which law family the case exercises
  std::map<std::string, VarSpec> vars;
};

struct LawResult {
  std::string name;
  bool equal = false;
  DerivationTrace lhs_trace;
  DerivationTrace rhs_trace;
};

// The executable law catalogue: the four classic applicative laws, both
// functor laws, the eight-law truncated (n <= 2) system including the
// two pair-encoded cases, the pure/fmap/<*>//liftA interdefinitions and
// the iterated-pure family.
const std::vector<LawCase>& builtin_corpus();

LawResult check_law(const LawCase& c, const Options& opts = {});

// Extensional check of a law under one instance: samples the declared
// variables and compares both sides' evaluations.
bool check_law_oracle(const LawCase& c, InstanceKind kind, std::size_t envs,
                      std::uint64_t seed, const Options& opts = {},
                      std::string* detail = nullptr);

// The n-ary composition-law matrix: for each (n, k, m) builds
//   liftA(n+1+m) f us (liftAk g vs) ws  ==  liftA(n+k+m) (f o_n^k g) us vs ws
// with symbolic heads, expands both sides into pure/<*> form, and
// compares canonically and under every oracle instance.
struct MatrixCell {
  std::size_t n = 0, k = 0, m = 0;
  bool symbolic_equal = false;
  bool oracle_equal = false;
  std::string tag;  // special case this cell instantiates, if any
};

std::vector<MatrixCell> composition_matrix(std::size_t max_n, std::size_t max_k,
                                           std::size_t max_m,
                                           std::size_t oracle_envs,
                                           std::uint64_t seed,
                                           const Options& opts = {});

// Frame property: canonically equal liftA-rooted expressions stay equal
// after appending the same extra effect arguments to both roots.
struct FrameReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string message;
};

FrameReport frame_extension_check(std::size_t pairs, std::size_t max_extra,
                                  std::uint64_t seed, const Options& opts = {});

// Step-by-step replay of the four classic law derivations, with the
// engine's trace aligned against the expected rewrite outline.
struct DerivationReport {
  std::string name;
  std::string lhs;
  std::string rhs;
  DerivationTrace trace;        // trace of the lhs
  TermPtr expected_head;        // canonical head both sides must reach
  std::vector<std::string> expected_leaves;
  std::vector<std::string> expected_steps;  // law names, in order
  bool head_ok = false;
  bool leaves_ok = false;
  bool rhs_equal = false;
  // engine step name, expected outline entry ("" when unmatched)
  std::vector<std::pair<std::string, std::string>> alignment;
  std::size_t unaligned = 0;
};

std::vector<DerivationReport> replay_derivations(const Options& opts = {});

}  // namespace idiom
