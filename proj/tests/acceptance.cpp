// Acceptance suite: runs every shipped guarantee end to end and prints
// one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "idiom/laws.hpp"
#include "idiom/normalize.hpp"
#include "idiom/oracle.hpp"
#include "idiom/parse.hpp"

using namespace idiom;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20240131;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool law_holds(const std::string& name, std::size_t oracle_envs,
               std::string& detail) {
  for (const LawCase& c : builtin_corpus()) {
    if (c.name != name) continue;
    LawResult r = check_law(c);
    if (!r.equal) {
      detail = name + " canonically distinct";
      return false;
    }
    for (InstanceKind kind : kAllInstances) {
      if (!check_law_oracle(c, kind, oracle_envs, kSeed, {}, &detail))
        return false;
    }
    return true;
  }
  detail = "law case " + name + " missing from corpus";
  return false;
}

// 1. The four classic laws, canonical and extensional (>= 100 envs).
bool classic_laws_suite(std::string& detail) {
  for (const char* name :
       {"ap_identity", "ap_composition", "ap_homomorphism", "ap_interchange"})
    if (!law_holds(name, 100, detail)) return false;
  return true;
}

// 2. The eight truncated (n <= 2) laws, both pair-encoded ones included.
bool truncated_suite(std::string& detail) {
  const char* names[] = {
      "trunc_hom_unary",    "trunc_hom_binary",  "trunc_exchange",
      "trunc_compose_left", "trunc_compose_right", "trunc_unary_outer",
      "trunc_pair_left",    "trunc_pair_right",
  };
  for (const char* name : names) {
    const LawCase* found = nullptr;
    for (const LawCase& c : builtin_corpus())
      if (c.name == name) found = &c;
    if (!found) {
      detail = std::string("missing case ") + name;
      return false;
    }
    if (!check_law(*found).equal) {
      detail = std::string(name) + " canonically distinct";
      return false;
    }
  }
  return true;
}

// 3. Full composition matrix over {0..3}^3, symbolic + oracle, with the
// named special-case rows and columns asserted.
bool matrix_suite(std::string& detail) {
  auto cells = composition_matrix(3, 3, 3, 10, kSeed);
  if (cells.size() != 64) {
    detail = "expected 64 cells";
    return false;
  }
  for (const MatrixCell& c : cells) {
    if (!c.symbolic_equal || !c.oracle_equal) {
      detail = "cell (" + std::to_string(c.n) + "," + std::to_string(c.k) +
               "," + std::to_string(c.m) + ") failed " +
               (c.symbolic_equal ? "oracle" : "symbolic") + " comparison";
      return false;
    }
  }
  auto tag_of = [&](std::size_t n, std::size_t k, std::size_t m) {
    for (const MatrixCell& c : cells)
      if (c.n == n && c.k == k && c.m == m) return c.tag;
    return std::string("missing");
  };
  if (tag_of(0, 0, 0) != "homomorphism") {
    detail = "(0,0,0) must instantiate homomorphism";
    return false;
  }
  if (tag_of(0, 1, 0) != "second-functor-law") {
    detail = "(0,1,0) must instantiate the second functor law";
    return false;
  }
  for (std::size_t n = 1; n <= 3; ++n)
    if (tag_of(n, 0, 0) != "pure-absorption") {
      detail = "(n,0,0) row must instantiate pure absorption";
      return false;
    }
  for (std::size_t k = 2; k <= 3; ++k)
    if (tag_of(0, k, 0) != "unary-composition") {
      detail = "(0,k,0) column must instantiate unary composition";
      return false;
    }
  return true;
}

// 4. Frame property on 200 generated equal-canonical pairs, m <= 3.
bool frame_suite(std::string& detail) {
  FrameReport r = frame_extension_check(200, 3, kSeed);
  if (!r.ok || r.checked != 200) {
    detail = r.message.empty()
                 ? "only " + std::to_string(r.checked) + " pairs checked"
                 : r.message;
    return false;
  }
  return true;
}

// 5. Oracle soundness: 1000 expressions x 4 instances x 5 environments,
// structural equality of results including writer logs.
bool fuzz_suite(std::string& detail) {
  FuzzReport r = soundness_fuzz(1000, 5, kSeed);
  if (!r.ok) {
    detail = "seed " + std::to_string(r.failing_seed) + ": " + r.message;
    return false;
  }
  if (r.comparisons != 1000 * 4 * 5) {
    detail = "expected 20000 comparisons, ran " + std::to_string(r.comparisons);
    return false;
  }
  return true;
}

// 6. The four classic derivations reach their stated canonical heads and
// serialize byte-identically to the committed goldens, run after run.
bool replay_suite(std::string& detail) {
  Options opts;
  auto first = replay_derivations(opts);
  auto second = replay_derivations(opts);
  if (first.size() != 4) {
    detail = "expected 4 derivations";
    return false;
  }
  for (std::size_t i = 0; i < first.size(); ++i) {
    const DerivationReport& rep = first[i];
    if (!rep.head_ok || !rep.leaves_ok || !rep.rhs_equal) {
      detail = rep.name + " did not reach its stated canonical form";
      return false;
    }
    if (rep.unaligned != 0) {
      detail = rep.name + " trace deviates from the expected outline";
      return false;
    }
    std::string actual = trace_to_jsonl(rep.trace, opts);
    if (actual != trace_to_jsonl(second[i].trace, opts)) {
      detail = rep.name + " trace is not stable across runs";
      return false;
    }
    fs::path golden = fs::path(IDIOM_GOLDEN_DIR) / "traces" / (rep.name + ".trace");
    if (slurp(golden) != actual) {
      detail = rep.name + " trace differs from its golden file";
      return false;
    }
  }
  if (!alpha_eq(first[1].trace.final_form.head, parse_term("\\a b c -> a (b c)"))) {
    detail = "composition must reach \\a b c -> a (b c)";
    return false;
  }
  return true;
}

// 7. Leftmost- and rightmost-innermost fusion agree on 1000 expressions.
bool confluence_suite(std::string& detail) {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    GenSpec spec;
    spec.seed = mix_seed(kSeed, 0xc0f + i);
    ExprPtr e = generate(spec).expr;
    auto left = canonicalize(e, {}, FuseStrategy::LeftmostInnermost);
    auto right = canonicalize(e, {}, FuseStrategy::RightmostInnermost);
    if (!canonical_eq(left.first, right.first)) {
      detail = "strategies disagree on: " + print_expr(e);
      return false;
    }
  }
  return true;
}

// 8. parse . print identity on 1000 expressions plus the byte-exact
// golden corpus (>= 20 files).
bool roundtrip_suite(std::string& detail) {
  for (std::uint64_t i = 0; i < 1000; ++i) {
    GenSpec spec;
    spec.seed = mix_seed(kSeed, 0xf00d + i);
    ExprPtr e = generate(spec).expr;
    std::string text = print_expr(e);
    if (!expr_eq(parse_expr(text), e)) {
      detail = "round trip failed for: " + text;
      return false;
    }
  }
  fs::path dir = fs::path(IDIOM_GOLDEN_DIR) / "corpus";
  std::size_t count = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".idm") continue;
    std::string text = slurp(entry.path());
    if (text.empty() || text.back() != '\n') {
      detail = entry.path().filename().string() + " must end with a newline";
      return false;
    }
    std::string expr = text.substr(0, text.size() - 1);
    if (print_expr(parse_expr(expr)) != expr) {
      detail = entry.path().filename().string() + " is not byte-stable";
      return false;
    }
    ++count;
  }
  if (count < 20) {
    detail = "golden corpus has only " + std::to_string(count) + " files";
    return false;
  }
  return true;
}

// 9. Negative controls: effect order and distinct heads matter.
bool negative_suite(std::string& detail) {
  if (equivalent(parse_expr("u <*> v"), parse_expr("v <*> u")).equal) {
    detail = "u <*> v must differ from v <*> u";
    return false;
  }
  if (equivalent(parse_expr("liftA1 f u"), parse_expr("liftA1 g u")).equal) {
    detail = "distinct symbolic heads must stay distinct";
    return false;
  }
  return true;
}

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0 = no limit
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "classic law suite, canonical + oracle (>=100 envs)", 5.0,
       classic_laws_suite},
      {2, "truncated n<=2 system, all 8 laws", 1.0, truncated_suite},
      {3, "composition matrix {0..3}^3, symbolic + oracle", 30.0, matrix_suite},
      {4, "frame property on 200 equal-canonical pairs", 0.0, frame_suite},
      {5, "oracle soundness fuzz, 1000 x 4 x 5", 0.0, fuzz_suite},
      {6, "derivation replay with byte-stable golden traces", 0.0, replay_suite},
      {7, "fusion strategy confluence on 1000 expressions", 0.0,
       confluence_suite},
      {8, "parser round-trip + byte-exact golden corpus", 0.0, roundtrip_suite},
      {9, "negative controls", 0.0, negative_suite},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && c.time_limit_s > 0 && elapsed > c.time_limit_s) {
      ok = false;
      detail = "exceeded time limit of " + std::to_string(c.time_limit_s) + " s";
    }
    std::printf("%s criterion %d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL",
                c.id, c.name.c_str(), elapsed, detail.empty() ? "" : " -- ",
                detail.c_str());
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all %zu criteria passed\n", criteria.size());
  return failures == 0 ? 0 : 1;
}
