// Command-line surface: problem-file ingestion, verification suites, and
// machine-readable JSON reports.
//
// Subcommands:
//   exponent --n N --p P   outer exponent of U^1 with class statistics
//   suite NAME             run a named verification suite (exit 0 iff green)
//   run FILE               evaluate a problem file (kind: massey | brauer |
//                          embedding | group); "-" reads stdin
//
// Exit codes: 0 success, 2 check failure, 3 budget exceeded, 4 input error.
// Reports are byte-identical across runs; --timing appends a timing field
// that is excluded from that contract.

#include <CLI11.hpp>
#include <json.hpp>

#include "mv/brauer.hpp"
#include "mv/cohom.hpp"
#include "mv/conjact.hpp"
#include "mv/massey.hpp"
#include "mv/modarith.hpp"
#include "mv/unigroup.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace mv;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFail = 2;
constexpr int kExitBudget = 3;
constexpr int kExitInput = 4;

/// Schema or value error in user input; carries a path-precise message.
struct input_error : std::runtime_error {
  explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct Flags {
  i64 max_elems = kDefaultElemBudget;
  i64 max_nodes = kDefaultNodeBudget;
  int threads = 1;
  bool pretty = false;
  bool timing = false;
};

std::string fnv1a_hex(const std::string& data) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

void flatten_lines(const json& j, const std::string& prefix,
                   std::vector<std::string>& out) {
  if (j.is_object()) {
    for (auto& [k, v] : j.items())
      flatten_lines(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() &&
             (j.front().is_object() || j.front().is_array())) {
    for (size_t i = 0; i < j.size(); ++i)
      flatten_lines(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out.push_back(prefix + " = " + j.dump());
  }
}

void emit(json report, const Flags& flags,
          std::chrono::steady_clock::time_point start) {
  if (flags.timing) {
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                  std::chrono::steady_clock::now() - start)
                  .count();
    report["timing_ms"] = ms;
  }
  if (flags.pretty) {
    std::vector<std::string> lines;
    flatten_lines(report, "", lines);
    size_t width = 0;
    for (auto& l : lines) width = std::max(width, l.find(" = "));
    for (auto& l : lines) {
      size_t eq = l.find(" = ");
      std::cout << "  " << l.substr(0, eq) << std::string(width - eq, ' ')
                << " : " << l.substr(eq + 3) << "\n";
    }
  } else {
    std::cout << report.dump(2) << "\n";
  }
}

json budgets_json(const Flags& flags) {
  return json{{"max_elems", flags.max_elems}, {"max_nodes", flags.max_nodes}};
}

// ---- schema helpers -------------------------------------------------------

const json& require_field(const json& j, const std::string& key,
                          const std::string& path) {
  if (!j.is_object() || !j.contains(key))
    throw input_error(path + ": missing required field \"" + key + "\"");
  return j.at(key);
}

i64 require_int(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw input_error(path + ": expected an integer, got " + j.dump());
  return j.get<i64>();
}

std::vector<i64> require_int_array(const json& j, const std::string& path,
                                   i64 expected_len = -1) {
  if (!j.is_array()) throw input_error(path + ": expected an array");
  if (expected_len >= 0 && (i64)j.size() != expected_len)
    throw input_error(path + ": expected length " + std::to_string(expected_len) +
                      ", got " + std::to_string(j.size()));
  std::vector<i64> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(require_int(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

FiniteGroup parse_group(const json& j, const std::string& path) {
  if (!j.is_object()) throw input_error(path + ": expected an object");
  if (j.contains("table")) {
    const json& t = j.at("table");
    if (!t.is_array() || t.empty())
      throw input_error(path + ".table: expected a non-empty array of rows");
    int order = (int)t.size();
    std::vector<int> table;
    table.reserve((size_t)order * order);
    for (int r = 0; r < order; ++r) {
      auto row = require_int_array(t[(size_t)r],
                                   path + ".table[" + std::to_string(r) + "]", order);
      for (i64 v : row) {
        if (v < 0 || v >= order)
          throw input_error(path + ".table[" + std::to_string(r) +
                            "]: entry out of range [0, " + std::to_string(order) + ")");
        table.push_back((int)v);
      }
    }
    std::vector<int> gens;
    if (j.contains("gens"))
      for (i64 v : require_int_array(j.at("gens"), path + ".gens")) {
        if (v < 0 || v >= order)
          throw input_error(path + ".gens: generator index out of range");
        gens.push_back((int)v);
      }
    try {
      return group_from_table(std::move(table), std::move(gens));
    } catch (const std::invalid_argument& e) {
      throw input_error(path + ".table: " + e.what());
    }
  }
  std::string kind = require_field(j, "construction", path).get<std::string>();
  if (kind == "cyclic") {
    i64 m = require_int(require_field(j, "m", path), path + ".m");
    if (m < 1 || m > kMaxTableOrder)
      throw input_error(path + ".m: order out of range");
    return group_cyclic((int)m);
  }
  if (kind == "dihedral") {
    i64 m = require_int(require_field(j, "m", path), path + ".m");
    if (m < 1 || 2 * m > kMaxTableOrder)
      throw input_error(path + ".m: order out of range");
    return group_dihedral((int)m);
  }
  if (kind == "quaternion") return group_quaternion();
  if (kind == "product") {
    const json& f = require_field(j, "factors", path);
    if (!f.is_array() || f.empty())
      throw input_error(path + ".factors: expected a non-empty array");
    FiniteGroup g = parse_group(f[0], path + ".factors[0]");
    for (size_t i = 1; i < f.size(); ++i) {
      FiniteGroup h = parse_group(f[i], path + ".factors[" + std::to_string(i) + "]");
      if ((i64)g.order * h.order > kMaxTableOrder)
        throw input_error(path + ".factors: product order exceeds " +
                          std::to_string(kMaxTableOrder));
      g = group_product(g, h);
    }
    return g;
  }
  throw input_error(path + ".construction: unknown construction \"" + kind +
                    "\" (expected cyclic, product, dihedral, or quaternion)");
}

// ---- exponent -------------------------------------------------------------

int cmd_exponent(int n, i64 p, const Flags& flags,
                 std::chrono::steady_clock::time_point start) {
  if (n < 2) throw input_error("--n: need n >= 2");
  if (!is_prime(p)) throw input_error("--p: need a prime modulus");
  UniContext c(n, p);
  ConjClasses cc = conj_classes(c, flags.max_elems);
  OuterExponentReport rep = outer_exponent(cc);
  bool established = n >= 3 && n <= 6 && (p == 2 || p == 3);
  json report{
      {"command", "exponent"},
      {"input_digest", fnv1a_hex("exponent n=" + std::to_string(n) +
                                 " p=" + std::to_string(p))},
      {"n", n},
      {"p", p},
      {"outer_exponent", rep.outer_exponent},
      {"group_exponent", rep.group_exponent},
      {"class_count", rep.class_count},
      {"power_fixers", rep.power_fixers},
      {"established_range", established},
      {"open_range", !established},
      {"budgets", budgets_json(flags)},
  };
  emit(report, flags, start);
  return kExitOk;
}

// ---- suites ---------------------------------------------------------------

struct Check {
  std::string name;
  bool pass = false;
  json witness;
};

void check(std::vector<Check>& out, const std::string& name, bool pass,
           json witness = json::object()) {
  out.push_back({name, pass, pass ? json::object() : std::move(witness)});
}

std::vector<Check> suite_conjact() {
  std::vector<Check> cs;
  for (auto [n, p] : std::vector<std::pair<int, i64>>{
           {3, 2}, {4, 2}, {5, 2}, {3, 3}, {4, 3}}) {
    UniContext c(n, p);
    ConjClasses cc = conj_classes(c);
    OuterExponentReport rep = outer_exponent(cc);
    check(cs, "outer exponent = p at n=" + std::to_string(n) +
              " p=" + std::to_string(p),
          rep.outer_exponent == p,
          json{{"outer_exponent", rep.outer_exponent}, {"p", p}});
  }
  // The invariant lifting of second-diagonal vectors, exhaustively.
  for (auto [n, p] : std::vector<std::pair<int, i64>>{{3, 2}, {3, 3}, {4, 2}}) {
    UniContext c(n, p);
    ConjClasses cc = conj_classes(c);
    auto bp = b_pairs(n);
    bool ok = true;
    json witness;
    i64 a_size = 1;
    for (int i = 0; i < n; ++i) a_size *= p;
    for (i64 scode = 0; scode < a_size && ok; ++scode) {
      AVec s(static_cast<size_t>(n), 0);
      i64 t = scode;
      for (int i = 0; i < n; ++i) {
        s[(size_t)i] = t % p;
        t /= p;
      }
      i64 b_size = 1;
      int second = 0;
      for (auto& pr : bp)
        if (pr.second - pr.first == 2) ++second;
      for (int i = 0; i < second; ++i) b_size *= p;
      for (i64 bcode = 0; bcode < b_size && ok; ++bcode) {
        BVec b(bp.size(), 0);
        i64 u = bcode;
        for (size_t k = 0; k < bp.size(); ++k)
          if (bp[k].second - bp[k].first == 2) {
            b[k] = u % p;
            u /= p;
          }
        if (a_act_on_B(c, s, b) != b) continue;
        if (!lemma_b2_witness(cc, s, b).has_value()) {
          ok = false;
          witness = json{{"n", n}, {"p", p}, {"sigma", s}, {"b", b}};
        }
      }
    }
    check(cs, "invariant class over every invariant second-diagonal vector at n=" +
              std::to_string(n) + " p=" + std::to_string(p),
          ok, witness);
  }
  // Fixed-class image spans.
  for (auto [n, p] : std::vector<std::pair<int, i64>>{{3, 2}, {4, 2}, {3, 3}, {4, 3}}) {
    UniContext c(n, p);
    ConjClasses cc = conj_classes(c);
    bool contains = true, equals = true;
    json witness;
    i64 a_size = 1;
    for (int i = 0; i < n; ++i) a_size *= p;
    for (i64 scode = 0; scode < a_size; ++scode) {
      AVec s(static_cast<size_t>(n), 0);
      i64 t = scode;
      for (int i = 0; i < n; ++i) {
        s[(size_t)i] = t % p;
        t /= p;
      }
      auto span = image_span_in_B(cc, s);
      for (auto& v : b0_cap_b_sigma(c, s))
        if (!span_contains_fp(span, v, p)) {
          contains = false;
          witness = json{{"n", n}, {"p", p}, {"sigma", s}, {"vector", v}};
        }
      if (n == 4 && !span_equal_fp(span, b_sigma_space(c, s), p)) {
        equals = false;
        witness = json{{"n", n}, {"p", p}, {"sigma", s}};
      }
    }
    check(cs, "image span contains B_0 fixed part at n=" + std::to_string(n) +
              " p=" + std::to_string(p),
          contains, witness);
    if (n == 4)
      check(cs, "image span is all of the fixed space at n=4 p=" + std::to_string(p),
            equals, witness);
  }
  return cs;
}

std::vector<Check> suite_prs() {
  std::vector<Check> cs;
  for (int n : {3, 4, 5})
    for (i64 p : {2, 3})
      for (int r = 1; r <= n - 2; ++r)
        for (int s = 1; s <= n - 2; ++s) {
          UniContext c(n, p);
          PrsReport rep = prs_check(c, r, s);
          check(cs, "corner subgroup properties at n=" + std::to_string(n) +
                    " p=" + std::to_string(p) + " r=" + std::to_string(r) +
                    " s=" + std::to_string(s),
                rep.pass(), json{{"witness", rep.witness}});
        }
  UniContext c(4, 2);
  std::vector<i64> u = {1, 0, 0, 0, 0}, v = {0, 0, 0, 0, 1};
  for (auto [r, s] : {std::pair<int, int>{1, 2}, {2, 1}}) {
    SGroupReport rep = s_group_check(c, r, s, u, v);
    check(cs, "retraction extension at (4,2) r=" + std::to_string(r) +
              " s=" + std::to_string(s),
          rep.pass(), json{{"witness", rep.witness}});
  }
  return cs;
}

std::vector<Check> suite_dwyer() {
  std::vector<Check> cs;
  std::vector<std::pair<std::string, FiniteGroup>> groups;
  groups.emplace_back("Z/2", group_cyclic(2));
  groups.emplace_back("Z/4", group_cyclic(4));
  groups.emplace_back("Z/2 x Z/2",
                      group_product(group_cyclic(2), group_cyclic(2)));
  for (auto& [gname, gamma] : groups) {
    auto homs = homs_to_zm(gamma, 2);
    for (int n : {2, 3}) {
      bool round_trip = true, consistent = true, embedding_agrees = true;
      json witness;
      i64 tuples = 1;
      for (int i = 0; i < n; ++i) tuples *= (i64)homs.size();
      for (i64 code = 0; code < tuples; ++code) {
        std::vector<std::vector<i64>> alpha;
        i64 t = code;
        for (int i = 0; i < n; ++i) {
          alpha.push_back(homs[(size_t)(t % (i64)homs.size())]);
          t /= (i64)homs.size();
        }
        MasseyProblem pb = classical_problem(gamma, n, 2, alpha);
        auto lifts = enumerate_lifts(pb);
        std::vector<DefiningSystem> systems;
        for (auto& hom : lifts) {
          DefiningSystem ds = hom_to_defining_system(pb, hom);
          if (!check_defining_system(pb, ds).ok()) round_trip = false;
          HomResult back = defining_system_to_hom(pb, ds);
          if (!back.hom || *back.hom != hom) round_trip = false;
          for (auto& prev : systems)
            if (prev.a == ds.a) round_trip = false;  // extraction is injective
          systems.push_back(std::move(ds));
          if (!round_trip) {
            witness = json{{"gamma", gname}, {"n", n}, {"alpha", alpha}};
            break;
          }
        }
        MasseySetReport rep = massey_product_set(pb);
        bool zero_seen = false;
        for (char v : rep.per_hom_trivial) zero_seen = zero_seen || v;
        if (rep.defined != !lifts.empty() || rep.contains_zero != zero_seen) {
          consistent = false;
          witness = json{{"gamma", gname}, {"n", n}, {"alpha", alpha}};
        }
        // Vanishing must match solvability of the associated lifting problem.
        KernelPattern k = kernel_u1(pb.c);
        std::vector<UniTri> abar;
        for (int g = 0; g < gamma.order; ++g) {
          UniTri x(pb.c);
          for (int i = 0; i < n; ++i) x.set(i, i + 1, alpha[(size_t)i][(size_t)g]);
          abar.push_back(mask_reduce(x, k));
        }
        bool solved =
            solve_embedding(gamma, pb.c, k, abar).status == EmbeddingResult::solved;
        if (rep.defined && rep.contains_zero != solved) {
          embedding_agrees = false;
          witness = json{{"gamma", gname}, {"n", n}, {"alpha", alpha}};
        }
      }
      std::string tag = gname + " n=" + std::to_string(n);
      check(cs, "defining systems and lifts correspond bijectively for " + tag,
            round_trip, witness);
      check(cs, "product set is consistent per lift for " + tag, consistent, witness);
      check(cs, "vanishing matches the lifting problem for " + tag,
            embedding_agrees, witness);
    }
  }
  // Trivial characters reproduce the classical computation bit for bit.
  FiniteGroup z4 = group_cyclic(4);
  std::vector<std::vector<i64>> alpha(3, std::vector<i64>{0, 1, 0, 1});
  MasseyProblem cl = classical_problem(z4, 3, 2, alpha);
  MasseyProblem gen = generalized_problem(
      z4, 3, 2, std::vector<std::vector<i64>>(4, std::vector<i64>{1, 1, 1, 1}),
      alpha);
  MasseySetReport a = massey_product_set(cl), b = massey_product_set(gen);
  check(cs, "trivial characters degenerate to the classical case",
        a.hom_count == b.hom_count && a.classes == b.classes &&
            a.contains_zero == b.contains_zero);
  return cs;
}

std::vector<Check> suite_brauer() {
  std::vector<Check> cs;
  for (i64 p : {2, 3}) {
    auto rows = sandwich_scan(3, p, true);
    bool all_zero = true, sandwich = true;
    json witness;
    for (auto& row : rows) {
      if (row.report.formula_dim != 0) all_zero = false;
      if (!row.report.sandwich_ok || !row.sha_equals_formula) sandwich = false;
      if (!all_zero || !sandwich) {
        witness = json{{"gens", json::array()}, {"formula_dim", row.report.formula_dim}};
        for (auto& [av, u] : row.gens)
          witness["gens"].push_back(json{{"a", av}, {"chi", u}});
        break;
      }
    }
    check(cs, "formula subgroup vanishes for every subgroup at n=3 p=" +
              std::to_string(p) + " (" + std::to_string(rows.size()) + " subgroups)",
          all_zero, witness);
    check(cs, "sandwich holds across the n=3 p=" + std::to_string(p) + " scan",
          sandwich, witness);
  }
  {
    UniContext c(4, 2);
    ConjClasses cc = conj_classes(c);
    BrauerProblem pb =
        build_problem(cc, {{{1, 1, 0, 1}, 1}, {{1, 0, 1, 1}, 1}});
    BrauerReport rep = evaluate_formula(pb, cc);
    check(cs, "two-generator n=4 instance has one-dimensional locally trivial part",
          rep.sha_dim == 1 && rep.formula_dim == 1 && rep.sha_b0_trivial &&
              rep.sandwich_ok && rep.formula_in_b0_kernel,
          json{{"sha_dim", rep.sha_dim}, {"formula_dim", rep.formula_dim}});
    check(cs, "formula conditions are coboundary invariant on the n=4 instance",
          coboundary_invariance(pb, cc, 100));
  }
  {
    UniContext c(3, 3);
    ConjClasses cc = conj_classes(c);
    AVec e0 = {1, 0, 0};
    BrauerProblem pb = build_problem(cc, {{e0, 2}});
    BrauerReport rep = evaluate_formula(pb, cc);
    check(cs, "surjective character kills H^1 at n=3 p=3", rep.h1_dim == 0,
          json{{"h1_dim", rep.h1_dim}});
  }
  return cs;
}

std::vector<Check> suite_bogomolov() {
  std::vector<Check> cs;
  for (int m : {4, 8, 9}) {
    QzProxyResult q = h2_qz_proxy(group_cyclic(m));
    check(cs, "divisible-coefficient H^2 vanishes for Z/" + std::to_string(m),
          q.trivial());
  }
  {
    FiniteGroup v4 = group_product(group_cyclic(2), group_cyclic(2));
    BogomolovReport rep = bogomolov(v4);
    check(cs, "multiplier of Z/2 x Z/2 is trivial", rep.trivial,
          json{{"dim", rep.dim}});
  }
  for (auto [n, p] : std::vector<std::pair<int, i64>>{{3, 2}, {3, 3}}) {
    UniContext c(n, p);
    FiniteGroup u1 = group_from_uni(c, 2);
    BogomolovReport rep = bogomolov(u1);
    check(cs, "multiplier of the depth-one subgroup is trivial at n=" +
              std::to_string(n) + " p=" + std::to_string(p),
          rep.trivial,
          json{{"dim", rep.dim}, {"subgroups_used", rep.subgroups_used}});
  }
  return cs;
}

std::vector<Check> suite_generalized() {
  std::vector<Check> cs;
  {
    AwSplitReport rep = aw_split_check(3, 8);
    check(cs, "split tower of triangular subgroups over Z/8", rep.pass(),
          json{{"witness", rep.witness}});
  }
  for (auto [n, m] : std::vector<std::pair<int, i64>>{{3, 3}, {4, 5}}) {
    AwSplitReport rep = aw_split_check(n, m);
    check(cs, "generic split sequence at n=" + std::to_string(n) +
              " m=" + std::to_string(m),
          rep.pass(), json{{"witness", rep.witness}});
  }
  {
    // Unipotent triangular elements multiply exactly like unitriangular ones.
    UniContext c(4, 3);
    bool ok = true;
    for (i64 xa = 0; xa < 64 && ok; ++xa)
      for (i64 ya = 0; ya < 64 && ok; ++ya) {
        UniTri x = decode(c, (xa * 37) % group_size(c, 1), 1);
        UniTri y = decode(c, (ya * 53) % group_size(c, 1), 1);
        TriW tx = tw_from_uni(x), ty = tw_from_uni(y);
        TriW prod = tw_mul(tx, ty);
        ok = tw_is_unipotent(prod) && tw_to_uni(prod) == mul(x, y) &&
             tw_to_uni(tw_inv(tx)) == inv(x);
      }
    check(cs, "triangular arithmetic degenerates to the unipotent group", ok);
  }
  {
    // A character of order 2 modulo 8: full round trip through assembly.
    FiniteGroup z2 = group_cyclic(2);
    std::vector<std::vector<i64>> chi(4, std::vector<i64>{1, 7});
    std::vector<std::vector<i64>> alpha(3, std::vector<i64>{0, 4});
    MasseyProblem pb = generalized_problem(z2, 3, 8, chi, alpha);
    auto lifts = enumerate_lifts(pb);
    bool ok = !lifts.empty();
    for (auto& hom : lifts) {
      DefiningSystem ds = hom_to_defining_system(pb, hom);
      ok = ok && check_defining_system(pb, ds).ok();
      HomResult back = defining_system_to_hom(pb, ds);
      ok = ok && back.hom && *back.hom == hom;
      massey_value(pb, ds);  // internal cross-check of the obstruction
    }
    check(cs, "character-twisted defining systems round trip modulo 8", ok,
          json{{"lifts", lifts.size()}});
  }
  return cs;
}

int cmd_suite(const std::string& name, const Flags& flags,
              std::chrono::steady_clock::time_point start) {
  std::vector<Check> cs;
  if (name == "conjact")
    cs = suite_conjact();
  else if (name == "prs")
    cs = suite_prs();
  else if (name == "dwyer")
    cs = suite_dwyer();
  else if (name == "brauer")
    cs = suite_brauer();
  else if (name == "bogomolov")
    cs = suite_bogomolov();
  else if (name == "generalized")
    cs = suite_generalized();
  else
    throw input_error("suite: unknown suite \"" + name +
                      "\" (expected dwyer, conjact, prs, brauer, bogomolov, "
                      "or generalized)");
  bool all = true;
  json checks = json::array();
  for (auto& c : cs) {
    all = all && c.pass;
    json entry{{"name", c.name}, {"pass", c.pass}};
    if (!c.pass) entry["witness"] = c.witness;
    checks.push_back(std::move(entry));
  }
  json report{
      {"command", "suite"},
      {"input_digest", fnv1a_hex("suite " + name)},
      {"suite", name},
      {"checks", checks},
      {"passed", all},
      {"budgets", budgets_json(flags)},
  };
  emit(report, flags, start);
  return all ? kExitOk : kExitCheckFail;
}

// ---- run ------------------------------------------------------------------

json run_massey(const json& in, const Flags& flags) {
  int n = (int)require_int(require_field(in, "n", "$"), "$.n");
  i64 m = require_int(require_field(in, "m", "$"), "$.m");
  FiniteGroup gamma = parse_group(require_field(in, "group", "$"), "$.group");
  const json& ja = require_field(in, "alpha", "$");
  if (!ja.is_array() || (i64)ja.size() != n)
    throw input_error("$.alpha: expected " + std::to_string(n) + " cochains");
  std::vector<std::vector<i64>> alpha;
  for (int i = 0; i < n; ++i)
    alpha.push_back(require_int_array(ja[(size_t)i],
                                      "$.alpha[" + std::to_string(i) + "]",
                                      gamma.order));
  MasseyProblem pb;
  try {
    if (in.contains("chi")) {
      const json& jc = in.at("chi");
      if (!jc.is_array() || (i64)jc.size() != n + 1)
        throw input_error("$.chi: expected " + std::to_string(n + 1) +
                          " characters");
      std::vector<std::vector<i64>> chi;
      for (int i = 0; i <= n; ++i)
        chi.push_back(require_int_array(jc[(size_t)i],
                                        "$.chi[" + std::to_string(i) + "]",
                                        gamma.order));
      pb = generalized_problem(std::move(gamma), n, m, std::move(chi),
                               std::move(alpha));
    } else {
      pb = classical_problem(std::move(gamma), n, m, std::move(alpha));
    }
  } catch (const std::invalid_argument& e) {
    throw input_error(std::string("$: ") + e.what());
  }
  MasseySetReport rep = massey_product_set(pb, flags.max_elems);
  json classes = json::array();
  for (size_t i = 0; i < rep.classes.size(); ++i)
    classes.push_back(json{{"value", rep.classes[i]},
                           {"trivial", (bool)rep.class_trivial[i]}});
  return json{
      {"kind", "massey"},
      {"n", n},
      {"m", m},
      {"order", pb.gamma.order},
      {"classical", pb.classical},
      {"defined", rep.defined},
      {"vanishes", rep.defined && rep.contains_zero},
      {"hom_count", rep.hom_count},
      {"bucket_count", rep.bucket_count},
      {"class_count", (i64)rep.classes.size()},
      {"classes", classes},
  };
}

json run_brauer(const json& in, const Flags& flags) {
  int n = (int)require_int(require_field(in, "n", "$"), "$.n");
  i64 p = require_int(require_field(in, "p", "$"), "$.p");
  if (n < 3) throw input_error("$.n: need n >= 3");
  if (!is_prime(p)) throw input_error("$.p: need a prime");
  const json& jg = require_field(in, "generators", "$");
  if (!jg.is_array()) throw input_error("$.generators: expected an array");
  std::vector<std::pair<AVec, i64>> gens;
  for (size_t i = 0; i < jg.size(); ++i) {
    std::string path = "$.generators[" + std::to_string(i) + "]";
    AVec a = require_int_array(require_field(jg[i], "a", path), path + ".a", n);
    i64 chi = require_int(require_field(jg[i], "chi", path), path + ".chi");
    gens.emplace_back(std::move(a), chi);
  }
  UniContext c(n, p);
  ConjClasses cc = conj_classes(c, flags.max_elems);
  BrauerProblem pb;
  try {
    pb = build_problem(cc, gens);
  } catch (const std::invalid_argument& e) {
    throw input_error(std::string("$.generators: ") + e.what());
  }
  BrauerReport rep = evaluate_formula(pb, cc, flags.max_elems);
  return json{
      {"kind", "brauer"},
      {"n", n},
      {"p", p},
      {"e", rep.e},
      {"order", pb.g.order},
      {"h1_dim", rep.h1_dim},
      {"sha_dim", rep.sha_dim},
      {"formula_dim", rep.formula_dim},
      {"b0_kernel_dim", rep.b0_kernel_dim},
      {"formula_basis", rep.formula_basis},
      {"sha_basis", rep.sha_basis},
      {"b0_kernel_basis", rep.b0_kernel_basis},
      {"conditions", rep.conditions},
      {"sandwich_ok", rep.sandwich_ok},
      {"formula_in_b0_kernel", rep.formula_in_b0_kernel},
      {"sha_b0_trivial", rep.sha_b0_trivial},
      {"notes", rep.notes},
  };
}

json run_embedding(const json& in, const Flags& flags) {
  int n = (int)require_int(require_field(in, "n", "$"), "$.n");
  i64 m = require_int(require_field(in, "m", "$"), "$.m");
  if (n < 2 || m < 2) throw input_error("$: need n >= 2 and m >= 2");
  UniContext c(n, m);
  FiniteGroup gamma = parse_group(require_field(in, "group", "$"), "$.group");
  const json& jk = require_field(in, "kernel", "$");
  KernelPattern k;
  if (jk.is_string() && jk.get<std::string>() == "center")
    k = kernel_z(c);
  else if (jk.is_string() && jk.get<std::string>() == "u1")
    k = kernel_u1(c);
  else if (jk.is_object() && jk.contains("lcs"))
    k = kernel_lcs(c, (int)require_int(jk.at("lcs"), "$.kernel.lcs"));
  else if (jk.is_object() && jk.contains("prs")) {
    auto rs = require_int_array(jk.at("prs"), "$.kernel.prs", 2);
    k = kernel_prs(c, (int)rs[0], (int)rs[1]);
  } else
    throw input_error(
        "$.kernel: expected \"center\", \"u1\", {\"lcs\": level}, or "
        "{\"prs\": [r, s]}");
  const json& jb = require_field(in, "abar", "$");
  if (!jb.is_array() || (i64)jb.size() != gamma.order)
    throw input_error("$.abar: expected one entry row per group element (" +
                      std::to_string(gamma.order) + ")");
  std::vector<UniTri> abar;
  for (int g = 0; g < gamma.order; ++g) {
    std::string path = "$.abar[" + std::to_string(g) + "]";
    auto ent = require_int_array(jb[(size_t)g], path, c.npairs);
    UniTri x(c);
    for (int t = 0; t < c.npairs; ++t)
      x.set(c.pairs[(size_t)t].first, c.pairs[(size_t)t].second, ent[(size_t)t]);
    if (!(mask_reduce(x, k) == x))
      throw input_error(path + ": nonzero entry on the kernel pattern");
    abar.push_back(std::move(x));
  }
  for (int a = 0; a < gamma.order; ++a)
    for (int b = 0; b < gamma.order; ++b)
      if (!(mul_masked(abar[(size_t)a], abar[(size_t)b], k) ==
            abar[(size_t)gamma.mul(a, b)]))
        throw input_error("$.abar: not a homomorphism into the quotient at (" +
                          std::to_string(a) + ", " + std::to_string(b) + ")");
  EmbeddingResult res = solve_embedding(gamma, c, k, abar, flags.max_nodes);
  json out{
      {"kind", "embedding"},
      {"n", n},
      {"m", m},
      {"order", gamma.order},
      {"status", res.status == EmbeddingResult::solved       ? "solved"
                 : res.status == EmbeddingResult::unsolvable ? "unsolvable"
                                                             : "budget_exceeded"},
      {"nodes", res.nodes},
  };
  if (res.status == EmbeddingResult::solved) {
    json lift = json::array();
    for (auto& x : res.lift) lift.push_back(x.ent);
    out["lift"] = lift;
  }
  if (res.status == EmbeddingResult::budget_exceeded)
    throw budget_error("embedding search exceeded --max-nodes", res.nodes);
  return out;
}

json run_group(const json& in, const Flags&) {
  FiniteGroup g = parse_group(require_field(in, "group", "$"), "$.group");
  bool abelian = true;
  i64 exponent = 1;
  for (int a = 0; a < g.order && abelian; ++a)
    for (int b = 0; b < a; ++b)
      if (g.mul(a, b) != g.mul(b, a)) {
        abelian = false;
        break;
      }
  for (int a = 0; a < g.order; ++a)
    exponent = std::lcm(exponent, g.elem_order(a));
  json out{
      {"kind", "group"},
      {"order", g.order},
      {"abelian", abelian},
      {"exponent", exponent},
      {"generators", g.gens},
      {"maximal_cyclic_subgroups", (i64)maximal_cyclic_subgroups(g).size()},
  };
  if (g.order <= 64) out["subgroups"] = (i64)all_subgroups(g).size();
  if (g.order <= 32) {
    QzProxyResult q = h2_qz_proxy(g);
    json parts = json::array();
    for (auto& h : q.parts)
      parts.push_back(json{{"p", h.p}, {"k", h.k}, {"dim", h.dim}});
    out["h2_divisible_parts"] = parts;
    out["h2_divisible_trivial"] = q.trivial();
  }
  return out;
}

int cmd_run(const std::string& file, const Flags& flags,
            std::chrono::steady_clock::time_point start) {
  std::string data;
  if (file == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    data = os.str();
  } else {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw input_error("run: cannot open \"" + file + "\"");
    std::ostringstream os;
    os << in.rdbuf();
    data = os.str();
  }
  json parsed;
  try {
    parsed = json::parse(data);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("run: invalid JSON: ") + e.what());
  }
  std::string kind =
      require_field(parsed, "kind", "$").is_string()
          ? parsed.at("kind").get<std::string>()
          : throw input_error("$.kind: expected a string");
  json results;
  if (kind == "massey")
    results = run_massey(parsed, flags);
  else if (kind == "brauer")
    results = run_brauer(parsed, flags);
  else if (kind == "embedding")
    results = run_embedding(parsed, flags);
  else if (kind == "group")
    results = run_group(parsed, flags);
  else
    throw input_error("$.kind: unknown kind \"" + kind +
                      "\" (expected massey, brauer, embedding, or group)");
  json report{
      {"command", "run"},
      {"input_digest", fnv1a_hex(data)},
      {"results", results},
      {"budgets", budgets_json(flags)},
  };
  emit(report, flags, start);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  auto start = std::chrono::steady_clock::now();
  Flags flags;
  if (const char* env = std::getenv("MV_THREADS")) flags.threads = std::atoi(env);

  CLI::App app{"Unitriangular group tower calculator: exponents, verification "
               "suites, and problem-file evaluation"};
  app.require_subcommand(1);

  auto add_common = [&flags](CLI::App* sub) {
    sub->add_option("--max-elems", flags.max_elems,
                    "Element enumeration budget");
    sub->add_option("--max-nodes", flags.max_nodes,
                    "Backtracking node budget for embedding search");
    sub->add_option("--threads", flags.threads,
                    "Worker count (results are scheduling independent)");
    sub->add_flag("--pretty", flags.pretty, "Human-readable table output");
    sub->add_flag("--timing", flags.timing,
                  "Append wall-clock timing (excluded from determinism)");
  };

  int n = 4;
  i64 p = 2;
  CLI::App* ex = app.add_subcommand("exponent", "Outer exponent of U^1");
  ex->add_option("--n", n, "Matrix size parameter")->required();
  ex->add_option("--p", p, "Prime modulus")->required();
  add_common(ex);

  std::string suite_name;
  CLI::App* su = app.add_subcommand("suite", "Run a named verification suite");
  su->add_option("name", suite_name,
                 "dwyer | conjact | prs | brauer | bogomolov | generalized")
      ->required();
  add_common(su);

  std::string file;
  CLI::App* ru = app.add_subcommand("run", "Evaluate a problem file");
  ru->add_option("file", file, "Problem file path, or - for stdin")->required();
  add_common(ru);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInput;
  }

  try {
    if (ex->parsed()) return cmd_exponent(n, p, flags, start);
    if (su->parsed()) return cmd_suite(suite_name, flags, start);
    return cmd_run(file, flags, start);
  } catch (const budget_error& e) {
    std::cerr << "budget exceeded: " << e.what();
    if (e.required > 0 && e.required < std::numeric_limits<i64>::max())
      std::cerr << " (required " << e.required << ")";
    std::cerr << "\n";
    return kExitBudget;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "check failure: " << e.what() << "\n";
    return kExitCheckFail;
  }
}
