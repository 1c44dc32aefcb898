// cmlog — certified decisions for functions of the form
// p(log x_1, ..., log x_s) / (x_1 ... x_s).
//
// Subcommands: decide, transform, inv-laplace, derivative, probe-nesting,
// region-scan, constants, selftest.  Result documents are JSON (region
// scans: CSV) and byte-identical across runs for identical inputs; wall
// time goes to stderr so it never perturbs the documents.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cmlog/ball.hpp"
#include "cmlog/combinatorics.hpp"
#include "cmlog/constants.hpp"
#include "cmlog/derivatives.hpp"
#include "cmlog/laplace.hpp"
#include "cmlog/log_function.hpp"
#include "cmlog/nonneg.hpp"
#include "cmlog/rational.hpp"
#include "cmlog/reference_digits.hpp"
#include "cmlog/verdict.hpp"

namespace {

using json = nlohmann::ordered_json;
using cmlog::Ball;
using cmlog::BallSign;
using cmlog::Exponent;
using cmlog::LogFunction;
using cmlog::MPoly;
using cmlog::PrecisionCtx;
using cmlog::Rational;
using cmlog::Status;
using cmlog::UPoly;
using cmlog::Verdict;

constexpr int kExitCm = 0;
constexpr int kExitNotCm = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitInput = 3;
constexpr int kExitInternal = 4;

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- precision

std::optional<long> env_long(const char* name) {
  const char* v = std::getenv(name);
  if (v == nullptr || *v == '\0') return std::nullopt;
  char* end = nullptr;
  long parsed = std::strtol(v, &end, 10);
  if (end == nullptr || *end != '\0' || parsed <= 0)
    throw CliError(std::string(name) + ": expected a positive integer, got '" + v + "'");
  return parsed;
}

// precedence: command-line flag, then problem-file field, then environment
// (CMLOG_BITS / CMLOG_MAX_BITS), then the built-in defaults
PrecisionCtx resolve_ctx(std::optional<long> flag_bits, std::optional<long> flag_max,
                         std::optional<long> file_bits, std::optional<long> file_max) {
  PrecisionCtx ctx;
  std::optional<long> bits = flag_bits ? flag_bits : (file_bits ? file_bits : env_long("CMLOG_BITS"));
  std::optional<long> max_bits =
      flag_max ? flag_max : (file_max ? file_max : env_long("CMLOG_MAX_BITS"));
  if (bits) ctx.bits = static_cast<mpfr_prec_t>(*bits);
  if (max_bits) ctx.max_bits = static_cast<mpfr_prec_t>(*max_bits);
  if (ctx.bits < 8) throw CliError("--bits: at least 8 required");
  if (ctx.max_bits < ctx.bits) ctx.max_bits = ctx.bits;
  return ctx;
}

// ------------------------------------------------------------------- output

class OutputSink {
 public:
  explicit OutputSink(const std::string& target) {
    if (target.empty() || target == "-") return;
    file_.open(target, std::ios::binary);
    if (!file_) throw CliError("cannot open output file '" + target + "'");
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_json(const json& doc, OutputSink& sink) {
  sink.stream() << doc.dump(2) << '\n';
}

std::string rat_str(const Rational& q) { return q.to_string(); }
std::string ball_str(const Ball& b) { return b.to_string(30); }

// ------------------------------------------------------------ problem files

struct ProblemFile {
  unsigned s = 1;
  unsigned n = 0;
  MPoly<Rational> coeffs{1};
  std::optional<long> precision_bits;
  std::optional<long> max_bits;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot open input file '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw CliError("malformed JSON in '" + path + "': " + e.what());
  }
}

unsigned get_unsigned(const json& j, const char* key, unsigned lo, unsigned hi) {
  if (!j.contains(key) || !j[key].is_number_integer())
    throw CliError(std::string("field '") + key + "' must be an integer");
  long long v = j[key].get<long long>();
  if (v < static_cast<long long>(lo) || v > static_cast<long long>(hi))
    throw CliError(std::string("field '") + key + "' out of range");
  return static_cast<unsigned>(v);
}

Rational parse_value(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return Rational::from_string(v.get<std::string>());
    if (v.is_number_integer()) return Rational(static_cast<long>(v.get<long long>()));
  } catch (const std::exception& e) {
    throw CliError(where + ": " + e.what());
  }
  throw CliError(where +
                 ": value must be an integer or a string "
                 "(quote decimals to keep them exact, e.g. \"0.1\")");
}

Exponent parse_exponent(const json& e, unsigned s, unsigned n, const std::string& where) {
  if (!e.is_array() || e.size() != s)
    throw CliError(where + ": exponent must be a list of length s=" + std::to_string(s));
  Exponent out;
  out.reserve(s);
  unsigned long long total = 0;
  for (const auto& x : e) {
    if (!x.is_number_integer() || x.get<long long>() < 0)
      throw CliError(where + ": exponent entries must be nonnegative integers");
    unsigned long long u = x.get<unsigned long long>();
    total += u;
    if (u > n || total > n)
      throw CliError(where + ": exponent total degree exceeds n=" + std::to_string(n));
    out.push_back(static_cast<unsigned>(u));
  }
  return out;
}

ProblemFile parse_problem(const json& j) {
  ProblemFile p;
  p.s = get_unsigned(j, "s", 1, 16);
  p.n = get_unsigned(j, "n", 0, 64);
  p.coeffs = MPoly<Rational>(p.s);
  if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].empty())
    throw CliError("field 'coeffs' must be a non-empty list");
  std::size_t idx = 0;
  for (const auto& entry : j["coeffs"]) {
    const std::string where = "coeffs[" + std::to_string(idx++) + "]";
    if (!entry.is_object() || !entry.contains("exponent") || !entry.contains("value"))
      throw CliError(where + ": expected an object with 'exponent' and 'value'");
    Exponent e = parse_exponent(entry["exponent"], p.s, p.n, where);
    if (p.coeffs.find(e) != nullptr) throw CliError(where + ": duplicate exponent");
    Rational v = parse_value(entry["value"], where);
    if (!v.is_zero()) p.coeffs.add_term(e, v);
  }
  if (j.contains("precision_bits"))
    p.precision_bits = static_cast<long>(get_unsigned(j, "precision_bits", 8, 1u << 20));
  if (j.contains("max_bits"))
    p.max_bits = static_cast<long>(get_unsigned(j, "max_bits", 8, 1u << 24));
  return p;
}

json problem_echo(const ProblemFile& p) {
  json coeffs = json::array();
  for (const auto& [e, v] : p.coeffs.terms())
    coeffs.push_back(json{{"exponent", e}, {"value", rat_str(v)}});
  return json{{"s", p.s}, {"n", p.n}, {"coeffs", coeffs}};
}

// ------------------------------------------------------- document builders

json mpoly_doc(const MPoly<Ball>& q) {
  json terms = json::array();
  for (const auto& [e, c] : q.terms())
    terms.push_back(json{{"exponent", e}, {"enclosure", ball_str(c)}});
  return terms;
}

json verdict_doc(const Verdict& v) {
  json doc;
  switch (v.status) {
    case Status::cm: doc["verdict"] = "CM"; break;
    case Status::not_cm: doc["verdict"] = "NOT_CM"; break;
    case Status::unknown: doc["verdict"] = "UNKNOWN"; break;
  }
  doc["precision_bits_used"] = static_cast<long>(v.precision_used);
  if (v.cover) {
    json intervals = json::array();
    for (const auto& [lo, hi] : v.cover->intervals)
      intervals.push_back(json::array({rat_str(lo), rat_str(hi)}));
    doc["certificate"] = json{{"type", "interval-cover"},
                              {"radius", rat_str(v.cover->radius)},
                              {"intervals", intervals}};
  } else if (v.gram) {
    json basis = json::array();
    for (const auto& e : v.gram->basis) basis.push_back(e);
    json rows = json::array();
    for (const auto& row : v.gram->gram) {
      json r = json::array();
      for (const auto& x : row) r.push_back(rat_str(x));
      rows.push_back(r);
    }
    doc["certificate"] = json{{"type", "sum-of-squares"},
                              {"basis", basis},
                              {"epsilon", rat_str(v.gram->epsilon)},
                              {"gram", rows}};
  } else if (v.psd) {
    doc["certificate"] = json{{"type", "psd-pivots"}, {"pivots", v.psd->pivots}};
  } else {
    doc["certificate"] = nullptr;
  }
  if (v.witness) {
    json y = json::array();
    for (const auto& q : *v.witness) y.push_back(rat_str(q));
    doc["witness"] = json{{"y", y},
                          {"value", v.witness_value},
                          {"density_point_t", v.witness_density_point}};
  } else {
    doc["witness"] = nullptr;
  }
  doc["notes"] = v.notes;
  return doc;
}

// -------------------------------------------------------------- subcommands

struct CommonFlags {
  std::optional<long> bits;
  std::optional<long> max_bits;
  std::string out = "-";
};

void attach_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--bits", flags.bits, "working precision in bits");
  cmd->add_option("--max-bits", flags.max_bits, "escalation ceiling in bits");
  cmd->add_option("--out", flags.out, "output file ('-' for standard output)");
}

int run_decide(const std::string& path, const CommonFlags& flags) {
  json j = read_json_file(path);
  ProblemFile p = parse_problem(j);
  PrecisionCtx ctx = resolve_ctx(flags.bits, flags.max_bits, p.precision_bits, p.max_bits);
  LogFunction f(p.s, p.n, p.coeffs);

  auto t0 = std::chrono::steady_clock::now();
  Verdict v = cmlog::decide_cm(f, ctx);
  auto t1 = std::chrono::steady_clock::now();

  PrecisionCtx used{v.precision_used, v.precision_used, ctx.escalation_factor};
  json doc;
  doc["command"] = "decide";
  doc["input"] = problem_echo(p);
  doc.update(verdict_doc(v));
  doc["transformed_polynomial"] = mpoly_doc(cmlog::inverse_laplace_multi(f, used));

  OutputSink sink(flags.out);
  emit_json(doc, sink);
  std::fprintf(stderr, "wall_time_ms=%.3f\n",
               std::chrono::duration<double, std::milli>(t1 - t0).count());
  switch (v.status) {
    case Status::cm: return kExitCm;
    case Status::not_cm: return kExitNotCm;
    case Status::unknown: return kExitUnknown;
  }
  return kExitInternal;
}

int run_transform(const std::string& path, const CommonFlags& flags, bool forward) {
  json j = read_json_file(path);
  ProblemFile p = parse_problem(j);
  PrecisionCtx ctx = resolve_ctx(flags.bits, flags.max_bits, p.precision_bits, p.max_bits);
  MPoly<Ball> result = forward
                           ? cmlog::forward_laplace_multi(p.coeffs, p.n, ctx)
                           : cmlog::inverse_laplace_multi(LogFunction(p.s, p.n, p.coeffs), ctx);
  json doc;
  doc["command"] = forward ? "transform" : "inv-laplace";
  doc["direction"] = forward ? "forward" : "inverse";
  doc["input"] = problem_echo(p);
  doc["precision_bits"] = static_cast<long>(ctx.bits);
  doc["coefficients"] = mpoly_doc(result);
  OutputSink sink(flags.out);
  emit_json(doc, sink);
  return 0;
}

int run_derivative(const std::string& path, const CommonFlags& flags, unsigned k) {
  json j = read_json_file(path);
  ProblemFile p = parse_problem(j);
  if (p.s != 1) throw CliError("derivative: defined for s = 1 inputs only");
  UPoly<Rational> poly = LogFunction(p.s, p.n, p.coeffs).univariate();
  cmlog::DerivativeSequence seq = cmlog::derivative_polys(poly, k);
  UPoly<Rational> recentred = cmlog::g_shifted(poly, k);
  json doc;
  doc["command"] = "derivative";
  doc["input"] = problem_echo(p);
  doc["k"] = k;
  json h = json::array();
  for (const Rational& c : seq.h[k].coeffs()) h.push_back(rat_str(c));
  doc["derivative_numerator"] = h;
  json g = json::array();
  for (const Rational& c : recentred.coeffs()) g.push_back(rat_str(c));
  doc["recentred_expansion"] = g;
  doc["harmonic_order_2"] = rat_str(cmlog::harmonic(k, 2));
  OutputSink sink(flags.out);
  emit_json(doc, sink);
  return 0;
}

int run_probe(unsigned n, unsigned k_max, unsigned long samples, std::uint64_t seed,
              const std::string& box, const CommonFlags& flags) {
  Rational box_q = Rational::from_string(box);
  if (box_q <= Rational(0)) throw CliError("--box must be positive");
  PrecisionCtx ctx = resolve_ctx(flags.bits, flags.max_bits, std::nullopt, std::nullopt);
  cmlog::NestingReport rep = cmlog::nesting_probe(n, k_max, samples, seed, box_q, ctx);
  json doc;
  doc["command"] = "probe-nesting";
  doc["n"] = rep.n;
  doc["k_max"] = rep.k_max;
  doc["samples"] = rep.samples;
  doc["seed"] = rep.seed;
  doc["box"] = rat_str(box_q);
  doc["abstentions"] = rep.abstentions;
  doc["members_by_k"] = rep.members_by_k;
  doc["largest_member_k"] = rep.largest_member_k;
  json viol = json::array();
  for (const auto& v : rep.violations) {
    json coeffs = json::array();
    for (const auto& c : v.coeffs) coeffs.push_back(rat_str(c));
    viol.push_back(json{{"coeffs", coeffs},
                        {"k_non_member", v.k_non_member},
                        {"k_member", v.k_member}});
  }
  doc["violations"] = viol;
  OutputSink sink(flags.out);
  emit_json(doc, sink);
  return rep.violations.empty() ? 0 : 1;
}

// ------------------------------------------------------------- region scan

struct ScanAxis {
  Exponent exponent;
  Rational lo, hi;
  unsigned resolution = 2;
};

struct ScanSpec {
  unsigned s = 1;
  unsigned n = 0;
  MPoly<Rational> fixed{1};
  ScanAxis axes[2];
  std::vector<unsigned> k_list;
  bool want_cm = true;
};

ScanSpec parse_scan(const json& j) {
  ScanSpec spec;
  spec.s = get_unsigned(j, "s", 1, 16);
  spec.n = get_unsigned(j, "n", 0, 64);
  spec.fixed = MPoly<Rational>(spec.s);
  if (j.contains("fixed")) {
    if (!j["fixed"].is_array()) throw CliError("field 'fixed' must be a list");
    std::size_t idx = 0;
    for (const auto& entry : j["fixed"]) {
      const std::string where = "fixed[" + std::to_string(idx++) + "]";
      Exponent e = parse_exponent(entry.at("exponent"), spec.s, spec.n, where);
      if (spec.fixed.find(e) != nullptr) throw CliError(where + ": duplicate exponent");
      Rational v = parse_value(entry.at("value"), where);
      if (!v.is_zero()) spec.fixed.add_term(e, v);
    }
  }
  if (!j.contains("axes") || !j["axes"].is_array() || j["axes"].size() != 2)
    throw CliError("field 'axes' must be a list of exactly two axis objects");
  for (int a = 0; a < 2; ++a) {
    const json& ax = j["axes"][a];
    const std::string where = "axes[" + std::to_string(a) + "]";
    spec.axes[a].exponent = parse_exponent(ax.at("exponent"), spec.s, spec.n, where);
    spec.axes[a].lo = parse_value(ax.at("min"), where + ".min");
    spec.axes[a].hi = parse_value(ax.at("max"), where + ".max");
    spec.axes[a].resolution = get_unsigned(ax, "resolution", 2, 100000);
    if (!(spec.axes[a].lo < spec.axes[a].hi))
      throw CliError(where + ": min must be below max");
  }
  if (spec.axes[0].exponent == spec.axes[1].exponent)
    throw CliError("axes must use distinct exponents");
  for (int a = 0; a < 2; ++a)
    if (spec.fixed.find(spec.axes[a].exponent) != nullptr)
      throw CliError("axis exponent also appears in 'fixed'");
  if (j.contains("k")) {
    if (!j["k"].is_array()) throw CliError("field 'k' must be a list of integers");
    for (const auto& kv : j["k"]) {
      if (!kv.is_number_integer() || kv.get<long long>() < 0 || kv.get<long long>() > 200)
        throw CliError("field 'k': entries must be integers in [0, 200]");
      spec.k_list.push_back(static_cast<unsigned>(kv.get<long long>()));
    }
  }
  if (!spec.k_list.empty() && spec.s != 1)
    throw CliError("order-k membership columns require s = 1");
  if (j.contains("cm")) {
    if (!j["cm"].is_boolean()) throw CliError("field 'cm' must be a boolean");
    spec.want_cm = j["cm"].get<bool>();
  }
  return spec;
}

std::string axis_label(const Exponent& e) {
  std::string out = "c";
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (i > 0) out += '_';
    out += std::to_string(e[i]);
  }
  return out;
}

std::string grid_value_str(const Rational& q) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", mpq_get_d(q.raw().get_mpq_t()));
  return buf;
}

char ternary_flag(Status st) {
  if (st == Status::cm) return '1';
  if (st == Status::not_cm) return '0';
  return '?';
}

int run_region_scan(const std::string& path, const CommonFlags& flags) {
  ScanSpec spec = parse_scan(read_json_file(path));
  PrecisionCtx ctx = resolve_ctx(flags.bits, flags.max_bits, std::nullopt, std::nullopt);

  const unsigned long rows = spec.axes[0].resolution;
  const unsigned long cols = spec.axes[1].resolution;
  const unsigned long total = rows * cols;
  auto axis_value = [](const ScanAxis& ax, unsigned long i) {
    return ax.lo + (ax.hi - ax.lo) * Rational(static_cast<long>(i)) /
                       Rational(static_cast<long>(ax.resolution - 1));
  };

  std::vector<std::string> lines(total);
  auto run_point = [&](unsigned long idx) {
    const Rational a = axis_value(spec.axes[0], idx / cols);
    const Rational b = axis_value(spec.axes[1], idx % cols);
    MPoly<Rational> coeffs = spec.fixed;
    coeffs.add_term(spec.axes[0].exponent, a);
    coeffs.add_term(spec.axes[1].exponent, b);
    LogFunction f(spec.s, spec.n, coeffs);
    std::string line = grid_value_str(a) + "," + grid_value_str(b);
    for (unsigned k : spec.k_list) {
      line += ',';
      line += ternary_flag(cmlog::dk_membership(f, k, ctx).status);
    }
    if (spec.want_cm) {
      line += ',';
      line += ternary_flag(cmlog::decide_cm(f, ctx).status);
    }
    lines[idx] = std::move(line);
  };

  // worker pool over grid points; rows are buffered and emitted in grid
  // order, so the output is independent of scheduling
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<unsigned long>(workers, total));
  if (workers <= 1) {
    for (unsigned long i = 0; i < total; ++i) run_point(i);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (unsigned long i = w; i < total; i += workers) run_point(i);
      });
    for (auto& t : pool) t.join();
  }

  OutputSink sink(flags.out);
  std::ostream& os = sink.stream();
  os << axis_label(spec.axes[0].exponent) << ',' << axis_label(spec.axes[1].exponent);
  for (unsigned k : spec.k_list) os << ",D" << k;
  if (spec.want_cm) os << ",CM";
  os << '\n';
  for (const std::string& line : lines) os << line << '\n';
  return 0;
}

// --------------------------------------------------------------- constants

int run_constants(unsigned n, const CommonFlags& flags) {
  if (n < 2) throw CliError("--n must be at least 2");
  PrecisionCtx ctx = resolve_ctx(flags.bits, flags.max_bits, std::nullopt, std::nullopt);
  const cmlog::ConstantTable& tab = cmlog::constant_table(n, ctx);
  OutputSink sink(flags.out);
  std::ostream& os = sink.stream();
  os << "bits " << ctx.bits << '\n';
  os << "gamma " << ball_str(tab.gamma()) << '\n';
  os << "pi " << ball_str(tab.pi()) << '\n';
  for (unsigned m = 2; m <= n; ++m) os << "zeta" << m << ' ' << ball_str(tab.zeta(m)) << '\n';
  for (unsigned l = 0; l <= n; ++l)
    os << "gamma_derivative" << l << ' ' << ball_str(tab.gamma_derivative(l)) << '\n';
  return 0;
}

// ---------------------------------------------------------------- selftest

struct SelftestReport {
  bool all_ok = true;
  void item(std::ostream& os, const std::string& name, bool ok, const std::string& detail) {
    os << (ok ? "ok   " : "FAIL ") << name;
    if (!ok && !detail.empty()) os << ": " << detail;
    os << '\n';
    all_ok = all_ok && ok;
  }
};

bool matrix_identity_holds(unsigned n_max, const PrecisionCtx& ctx, std::string& detail) {
  const Rational tol(mpz_class(1), [] {
    mpz_class t;
    mpz_ui_pow_ui(t.get_mpz_t(), 10, 30);
    return t;
  }());
  for (unsigned n = 1; n <= n_max; ++n) {
    const cmlog::TransformMatrix& A = cmlog::laplace_matrix(n, ctx);
    const cmlog::TransformMatrix& C = cmlog::laplace_matrix_inverse(n, ctx);
    for (unsigned i = 0; i <= n; ++i)
      for (unsigned j = 0; j <= n; ++j) {
        Ball acc = Ball::exact_zero(ctx.bits);
        for (unsigned l = 0; l <= n; ++l) acc += A.at(i, l) * C.at(l, j);
        if (!acc.contains(Rational(i == j ? 1 : 0))) {
          detail = "product entry misses the identity at n=" + std::to_string(n);
          return false;
        }
        if (i != j && !(acc.rad_rational() < tol)) {
          detail = "off-diagonal enclosure too wide at n=" + std::to_string(n);
          return false;
        }
      }
  }
  return true;
}

bool stirling_weight_identity_holds(unsigned n_max, std::string& detail) {
  for (unsigned n = 0; n <= n_max; ++n) {
    Rational n_fact(1);
    for (unsigned i = 2; i <= n; ++i) n_fact = n_fact * Rational(static_cast<long>(i));
    Rational k_fact(1);
    for (unsigned k = 0; k <= n; ++k) {
      if (k >= 2) k_fact = k_fact * Rational(static_cast<long>(k));
      std::vector<Rational> H;
      for (unsigned i = 1; i <= k; ++i) H.push_back(cmlog::harmonic(n, i));
      Rational rhs = cmlog::w_eval(k, H, cmlog::rational_from_mpz) / k_fact;
      if ((n + k) % 2 == 1) rhs = -rhs;
      Rational lhs = Rational(cmlog::stirling_signed(n + 1, k + 1)) / n_fact;
      if (lhs != rhs) {
        detail = "mismatch at n=" + std::to_string(n) + ", k=" + std::to_string(k);
        return false;
      }
    }
  }
  return true;
}

bool route_consistency_holds(const PrecisionCtx& ctx, std::string& detail) {
  auto decide_uni = [&](std::vector<Rational> c) {
    return cmlog::decide_cm(LogFunction::from_univariate(UPoly<Rational>(std::move(c))), ctx)
        .status;
  };
  if (decide_uni({Rational(2), Rational(0), Rational(1)}) != Status::cm) {
    detail = "known member was not certified";
    return false;
  }
  if (decide_uni({Rational(1), Rational(0), Rational(1)}) != Status::not_cm) {
    detail = "known non-member was not rejected";
    return false;
  }
  UPoly<Rational> probe(std::vector<Rational>{Rational(3, 7), Rational(-1, 2), Rational(2, 3),
                                              Rational(1, 5)});
  cmlog::LimitConsistency lc = cmlog::check_limit_matches_inverse_laplace(probe, ctx);
  if (!lc.consistent || lc.max_defect > 1e-20) {
    detail = "limit expansion and inverse transform disagree";
    return false;
  }
  return true;
}

bool constants_match_references(const PrecisionCtx& ctx, std::string& detail) {
  std::string gamma_ref = cmlog::kGammaDigits;
  if (std::getenv("CMLOG_SELFTEST_CORRUPT") != nullptr) {
    // test-harness hook: perturb one reference digit to prove the check bites
    gamma_ref[5] = gamma_ref[5] == '9' ? '8' : '9';
  }
  mpz_class margin_den;
  mpz_ui_pow_ui(margin_den.get_mpz_t(), 10, 48);
  const Rational margin(mpz_class(1), margin_den);
  const cmlog::ConstantTable& tab = cmlog::constant_table(cmlog::kZetaMax, ctx);
  auto close = [&](const Ball& b, const std::string& ref) {
    Rational gap = (b.mid_rational() - Rational::from_string(ref)).abs();
    return gap < margin + b.rad_rational();
  };
  if (!close(tab.gamma(), gamma_ref)) {
    detail = "gamma drifted from its reference digits";
    return false;
  }
  if (!close(tab.pi(), cmlog::kPiDigits)) {
    detail = "pi drifted from its reference digits";
    return false;
  }
  for (unsigned m = 2; m <= cmlog::kZetaMax; ++m)
    if (!close(tab.zeta(m), cmlog::kZetaDigits[m - 2])) {
      detail = "zeta(" + std::to_string(m) + ") drifted from its reference digits";
      return false;
    }
  return true;
}

int run_selftest(const CommonFlags& flags) {
  PrecisionCtx ctx = resolve_ctx(flags.bits, flags.max_bits, std::nullopt, std::nullopt);
  OutputSink sink(flags.out);
  std::ostream& os = sink.stream();
  SelftestReport rep;
  std::string detail;

  detail.clear();
  rep.item(os, "matrix-identity", matrix_identity_holds(8, ctx, detail), detail);
  detail.clear();
  rep.item(os, "stirling-weight-identity", stirling_weight_identity_holds(10, detail), detail);
  detail.clear();
  rep.item(os, "route-consistency", route_consistency_holds(ctx, detail), detail);
  detail.clear();
  rep.item(os, "constants-references", constants_match_references(ctx, detail), detail);

  os << (rep.all_ok ? "selftest passed" : "selftest FAILED") << '\n';
  return rep.all_ok ? 0 : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified complete-monotonicity decisions for log-polynomial densities"};
  app.require_subcommand(1);

  CommonFlags decide_flags, fwd_flags, inv_flags, deriv_flags, probe_flags, scan_flags,
      const_flags, self_flags;
  std::string decide_path, fwd_path, inv_path, deriv_path, scan_path;
  unsigned deriv_k = 0;
  unsigned probe_n = 2, probe_kmax = 6;
  unsigned long probe_samples = 100;
  std::uint64_t probe_seed = 1;
  std::string probe_box = "2";
  unsigned const_n = 10;

  CLI::App* decide = app.add_subcommand("decide", "decide complete monotonicity");
  decide->add_option("problem", decide_path, "problem file (JSON)")->required();
  attach_common(decide, decide_flags);

  CLI::App* fwd = app.add_subcommand("transform", "apply the forward transform");
  fwd->add_option("problem", fwd_path, "density polynomial file (JSON)")->required();
  attach_common(fwd, fwd_flags);

  CLI::App* inv = app.add_subcommand("inv-laplace", "apply the inverse transform");
  inv->add_option("problem", inv_path, "problem file (JSON)")->required();
  attach_common(inv, inv_flags);

  CLI::App* deriv = app.add_subcommand("derivative", "derivative numerator polynomials");
  deriv->add_option("problem", deriv_path, "problem file (JSON), s = 1")->required();
  deriv->add_option("--k", deriv_k, "derivative order")->required();
  attach_common(deriv, deriv_flags);

  CLI::App* probe = app.add_subcommand("probe-nesting", "sample the order-k region chain");
  probe->add_option("--n", probe_n, "polynomial degree bound");
  probe->add_option("--kmax", probe_kmax, "largest derivative order");
  probe->add_option("--samples", probe_samples, "number of sampled coefficient vectors");
  probe->add_option("--seed", probe_seed, "sampling seed");
  probe->add_option("--box", probe_box, "coefficient box half-width (rational)");
  attach_common(probe, probe_flags);

  CLI::App* scan = app.add_subcommand("region-scan", "grid scan with membership columns");
  scan->add_option("spec", scan_path, "scan specification file (JSON)")->required();
  attach_common(scan, scan_flags);

  CLI::App* consts = app.add_subcommand("constants", "print the constant table");
  consts->add_option("--n", const_n, "table order (>= 2)");
  attach_common(consts, const_flags);

  CLI::App* self = app.add_subcommand("selftest", "run the embedded identity suite");
  attach_common(self, self_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the message
    return kExitInput;
  }

  try {
    if (decide->parsed()) return run_decide(decide_path, decide_flags);
    if (fwd->parsed()) return run_transform(fwd_path, fwd_flags, true);
    if (inv->parsed()) return run_transform(inv_path, inv_flags, false);
    if (deriv->parsed()) return run_derivative(deriv_path, deriv_flags, deriv_k);
    if (probe->parsed())
      return run_probe(probe_n, probe_kmax, probe_samples, probe_seed, probe_box, probe_flags);
    if (scan->parsed()) return run_region_scan(scan_path, scan_flags);
    if (consts->parsed()) return run_constants(const_n, const_flags);
    if (self->parsed()) return run_selftest(self_flags);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInput;
}
