#include "haffine/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <random>

#include "haffine/classify.hpp"
#include "haffine/io.hpp"
#include "haffine/kernels.hpp"
#include "haffine/testgen.hpp"

namespace haffine::cli {

namespace {

struct RunConfig {
  std::string mode = "exact";
  int depth = 12;
  int trunc = 0;  // 0 = per-command default
  int samples = 4096;

  int trunc_or(int def) const { return trunc > 0 ? trunc : def; }
  std::vector<double> p_list;
  std::uint64_t seed = 12345;
  std::string out_path;
  std::string kernels = "auto";

  bool exact() const { return mode == "exact"; }
  std::vector<double> p_or(std::initializer_list<double> def) const {
    return p_list.empty() ? std::vector<double>(def) : p_list;
  }
};

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    if (text.empty() || text.back() != '\n') out << '\n';
    return;
  }
  std::ofstream f(cfg.out_path);
  if (!f) throw error("cannot write '" + cfg.out_path + "'");
  f << text;
}

std::ostream* g_warn = nullptr;

SymbolSpec spec_from_arg(const std::string& arg) {
  const SymbolSpec spec = parse_symbol_spec(load_json_arg(arg));
  if (g_warn) {
    if (const auto w = symbol_warning(spec)) *g_warn << "warning: " << *w << "\n";
  }
  return spec;
}

void require_exactable(const RunConfig& cfg, const SymbolSpec& spec) {
  if (cfg.exact() && symbol_is_float_only(spec))
    throw error("this symbol kind is float-only; pass --mode float");
}

// dispatch one subcommand body over the scalar type selected by --mode
template <class Fn>
int with_mode(const RunConfig& cfg, Fn&& fn) {
  if (cfg.exact()) return fn(CplxQ{});
  return fn(CD{});
}

// inner-function symbols need a long tail to be representative
int symbol_trunc(const RunConfig& cfg, const SymbolSpec& spec) {
  return cfg.trunc_or(spec.kind == SymbolSpec::Kind::counterexample ? 2048 : 64);
}

template <class S>
Chaos1<S> chaos_from_spec(const RunConfig& cfg, const SymbolSpec& spec) {
  if constexpr (scalar_traits<S>::exact) {
    require_exactable(cfg, spec);
    return make_chaos_exact(spec, static_cast<std::size_t>(symbol_trunc(cfg, spec)));
  } else {
    return make_chaos_float(spec, static_cast<std::size_t>(symbol_trunc(cfg, spec)));
  }
}

template <class S>
DyadicStep<S> step_from_arg(const std::string& arg) {
  const json j = load_json_arg(arg);
  if constexpr (scalar_traits<S>::exact)
    return parse_step_exact(j);
  else
    return parse_step_float(j);
}

template <class S>
std::string scalar_str(const S& s) {
  return scalar_to_string(s);
}

// ---- expand --------------------------------------------------------------

int cmd_expand(const RunConfig& cfg, const std::string& symbol_arg, int K, std::ostream& out) {
  const SymbolSpec spec = spec_from_arg(symbol_arg);
  return with_mode(cfg, [&](auto tag) {
    using S = decltype(tag);
    const Chaos1<S> c = chaos_from_spec<S>(cfg, spec);
    const auto vals = values_from_coeffs(c, static_cast<std::size_t>(K) + 1);
    json rows = json::array();
    std::string text = "k\tc_k\tf(1/2^k)\n";
    for (int k = 0; k <= K; ++k) {
      const std::string ck = scalar_str(c.coeff(static_cast<std::size_t>(k)));
      const std::string vk = scalar_str(vals[static_cast<std::size_t>(k)]);
      text += std::to_string(k) + "\t" + ck + "\t" + vk + "\n";
      rows.push_back(json{{"k", k}, {"c_k", ck}, {"value", vk}});
    }
    if (!cfg.out_path.empty())
      emit(cfg, rows.dump(2), out);
    else
      emit(cfg, text, out);
    return 0;
  });
}

// ---- dual ------------------------------------------------------------------

int cmd_dual(const RunConfig& cfg, const std::string& symbol_arg, std::ostream& out) {
  const SymbolSpec spec = spec_from_arg(symbol_arg);
  return with_mode(cfg, [&](auto tag) {
    using S = decltype(tag);
    const Chaos1<S> c = chaos_from_spec<S>(cfg, spec);
    const DualCoeffs<S> d = dual_coeffs(c, static_cast<std::size_t>(cfg.trunc_or(64)));
    json rows = json::array();
    std::string text = "k\td_k\n";
    for (std::size_t k = 0; k < d.coeffs.size(); ++k) {
      const std::string dk = scalar_str(d.coeffs[k]);
      text += std::to_string(k) + "\t" + dk + "\n";
      rows.push_back(json{{"k", k}, {"d_k", dk}});
    }
    if (!cfg.out_path.empty())
      emit(cfg, rows.dump(2), out);
    else
      emit(cfg, text, out);
    return 0;
  });
}

// ---- verify suites -----------------------------------------------------------

struct SuiteResult {
  json detail = json::array();
  bool ok = true;

  void check(const std::string& name, bool pass, const json& extra = json::object()) {
    json row{{"check", name}, {"pass", pass}};
    for (auto it = extra.begin(); it != extra.end(); ++it) row[it.key()] = it.value();
    detail.push_back(row);
    ok = ok && pass;
  }
};

// biorthogonality of {g^alpha} against the dilations/translations of f;
// polynomial symbols are paired as honest step-function integrals
SuiteResult suite_biorthogonal(const RunConfig& cfg, const SymbolSpec& spec, int max_len) {
  SuiteResult res;
  const Chaos1Q c = make_chaos_exact(spec, static_cast<std::size_t>(std::max(cfg.trunc_or(64), 64)));
  const DualCoeffs<CplxQ> dual = dual_coeffs(c, static_cast<std::size_t>(max_len));
  const int deg = static_cast<int>(c.coeffs.size()) - 1;
  const bool by_integral = c.prov == Provenance::polynomial && max_len + deg + 1 <= 11;

  std::vector<MultiIndex> idx;
  for (std::uint64_t n = 1; n < (std::uint64_t{2} << max_len); ++n) idx.push_back(MultiIndex(n));

  std::vector<StepQ> f_steps;
  if (by_integral) {
    const StepQ f = truncate_to_step(c, deg + 1);
    f_steps.reserve(idx.size());
    for (const auto& beta : idx) f_steps.push_back(apply_multi(beta, f));
  }
  long failures = 0;
  for (std::size_t ai = 0; ai < idx.size(); ++ai) {
    const HaarCoeffMap<CplxQ> gmap = biorthogonal_g_map(idx[ai], dual);
    const StepQ gstep = by_integral ? to_step(gmap, idx[ai].length() + 1) : StepQ();
    for (std::size_t bi = 0; bi < idx.size(); ++bi) {
      CplxQ pairing;
      if (by_integral) {
        pairing = inner(f_steps[bi], gstep);
      } else {
        // coefficient route: f_beta has coefficient c_k at beta 0_k
        for (const auto& [gamma, w] : gmap) {
          if (!idx[bi].is_prefix_of(gamma)) continue;
          const int k = gamma.length() - idx[bi].length();
          if (gamma.code != (idx[bi].code << k)) continue;
          pairing += scalar_traits<CplxQ>::scale_pow2(
              c.coeff(static_cast<std::size_t>(k)) * w, -gamma.length());
        }
      }
      const bool want_one = ai == bi;
      const CplxQ expect = want_one ? CplxQ(1) : CplxQ(0);
      if (!(pairing == expect)) ++failures;
    }
  }
  res.check("biorthogonal-delta", failures == 0,
            json{{"pairs", idx.size() * idx.size()},
                 {"failures", failures},
                 {"route", by_integral ? "step-integral" : "coefficient"}});
  return res;
}

SuiteResult suite_h1_identity(const RunConfig& cfg, const SymbolSpec& spec, int n, int cap,
                              double tol) {
  SuiteResult res;
  const Chaos1Q c = make_chaos_exact(spec, static_cast<std::size_t>(std::max(cfg.trunc_or(64), n + 1)));
  const auto y = x0_coeff_map<CplxQ>(n, cap);
  const auto adj = apply_Tf_adjoint(c, y);
  const Rat energy = parseval_norm_sq(adj);
  Rat expect(0);
  for (int j = 0; j <= n; ++j) {
    Rat t = abs_sq(c.coeff(static_cast<std::size_t>(j)));
    mpq_div_2exp(t.get_mpq_t(), t.get_mpq_t(), static_cast<unsigned>(j));
    expect += t;
  }
  const double diff = std::abs(energy.get_d() - expect.get_d());
  res.check("x0-terms-disjoint", pairwise_disjoint(x0_indices(n, cap)),
            json{{"terms", x0_indices(n, cap).size()}});
  res.check("energy-below-limit", energy <= expect, json{{"energy", rat_to_string(energy)}});
  res.check("energy-near-limit", diff <= tol,
            json{{"energy", energy.get_d()}, {"limit", expect.get_d()}, {"tol", tol}});
  // geometric tail bound (1 - 2^-n)^{floor(cap/n)} * limit; block counts up
  // to floor(cap/n) are fully included at this cap
  Rat factor = Rat(1) - pow2_inv(static_cast<unsigned>(n));
  Rat bound = expect;
  for (int s = 0; s < cap / n; ++s) bound *= factor;
  res.check("defect-within-geometric-bound", expect - energy <= bound,
            json{{"bound", bound.get_d()}});
  return res;
}

SuiteResult suite_value_relation(const RunConfig& cfg, const SymbolSpec* spec, int count) {
  SuiteResult res;
  const std::size_t N = static_cast<std::size_t>(std::max(cfg.trunc_or(64), 8));
  if (spec) {
    const Chaos1Q c = make_chaos_exact(*spec, N);
    const auto rep = check_value_relation(c, N);
    res.check("value-relation", rep.ok, json{{"first_failure", rep.first_failure}});
    return res;
  }
  std::mt19937_64 rng(cfg.seed);
  long failures = 0;
  for (int t = 0; t < count; ++t) {
    const Chaos1Q c = gen::rand_symbol(rng, 8, true, false);
    if (!check_value_relation(c, N).ok) ++failures;
  }
  res.check("value-relation-random", failures == 0, json{{"count", count}, {"failures", failures}});
  return res;
}

SuiteResult suite_walsh(int max_len) {
  SuiteResult res;
  long failures = 0;
  long pairs = 0;
  Chaos1Q hsym;
  hsym.coeffs = {CplxQ(1)};
  for (int len = 0; len <= max_len; ++len) {
    std::vector<StepQ> w;
    const std::uint64_t count = std::uint64_t{1} << len;
    for (std::uint64_t j = 0; j < count; ++j)
      w.push_back(walsh_affine(MultiIndex((std::uint64_t{1} << len) | j), hsym, 1));
    for (std::uint64_t a = 0; a < count; ++a)
      for (std::uint64_t b = 0; b < count; ++b) {
        ++pairs;
        const CplxQ got = inner(w[a], w[b]);
        if (!(got == (a == b ? CplxQ(1) : CplxQ(0)))) ++failures;
      }
  }
  res.check("walsh-orthonormal", failures == 0, json{{"pairs", pairs}, {"failures", failures}});
  return res;
}

SuiteResult suite_parseval(const RunConfig& cfg, const SymbolSpec& spec, int m_max) {
  SuiteResult res;
  const Chaos1Q c = make_chaos_exact(spec, static_cast<std::size_t>(std::max(cfg.trunc_or(64), m_max)));
  bool ok = true;
  for (int m = 1; m <= m_max; ++m) {
    const Rat lhs = l2_norm_sq(truncate_to_step(c, m));
    Rat rhs(0);
    for (int k = 0; k < m; ++k) {
      Rat t = abs_sq(c.coeff(static_cast<std::size_t>(k)));
      mpq_div_2exp(t.get_mpq_t(), t.get_mpq_t(), static_cast<unsigned>(k));
      rhs += t;
    }
    if (lhs != rhs) ok = false;
  }
  res.check("parseval-truncations", ok, json{{"m_max", m_max}});
  return res;
}

SuiteResult suite_commutation(const RunConfig& cfg, const SymbolSpec* spec, int count) {
  SuiteResult res;
  std::mt19937_64 rng(cfg.seed);
  long comm_failures = 0, symb_failures = 0;
  for (int t = 0; t < count; ++t) {
    const Chaos1Q c = spec ? make_chaos_exact(*spec, 16) : gen::rand_symbol(rng, 4);
    const auto x = gen::rand_coeff_map(rng, 5, 6);
    const int depth = 5;
    const int b = static_cast<int>(gen::draw(rng, 2));
    // V_b on a coefficient map prefixes every index with b
    const MultiIndex pre(static_cast<std::uint64_t>(2 + b));
    HaarCoeffMap<CplxQ> vbx;
    for (const auto& [alpha, xi] : x) vbx.emplace(pre.concat(alpha), xi);
    const auto lhs = apply_Tf(c, vbx, depth);
    HaarCoeffMap<CplxQ> rhs;
    for (const auto& [alpha, xi] : apply_Tf(c, x, depth)) rhs.emplace(pre.concat(alpha), xi);
    if (lhs != rhs) ++comm_failures;

    // order-d route against the gap-space convolution
    const int d = 1 + static_cast<int>(gen::draw(rng, 3));
    ChaosD<CplxQ> xd;
    xd.order = d;
    for (int term = 0; term < 5; ++term) {
      GapVector g;
      for (int i = 0; i < d; ++i)
        g.gaps.push_back(static_cast<std::uint32_t>(gen::draw(rng, 4)));
      xd.coeffs[g] = gen::rand_cplxq(rng);
    }
    const ChaosD<CplxQ> via_gap = apply_Tf_chaosd(c, xd, depth);
    const auto via_map = apply_Tf(c, chaosd_to_map(xd), depth);
    if (via_map != chaosd_to_map(via_gap)) ++symb_failures;
  }
  res.check("commutation", comm_failures == 0, json{{"count", count}});
  res.check("symbol-identity", symb_failures == 0, json{{"count", count}});
  return res;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite, const std::string& symbol_arg,
               int max_len, int n, int cap, int count, double tol, std::ostream& out) {
  std::optional<SymbolSpec> spec;
  if (!symbol_arg.empty()) spec = spec_from_arg(symbol_arg);
  SuiteResult res;
  if (suite == "biorthogonal") {
    if (!spec) throw error("suite biorthogonal needs --symbol");
    res = suite_biorthogonal(cfg, *spec, max_len);
  } else if (suite == "h1-identity") {
    if (!spec) throw error("suite h1-identity needs --symbol");
    res = suite_h1_identity(cfg, *spec, n, cap, tol);
  } else if (suite == "value-relation") {
    res = suite_value_relation(cfg, spec ? &*spec : nullptr, count);
  } else if (suite == "walsh") {
    res = suite_walsh(max_len);
  } else if (suite == "parseval") {
    if (!spec) throw error("suite parseval needs --symbol");
    res = suite_parseval(cfg, *spec, std::min(cfg.depth, 12));
  } else if (suite == "commutation") {
    res = suite_commutation(cfg, spec ? &*spec : nullptr, count);
  } else {
    throw error("unknown suite '" + suite + "'");
  }
  json j{{"suite", suite}, {"pass", res.ok}, {"checks", res.detail}};
  emit(cfg, j.dump(2), out);
  return res.ok ? 0 : 1;
}

// ---- norms -------------------------------------------------------------------

int cmd_norm(const RunConfig& cfg, const std::string& symbol_arg, const std::string& step_arg,
             const std::string& which, std::ostream& out) {
  if (symbol_arg.empty() == step_arg.empty())
    throw error("pass exactly one of --symbol or --step");
  return with_mode(cfg, [&](auto tag) {
    using S = decltype(tag);
    DyadicStep<S> x;
    if (!symbol_arg.empty()) {
      const SymbolSpec spec = spec_from_arg(symbol_arg);
      x = truncate_to_step(chaos_from_spec<S>(cfg, spec), cfg.depth);
    } else {
      x = step_from_arg<S>(step_arg);
    }
    json reports = json::array();
    const auto p_list = cfg.p_or({2.0});
    if (which == "lp" || which == "all") {
      for (double p : p_list) {
        const bool even_int = p == std::floor(p) && std::fmod(p, 2.0) == 0.0;
        if (cfg.exact() && !even_int && !std::isinf(p))
          throw error("exact mode computes only even integer p (and sup); pass --mode float for p=" +
                      fmt_double(p));
        json r = norm_report_to_json(lp_norm(x, p));
        r["norm"] = "lp";
        r["p"] = p;
        reports.push_back(r);
      }
    }
    if (which == "bmo" || which == "all") {
      json r = norm_report_to_json(bmo_norm(x));
      r["norm"] = "bmo";
      reports.push_back(r);
    }
    if (which == "h1" || which == "all") {
      json r = norm_report_to_json(h1_norm(x));
      r["norm"] = "h1";
      reports.push_back(r);
    }
    if (reports.empty()) throw error("unknown norm '" + which + "' (use lp, bmo, h1, all)");
    emit(cfg, reports.dump(2), out);
    return 0;
  });
}

int cmd_opnorm(const RunConfig& cfg, const std::string& symbol_arg, std::ostream& out) {
  const SymbolSpec spec = spec_from_arg(symbol_arg);
  const int N = cfg.trunc_or(spec.kind == SymbolSpec::Kind::counterexample ? 2048 : 512);
  const Chaos1D c = make_chaos_float(spec, static_cast<std::size_t>(std::max(N, 8)));
  const SeriesD u = symbol_of(c);
  json result = json::array();
  for (double p : cfg.p_or({2.0})) {
    const double R = critical_radius(p);
    json row{{"p", p}, {"R", R}};
    row["multiplier"] = norm_report_to_json(
        multiplier_norm(u, p, R, static_cast<std::size_t>(N), cfg.seed));
    row["hinf"] = norm_report_to_json(
        hinf_boundary(u, R, static_cast<std::size_t>(cfg.samples), u.degree()));
    result.push_back(row);
  }
  emit(cfg, result.dump(2), out);
  return 0;
}

int cmd_spectrum(const RunConfig& cfg, const std::string& symbol_arg, const GridSpec& grid,
                 std::ostream& out) {
  const SymbolSpec spec = spec_from_arg(symbol_arg);
  const auto p_list = cfg.p_or({2.0});
  if (p_list.size() != 1) throw error("spectrum takes exactly one --p");
  const Chaos1D c = make_chaos_float(spec, static_cast<std::size_t>(std::max(symbol_trunc(cfg, spec), 8)));
  const SpectrumCloud cloud = spectrum_cloud(symbol_of(c), p_list[0], grid);
  emit(cfg, spectrum_to_csv(cloud), out);
  return 0;
}

int cmd_classify(const RunConfig& cfg, const std::string& symbol_arg, std::ostream& out) {
  const SymbolSpec spec = spec_from_arg(symbol_arg);
  if (!symbol_is_polynomial(spec)) throw error("classify needs a polynomial symbol");
  const Chaos1D c = make_chaos_float(spec, 64);
  const ClassificationReport rep =
      classify_polynomial(c.coeffs, cfg.p_or({1.25, 1.5, 2, 3, 4, 8}));
  emit(cfg, classification_to_json(rep).dump(2), out);
  return 0;
}

int cmd_apply(const RunConfig& cfg, const std::string& symbol_arg, const std::string& step_arg,
              std::ostream& out) {
  const SymbolSpec spec = spec_from_arg(symbol_arg);
  return with_mode(cfg, [&](auto tag) {
    using S = decltype(tag);
    const Chaos1<S> c = chaos_from_spec<S>(cfg, spec);
    const DyadicStep<S> x = step_from_arg<S>(step_arg);
    const DyadicStep<S> y = apply_Tf_step(c, x, cfg.depth);
    emit(cfg, step_to_json(y).dump(2), out);
    return 0;
  });
}

int cmd_reconstruct(const RunConfig& cfg, const std::string& symbol_arg,
                    const std::string& step_arg, std::vector<std::uint64_t> nmax_list,
                    std::ostream& out) {
  const SymbolSpec spec = spec_from_arg(symbol_arg);
  if (nmax_list.empty()) nmax_list = {16, 64, 256, 1024};
  return with_mode(cfg, [&](auto tag) {
    using S = decltype(tag);
    const Chaos1<S> c = chaos_from_spec<S>(cfg, spec);
    const DyadicStep<S> x = step_from_arg<S>(step_arg);
    const auto p_list = cfg.p_or({2.0});
    json rows = json::array();
    for (std::uint64_t nm : nmax_list) {
      const auto rep = reconstruct_in_chaoses(c, x, nm, cfg.depth, p_list);
      json row{{"n_max", nm}, {"depth", cfg.depth}, {"terms", rep.partial.size()}};
      json errs = json::array();
      for (const auto& [p, nr] : rep.errors) {
        json e = norm_report_to_json(nr);
        e["p"] = p;
        errs.push_back(e);
      }
      row["errors"] = errs;
      rows.push_back(row);
    }
    json j{{"ordering", "d ascending, n ascending within each order"},
           {"sum_over", "1 <= n <= n_max"},
           {"grid", rows}};
    emit(cfg, j.dump(2), out);
    return 0;
  });
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
  SuiteResult res;
  // kernels: dispatched backend agrees with the scalar reference
  {
    std::mt19937_64 rng(cfg.seed);
    const std::size_t n = 257;
    std::vector<CD> coef(33), pts(n), a(n), b(n);
    auto rnd = [&]() {
      return CD{static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5,
                static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5};
    };
    for (auto& v : coef) v = rnd();
    for (auto& v : pts) v = rnd();
    kern::poly_eval_many(coef.data(), coef.size(), pts.data(), a.data(), n);
    kern::scalar::poly_eval_many(coef.data(), coef.size(), pts.data(), b.data(), n);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    res.check("kernels-poly-eval", worst <= 1e-10,
              json{{"backend", kern::backend_name(kern::active_backend())}, {"max_diff", worst}});
  }
  {
    std::mt19937_64 rng(cfg.seed + 1);
    long fails = 0;
    for (int t = 0; t < 25; ++t) {
      const Chaos1Q c = gen::rand_symbol(rng, 8);
      const DualCoeffs<CplxQ> d = dual_coeffs(c, 64);
      // Cauchy product equals (1,0,...,0)
      for (std::size_t k = 0; k <= 64; ++k) {
        CplxQ s;
        for (std::size_t j = 0; j <= k; ++j) s += c.coeff(k - j) * d.coeffs[j];
        if (!(s == (k == 0 ? CplxQ(1) : CplxQ(0)))) ++fails;
      }
      if (!check_value_relation(c, 64).ok) ++fails;
    }
    res.check("dual-and-value-relation", fails == 0, json{{"count", 25}});
  }
  {
    SymbolSpec s;
    s.kind = SymbolSpec::Kind::polynomial;
    s.coeffs = {"1", "-1/3"};
    res.check("parseval", suite_parseval(cfg, s, 10).ok);
  }
  json j{{"suite", "selftest"}, {"pass", res.ok}, {"checks", res.detail}};
  emit(cfg, j.dump(2), out);
  return res.ok ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"dyadic step-function algebra, Haar chaoses and their symbol calculus"};
  app.require_subcommand(1);
  app.add_option("--mode", cfg.mode, "exact | float")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--depth", cfg.depth, "truncation level for step functions");
  app.add_option("--trunc", cfg.trunc, "series truncation degree N");
  app.add_option("--samples", cfg.samples, "boundary sample count");
  app.add_option("--p", cfg.p_list, "exponent list");
  app.add_option("--seed", cfg.seed, "seed for randomized suites");
  app.add_option("--out", cfg.out_path, "output file (default stdout)");
  app.add_option("--kernels", cfg.kernels, "auto | scalar | avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  std::string symbol_arg, step_arg, which_norm = "all", suite;
  int K = 8, max_len = 6, n_param = 1, cap = 40, count = 50;
  double tol = 1e-6;
  std::vector<std::uint64_t> nmax_list;

  auto* c_expand = app.add_subcommand("expand", "coefficients and values of a symbol");
  c_expand->add_option("--symbol", symbol_arg, "symbol JSON or @file")->required();
  c_expand->add_option("--k", K, "largest k in the table");

  auto* c_dual = app.add_subcommand("dual", "coefficients of the reciprocal symbol");
  c_dual->add_option("--symbol", symbol_arg)->required();

  auto* c_verify = app.add_subcommand("verify", "named verification suites");
  c_verify->add_option("suite", suite,
                       "biorthogonal | h1-identity | value-relation | walsh | parseval | commutation")
      ->required();
  c_verify->add_option("--symbol", symbol_arg);
  c_verify->add_option("--max-len", max_len, "index length bound");
  c_verify->add_option("--n", n_param, "final gap for the h1 identity");
  c_verify->add_option("--cap", cap, "index length cap for the h1 identity");
  c_verify->add_option("--count", count, "randomized repetitions");
  c_verify->add_option("--tol", tol, "numeric tolerance");

  auto* c_norm = app.add_subcommand("norm", "Lp / BMO / H1 norms of a step function");
  c_norm->add_option("--symbol", symbol_arg);
  c_norm->add_option("--step", step_arg, "step JSON or @file");
  c_norm->add_option("--norm", which_norm, "lp | bmo | h1 | all");

  auto* c_opnorm = app.add_subcommand("opnorm", "multiplier and boundary norms of a symbol");
  c_opnorm->add_option("--symbol", symbol_arg)->required();

  GridSpec grid;
  auto* c_spectrum = app.add_subcommand("spectrum", "sampled spectrum cloud CSV");
  c_spectrum->add_option("--symbol", symbol_arg)->required();
  c_spectrum->add_option("--nr", grid.n_radial, "radial grid count");
  c_spectrum->add_option("--na", grid.n_angular, "angular grid count");

  auto* c_classify = app.add_subcommand("classify", "basis/equivalence classification");
  c_classify->add_option("--symbol", symbol_arg)->required();

  auto* c_apply = app.add_subcommand("apply", "apply the commutant operator to a step function");
  c_apply->add_option("--symbol", symbol_arg)->required();
  c_apply->add_option("--step", step_arg)->required();

  auto* c_reconstruct = app.add_subcommand("reconstruct", "partial sums against the dual system");
  c_reconstruct->add_option("--symbol", symbol_arg)->required();
  c_reconstruct->add_option("--step", step_arg)->required();
  c_reconstruct->add_option("--nmax", nmax_list, "grid of summation bounds");

  auto* c_selftest = app.add_subcommand("selftest", "quick internal consistency run");

  // global flags remain valid after the subcommand name
  for (CLI::App* sub : app.get_subcommands(nullptr)) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help goes to stdout with exit 0
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 2;
  }

  if (!kern::set_backend(cfg.kernels)) {
    err << "kernel backend '" << cfg.kernels << "' unavailable on this machine\n";
    return 2;
  }
  g_warn = &err;

  try {
    if (c_expand->parsed()) return cmd_expand(cfg, symbol_arg, K, out);
    if (c_dual->parsed()) return cmd_dual(cfg, symbol_arg, out);
    if (c_verify->parsed())
      return cmd_verify(cfg, suite, symbol_arg, max_len, n_param, cap, count, tol, out);
    if (c_norm->parsed()) return cmd_norm(cfg, symbol_arg, step_arg, which_norm, out);
    if (c_opnorm->parsed()) return cmd_opnorm(cfg, symbol_arg, out);
    if (c_spectrum->parsed()) return cmd_spectrum(cfg, symbol_arg, grid, out);
    if (c_classify->parsed()) return cmd_classify(cfg, symbol_arg, out);
    if (c_apply->parsed()) return cmd_apply(cfg, symbol_arg, step_arg, out);
    if (c_reconstruct->parsed()) return cmd_reconstruct(cfg, symbol_arg, step_arg, nmax_list, out);
    if (c_selftest->parsed()) return cmd_selftest(cfg, out);
  } catch (const parse_error& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "no subcommand\n";
  return 2;
}

}  // namespace haffine::cli
