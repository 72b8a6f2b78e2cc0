#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "gowers/acceptance.hpp"
#include "gowers/coset.hpp"
#include "gowers/decoder.hpp"
#include "gowers/engine.hpp"
#include "gowers/error.hpp"
#include "gowers/euclid.hpp"
#include "gowers/generate.hpp"
#include "gowers/io.hpp"
#include "gowers/kernels.hpp"
#include "gowers/nil.hpp"
#include "gowers/parallel.hpp"

using namespace gowers;
using io::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::string profile = "default";
  std::string out;
  std::string simd = "auto";
  Tolerances tol;
};

// Generator flags shared by `generate` and the signal-producing fallbacks.
struct GenFlags {
  std::string kind = "random-gaussian";
  std::string domain;
  GenParams params;
  std::optional<std::size_t> generator;
};

void add_gen_flags(CLI::App* c, GenFlags& g) {
  c->add_option("--kind", g.kind, "generator kind")->check(CLI::IsMember(generator_kinds()));
  c->add_option("--domain", g.domain, "cyclic:N | group:AxB.. | interval:N | grid:dim:extent:points");
  c->add_option("--degree", g.params.degree, "polynomial degree")->check(CLI::NonNegativeNumber);
  c->add_option("--gen-k", g.params.k, "coset-phase height exponent p_k")->check(CLI::Range(1, 8));
  c->add_option("--noise", g.params.noise, "noise level")->check(CLI::NonNegativeNumber);
  c->add_option("--frequency", g.params.frequency, "character frequency (element index)");
  c->add_option("--generator", g.generator, "coset-phase subgroup generator");
  c->add_option("--offset", g.params.offset, "coset-phase offset");
  c->add_option("--sigma", g.params.sigma, "Gaussian width")->check(CLI::PositiveNumber);
  c->add_option("--modulation", g.params.modulation, "linear modulation");
  c->add_option("--chirp", g.params.chirp, "quadratic modulation");
}

Signal make_signal(const GenFlags& g, std::uint64_t seed) {
  if (g.domain.empty()) usage_fail("either --input or --domain is required");
  GenParams p = g.params;
  p.domain = io::parse_domain(g.domain);
  p.generator = g.generator;
  return generate(g.kind, p, seed);
}

Signal input_or_generated(const std::string& input, const GenFlags& g, std::uint64_t seed) {
  if (!input.empty()) return io::read_signal(input);
  return make_signal(g, seed);
}

json envelope(const Globals& gl, const std::string& cmd) {
  return {{"command", cmd}, {"seed", gl.seed}, {"tolerance_profile", gl.profile}, {"tolerances", io::to_json(gl.tol)}};
}

void emit(const json& j, const std::string& path) {
  if (path.empty()) return;
  io::write_text_file(path, j.dump(2) + "\n");
}

int run(int argc, char** argv) {
  CLI::App app{"gowerslab: Gowers uniformity norms, inverse decoders and sharp-constant experiments"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Globals gl;
  app.add_option("--seed", gl.seed, "seed for every randomized step");
  app.add_option("--threads", gl.threads, "worker threads")->check(CLI::Range(1u, 256u));
  app.add_option("--tolerance-profile", gl.profile, "default | strict | loose")
      ->check(CLI::IsMember({"default", "strict", "loose"}));
  app.add_option("--out", gl.out, "output path (JSON report, CSV or signal)");
  app.add_option("--simd", gl.simd, "auto | scalar | avx2")->check(CLI::IsMember({"auto", "scalar", "avx2"}));

  // generate
  GenFlags gen;
  auto* c_gen = app.add_subcommand("generate", "write a generated signal as JSON");
  add_gen_flags(c_gen, gen);

  // norm
  GenFlags norm_gen;
  std::string norm_input, norm_backend = "auto", norm_route = "linear";
  int norm_k = 2;
  std::size_t norm_ambient = 0;
  auto* c_norm = app.add_subcommand("norm", "compute ||f||_{U^k}");
  c_norm->add_option("--input", norm_input, "signal JSON");
  c_norm->add_option("--k", norm_k, "norm order")->check(CLI::Range(1, 12));
  c_norm->add_option("--backend", norm_backend, "auto | direct | recursive | fft")
      ->check(CLI::IsMember({"auto", "direct", "recursive", "fft"}));
  c_norm->add_option("--route", norm_route, "interval route: linear | embedded")
      ->check(CLI::IsMember({"linear", "embedded"}));
  c_norm->add_option("--ambient", norm_ambient, "interval embedding modulus (0: 2^k N + 1)");
  add_gen_flags(c_norm, norm_gen);

  // decode
  GenFlags dec_gen;
  std::string dec_input, dec_kind, dec_report;
  int dec_k = 3;
  auto* c_dec = app.add_subcommand("decode", "recover c e(P) from a near-extremiser");
  c_dec->add_option("--input", dec_input, "signal JSON");
  c_dec->add_option("--k", dec_k, "degree parameter (phase degree k-1)")->check(CLI::Range(1, 8));
  c_dec->add_option("--domain-kind", dec_kind, "group | interval")->check(CLI::IsMember({"group", "interval"}));
  c_dec->add_option("--report", dec_report, "report JSON path");
  add_gen_flags(c_dec, dec_gen);

  // coset
  GenFlags cos_gen;
  std::string cos_input, cos_report;
  int cos_k = 3;
  double cos_eps = 1e-3;
  auto* c_cos = app.add_subcommand("coset", "detect a coset extremiser and recover its phase");
  c_cos->add_option("--input", cos_input, "signal JSON");
  c_cos->add_option("--k", cos_k, "degree parameter")->check(CLI::Range(2, 8));
  c_cos->add_option("--epsilon", cos_eps, "near-extremality slack")->check(CLI::Range(0.0, 1.0));
  c_cos->add_option("--report", cos_report, "report JSON path");
  add_gen_flags(c_cos, cos_gen);

  // euclid
  std::string eu_check = "constants";
  int eu_d = 3;
  std::size_t eu_points = 2048;
  double eu_extent = 8.0, eu_sigma = 1.0, eu_mod = 0.0;
  auto* c_eu = app.add_subcommand("euclid", "sharp constants on R^n");
  c_eu->add_option("--check", eu_check, "constants | det | sharpness | fourier")
      ->check(CLI::IsMember({"constants", "det", "sharpness", "fourier"}));
  c_eu->add_option("--d", eu_d, "norm order / matrix size")->check(CLI::Range(1, 12));
  c_eu->add_option("--grid-points", eu_points, "points per axis")->check(CLI::Range(std::size_t{8}, std::size_t{1} << 22));
  c_eu->add_option("--extent", eu_extent, "half width L of [-L, L]")->check(CLI::PositiveNumber);
  c_eu->add_option("--sigma", eu_sigma, "Gaussian width for the fourier check")->check(CLI::PositiveNumber);
  c_eu->add_option("--modulation", eu_mod, "linear modulation for the fourier check");

  // nil
  std::string nil_construct = "heisenberg";
  HeisenbergSpec hs;
  std::size_t nil_q = 3;
  double skew_alpha = 0.6180339887498949, skew_x0 = 0.0, skew_y0 = 0.0;
  std::string nil_signal;
  auto* c_nil = app.add_subcommand("nil", "nilsequence constructions");
  c_nil->add_option("--construct", nil_construct, "heisenberg | quadext | skew")
      ->check(CLI::IsMember({"heisenberg", "quadext", "skew"}));
  c_nil->add_option("--n", hs.n, "length N")->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
  c_nil->add_option("--alpha1", hs.alpha1, "heisenberg frequency 1");
  c_nil->add_option("--alpha2", hs.alpha2, "heisenberg frequency 2");
  c_nil->add_option("--sigma", hs.sigma, "heisenberg window width")->check(CLI::PositiveNumber);
  c_nil->add_option("--k-cut", hs.k_cut, "window series radius (0: from the tail bound)");
  c_nil->add_option("--cf-cap", hs.cf_cap, "bound on partial quotients");
  c_nil->add_option("--q", nil_q, "quadext: denominator multiplier")->check(CLI::PositiveNumber);
  c_nil->add_option("--alpha", skew_alpha, "skew shift rotation");
  c_nil->add_option("--x0", skew_x0, "skew shift start x");
  c_nil->add_option("--y0", skew_y0, "skew shift start y");
  c_nil->add_option("--signal-out", nil_signal, "also write the sequence as signal JSON");

  // scan
  GenFlags scan_gen;
  std::string scan_input;
  std::size_t scan_den = 0;
  auto* c_scan = app.add_subcommand("scan", "quadratic phase correlation scan");
  c_scan->add_option("--input", scan_input, "signal JSON");
  c_scan->add_option("--denominator", scan_den, "denominator D (0: signal length)");
  add_gen_flags(c_scan, scan_gen);

  // sweep
  std::string sweep_config;
  auto* c_sweep = app.add_subcommand("sweep", "threshold sweep to CSV");
  c_sweep->add_option("--config", sweep_config, "sweep JSON")->required();

  // bench
  std::vector<std::size_t> bench_sizes{16, 32, 64, 128};
  int bench_k = 3, bench_repeats = 1;
  auto* c_bench = app.add_subcommand("bench", "time the norm backends, CSV output");
  c_bench->add_option("--sizes", bench_sizes, "cyclic group orders")->delimiter(',');
  c_bench->add_option("--k", bench_k, "norm order")->check(CLI::Range(1, 6));
  c_bench->add_option("--repeats", bench_repeats, "timing repeats (best kept)")->check(CLI::Range(1, 100));

  // selftest
  std::string st_filter, st_csv;
  bool st_mutant = false;
  auto* c_st = app.add_subcommand("selftest", "run the acceptance suite");
  c_st->add_option("--filter", st_filter, "group name or comma-separated criterion ids");
  c_st->add_option("--csv-dir", st_csv, "directory for archived timing CSVs");
  c_st->add_flag("--inject-u2-bug", st_mutant, "replace the fast U^2 path by a broken one (fixture)")
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  gl.tol = tolerance_profile(gl.profile);
  set_thread_count(gl.threads);
  if (gl.simd != "auto") simd::select(simd::parse_isa(gl.simd));
  const Tolerances& tol = gl.tol;

  if (c_gen->parsed()) {
    const Signal f = make_signal(gen, gl.seed);
    const std::string text = io::to_json(f).dump() + "\n";
    if (gl.out.empty()) std::cout << text;
    else io::write_text_file(gl.out, text);
    std::cerr << "generated " << gen.kind << " on " << f.domain.describe() << "\n";
    return 0;
  }

  if (c_norm->parsed()) {
    const Signal f = input_or_generated(norm_input, norm_gen, gl.seed);
    NormResult r;
    if (f.domain.is_interval()) {
      if (norm_backend != "auto") usage_fail("norm: interval signals take --route, not --backend");
      r = uk_interval(f, norm_k, norm_ambient,
                      norm_route == "linear" ? IntervalRoute::linear : IntervalRoute::embedded, tol);
    } else if (norm_backend == "direct") {
      r = uk_direct(f, norm_k, tol);
    } else if (norm_backend == "recursive") {
      r = uk_recursive(f, norm_k, tol);
    } else if (norm_backend == "fft") {
      if (norm_k != 2) usage_fail("norm: --backend fft computes U^2 only");
      r = u2_fft(f, tol);
    } else {
      r = uk_norm(f, norm_k, tol);
    }
    json j = envelope(gl, "norm");
    j["domain"] = io::to_json(f.domain);
    j["result"] = io::to_json(r);
    emit(j, gl.out);
    std::cout.precision(12);
    std::cout << "U^" << norm_k << " norm on " << f.domain.describe() << " = " << r.value << " ("
              << backend_name(r.backend) << ", " << r.elapsed << " s)\n";
    return 0;
  }

  if (c_dec->parsed()) {
    const Signal f = input_or_generated(dec_input, dec_gen, gl.seed);
    const std::string kind = dec_kind.empty() ? (f.domain.is_interval() ? "interval" : "group") : dec_kind;
    if (kind == "interval" && !f.domain.is_interval()) usage_fail("decode: --domain-kind interval needs an interval signal");
    if (kind == "group" && !f.domain.is_group()) usage_fail("decode: --domain-kind group needs a group signal");
    const DecodeReport r = kind == "interval" ? decode_interval(f, dec_k, tol) : decode_group(f, dec_k, tol);
    json j = envelope(gl, "decode");
    j["domain"] = io::to_json(f.domain);
    j["k"] = dec_k;
    j["report"] = io::to_json(r);
    emit(j, dec_report.empty() ? gl.out : dec_report);
    std::cout << "decode: " << status_name(r.status) << ", residual " << r.residual_l1;
    if (!r.message.empty()) std::cout << " (" << r.message << ")";
    std::cout << "\n";
    return r.ok() ? 0 : 1;
  }

  if (c_cos->parsed()) {
    const Signal f = input_or_generated(cos_input, cos_gen, gl.seed);
    const CosetReport r = recover_structured(f, cos_k, cos_eps, tol);
    json j = envelope(gl, "coset");
    j["domain"] = io::to_json(f.domain);
    j["k"] = cos_k;
    j["epsilon"] = cos_eps;
    j["report"] = io::to_json(r);
    emit(j, cos_report.empty() ? gl.out : cos_report);
    std::cout << "coset: " << (r.ok ? "recovered" : "not recovered") << ", |H| = " << r.detection.coset.elements.size()
              << ", offset " << r.detection.coset.offset << ", residual " << r.total_residual;
    if (!r.message.empty()) std::cout << " (" << r.message << ")";
    std::cout << "\n";
    return r.ok ? 0 : 1;
  }

  if (c_eu->parsed()) {
    json j = envelope(gl, "euclid");
    j["check"] = eu_check;
    std::cout.precision(15);
    if (eu_check == "constants") {
      json rows = json::array();
      for (int k = 1; k <= std::max(eu_d, 1); ++k) {
        const double c = static_cast<double>(sharp_gowers_constant(k));
        const double rec = k >= 2 ? static_cast<double>(sharp_constant_by_recursion(k)) : c;
        rows.push_back({{"k", k}, {"C_k", c}, {"by_recursion", rec}, {"p_k", critical_exponent(k).value()}});
        std::cout << "C_" << k << " = " << c << "\n";
      }
      j["constants"] = rows;
    } else if (eu_check == "det") {
      const ExactInteger det = cube_form_det(eu_d);
      j["d"] = eu_d;
      j["matrix"] = cube_form_matrix(eu_d);
      j["det"] = det.decimal;
      j["power_of_two"] = det.power_of_two;
      j["log2"] = det.log2;
      std::cout << "det M_" << eu_d << " = " << det.decimal << (det.power_of_two ? " = 2^" + std::to_string(det.log2) : "")
                << "\n";
    } else if (eu_check == "sharpness") {
      const SharpnessReport r = verify_sharpness(eu_d, eu_extent, eu_points);
      j["report"] = io::to_json(r);
      std::cout << "U^" << eu_d << "/L^p = " << r.ratio << " vs C_" << eu_d << " = " << r.constant << " (error "
                << r.error << ")\n";
    } else {
      GenParams p;
      p.domain = DomainSpec::grid(1, eu_extent, eu_points);
      p.sigma = eu_sigma;
      p.modulation = eu_mod;
      const FourierInvariance r = fourier_invariance_check(generate("gaussian-grid", p, gl.seed), tol);
      j["report"] = io::to_json(r);
      std::cout << "U3(f) = " << r.u3 << ", U3(fhat) = " << r.u3_hat << ", diff " << r.diff << "\n";
    }
    emit(j, gl.out);
    return 0;
  }

  if (c_nil->parsed()) {
    Signal f = Signal::constant(DomainSpec::interval(1), 1.0);
    json j = envelope(gl, "nil");
    j["construct"] = nil_construct;
    if (nil_construct == "heisenberg") {
      f = heisenberg_nilsequence(hs, tol);
      j["params"] = {{"n", hs.n}, {"alpha1", hs.alpha1}, {"alpha2", hs.alpha2}, {"sigma", hs.sigma},
                     {"k_cut", hs.k_cut ? hs.k_cut : heisenberg_cut(hs.sigma, tol.heisenberg_tail)}};
      j["gamma_defect"] = heisenberg_gamma_defect(hs, gl.seed);
      j["window_l2"] = heisenberg_window_l2(hs.sigma);
    } else if (nil_construct == "quadext") {
      f = quadratic_example(hs.n, nil_q);
      j["params"] = {{"n", hs.n}, {"q", nil_q}};
    } else {
      f = skew_shift_orbit(skew_alpha, skew_x0, skew_y0, hs.n);
      j["params"] = {{"n", hs.n}, {"alpha", skew_alpha}, {"x0", skew_x0}, {"y0", skew_y0}};
    }
    const NormResult u3 = f.domain.is_interval() ? uk_interval(f, 3, 0, IntervalRoute::linear, tol) : uk_norm(f, 3, tol);
    const double l2 = lp_norm(f, 2);
    j["u3"] = u3.value;
    j["l2"] = l2;
    j["u3_ratio"] = u3.value / l2;
    emit(j, gl.out);
    if (!nil_signal.empty()) io::write_text_file(nil_signal, io::to_json(f).dump() + "\n");
    std::cout.precision(10);
    std::cout << nil_construct << ": U3/L2 = " << u3.value / l2 << " (2^{-1/8} = " << std::pow(2.0, -0.125) << ")\n";
    return 0;
  }

  if (c_scan->parsed()) {
    const Signal f = input_or_generated(scan_input, scan_gen, gl.seed);
    const ScanResult r = quad_correlation_scan(f, scan_den ? scan_den : f.size(), tol);
    json j = envelope(gl, "scan");
    j["result"] = io::to_json(r);
    emit(j, gl.out);
    std::cout << "max correlation " << r.max_corr << " at (a, b) = (" << r.a << ", " << r.b << ") over D = "
              << r.denominator << "\n";
    return 0;
  }

  if (c_sweep->parsed()) {
    const json cfg = io::read_json_file(sweep_config);
    const json& list = cfg.is_array() ? cfg : cfg.value("items", json::array());
    if (!list.is_array() || list.empty()) usage_fail("sweep: config needs a non-empty 'items' array");
    std::vector<SweepItem> items;
    for (const auto& e : list) {
      SweepItem it;
      try {
        it.construction = e.at("construction").get<std::string>();
        it.n = e.value("n", it.n);
        it.denominator = e.value("denominator", it.denominator);
        it.q = e.value("q", it.q);
        it.sigma = e.value("sigma", it.sigma);
        it.alpha = e.value("alpha", it.alpha);
        it.seed = e.value("seed", gl.seed);
      } catch (const json::exception& ex) {
        usage_fail(std::string("sweep: malformed item (") + ex.what() + ")");
      }
      items.push_back(it);
    }
    const std::string csv = sweep_csv(threshold_sweep(items));
    if (gl.out.empty()) std::cout << csv;
    else {
      io::write_text_file(gl.out, csv);
      std::cout << "wrote " << items.size() << " sweep rows to " << gl.out << "\n";
    }
    return 0;
  }

  if (c_bench->parsed()) {
    const std::string csv = bench_csv(bench_backends(bench_sizes, bench_k, gl.seed, bench_repeats));
    if (gl.out.empty()) std::cout << csv;
    else io::write_text_file(gl.out, csv);
    return 0;
  }

  if (c_st->parsed()) {
    AcceptanceContext ctx;
    ctx.seed = gl.seed;
    ctx.tol = tol;
    ctx.csv_dir = st_csv;
    if (st_mutant) ctx.u2_power = broken_u2_power;
    std::cout << "kernels: " << simd::active().name << ", threads: " << thread_count() << "\n";
    const auto results = run_acceptance(ctx, st_filter, [](const CriterionResult& r) {
      std::cout << format_result(r) << std::endl;
    });
    std::size_t passed = 0;
    json rows = json::array();
    for (const auto& r : results) {
      passed += r.pass;
      rows.push_back({{"id", r.info.id}, {"group", r.info.group}, {"title", r.info.title}, {"pass", r.pass},
                      {"detail", r.detail}});
    }
    std::cout << passed << "/" << results.size() << " criteria passed\n";
    json j = envelope(gl, "selftest");
    j["results"] = rows;
    emit(j, gl.out);
    return passed == results.size() ? 0 : 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ComputationError& e) {
    std::cerr << "computation failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
