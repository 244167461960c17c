#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "binconv/binconv.hpp"

using nlohmann::json;

namespace {

enum class OutputMode { table, json_lines, csv };

OutputMode pick_mode(bool as_json, bool as_csv) {
  if (as_json && as_csv) throw CLI::ValidationError("--json and --csv are mutually exclusive");
  if (as_json) return OutputMode::json_lines;
  if (as_csv) return OutputMode::csv;
  return OutputMode::table;
}

std::string value_string(const binconv::ParsedFn& fn, std::uint64_t n) {
  if (fn.is_log()) return fn.log_valued()(n).str();
  return binconv::rational_to_string(fn.rational().eval(n));
}

void emit_rows(const binconv::ParsedFn& fn, std::uint64_t from, std::uint64_t to,
               OutputMode mode) {
  for (std::uint64_t n = from; n <= to; ++n) {
    std::string v = value_string(fn, n);
    switch (mode) {
      case OutputMode::table:
        std::cout << n << "\t" << v << "\n";
        break;
      case OutputMode::csv:
        std::cout << n << "," << v << "\n";
        break;
      case OutputMode::json_lines: {
        json row;
        row["n"] = n;
        row["value"] = v;
        std::cout << row.dump() << "\n";
        break;
      }
    }
  }
}

binconv::GrowthCert resolve_cert(const binconv::ParsedFn& fn, double cert_scale,
                                 double cert_exponent, bool cert_given) {
  if (cert_given) return {binconv::Real(cert_scale), binconv::Real(cert_exponent)};
  if (fn.cert) return *fn.cert;
  throw std::domain_error(
      "no growth certificate derivable for this expression; supply "
      "--cert-scale and --cert-exponent");
}

int run(int argc, char** argv) {
  CLI::App app{
      "binconv: exact arithmetic for the binomial and Dirichlet convolution "
      "algebras of arithmetical functions"};
  app.require_subcommand(1);

  if (const char* env = std::getenv("BINCONV_SIEVE_BOUND")) {
    try {
      binconv::set_sieve_bound(static_cast<std::uint32_t>(std::stoul(env)));
    } catch (const std::exception& e) {
      std::cerr << "BINCONV_SIEVE_BOUND ignored: " << e.what() << "\n";
    }
  }

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a function on 1..N");
  std::string eval_fn;
  std::uint64_t eval_to = 10, eval_from = 1;
  bool eval_json = false, eval_csv = false;
  eval_cmd->add_option("--fn", eval_fn, "function expression, e.g. \"bconv(I,I)\"")
      ->required();
  eval_cmd->add_option("--to", eval_to, "last n (default 10)");
  eval_cmd->add_option("--from", eval_from, "first n (default 1)");
  eval_cmd->add_flag("--json", eval_json, "JSON-lines output");
  eval_cmd->add_flag("--csv", eval_csv, "CSV output");

  // ---- conv ----
  auto* conv_cmd = app.add_subcommand("conv", "tabulate a convolution of two functions");
  std::string conv_kind = "bconv", conv_f, conv_g;
  std::uint64_t conv_to = 20;
  bool conv_json = false, conv_csv = false;
  conv_cmd->add_option("--kind", conv_kind, "bconv (binomial) or dconv (Dirichlet)")
      ->check(CLI::IsMember({"bconv", "dconv"}));
  conv_cmd->add_option("--f", conv_f, "left operand expression")->required();
  conv_cmd->add_option("--g", conv_g, "right operand expression")->required();
  conv_cmd->add_option("--to", conv_to, "table bound (default 20)");
  conv_cmd->add_flag("--json", conv_json, "JSON-lines output");
  conv_cmd->add_flag("--csv", conv_csv, "CSV output");

  // ---- invert ----
  auto* inv_cmd = app.add_subcommand("invert", "tabulate a convolution inverse");
  std::string inv_mode = "binomial", inv_fn;
  std::uint64_t inv_to = 20;
  bool inv_json = false, inv_csv = false;
  inv_cmd->add_option("--mode", inv_mode, "binomial or dirichlet")
      ->check(CLI::IsMember({"binomial", "dirichlet"}));
  inv_cmd->add_option("--fn", inv_fn, "function expression with f(1) != 0")->required();
  inv_cmd->add_option("--to", inv_to, "table bound (default 20)");
  inv_cmd->add_flag("--json", inv_json, "JSON-lines output");
  inv_cmd->add_flag("--csv", inv_csv, "CSV output");

  // ---- check ----
  auto* check_cmd = app.add_subcommand("check", "run a named identity check");
  std::string check_name;
  binconv::CheckOptions check_opts;
  bool check_json = false;
  check_cmd->add_option("identity", check_name, "identity name (see --list)")->required();
  check_cmd->add_option("--to", check_opts.to, "pointwise verification bound");
  check_cmd->add_option("--n-max", check_opts.n_max, "sampling bound for random n");
  check_cmd->add_option("--samples", check_opts.samples, "number of random samples");
  check_cmd->add_option("--n", check_opts.n, "focus on a single n");
  check_cmd->add_option("--s", check_opts.s, "series argument s");
  check_cmd->add_option("--z", check_opts.z, "generating-function argument z");
  check_cmd->add_option("--seed", check_opts.seed, "random seed (default 12345)");
  check_cmd->add_flag("--json", check_json, "JSON output");

  // ---- series ----
  auto* series_cmd =
      app.add_subcommand("series", "evaluate a series with a rigorous error bound");
  std::string series_kind, series_fn;
  double series_s = 2.0, series_z = 0.5;
  std::uint64_t series_terms = 0;
  double cert_scale = 1.0, cert_exponent = 0.0;
  bool series_json = false;
  bool cert_given = false;
  series_cmd
      ->add_option("kind", series_kind,
                   "one of: edirichlet, primezeta, zetatilde, egf, xi_egf")
      ->required()
      ->check(CLI::IsMember({"edirichlet", "primezeta", "zetatilde", "egf", "xi_egf"}));
  series_cmd->add_option("--s", series_s, "real argument s (default 2)");
  series_cmd->add_option("--z", series_z, "real argument z, |z| < 1 (default 0.5)");
  series_cmd->add_option("--fn", series_fn, "function for edirichlet/egf");
  series_cmd->add_option("--terms", series_terms, "truncation point override");
  auto* cs = series_cmd->add_option("--cert-scale", cert_scale,
                                    "growth certificate scale C in |f(n)|/xi(n) <= C n^r");
  auto* ce = series_cmd->add_option("--cert-exponent", cert_exponent,
                                    "growth certificate exponent r");
  series_cmd->add_flag("--json", series_json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return 0;
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the diagnostic
    return 2;
  }

  if (*eval_cmd) {
    binconv::ParsedFn fn = binconv::parse_function_spec(eval_fn);
    if (eval_from == 0 || eval_to < eval_from)
      throw std::domain_error("eval: need 1 <= from <= to");
    emit_rows(fn, eval_from, eval_to, pick_mode(eval_json, eval_csv));
    return 0;
  }

  if (*conv_cmd) {
    binconv::ParsedFn pf = binconv::parse_function_spec(conv_f);
    binconv::ParsedFn pg = binconv::parse_function_spec(conv_g);
    auto kind = conv_kind == "bconv" ? binconv::ConvolutionKind::binomial
                                     : binconv::ConvolutionKind::dirichlet;
    binconv::ParsedFn out;
    if (pf.is_log() && pg.is_log())
      throw std::domain_error("conv: cannot convolve two log-valued functions");
    if (pf.is_log())
      out.fn = binconv::convolve(pf.log_valued(), pg.rational(), kind);
    else if (pg.is_log())
      out.fn = binconv::convolve(pg.log_valued(), pf.rational(), kind);
    else
      out.fn = binconv::convolve(pf.rational(), pg.rational(), kind);
    emit_rows(out, 1, conv_to, pick_mode(conv_json, conv_csv));
    return 0;
  }

  if (*inv_cmd) {
    binconv::ParsedFn pf = binconv::parse_function_spec(inv_fn);
    if (pf.is_log()) throw std::domain_error("invert: log-valued functions are not invertible");
    binconv::ParsedFn out;
    out.fn = inv_mode == "binomial" ? binconv::binomial_inverse(pf.rational())
                                    : binconv::dirichlet_inverse(pf.rational());
    emit_rows(out, 1, inv_to, pick_mode(inv_json, inv_csv));
    return 0;
  }

  if (*check_cmd) {
    binconv::CheckResult res = binconv::run_identity_check(check_name, check_opts);
    if (check_json) {
      json j;
      j["identity"] = res.identity;
      j["pass"] = res.pass;
      j["witness"] = res.witness;
      j["details"] = res.details;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << res.identity << ": " << (res.pass ? "pass" : "FAIL") << "\n";
      if (!res.witness.empty()) std::cout << "  witness: " << res.witness << "\n";
      for (const auto& d : res.details) std::cout << "  " << d << "\n";
    }
    return res.pass ? 0 : 1;
  }

  if (*series_cmd) {
    binconv::SeriesApprox result;
    if (series_kind == "primezeta") {
      result = binconv::prime_zeta(binconv::Real(series_s));
    } else if (series_kind == "zetatilde") {
      result = binconv::zeta_tilde(binconv::Real(series_s));
    } else if (series_kind == "xi_egf") {
      result = series_terms ? binconv::capital_xi(binconv::Real(series_z), series_terms)
                            : binconv::capital_xi(binconv::Real(series_z));
    } else {
      if (series_fn.empty())
        throw std::domain_error(series_kind + " requires --fn");
      binconv::ParsedFn fn = binconv::parse_function_spec(series_fn);
      if (fn.is_log())
        throw std::domain_error(series_kind + " requires a rational-valued function");
      cert_given = cs->count() > 0 || ce->count() > 0;
      binconv::GrowthCert cert = resolve_cert(fn, cert_scale, cert_exponent, cert_given);
      if (series_kind == "edirichlet") {
        std::uint64_t N = series_terms ? series_terms : 100000;
        result = binconv::exp_dirichlet_partial(fn.rational(), binconv::Real(series_s), N, cert);
      } else {  // egf
        std::uint64_t N = series_terms ? series_terms
                                       : binconv::egf_auto_terms(binconv::Real(series_z));
        result = binconv::egf_partial(fn.rational(), binconv::Real(series_z), N, cert);
      }
    }
    if (series_json) {
      json j;
      j["kind"] = series_kind;
      if (series_kind == "egf" || series_kind == "xi_egf")
        j["z"] = series_z;
      else
        j["s"] = series_s;
      j["value"] = result.value.str(30);
      j["error_bound"] = result.error_bound.str(6);
      j["terms_used"] = result.terms_used;
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "value       = " << result.value.str(30) << "\n"
                << "error_bound = " << result.error_bound.str(6) << "\n"
                << "terms_used  = " << result.terms_used << "\n";
    }
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError&) {
    // handled by CLI11_PARSE inside run(); not reached
    return 2;
  } catch (const binconv::UnknownIdentityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const binconv::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const binconv::NonInvertibleError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
