#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <optional>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "binconv/convolution.hpp"
#include "binconv/log_identities.hpp"
#include "binconv/series.hpp"

namespace binconv {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// A parsed function: rational-valued or log-valued. Where the grammar can
/// derive one, `cert` carries a growth certificate |f(n)|/xi(n) <= C n^r for
/// the series evaluators; inverses and pointwise products cannot be
/// certified automatically.
struct ParsedFn {
  std::variant<ArithFn, LogFn> fn;
  std::optional<GrowthCert> cert;

  bool is_log() const { return std::holds_alternative<LogFn>(fn); }
  const ArithFn& rational() const { return std::get<ArithFn>(fn); }
  const LogFn& log_valued() const { return std::get<LogFn>(fn); }
};

namespace detail {

inline const char* kBuiltinNames =
    "delta, I, mu, lambda, xi, tau, mu2, nr:<r>, romega:<r>, mangoldt, "
    "mangoldt_tilde, table:<path>";
inline const char* kCombinatorNames =
    "dconv(f,g), bconv(f,g), dinv(f), binv(f), bpow:<k>(f), times(f,g), "
    "toxi(f), fromxi(f)";

inline ArithFn load_table_file(const std::string& path, std::size_t pos) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open table file '" + path + "'", pos);
  std::vector<std::pair<std::uint64_t, BigRat>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw ParseError("table file '" + path + "' line " + std::to_string(lineno) +
                           ": expected 'n,value'",
                       pos);
    std::uint64_t n;
    try {
      n = std::stoull(line.substr(0, comma));
    } catch (const std::exception&) {
      throw ParseError("table file '" + path + "' line " + std::to_string(lineno) +
                           ": bad index",
                       pos);
    }
    BigRat v;
    try {
      std::string val = line.substr(comma + 1);
      while (!val.empty() && std::isspace(static_cast<unsigned char>(val.back()))) val.pop_back();
      v = parse_rational(val);
    } catch (const std::exception&) {
      throw ParseError("table file '" + path + "' line " + std::to_string(lineno) +
                           ": bad rational value",
                       pos);
    }
    rows.emplace_back(n, v);
  }
  if (rows.empty()) throw ParseError("table file '" + path + "' is empty", pos);
  std::uint64_t maxn = 0;
  for (const auto& [n, v] : rows) maxn = std::max(maxn, n);
  std::vector<BigRat> values(maxn);
  std::vector<bool> seen(maxn, false);
  for (const auto& [n, v] : rows) {
    if (n == 0) throw ParseError("table file '" + path + "': index 0 not allowed", pos);
    if (seen[n - 1]) throw ParseError("table file '" + path + "': duplicate index", pos);
    seen[n - 1] = true;
    values[n - 1] = v;
  }
  for (std::uint64_t n = 1; n <= maxn; ++n)
    if (!seen[n - 1])
      throw ParseError("table file '" + path + "': missing index " + std::to_string(n), pos);
  return ArithFn::from_table(std::move(values));
}

class SpecParser {
 public:
  explicit SpecParser(const std::string& text) : text_(text) {}

  ParsedFn parse() {
    ParsedFn out = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return out;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool ident_char(char c) const {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string read_ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (pos_ == start) throw ParseError("expected a function name", pos_);
    return text_.substr(start, pos_ - start);
  }

  std::string read_param() {
    // parameter after ':' runs to '(', ',', ')' or end
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ',' &&
           text_[pos_] != ')')
      ++pos_;
    std::string p = text_.substr(start, pos_ - start);
    while (!p.empty() && std::isspace(static_cast<unsigned char>(p.back()))) p.pop_back();
    std::size_t skip = 0;
    while (skip < p.size() && std::isspace(static_cast<unsigned char>(p[skip]))) ++skip;
    p.erase(0, skip);
    if (p.empty()) throw ParseError("expected a parameter after ':'", start);
    return p;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c)
      throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
  }

  std::vector<ParsedFn> read_args(std::size_t count, const std::string& name) {
    expect('(');
    std::vector<ParsedFn> args;
    args.push_back(parse_expr());
    while (args.size() < count) {
      expect(',');
      args.push_back(parse_expr());
    }
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == ',')
      throw ParseError(name + " takes " + std::to_string(count) + " argument(s)", pos_);
    expect(')');
    return args;
  }

  static const ArithFn& require_rational(const ParsedFn& f, const std::string& ctx,
                                         std::size_t pos) {
    if (f.is_log())
      throw ParseError(ctx + " requires a rational-valued operand (log-valued given)", pos);
    return f.rational();
  }

  ParsedFn parse_expr() {
    skip_ws();
    std::size_t at = pos_;
    std::string name = read_ident();
    std::string param;
    bool has_param = false;
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      param = read_param();
      has_param = true;
    }

    auto need_param = [&](const char* what) {
      if (!has_param)
        throw ParseError(name + " needs a parameter, e.g. " + std::string(what), at);
    };
    auto no_param = [&]() {
      if (has_param) throw ParseError(name + " takes no ':' parameter", at);
    };

    // combinators
    if (name == "dconv" || name == "bconv") {
      no_param();
      auto args = read_args(2, name);
      ConvolutionKind kind =
          name == "bconv" ? ConvolutionKind::binomial : ConvolutionKind::dirichlet;
      if (args[0].is_log() && args[1].is_log())
        throw ParseError("cannot convolve two log-valued functions", at);
      if (args[0].is_log())
        return {LogFn(convolve(args[0].log_valued(), args[1].rational(), kind)),
                std::nullopt};
      if (args[1].is_log())
        return {LogFn(convolve(args[1].log_valued(), args[0].rational(), kind)),
                std::nullopt};
      std::optional<GrowthCert> cert;
      if (args[0].cert && args[1].cert) {
        // xi(d) xi(n/d) divides xi(n), so the divisor-sum bound
        // 2 Cf Cg n^(max(rf,rg,0)+1/2) covers both convolutions
        Real rmax = args[0].cert->exponent > args[1].cert->exponent
                        ? args[0].cert->exponent
                        : args[1].cert->exponent;
        if (rmax < 0) rmax = 0;
        cert = GrowthCert{2 * args[0].cert->scale * args[1].cert->scale,
                          rmax + Real(1) / 2};
      }
      return {convolve(args[0].rational(), args[1].rational(), kind), cert};
    }
    if (name == "dinv" || name == "binv") {
      no_param();
      auto args = read_args(1, name);
      const ArithFn& f = require_rational(args[0], name, at);
      return {name == "binv" ? binomial_inverse(f) : dirichlet_inverse(f), std::nullopt};
    }
    if (name == "bpow") {
      need_param("bpow:2");
      long long k;
      try {
        k = std::stoll(param);
      } catch (const std::exception&) {
        throw ParseError("bpow parameter must be an integer", at);
      }
      auto args = read_args(1, name);
      const ArithFn& base = require_rational(args[0], name, at);
      std::optional<GrowthCert> cert;
      if (k == 0) {
        cert = GrowthCert{Real(1), Real(0)};
      } else if (k > 0 && args[0].cert) {
        cert = *args[0].cert;
        for (long long i = 1; i < k; ++i) {
          Real rmax = cert->exponent > args[0].cert->exponent ? cert->exponent
                                                              : args[0].cert->exponent;
          if (rmax < 0) rmax = 0;
          cert = GrowthCert{2 * cert->scale * args[0].cert->scale, rmax + Real(1) / 2};
        }
      }
      return {binomial_power(base, k), cert};
    }
    if (name == "times") {
      no_param();
      auto args = read_args(2, name);
      if (args[0].is_log() && args[1].is_log())
        throw ParseError("cannot multiply two log-valued functions", at);
      if (args[0].is_log() || args[1].is_log()) {
        LogFn L = args[0].is_log() ? args[0].log_valued() : args[1].log_valued();
        ArithFn f = args[0].is_log() ? args[1].rational() : args[0].rational();
        return {LogFn([L, f](std::uint64_t n) { return L(n) * f.eval(n); }), std::nullopt};
      }
      return {pointwise_multiply(args[0].rational(), args[1].rational()), std::nullopt};
    }
    if (name == "toxi" || name == "fromxi") {
      no_param();
      auto args = read_args(1, name);
      const ArithFn& f = require_rational(args[0], name, at);
      if (name == "toxi") return {to_dirichlet_side(f), args[0].cert};  // |f/xi|/xi <= |f|/xi
      return {from_dirichlet_side(f), std::nullopt};
    }

    // leaves
    GrowthCert unit{Real(1), Real(0)};
    if (name == "table") {
      need_param("table:values.csv");
      ArithFn t = load_table_file(param, at);
      BigRat peak(0);
      for (std::uint64_t n = 1; n <= t.table_size(); ++n) {
        BigRat a = t.eval(n);
        if (a < 0) a = -a;
        if (a > peak) peak = a;
      }
      return {t, GrowthCert{to_real(peak), Real(0)}};
    }
    if (name == "nr") {
      need_param("nr:1");
      long long r;
      try {
        r = std::stoll(param);
      } catch (const std::exception&) {
        throw ParseError("nr parameter must be an integer exponent", at);
      }
      return {power_fn(r), GrowthCert{Real(1), Real(r > 0 ? r : 0)}};
    }
    if (name == "romega") {
      need_param("romega:2 or romega:5/2");
      BigRat r;
      try {
        r = parse_rational(param);
      } catch (const std::exception&) {
        throw ParseError("romega parameter must be a rational p/q", at);
      }
      double rv = std::abs(static_cast<double>(to_real(r)));
      return {romega_fn(r), GrowthCert{Real(1), Real(rv <= 1 ? 0.0 : std::log2(rv))}};
    }
    no_param();
    if (name == "delta") return {delta_fn(), unit};
    if (name == "I") return {one_fn(), unit};
    if (name == "mu") return {mu_fn(), unit};
    if (name == "lambda") return {liouville_fn(), unit};
    if (name == "xi") return {xi_fn(), unit};
    if (name == "tau") return {tau_fn(), GrowthCert{Real(2), Real(1) / 2}};
    if (name == "mu2") return {mu_squared_fn(), unit};
    if (name == "mangoldt") return {LogFn::mangoldt_fn(), std::nullopt};
    if (name == "mangoldt_tilde") return {LogFn::mangoldt_tilde_fn(), std::nullopt};
    throw ParseError("unknown function '" + name + "'; valid names: " +
                         std::string(kBuiltinNames) + "; combinators: " +
                         std::string(kCombinatorNames),
                     at);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ParsedFn parse_function_spec(const std::string& text) {
  return detail::SpecParser(text).parse();
}

}  // namespace binconv
