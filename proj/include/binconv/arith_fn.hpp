#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "binconv/numbers.hpp"

namespace binconv {

/// Declared function properties. A set flag is a verified claim (checked by
/// the classification routines up to a bound), never a silent assumption.
enum class TriState { unknown, yes, no };

struct FnFlags {
  TriState multiplicative = TriState::unknown;
  TriState completely_multiplicative = TriState::unknown;
  TriState prime_independent = TriState::unknown;
};

class NonInvertibleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An arithmetical function with exact rational values.
///
/// Defined by one of: an explicit 1..N table, a multiplicative prime-power
/// rule (p, a>=1) -> value, a prime-independent exponent rule a>=0 -> value,
/// or an arbitrary closure. Values are memoized; instances are immutable
/// after construction except for the idempotent-fill memo cache, so they can
/// be shared freely across threads.
class ArithFn {
 public:
  using PrimePowerRule = std::function<BigRat(std::uint64_t p, unsigned a)>;
  using ExponentRule = std::function<BigRat(unsigned a)>;
  using PointRule = std::function<BigRat(std::uint64_t n)>;

  ArithFn() : ArithFn(from_table({BigRat(1)})) {}

  static ArithFn from_table(std::vector<BigRat> values, FnFlags flags = {}) {
    if (values.empty()) throw std::invalid_argument("ArithFn table must cover n=1");
    auto st = std::make_shared<State>();
    st->def = Table{std::move(values)};
    st->flags = flags;
    return ArithFn(std::move(st));
  }

  static ArithFn multiplicative(PrimePowerRule rule, FnFlags flags = {}) {
    flags.multiplicative = TriState::yes;
    auto st = std::make_shared<State>();
    st->def = MultRule{std::move(rule)};
    st->flags = flags;
    return ArithFn(std::move(st));
  }

  static ArithFn prime_independent(ExponentRule rule, FnFlags flags = {}) {
    if (rule(0) != 1)
      throw std::invalid_argument("prime-independent rule must give 1 at exponent 0");
    flags.multiplicative = TriState::yes;
    flags.prime_independent = TriState::yes;
    auto st = std::make_shared<State>();
    st->def = ExpRule{std::move(rule)};
    st->flags = flags;
    return ArithFn(std::move(st));
  }

  static ArithFn closure(PointRule fn, FnFlags flags = {}) {
    auto st = std::make_shared<State>();
    st->def = Point{std::move(fn)};
    st->flags = flags;
    return ArithFn(std::move(st));
  }

  BigRat operator()(std::uint64_t n) const { return eval(n); }

  BigRat eval(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("ArithFn: n must be positive");
    if (const Table* t = std::get_if<Table>(&state_->def)) {
      if (n > t->values.size())
        throw std::out_of_range("ArithFn: n=" + std::to_string(n) +
                                " outside explicit table of size " +
                                std::to_string(t->values.size()));
      return t->values[n - 1];
    }
    {
      std::lock_guard<std::mutex> lock(state_->memo_mutex);
      auto it = state_->memo.find(n);
      if (it != state_->memo.end()) return it->second;
    }
    BigRat value = compute(n);
    {
      std::lock_guard<std::mutex> lock(state_->memo_mutex);
      state_->memo.emplace(n, value);  // first fill wins; values are identical
    }
    return value;
  }

  /// Value at p^a without forming p^a when a rule is available.
  BigRat at_prime_power(std::uint64_t p, unsigned a) const {
    if (a == 0) return eval(1);
    if (const MultRule* r = std::get_if<MultRule>(&state_->def)) return r->rule(p, a);
    if (const ExpRule* r = std::get_if<ExpRule>(&state_->def)) return r->rule(a);
    return eval(checked_pow(p, a));
  }

  const FnFlags& flags() const { return state_->flags; }

  ArithFn with_flags(FnFlags flags) const {
    auto st = std::make_shared<State>();
    st->def = state_->def;
    st->flags = flags;
    return ArithFn(std::move(st));
  }

  bool is_table() const { return std::holds_alternative<Table>(state_->def); }
  std::uint64_t table_size() const {
    const Table* t = std::get_if<Table>(&state_->def);
    return t ? t->values.size() : 0;
  }

  static std::uint64_t checked_pow(std::uint64_t p, unsigned a) {
    std::uint64_t r = 1;
    for (unsigned i = 0; i < a; ++i) {
      if (r > UINT64_MAX / p) throw std::overflow_error("prime power exceeds 64 bits");
      r *= p;
    }
    return r;
  }

 private:
  struct Table {
    std::vector<BigRat> values;
  };
  struct MultRule {
    PrimePowerRule rule;
  };
  struct ExpRule {
    ExponentRule rule;
  };
  struct Point {
    PointRule fn;
  };
  using Definition = std::variant<Table, MultRule, ExpRule, Point>;

  struct State {
    Definition def;
    FnFlags flags;
    mutable std::mutex memo_mutex;
    mutable std::unordered_map<std::uint64_t, BigRat> memo;
  };

  explicit ArithFn(std::shared_ptr<State> st) : state_(std::move(st)) {}

  BigRat compute(std::uint64_t n) const {
    if (const MultRule* r = std::get_if<MultRule>(&state_->def)) {
      BigRat acc(1);
      for (const auto& f : factorize(n).factors) acc *= r->rule(f.prime, f.exponent);
      return acc;
    }
    if (const ExpRule* r = std::get_if<ExpRule>(&state_->def)) {
      BigRat acc(1);
      for (const auto& f : factorize(n).factors) acc *= r->rule(f.exponent);
      return acc;
    }
    return std::get<Point>(state_->def).fn(n);
  }

  std::shared_ptr<State> state_;
};

// ---- Built-in functions ------------------------------------------------

/// delta: identity of both convolutions (1 at n=1, else 0).
inline ArithFn delta_fn() {
  FnFlags fl;
  fl.completely_multiplicative = TriState::yes;
  return ArithFn::prime_independent(
      [](unsigned a) { return a == 0 ? BigRat(1) : BigRat(0); }, fl);
}

/// I(n) = 1 for all n.
inline ArithFn one_fn() {
  FnFlags fl;
  fl.completely_multiplicative = TriState::yes;
  return ArithFn::prime_independent([](unsigned) { return BigRat(1); }, fl);
}

inline ArithFn mu_fn() {
  FnFlags fl;
  fl.completely_multiplicative = TriState::no;
  return ArithFn::prime_independent(
      [](unsigned a) { return a == 0 ? BigRat(1) : (a == 1 ? BigRat(-1) : BigRat(0)); }, fl);
}

inline ArithFn mu_squared_fn() {
  FnFlags fl;
  fl.completely_multiplicative = TriState::no;
  return ArithFn::prime_independent(
      [](unsigned a) { return a <= 1 ? BigRat(1) : BigRat(0); }, fl);
}

inline ArithFn liouville_fn() {
  FnFlags fl;
  fl.completely_multiplicative = TriState::yes;
  return ArithFn::prime_independent(
      [](unsigned a) { return a % 2 == 0 ? BigRat(1) : BigRat(-1); }, fl);
}

inline ArithFn xi_fn() {
  FnFlags fl;
  fl.completely_multiplicative = TriState::no;
  return ArithFn::prime_independent(
      [](unsigned a) { return BigRat(factorial(a)); }, fl);
}

/// tau(n): number of divisors.
inline ArithFn tau_fn() {
  FnFlags fl;
  fl.completely_multiplicative = TriState::no;
  return ArithFn::prime_independent([](unsigned a) { return BigRat(a + 1); }, fl);
}

/// n^r for integer r (exact rational for negative r).
inline ArithFn power_fn(long long r) {
  FnFlags fl;
  fl.multiplicative = TriState::yes;
  fl.completely_multiplicative = TriState::yes;
  fl.prime_independent = (r == 0) ? TriState::yes : TriState::no;
  return ArithFn::multiplicative(
      [r](std::uint64_t p, unsigned a) {
        return pow_rat(BigRat(p), r * static_cast<long long>(a));
      },
      fl);
}

/// r^Omega(n) for rational r (0^Omega(1) = 0^0 = 1 by convention).
inline ArithFn romega_fn(const BigRat& r) {
  FnFlags fl;
  fl.completely_multiplicative = TriState::yes;
  return ArithFn::prime_independent(
      [r](unsigned a) { return pow_rat(r, a); }, fl);
}

}  // namespace binconv
