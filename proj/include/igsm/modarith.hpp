#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "igsm/core.hpp"

namespace igsm {

inline constexpr int kModulus = 23;

// An element of Z/23, always held in canonical form [0, 23).
class ModValue {
 public:
  constexpr ModValue() = default;
  constexpr explicit ModValue(long long v) : v_(normalize(v)) {}

  constexpr int value() const noexcept { return v_; }

  friend constexpr auto operator<=>(ModValue, ModValue) = default;

  friend constexpr ModValue operator+(ModValue a, ModValue b) { return ModValue(a.v_ + b.v_); }
  friend constexpr ModValue operator-(ModValue a, ModValue b) { return ModValue(a.v_ - b.v_); }
  friend constexpr ModValue operator*(ModValue a, ModValue b) { return ModValue(a.v_ * b.v_); }

  friend std::ostream& operator<<(std::ostream& os, ModValue m) { return os << m.v_; }

 private:
  static constexpr int normalize(long long v) {
    long long r = v % kModulus;
    return static_cast<int>(r < 0 ? r + kModulus : r);
  }
  int v_ = 0;
};

enum class ArithOp : char { add = '+', sub = '-', mul = '*' };

constexpr char symbol(ArithOp op) noexcept { return static_cast<char>(op); }

constexpr std::optional<ArithOp> arith_op_from(char c) noexcept {
  switch (c) {
    case '+': return ArithOp::add;
    case '-': return ArithOp::sub;
    case '*': return ArithOp::mul;
    default: return std::nullopt;
  }
}

constexpr ModValue mod_eval(ModValue lhs, ArithOp op, ModValue rhs) {
  switch (op) {
    case ArithOp::add: return lhs + rhs;
    case ArithOp::sub: return lhs - rhs;
    case ArithOp::mul: return lhs * rhs;
  }
  return ModValue{};
}

// Polynomial over Z/23 in parameter variables. Used to decide whether a
// written-out chain of binary operations computes the same expression as a
// parameter's rule, independent of association order.
class Polynomial {
 public:
  using Monomial = std::vector<std::uint32_t>;  // sorted variable indices

  Polynomial() = default;

  static Polynomial constant(ModValue c) {
    Polynomial p;
    p.add_term({}, c.value());
    return p;
  }
  static Polynomial variable(ParamId id) {
    Polynomial p;
    p.add_term({id.index}, 1);
    return p;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, c);
    return r;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a;
    for (const auto& [m, c] : b.terms_) r.add_term(m, kModulus - c);
    return r;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ma, ca] : a.terms_) {
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m = ma;
        m.insert(m.end(), mb.begin(), mb.end());
        std::sort(m.begin(), m.end());
        r.add_term(std::move(m), ca * cb);
      }
    }
    return r;
  }

  static Polynomial apply(const Polynomial& a, ArithOp op, const Polynomial& b) {
    switch (op) {
      case ArithOp::add: return a + b;
      case ArithOp::sub: return a - b;
      case ArithOp::mul: return a * b;
    }
    return {};
  }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

  std::size_t term_count() const noexcept { return terms_.size(); }

 private:
  void add_term(Monomial m, int c) {
    int& slot = terms_[std::move(m)];
    slot = (slot + c % kModulus + kModulus) % kModulus;
    if (slot == 0) {
      for (auto it = terms_.begin(); it != terms_.end();) {
        it = it->second == 0 ? terms_.erase(it) : std::next(it);
      }
    }
  }

  std::map<Monomial, int> terms_;
};

}  // namespace igsm
