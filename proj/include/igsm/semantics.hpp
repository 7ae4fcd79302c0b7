#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "igsm/core.hpp"
#include "igsm/modarith.hpp"

namespace igsm {

//---------------------------------------------------------------------------
// Rules
//---------------------------------------------------------------------------

enum class RuleKind {
  constant,    // k
  copy,        // each A
  sum,         // the sum of each A, each B and each C
  difference,  // the difference of each A and each B
  aggregate,   // hierarchical total of an abstract parameter
};

// Optional affine wrapper around a copy/sum/difference base:
// "k more than S" or "k times as much as S".
enum class Modifier { none, plus, times };

// One child contribution to an abstract parameter. When the target category
// is the next layer the term is the edge count alone, otherwise it is
// count * subtotal.
struct AggregateTerm {
  ParamId count;
  std::optional<ParamId> subtotal;
  friend bool operator==(const AggregateTerm&, const AggregateTerm&) = default;
};

struct Rule {
  RuleKind kind = RuleKind::constant;
  std::vector<ParamId> operands;  // copy: 1, sum: >= 2, difference: 2
  Modifier modifier = Modifier::none;
  ModValue k;                     // constant value, or the modifier's offset/scale
  std::vector<AggregateTerm> terms;

  static Rule make_constant(int value) {
    Rule r;
    r.kind = RuleKind::constant;
    r.k = ModValue(value);
    return r;
  }
  static Rule make_copy(ParamId a, Modifier mod = Modifier::none, int k = 0) {
    Rule r;
    r.kind = RuleKind::copy;
    r.operands = {a};
    r.modifier = mod;
    r.k = ModValue(k);
    return r;
  }
  static Rule make_sum(std::vector<ParamId> xs, Modifier mod = Modifier::none, int k = 0) {
    Rule r;
    r.kind = RuleKind::sum;
    r.operands = std::move(xs);
    r.modifier = mod;
    r.k = ModValue(k);
    return r;
  }
  static Rule make_difference(ParamId a, ParamId b, Modifier mod = Modifier::none, int k = 0) {
    Rule r;
    r.kind = RuleKind::difference;
    r.operands = {a, b};
    r.modifier = mod;
    r.k = ModValue(k);
    return r;
  }

  // Every parameter this rule reads.
  std::vector<ParamId> dependencies() const {
    if (kind != RuleKind::aggregate) return operands;
    std::vector<ParamId> out;
    for (const auto& t : terms) {
      out.push_back(t.count);
      if (t.subtotal) out.push_back(*t.subtotal);
    }
    return out;
  }

  // Number of clauses the decomposed chain has. A clause is one "x = ..."
  // reduction; constants and copies take one clause, a k-term sum k-1.
  int op_cost() const {
    const int n = static_cast<int>(operands.size());
    const int wrap = modifier == Modifier::none ? 0 : 1;
    switch (kind) {
      case RuleKind::constant: return 1;
      case RuleKind::copy: return 1;
      case RuleKind::sum: return n - 1 + wrap;
      case RuleKind::difference: return 1 + wrap;
      case RuleKind::aggregate: {
        const int t = static_cast<int>(terms.size());
        if (t == 1) return 1;
        const bool deep = terms.front().subtotal.has_value();
        return deep ? 2 * t - 1 : t - 1;
      }
    }
    return 0;
  }

  Polynomial polynomial() const {
    Polynomial base;
    switch (kind) {
      case RuleKind::constant: return Polynomial::constant(k);
      case RuleKind::copy: base = Polynomial::variable(operands[0]); break;
      case RuleKind::sum:
        for (auto id : operands) base = base + Polynomial::variable(id);
        break;
      case RuleKind::difference:
        base = Polynomial::variable(operands[0]) - Polynomial::variable(operands[1]);
        break;
      case RuleKind::aggregate:
        for (const auto& t : terms) {
          Polynomial term = Polynomial::variable(t.count);
          if (t.subtotal) term = term * Polynomial::variable(*t.subtotal);
          base = base + term;
        }
        return base;
    }
    switch (modifier) {
      case Modifier::none: return base;
      case Modifier::plus: return Polynomial::constant(k) + base;
      case Modifier::times: return Polynomial::constant(k) * base;
    }
    return base;
  }

  // Direct (non-decomposed) evaluation.
  template <typename Lookup>
  ModValue evaluate(Lookup&& value_of) const {
    ModValue base;
    switch (kind) {
      case RuleKind::constant: return k;
      case RuleKind::copy: base = value_of(operands[0]); break;
      case RuleKind::sum:
        for (auto id : operands) base = base + value_of(id);
        break;
      case RuleKind::difference: base = value_of(operands[0]) - value_of(operands[1]); break;
      case RuleKind::aggregate:
        for (const auto& t : terms) {
          base = base + (t.subtotal ? value_of(t.count) * value_of(*t.subtotal) : value_of(t.count));
        }
        return base;
    }
    switch (modifier) {
      case Modifier::none: return base;
      case Modifier::plus: return k + base;
      case Modifier::times: return k * base;
    }
    return base;
  }

  friend bool operator==(const Rule&, const Rule&) = default;
};

//---------------------------------------------------------------------------
// Binary-operation chains
//---------------------------------------------------------------------------

// Either a letter bound earlier in the solution or a literal number.
struct Operand {
  std::optional<char> letter;  // nullopt: literal
  ModValue value;

  static Operand literal(ModValue v) { return Operand{std::nullopt, v}; }
  static Operand named(char c, ModValue v) { return Operand{c, v}; }
  bool is_literal() const noexcept { return !letter.has_value(); }
  friend bool operator==(const Operand&, const Operand&) = default;
};

// One reduction "target = lhs [op rhs] = ... = result".
struct Clause {
  char target = '?';
  Operand lhs;
  std::optional<ArithOp> op;  // nullopt: assignment (constant or copy)
  Operand rhs;
  ModValue result;

  std::string render() const {
    std::string s(1, target);
    s += " = ";
    auto sym = [](const Operand& o) {
      return o.is_literal() ? std::to_string(o.value.value()) : std::string(1, *o.letter);
    };
    if (!op) {
      s += sym(lhs);
      if (!lhs.is_literal()) s += " = " + std::to_string(result.value());
      return s;
    }
    const char opc = symbol(*op);
    s += sym(lhs) + " " + opc + " " + sym(rhs);
    s += " = " + std::to_string(lhs.value.value()) + " " + opc + " " + std::to_string(rhs.value.value());
    s += " = " + std::to_string(result.value());
    return s;
  }

  friend bool operator==(const Clause&, const Clause&) = default;
};

struct BinOpChain {
  std::vector<Clause> clauses;  // intermediates first, final clause defines the parameter

  // Replays every clause and returns the final value.
  ModValue replay() const {
    ModValue last;
    for (const auto& c : clauses) {
      last = c.op ? mod_eval(c.lhs.value, *c.op, c.rhs.value) : c.lhs.value;
    }
    return last;
  }
  std::size_t binary_operations() const {
    std::size_t n = 0;
    for (const auto& c : clauses) n += c.op.has_value();
    return n;
  }
  friend bool operator==(const BinOpChain&, const BinOpChain&) = default;
};

struct Binding {
  char letter;
  ModValue value;
};

// Builds the left-associated chain for `rule`, writing the final clause to
// `target`. `env` resolves operand parameters to their bound letter and
// value; `fresh` hands out intermediate letters.
inline BinOpChain decompose(const Rule& rule, char target,
                            const std::function<std::optional<Binding>(ParamId)>& env,
                            const std::function<char()>& fresh) {
  auto resolve = [&](ParamId id) {
    auto b = env(id);
    if (!b) throw UnresolvedOperandError("operand parameter #" + std::to_string(id.index) + " is not defined yet");
    return Operand::named(b->letter, b->value);
  };

  BinOpChain chain;
  auto emit = [&](char to, Operand a, ArithOp op, Operand b) {
    Clause c{to, a, op, b, mod_eval(a.value, op, b.value)};
    chain.clauses.push_back(c);
    return Operand::named(to, c.result);
  };
  // Left fold; the last step lands on `target` when `to_target` is set.
  auto reduce = [&](std::vector<Operand> xs, ArithOp op, bool to_target) {
    Operand acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) {
      const bool last = i + 1 == xs.size();
      acc = emit(last && to_target ? target : fresh(), acc, op, xs[i]);
    }
    return acc;
  };
  auto wrap = [&](Operand base) {
    const ArithOp op = rule.modifier == Modifier::plus ? ArithOp::add : ArithOp::mul;
    emit(target, Operand::literal(rule.k), op, base);
  };

  // Resolve everything up front so a missing operand fails before any
  // fresh letters are consumed.
  std::vector<Operand> ops;
  for (auto id : rule.operands) ops.push_back(resolve(id));

  switch (rule.kind) {
    case RuleKind::constant:
      chain.clauses.push_back(Clause{target, Operand::literal(rule.k), std::nullopt, {}, rule.k});
      break;
    case RuleKind::copy:
      if (rule.modifier == Modifier::none) {
        chain.clauses.push_back(Clause{target, ops[0], std::nullopt, {}, ops[0].value});
      } else {
        wrap(ops[0]);
      }
      break;
    case RuleKind::sum:
    case RuleKind::difference: {
      const ArithOp op = rule.kind == RuleKind::sum ? ArithOp::add : ArithOp::sub;
      if (rule.modifier == Modifier::none) {
        reduce(ops, op, true);
      } else {
        wrap(reduce(ops, op, false));
      }
      break;
    }
    case RuleKind::aggregate: {
      std::vector<std::pair<Operand, std::optional<Operand>>> terms;
      for (const auto& t : rule.terms) {
        terms.emplace_back(resolve(t.count), t.subtotal ? std::optional(resolve(*t.subtotal)) : std::nullopt);
      }
      if (terms.size() == 1) {
        if (terms[0].second) {
          emit(target, terms[0].first, ArithOp::mul, *terms[0].second);
        } else {
          chain.clauses.push_back(Clause{target, terms[0].first, std::nullopt, {}, terms[0].first.value});
        }
        break;
      }
      std::vector<Operand> parts;
      for (auto& [count, sub] : terms) {
        parts.push_back(sub ? emit(fresh(), count, ArithOp::mul, *sub) : count);
      }
      reduce(parts, ArithOp::add, true);
      break;
    }
  }
  return chain;
}

}  // namespace igsm
