#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "igsm/graph.hpp"
#include "igsm/render.hpp"

namespace igsm {

//---------------------------------------------------------------------------
// Parsed form
//---------------------------------------------------------------------------

struct ParsedOperand {
  std::optional<char> letter;  // nullopt: literal
  int literal = 0;
};

struct ParsedClause {
  char target = '?';
  ParsedOperand lhs;
  std::optional<ArithOp> op;  // nullopt: "x = 17" or "x = y = 17"
  ParsedOperand rhs;
  int lhs_value = 0;  // stated operand values, binary clauses only
  int rhs_value = 0;
  int result = 0;
  std::size_t offset = 0;
};

struct ParsedStep {
  std::string name;
  char letter = '?';
  std::vector<ParsedClause> clauses;
  std::size_t offset = 0;
};

// "Define X as [BACK]." or a whole sentence followed by "[BACK].".
struct ParsedRetry {
  std::string name;
  std::size_t offset = 0;
  bool whole_sentence = false;
};

using ParsedItem = std::variant<ParsedStep, ParsedRetry>;

struct ParsedSolution {
  std::vector<ParsedItem> items;
  std::optional<int> answer;
  std::size_t answer_offset = 0;

  std::size_t retry_count() const {
    std::size_t n = 0;
    for (const auto& it : items) n += std::holds_alternative<ParsedRetry>(it);
    return n;
  }
};

namespace detail {

class SentenceParser {
 public:
  SentenceParser(std::string_view text, std::size_t base) : s_(text), base_(base) {}

  [[noreturn]] void fail(std::size_t at, const std::string& why) const { throw ParseError(base_ + at, why); }

  static bool is_number(std::string_view t) {
    if (t.empty() || t.size() > 6) return false;
    for (char c : t) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  }

  int number(std::string_view t, std::size_t at) const {
    if (!is_number(t)) fail(at, "expected a number, got '" + std::string(t) + "'");
    if (t.size() > 1 && t.front() == '0') fail(at, "number with leading zero '" + std::string(t) + "'");
    return std::stoi(std::string(t));
  }

  char letter(std::string_view t, std::size_t at) const {
    if (t.size() != 1 || !is_pool_letter(t[0])) fail(at, "expected a single-letter name, got '" + std::string(t) + "'");
    return t[0];
  }

  ParsedOperand operand(std::string_view t, std::size_t at) const {
    if (t.size() == 1 && is_pool_letter(t[0])) return ParsedOperand{t[0], 0};
    return ParsedOperand{std::nullopt, number(t, at)};
  }

  // Splits on occurrences of `sep`, reporting each piece's offset.
  static std::vector<std::pair<std::string_view, std::size_t>> split(std::string_view t, std::string_view sep,
                                                                     std::size_t at) {
    std::vector<std::pair<std::string_view, std::size_t>> out;
    std::size_t start = 0;
    while (true) {
      const std::size_t pos = t.find(sep, start);
      if (pos == std::string_view::npos) {
        out.emplace_back(t.substr(start), at + start);
        return out;
      }
      out.emplace_back(t.substr(start, pos - start), at + start);
      start = pos + sep.size();
    }
  }

  // "a op b" with both sides operands of the given kind.
  template <typename F>
  auto binary(std::string_view t, std::size_t at, F&& side) const {
    auto parts = split(t, " ", at);
    if (parts.size() != 3 || parts[1].first.size() != 1 || !arith_op_from(parts[1].first[0])) {
      fail(at, "expected 'x op y', got '" + std::string(t) + "'");
    }
    return std::tuple{side(parts[0].first, parts[0].second), *arith_op_from(parts[1].first[0]),
                      side(parts[2].first, parts[2].second)};
  }

  ParsedClause clause(std::string_view t, std::size_t at) const {
    auto parts = split(t, " = ", at);
    ParsedClause c;
    c.offset = base_ + at;
    c.target = letter(parts[0].first, parts[0].second);
    switch (parts.size()) {
      case 2:
        c.lhs = ParsedOperand{std::nullopt, number(parts[1].first, parts[1].second)};
        c.result = c.lhs.literal;
        break;
      case 3:
        c.lhs = ParsedOperand{letter(parts[1].first, parts[1].second), 0};
        c.result = number(parts[2].first, parts[2].second);
        break;
      case 4: {
        auto sym = [&](std::string_view x, std::size_t o) { return operand(x, o); };
        auto num = [&](std::string_view x, std::size_t o) { return number(x, o); };
        auto [l, op, r] = binary(parts[1].first, parts[1].second, sym);
        auto [lv, op2, rv] = binary(parts[2].first, parts[2].second, num);
        if (op != op2) fail(parts[2].second, "operator changes between symbolic and numeric form");
        c.lhs = l;
        c.op = op;
        c.rhs = r;
        c.lhs_value = lv;
        c.rhs_value = rv;
        c.result = number(parts[3].first, parts[3].second);
        break;
      }
      default: fail(at, "malformed clause '" + std::string(t) + "'");
    }
    return c;
  }

  // One sentence without its final period.
  std::variant<ParsedStep, ParsedRetry> define() const {
    constexpr std::string_view kDefine = "Define ";
    const std::size_t as = s_.find(" as ");
    if (as == std::string_view::npos || as <= kDefine.size()) fail(0, "malformed Define sentence");
    std::string name(s_.substr(kDefine.size(), as - kDefine.size()));
    const std::string_view rest = s_.substr(as + 4);
    const std::size_t rest_at = as + 4;
    if (rest == "[BACK]") return ParsedRetry{std::move(name), base_, false};

    auto pieces = split(rest, "; ", rest_at);
    if (pieces.size() < 2) fail(rest_at, "Define sentence without a computation");
    ParsedStep step;
    step.name = std::move(name);
    step.offset = base_;
    step.letter = letter(pieces[0].first, pieces[0].second);
    for (std::size_t i = 1; i < pieces.size(); ++i) {
      auto [piece, at] = pieces[i];
      const bool last = i + 1 == pieces.size();
      const bool so = piece.substr(0, 3) == "so ";
      if (last != so) fail(at, last ? "final clause must start with 'so '" : "'so' before the final clause");
      if (so) {
        piece.remove_prefix(3);
        at += 3;
      }
      step.clauses.push_back(clause(piece, at));
    }
    return step;
  }

 private:
  std::string_view s_;
  std::size_t base_;
};

}  // namespace detail

// Strict parse of a candidate solution. Throws ParseError at the first
// offending character. With `lexicon`, Define names must be in it.
inline ParsedSolution parse_solution(std::string_view text, const std::set<std::string>* lexicon = nullptr) {
  while (!text.empty() && (text.back() == '\n' || text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) throw ParseError(0, "empty solution");

  ParsedSolution out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = pos;
    while (true) {
      end = text.find('.', end);
      if (end == std::string_view::npos) throw ParseError(pos, "unterminated sentence");
      if (end + 1 == text.size() || text[end + 1] == ' ') break;
      ++end;
    }
    const std::string_view sentence = text.substr(pos, end - pos);
    detail::SentenceParser sp(sentence, pos);
    if (out.answer) sp.fail(0, "text after the Answer sentence");

    if (sentence == "[BACK]") {
      if (out.items.empty() || !std::holds_alternative<ParsedStep>(out.items.back())) {
        sp.fail(0, "[BACK] does not follow a complete step");
      }
      const auto& prev = std::get<ParsedStep>(out.items.back());
      ParsedRetry r{prev.name, prev.offset, true};
      out.items.back() = r;
    } else if (sentence.substr(0, 8) == "Answer: ") {
      out.answer = sp.number(sentence.substr(8), 8);
      out.answer_offset = pos;
    } else if (sentence.substr(0, 7) == "Define ") {
      auto item = sp.define();
      const std::string& name = std::visit([](const auto& x) -> const std::string& { return x.name; }, item);
      if (lexicon && !lexicon->count(name)) sp.fail(7, "unknown parameter name '" + name + "'");
      out.items.push_back(std::move(item));
    } else {
      sp.fail(0, "malformed sentence");
    }
    pos = end + 1;
    if (pos < text.size()) {
      ++pos;  // the separating space
      if (pos >= text.size() || text[pos] == ' ') throw ParseError(pos, "expected a sentence");
    }
  }

  // Duplicate letters among committed steps.
  std::set<char> used;
  for (const auto& it : out.items) {
    const auto* step = std::get_if<ParsedStep>(&it);
    if (!step) continue;
    if (!used.insert(step->letter).second) throw ParseError(step->offset, std::string("duplicate letter '") + step->letter + "'");
    for (std::size_t i = 0; i + 1 < step->clauses.size(); ++i) {
      const auto& c = step->clauses[i];
      if (!used.insert(c.target).second) throw ParseError(c.offset, std::string("duplicate letter '") + c.target + "'");
    }
  }
  return out;
}

//---------------------------------------------------------------------------
// Verification
//---------------------------------------------------------------------------

struct StepError {
  std::size_t step = 0;    // index into ParsedSolution::items
  std::size_t offset = 0;  // character offset into the text
  std::string reason;
};

struct VerifierReport {
  bool parsed = true;
  bool fully_correct = false;
  bool answer_correct = false;
  std::optional<int> answer;  // declared, or the query step's value without an Answer sentence
  std::optional<StepError> first_error;
  int retry_count = 0;
  int spurious_retries = 0;  // retries naming a parameter that was computable
  int unnecessary_params = 0;
  int unnecessary_ops = 0;
};

struct VerifyOptions {
  bool tolerant_retry = false;  // spurious retries do not fail verification
  bool require_answer = false;  // an "Answer: v." sentence is mandatory
};

inline VerifierReport verify(const Problem& prob, const ParsedSolution& parsed, const VerifyOptions& opt = {}) {
  const DependencyGraph& g = prob.graph;
  VerifierReport rep;
  rep.retry_count = static_cast<int>(parsed.retry_count());

  auto error = [&](std::size_t step, std::size_t offset, std::string why) {
    if (!rep.first_error) rep.first_error = StepError{step, offset, std::move(why)};
  };

  struct Bound {
    Polynomial poly;
    ModValue value;
  };
  std::map<char, Bound> letters;  // parameter letters
  std::set<char> used;
  ParamSet computed(g.size());
  std::vector<ParamId> defined;
  std::optional<ModValue> query_value;

  for (std::size_t i = 0; i < parsed.items.size(); ++i) {
    if (const auto* r = std::get_if<ParsedRetry>(&parsed.items[i])) {
      auto id = g.find(r->name);
      if (!id) {
        error(i, r->offset, "unknown parameter '" + r->name + "'");
        continue;
      }
      if (can_next(g, computed, *id)) {
        ++rep.spurious_retries;
        if (!opt.tolerant_retry) error(i, r->offset, "retry of computable parameter '" + r->name + "'");
      }
      continue;
    }
    const auto& step = std::get<ParsedStep>(parsed.items[i]);
    auto id = g.find(step.name);
    if (!id) {
      error(i, step.offset, "unknown parameter '" + step.name + "'");
      continue;
    }
    if (computed.contains(*id)) {
      error(i, step.offset, "'" + step.name + "' is already defined");
      continue;
    }
    const bool ready = can_next(g, computed, *id);
    if (!ready) error(i, step.offset, "'" + step.name + "' cannot be computed yet");

    std::map<char, Bound> local;
    bool ok = ready;
    std::optional<Bound> final;
    auto resolve = [&](const ParsedOperand& o, std::size_t at) -> std::optional<Bound> {
      if (!o.letter) {
        if (o.literal >= kModulus) {
          error(i, at, "constant " + std::to_string(o.literal) + " out of range");
          return std::nullopt;
        }
        return Bound{Polynomial::constant(ModValue(o.literal)), ModValue(o.literal)};
      }
      if (auto it = local.find(*o.letter); it != local.end()) return it->second;
      if (auto it = letters.find(*o.letter); it != letters.end()) return it->second;
      error(i, at, std::string("unbound letter '") + *o.letter + "'");
      return std::nullopt;
    };
    for (std::size_t c = 0; c < step.clauses.size() && ok; ++c) {
      const auto& cl = step.clauses[c];
      const bool last = c + 1 == step.clauses.size();
      if (used.count(cl.target) || local.count(cl.target)) {
        error(i, cl.offset, std::string("letter '") + cl.target + "' is already in use");
        ok = false;
        break;
      }
      if ((cl.target == step.letter) != last) {
        error(i, cl.offset, last ? "final clause does not define the step's letter" : "step letter assigned early");
        ok = false;
        break;
      }
      if (cl.result >= kModulus) {
        error(i, cl.offset, "value " + std::to_string(cl.result) + " out of range");
        ok = false;
        break;
      }
      auto lhs = resolve(cl.lhs, cl.offset);
      if (!lhs) {
        ok = false;
        break;
      }
      Bound out;
      if (!cl.op) {
        if (lhs->value.value() != cl.result) {
          error(i, cl.offset, "stated value " + std::to_string(cl.result) + " differs from " +
                                  std::to_string(lhs->value.value()));
          ok = false;
          break;
        }
        out = *lhs;
      } else {
        auto rhs = resolve(cl.rhs, cl.offset);
        if (!rhs) {
          ok = false;
          break;
        }
        if (cl.lhs_value != lhs->value.value() || cl.rhs_value != rhs->value.value()) {
          error(i, cl.offset, "stated operand values do not match their definitions");
          ok = false;
          break;
        }
        const ModValue v = mod_eval(lhs->value, *cl.op, rhs->value);
        if (v.value() != cl.result) {
          error(i, cl.offset, "arithmetic error: expected " + std::to_string(v.value()));
          ok = false;
          break;
        }
        out = Bound{Polynomial::apply(lhs->poly, *cl.op, rhs->poly), v};
      }
      local[cl.target] = out;
      if (last) final = out;
    }
    if (ok && final && !(final->poly == g.at(*id).rule.polynomial())) {
      error(i, step.offset, "'" + step.name + "' is not computed by its rule");
      ok = false;
    }

    // Bind regardless so later steps are judged on their own.
    for (const auto& cl : step.clauses) used.insert(cl.target);
    const ModValue v = final ? final->value : ModValue(step.clauses.back().result % kModulus);
    letters[step.letter] = Bound{Polynomial::variable(*id), v};
    computed.insert(*id);
    defined.push_back(*id);
    if (*id == g.query()) query_value = v;
  }

  const ModValue truth = g.at(g.query()).value;
  if (parsed.answer) {
    rep.answer = parsed.answer;
  } else if (query_value) {
    rep.answer = query_value->value();
  }
  if (!parsed.answer && opt.require_answer) error(parsed.items.size(), 0, "missing Answer sentence");
  if (!computed.contains(g.query())) error(parsed.items.size(), 0, "query parameter is never defined");
  rep.answer_correct = rep.answer && *rep.answer == truth.value();
  if (parsed.answer && !rep.answer_correct) {
    error(parsed.items.size(), parsed.answer_offset, "wrong answer");
  }

  const ParamSet need = necessary_set(g);
  for (auto id : defined) {
    if (!need.contains(id)) {
      ++rep.unnecessary_params;
      rep.unnecessary_ops += g.at(id).rule.op_cost();
    }
  }
  rep.fully_correct = !rep.first_error && rep.answer_correct;
  return rep;
}

// Parse and verify; a parse failure becomes a failed report.
inline VerifierReport verify_text(const Problem& prob, std::string_view text, const VerifyOptions& opt = {}) {
  try {
    return verify(prob, parse_solution(text), opt);
  } catch (const ParseError& e) {
    VerifierReport rep;
    rep.parsed = false;
    rep.first_error = StepError{0, e.offset(), e.reason()};
    for (std::size_t p = text.find("[BACK]"); p != std::string_view::npos; p = text.find("[BACK]", p + 1)) {
      ++rep.retry_count;
    }
    return rep;
  }
}

struct AggregateStats {
  std::size_t n = 0;
  std::size_t correct = 0;
  std::size_t answer_correct = 0;
  double accuracy = 0;
  double answer_accuracy = 0;
  double mean_retries_correct = 0;
  double mean_retries_wrong = 0;
  double mean_unnecessary_params = 0;  // over fully correct solutions
  double mean_unnecessary_ops = 0;
};

inline AggregateStats aggregate(std::span<const VerifierReport> reports) {
  AggregateStats s;
  s.n = reports.size();
  double rc = 0, rw = 0, up = 0, uo = 0;
  for (const auto& r : reports) {
    s.answer_correct += r.answer_correct;
    if (r.fully_correct) {
      ++s.correct;
      rc += r.retry_count;
      up += r.unnecessary_params;
      uo += r.unnecessary_ops;
    } else {
      rw += r.retry_count;
    }
  }
  const std::size_t wrong = s.n - s.correct;
  if (s.n) {
    s.accuracy = static_cast<double>(s.correct) / static_cast<double>(s.n);
    s.answer_accuracy = static_cast<double>(s.answer_correct) / static_cast<double>(s.n);
  }
  if (s.correct) {
    s.mean_retries_correct = rc / static_cast<double>(s.correct);
    s.mean_unnecessary_params = up / static_cast<double>(s.correct);
    s.mean_unnecessary_ops = uo / static_cast<double>(s.correct);
  }
  if (wrong) s.mean_retries_wrong = rw / static_cast<double>(wrong);
  return s;
}

}  // namespace igsm
