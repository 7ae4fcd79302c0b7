// igsm: command-line front end for generation, augmentation, verification,
// decoding evaluation and corpus packing. Records are JSONL.

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "igsm/igsm.hpp"

namespace {

using igsm::json;

struct UsageError : igsm::Error {
  using Error::Error;
};

class Input {
 public:
  explicit Input(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw igsm::ConfigError("cannot open input '" + path + "'");
  }
  std::istream& get() { return file_ ? *file_ : std::cin; }

  // Non-empty lines parsed as JSON.
  std::vector<json> records() {
    std::vector<json> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(get(), line)) {
      ++n;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        out.push_back(json::parse(line));
      } catch (const json::parse_error& e) {
        throw igsm::ConfigError("input line " + std::to_string(n) + ": " + e.what());
      }
    }
    return out;
  }

 private:
  std::unique_ptr<std::ifstream> file_;
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw igsm::ConfigError("cannot open output '" + path + "'");
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

igsm::GenConfig load(const std::string& preset, const std::string& config_path) {
  if (config_path.empty()) return igsm::preset_config(preset);
  auto c = igsm::load_config(config_path);
  return c;
}

igsm::OpRange op_range(const igsm::GenConfig& c, const std::string& op, const std::string& range, bool eval) {
  if (!op.empty() && !range.empty()) throw UsageError("--op and --op-range are mutually exclusive");
  if (!op.empty()) {
    auto r = igsm::parse_op_range(op);
    if (r.min != r.max) throw UsageError("--op takes a single value; use --op-range for A..B");
    return r;
  }
  if (!range.empty()) return igsm::parse_op_range(range);
  if (eval) return {c.eval_ops.front(), c.eval_ops.back()};
  return {c.train_op_min, c.train_op_max};
}

bool on_off(const std::string& v, const std::string& flag) {
  if (v == "on") return true;
  if (v == "off") return false;
  throw UsageError(flag + " must be on or off");
}

// Gen and augment records carry the problem differently.
const json& problem_part(const json& rec) { return rec.contains("problem") ? rec.at("problem") : rec; }

std::string prompt_of(const json& p) {
  const std::string s = p.at("statement").get<std::string>(), q = p.at("question").get<std::string>();
  return p.at("layout").get<std::string>() == "qp" ? q + " " + s : s + " " + q;
}

struct GenArgs {
  std::string preset = "med", config, layout = "pq", op, op_range, split = "train", out;
  bool reask = false;
  std::size_t n = 1;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

int run_gen(const GenArgs& a) {
  const auto cfg = load(a.preset, a.config);
  if (a.split != "train" && a.split != "eval") throw UsageError("--split must be train or eval");
  const auto ops = op_range(cfg, a.op, a.op_range, a.split == "eval");
  const auto set = igsm::generate_set(cfg, ops, igsm::layout_from_string(a.layout), a.n, a.seed, a.reask, a.threads);
  Output out(a.out);
  for (const auto& g : set) out.get() << igsm::problem_record(g.problem, g.solution, cfg.preset).dump() << '\n';
  return 0;
}

struct AugmentArgs {
  std::string in, out, mode = "retry", mask = "on";
  double retry_rate = 0.5;
  bool whole_sentence = false;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

int run_augment(const AugmentArgs& a) {
  const auto mode = igsm::augment_mode_from_string(a.mode);
  if (a.whole_sentence && mode != igsm::AugmentMode::weak) throw UsageError("--whole-sentence requires --mode weak");
  const bool mask = on_off(a.mask, "--mask");
  igsm::check_retry_rate(a.retry_rate);
  Input in(a.in);
  const auto recs = in.records();
  std::vector<std::string> lines(recs.size());
  igsm::parallel_for(recs.size(), a.threads, [&](std::size_t i) {
    const json& rec = problem_part(recs[i]);
    const auto prob = igsm::problem_from_record(rec);
    const auto sol = igsm::solution_from_record(rec, prob);
    const std::uint64_t s = igsm::derive_seed(a.seed, i);
    igsm::AugmentedSample sample;
    switch (mode) {
      case igsm::AugmentMode::retry: sample = igsm::inject_retry(sol, prob.graph, a.retry_rate, s); break;
      case igsm::AugmentMode::weak: sample = igsm::inject_retry_weak(sol, a.retry_rate, s, a.whole_sentence); break;
      case igsm::AugmentMode::miss: sample = igsm::inject_retry_miss(sol, prob, a.retry_rate, s); break;
    }
    lines[i] = igsm::augment_record(sample, rec, mask).dump();
  });
  Output out(a.out);
  for (const auto& l : lines) out.get() << l << '\n';
  return 0;
}

struct VerifyArgs {
  std::string in, out;
  bool aggregate = false, tolerant = false, require_answer = false;
  unsigned threads = 0;
};

int run_verify(const VerifyArgs& a) {
  Input in(a.in);
  const auto recs = in.records();
  igsm::VerifyOptions opt{a.tolerant, a.require_answer};
  std::vector<igsm::VerifierReport> reports(recs.size());
  igsm::parallel_for(recs.size(), a.threads, [&](std::size_t i) {
    const json& r = recs[i];
    std::string text;
    if (r.contains("candidate")) {
      text = r.at("candidate").get<std::string>();
    } else if (r.contains("text")) {
      text = r.at("text").get<std::string>();
    } else {
      text = r.at("solution").get<std::string>();
    }
    reports[i] = igsm::verify_text(igsm::problem_from_record(problem_part(r)), text, opt);
  });
  Output out(a.out);
  if (a.aggregate) {
    out.get() << igsm::stats_to_json(igsm::aggregate(reports)).dump() << '\n';
  } else {
    for (const auto& r : reports) out.get() << igsm::report_to_json(r).dump() << '\n';
  }
  return 0;
}

struct EvalArgs {
  std::string preset = "med", config, layout = "pq", op, op_range, mode = "greedy", detector, out;
  int beam = 4, max_retries = -1;
  bool per_sentence = false;
  std::optional<double> detector_accuracy;
  double policy_error_rate = 0.0;
  std::size_t n = 4096, max_tokens = 2048;
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

int run_eval(const EvalArgs& a) {
  const auto cfg = load(a.preset, a.config);
  const auto ops = op_range(cfg, a.op, a.op_range, true);
  igsm::DecodeConfig dc;
  dc.mode = igsm::decode_mode_from_string(a.mode);
  dc.beam = a.beam;
  dc.per_sentence_retries = a.per_sentence;
  dc.max_tokens = a.max_tokens;
  std::optional<igsm::ErrorDetector> det;
  if (!a.detector.empty() && a.detector_accuracy) throw UsageError("--detector and --detector-accuracy are exclusive");
  if (!a.detector.empty()) {
    det = igsm::ErrorDetector::preset(a.detector);
    dc.max_retries = igsm::DecodeConfig::preset(a.detector).max_retries;
  } else if (a.detector_accuracy) {
    det = igsm::ErrorDetector(*a.detector_accuracy);
  }
  if (a.max_retries >= 0) dc.max_retries = a.max_retries;
  if (dc.mode == igsm::DecodeMode::retry_upon_regret && !det) {
    throw UsageError("--mode retry needs --detector or --detector-accuracy");
  }
  if (dc.mode != igsm::DecodeMode::retry_upon_regret && det) throw UsageError("a detector is only used by --mode retry");
  if (a.n == 0) throw UsageError("--n must be positive");

  const auto set = igsm::generate_set(cfg, ops, igsm::layout_from_string(a.layout), a.n, a.seed, false, a.threads);
  const auto problems = igsm::problems_of(set);
  const igsm::SyntheticOraclePolicy policy(a.policy_error_rate, igsm::derive_seed(a.seed, 0x504full));
  const auto res = igsm::eval_accuracy(problems, policy, det ? &*det : nullptr, dc, a.seed, a.threads);
  json j = igsm::stats_to_json(res.stats);
  std::size_t retries = 0;
  for (const auto& o : res.outputs) retries += o.retries.size();
  j["mean_regenerations"] = static_cast<double>(retries) / static_cast<double>(problems.size());
  j["settings"] = {{"preset", cfg.preset},       {"layout", a.layout},
                   {"op_min", ops.min},          {"op_max", ops.max},
                   {"mode", a.mode},             {"beam", dc.beam},
                   {"max_retries", dc.max_retries}, {"per_sentence_retries", dc.per_sentence_retries},
                   {"detector_accuracy", det ? json(det->accuracy()) : json(nullptr)},
                   {"policy_error_rate", a.policy_error_rate}, {"seed", a.seed}};
  Output out(a.out);
  out.get() << j.dump() << '\n';
  return 0;
}

struct PackArgs {
  std::string in, out, preset = "med", format = "jsonl", mask = "on";
  std::size_t context_len = 0;
  std::uint64_t seed = 0;
};

int run_pack(const PackArgs& a) {
  if (a.format != "jsonl" && a.format != "bin") throw UsageError("--format must be jsonl or bin");
  if (a.format == "bin" && (a.out.empty() || a.out == "-")) throw UsageError("--format bin needs --out PATH");
  const bool mask = on_off(a.mask, "--mask");
  const std::size_t ctx = a.context_len ? a.context_len : static_cast<std::size_t>(igsm::preset_config(a.preset).train_context_len);
  Input in(a.in);
  std::vector<igsm::CorpusSample> samples;
  for (const auto& r : in.records()) {
    igsm::CorpusSample s;
    const json& p = problem_part(r);
    const std::string prompt = prompt_of(p);
    const bool augmented = r.contains("text");
    s.text = prompt + " " + (augmented ? r.at("text") : r.at("solution")).get<std::string>();
    if (augmented && mask) {
      for (const auto& sp : r.at("mask_spans")) {
        const std::size_t shift = prompt.size() + 1;
        s.mask_spans.push_back(igsm::CharSpan{sp.at(0).get<std::size_t>() + shift, sp.at(1).get<std::size_t>() + shift});
      }
    }
    samples.push_back(std::move(s));
  }
  const auto& tok = igsm::Tokenizer::builtin();
  const auto seqs = igsm::pack(samples, tok, ctx, a.seed);
  if (a.format == "bin") {
    std::ofstream ids(a.out, std::ios::binary), msk(a.out + ".mask", std::ios::binary);
    if (!ids || !msk) throw igsm::ConfigError("cannot open output '" + a.out + "'");
    igsm::write_ids(ids, seqs, tok.vocab_size());
    igsm::write_mask(msk, seqs);
    return 0;
  }
  Output out(a.out);
  for (const auto& s : seqs) {
    json m = json::array();
    for (bool b : s.mask) m.push_back(b ? 1 : 0);
    out.get() << json{{"ids", s.ids}, {"mask", m}, {"sources", s.sources}}.dump() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"iGSM-style problem generator, retry augmenter, verifier and decoding harness"};
  app.require_subcommand(1);

  GenArgs ga;
  auto* gen = app.add_subcommand("gen", "generate problems as JSONL records");
  gen->add_option("--preset", ga.preset, "med or hard")->check(CLI::IsMember({"med", "hard"}));
  gen->add_option("--config", ga.config, "JSON generation config");
  gen->add_option("--layout", ga.layout, "pq or qp")->check(CLI::IsMember({"pq", "qp"}));
  gen->add_option("--op", ga.op, "exact op");
  gen->add_option("--op-range", ga.op_range, "op range A..B");
  gen->add_option("--split", ga.split, "default op range when none is given: train or eval");
  gen->add_flag("--reask", ga.reask, "resample the query after generation");
  gen->add_option("--n", ga.n, "number of problems");
  gen->add_option("--seed", ga.seed, "base seed");
  gen->add_option("--threads", ga.threads, "worker threads (0: all cores)");
  gen->add_option("--out", ga.out, "output file (default stdout)");

  AugmentArgs aa;
  auto* aug = app.add_subcommand("augment", "insert retry events into generated solutions");
  aug->add_option("--in", aa.in, "gen records (default stdin)");
  aug->add_option("--out", aa.out, "output file (default stdout)");
  aug->add_option("--mode", aa.mode, "retry, weak or miss")->check(CLI::IsMember({"retry", "weak", "miss"}));
  aug->add_option("--retry-rate", aa.retry_rate, "per-position insertion probability");
  aug->add_option("--mask", aa.mask, "emit label-mask spans: on or off");
  aug->add_flag("--whole-sentence", aa.whole_sentence, "weak mode: insert the entire later sentence");
  aug->add_option("--seed", aa.seed, "base seed");
  aug->add_option("--threads", aa.threads, "worker threads (0: all cores)");

  VerifyArgs va;
  auto* ver = app.add_subcommand("verify", "verify candidate solutions");
  ver->add_option("--in", va.in, "records (default stdin)");
  ver->add_option("--out", va.out, "output file (default stdout)");
  ver->add_flag("--aggregate", va.aggregate, "emit one aggregate stats object");
  ver->add_flag("--tolerant-retry", va.tolerant, "retries of computable parameters do not fail");
  ver->add_flag("--require-answer", va.require_answer, "require an Answer sentence");
  ver->add_option("--threads", va.threads, "worker threads (0: all cores)");

  EvalArgs ea;
  auto* ev = app.add_subcommand("eval", "decode generated problems with the synthetic policy and score them");
  ev->add_option("--preset", ea.preset, "med or hard")->check(CLI::IsMember({"med", "hard"}));
  ev->add_option("--config", ea.config, "JSON generation config");
  ev->add_option("--layout", ea.layout, "pq or qp")->check(CLI::IsMember({"pq", "qp"}));
  ev->add_option("--op", ea.op, "exact op");
  ev->add_option("--op-range", ea.op_range, "op range A..B (default: preset eval ops)");
  ev->add_option("--mode", ea.mode, "greedy, multinomial, beam or retry")
      ->check(CLI::IsMember({"greedy", "multinomial", "beam", "retry"}));
  ev->add_option("--beam", ea.beam, "beam width");
  ev->add_option("--max-retries", ea.max_retries, "retry budget per solution");
  ev->add_flag("--per-sentence", ea.per_sentence, "retry budget per sentence instead");
  ev->add_option("--detector-accuracy", ea.detector_accuracy, "detector accuracy in [0, 1]");
  ev->add_option("--detector", ea.detector, "version1, version2, versionP or versionP50")
      ->check(CLI::IsMember({"version1", "version2", "versionP", "versionP50"}));
  ev->add_option("--policy-error-rate", ea.policy_error_rate, "synthetic policy error rate q");
  ev->add_option("--max-tokens", ea.max_tokens, "token budget for prompt plus solution");
  ev->add_option("--n", ea.n, "number of problems");
  ev->add_option("--seed", ea.seed, "base seed");
  ev->add_option("--threads", ea.threads, "worker threads (0: all cores)");
  ev->add_option("--out", ea.out, "output file (default stdout)");

  PackArgs pa;
  auto* pk = app.add_subcommand("pack", "tokenize and pack records into training sequences");
  pk->add_option("--in", pa.in, "gen or augment records (default stdin)");
  pk->add_option("--out", pa.out, "output file; bin writes PATH and PATH.mask");
  pk->add_option("--preset", pa.preset, "default context length source")->check(CLI::IsMember({"med", "hard"}));
  pk->add_option("--context-len", pa.context_len, "tokens per sequence");
  pk->add_option("--format", pa.format, "jsonl or bin");
  pk->add_option("--mask", pa.mask, "carry label masks: on or off");
  pk->add_option("--seed", pa.seed, "shuffle seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*gen) return run_gen(ga);
    if (*aug) return run_augment(aa);
    if (*ver) return run_verify(va);
    if (*ev) return run_eval(ea);
    if (*pk) return run_pack(pa);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
