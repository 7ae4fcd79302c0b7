#pragma once

#include <array>
#include <cstring>
#include <istream>
#include <optional>
#include <span>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "igsm/augment.hpp"
#include "igsm/vocabulary.hpp"

namespace igsm {

//---------------------------------------------------------------------------
// Tokenizer
//---------------------------------------------------------------------------

struct TokenStream {
  std::vector<std::uint32_t> ids;
  std::vector<bool> mask;            // true: excluded from the loss
  std::vector<CharSpan> offsets;     // source character range of each id
};

inline constexpr std::string_view kSep = "[SEP]";

inline constexpr std::array<std::string_view, 20> kTemplateWords{
    "The", "number", "of", "each", "equals", "more", "than", "times", "as", "much",
    "the", "sum", "and", "difference", "Define", "so", "Answer", "How", "many", "does"};

// Closed vocabulary over the sentence grammar: specials, punctuation,
// numerals 0-22, single letters, "'s" and the words of the vocabulary packs.
class Tokenizer {
 public:
  explicit Tokenizer(const VocabularyPacks& packs) {
    add(kSep);
    add(kBack);
    for (std::string_view p : {".", ",", ";", ":", "?", "=", "+", "-", "*", "'s"}) add(p);
    for (int i = 0; i < kModulus; ++i) add(std::to_string(i));
    for (char c : kLetterPool) add(std::string(1, c));
    for (auto w : kTemplateWords) add(w);
    add("have");
    for (const auto& w : packs.words()) add(w);
  }

  static const Tokenizer& builtin() {
    static const Tokenizer t(VocabularyPacks::builtin());
    return t;
  }

  std::size_t vocab_size() const noexcept { return tokens_.size(); }
  std::uint32_t sep_id() const noexcept { return 0; }
  std::uint32_t back_id() const noexcept { return 1; }
  const std::string& token(std::uint32_t id) const {
    if (id >= tokens_.size()) throw LookupError("token id " + std::to_string(id) + " is out of range");
    return tokens_[id];
  }
  std::optional<std::uint32_t> find(std::string_view t) const {
    auto it = ids_.find(std::string(t));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  TokenStream tokenize(std::string_view text, std::span<const CharSpan> mask = {}) const {
    TokenStream out;
    std::size_t i = 0;
    auto emit = [&](std::size_t b, std::size_t e) {
      const auto id = find(text.substr(b, e - b));
      if (!id) throw TokenizeError(b, "unknown token '" + std::string(text.substr(b, e - b)) + "'");
      out.ids.push_back(*id);
      out.offsets.push_back(CharSpan{b, e});
      bool masked = false;
      for (const auto& m : mask) masked = masked || (m.begin <= b && e <= m.end);
      out.mask.push_back(masked);
    };
    while (i < text.size()) {
      const char c = text[i];
      if (c == ' ' || c == '\n') {
        ++i;
      } else if (c == '[') {
        const std::size_t close = text.find(']', i);
        if (close == std::string_view::npos) throw TokenizeError(i, "unterminated special token");
        emit(i, close + 1);
        i = close + 1;
      } else if (c == '\'') {
        if (i + 1 >= text.size() || text[i + 1] != 's') throw TokenizeError(i, "stray apostrophe");
        emit(i, i + 2);
        i += 2;
      } else if (std::isalnum(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text.size() && std::isalnum(static_cast<unsigned char>(text[j]))) ++j;
        emit(i, j);
        i = j;
      } else {
        emit(i, i + 1);
        ++i;
      }
    }
    return out;
  }

  // Canonical spacing: one space between tokens, none before . , ; : ? 's.
  std::string detokenize(std::span<const std::uint32_t> ids) const {
    std::string out;
    for (auto id : ids) {
      const std::string& t = token(id);
      const bool tight = t == "." || t == "," || t == ";" || t == ":" || t == "?" || t == "'s";
      if (!out.empty() && !tight) out += ' ';
      out += t;
    }
    return out;
  }

 private:
  void add(std::string_view t) {
    if (ids_.count(std::string(t))) return;
    ids_.emplace(std::string(t), static_cast<std::uint32_t>(tokens_.size()));
    tokens_.emplace_back(t);
  }

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> ids_;
};

//---------------------------------------------------------------------------
// Packing
//---------------------------------------------------------------------------

// A problem with its (possibly augmented) solution, ready to pack.
struct CorpusSample {
  std::string text;
  std::vector<CharSpan> mask_spans;
};

// Prompt, then the solution; solution-relative spans are shifted.
inline CorpusSample make_sample(const Problem& prob, std::string_view solution, std::span<const CharSpan> spans = {}) {
  CorpusSample s;
  s.text = prob.text();
  const std::size_t shift = s.text.size() + 1;
  s.text += ' ';
  s.text += solution;
  for (const auto& sp : spans) s.mask_spans.push_back(CharSpan{sp.begin + shift, sp.end + shift});
  return s;
}

struct PackedSequence {
  std::vector<std::uint32_t> ids;
  std::vector<bool> mask;
  std::vector<std::size_t> sources;  // input indices with at least one token here
  friend bool operator==(const PackedSequence&, const PackedSequence&) = default;
};

// Shuffles, drops samples longer than context_len on their own, then
// concatenates "sample [SEP]" greedily; the sample crossing the boundary is
// truncated on the right and the next sequence starts with the next sample.
inline std::vector<PackedSequence> pack(std::span<const CorpusSample> samples, const Tokenizer& tok,
                                        std::size_t context_len, std::uint64_t seed) {
  if (context_len == 0) throw ConfigError("context_len must be positive");
  std::vector<std::size_t> order(samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(derive_seed(seed, 0x5041ull));
  rng.shuffle(order);

  std::vector<PackedSequence> out;
  PackedSequence cur;
  auto flush = [&] {
    if (!cur.ids.empty()) out.push_back(std::move(cur));
    cur = PackedSequence{};
  };
  for (auto idx : order) {
    TokenStream ts = tok.tokenize(samples[idx].text, samples[idx].mask_spans);
    if (ts.ids.size() > context_len) continue;
    ts.ids.push_back(tok.sep_id());
    ts.mask.push_back(false);
    const std::size_t room = context_len - cur.ids.size();
    const std::size_t take = std::min(room, ts.ids.size());
    cur.ids.insert(cur.ids.end(), ts.ids.begin(), ts.ids.begin() + static_cast<std::ptrdiff_t>(take));
    cur.mask.insert(cur.mask.end(), ts.mask.begin(), ts.mask.begin() + static_cast<std::ptrdiff_t>(take));
    cur.sources.push_back(idx);
    if (cur.ids.size() == context_len) flush();
  }
  flush();
  return out;
}

// Evaluation sets are filtered on the error-free solution length.
inline bool fits_eval_context(const Problem& prob, const SolutionScript& canonical, const Tokenizer& tok,
                              std::size_t context_len) {
  return tok.tokenize(make_sample(prob, canonical.text()).text).ids.size() <= context_len;
}

//---------------------------------------------------------------------------
// Binary format (little-endian)
//
//   ids:  "IGSMTOK1" u32 version=1 u32 vocab_size u64 count
//         count x { u32 length, length x u32 id }
//   mask: "IGSMMSK1" u32 version=1 u32 reserved=0 u64 count
//         count x { u32 length, ceil(length/8) bytes, bit i = token i, LSB first }
//---------------------------------------------------------------------------

namespace detail {

template <typename T>
void put_le(std::ostream& os, T v) {
  unsigned char b[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(std::istream& is) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof(T))) throw ConfigError("truncated binary corpus");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return static_cast<T>(v);
}

inline void expect_magic(std::istream& is, std::string_view magic) {
  char m[8];
  if (!is.read(m, 8) || std::string_view(m, 8) != magic) throw ConfigError("bad magic, expected " + std::string(magic));
}

}  // namespace detail

inline constexpr std::uint32_t kBinaryVersion = 1;

inline void write_ids(std::ostream& os, std::span<const PackedSequence> seqs, std::size_t vocab_size) {
  os.write("IGSMTOK1", 8);
  detail::put_le<std::uint32_t>(os, kBinaryVersion);
  detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(vocab_size));
  detail::put_le<std::uint64_t>(os, seqs.size());
  for (const auto& s : seqs) {
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(s.ids.size()));
    for (auto id : s.ids) detail::put_le<std::uint32_t>(os, id);
  }
}

inline void write_mask(std::ostream& os, std::span<const PackedSequence> seqs) {
  os.write("IGSMMSK1", 8);
  detail::put_le<std::uint32_t>(os, kBinaryVersion);
  detail::put_le<std::uint32_t>(os, 0);
  detail::put_le<std::uint64_t>(os, seqs.size());
  for (const auto& s : seqs) {
    detail::put_le<std::uint32_t>(os, static_cast<std::uint32_t>(s.mask.size()));
    std::vector<char> bytes((s.mask.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < s.mask.size(); ++i) {
      if (s.mask[i]) bytes[i / 8] = static_cast<char>(bytes[i / 8] | (1 << (i % 8)));
    }
    os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  }
}

// Reads an ids file and its mask sidecar back; sources are not stored.
inline std::vector<PackedSequence> read_packed(std::istream& ids, std::istream& mask) {
  detail::expect_magic(ids, "IGSMTOK1");
  if (detail::get_le<std::uint32_t>(ids) != kBinaryVersion) throw ConfigError("unsupported corpus version");
  detail::get_le<std::uint32_t>(ids);
  const auto n = detail::get_le<std::uint64_t>(ids);
  detail::expect_magic(mask, "IGSMMSK1");
  if (detail::get_le<std::uint32_t>(mask) != kBinaryVersion) throw ConfigError("unsupported mask version");
  detail::get_le<std::uint32_t>(mask);
  if (detail::get_le<std::uint64_t>(mask) != n) throw ConfigError("mask sidecar does not match the ids file");
  std::vector<PackedSequence> out(n);
  for (auto& s : out) {
    const auto len = detail::get_le<std::uint32_t>(ids);
    for (std::uint32_t i = 0; i < len; ++i) s.ids.push_back(detail::get_le<std::uint32_t>(ids));
    if (detail::get_le<std::uint32_t>(mask) != len) throw ConfigError("mask length mismatch");
    std::vector<char> bytes((len + 7) / 8);
    if (!mask.read(bytes.data(), static_cast<std::streamsize>(bytes.size()))) throw ConfigError("truncated mask sidecar");
    for (std::uint32_t i = 0; i < len; ++i) s.mask.push_back((bytes[i / 8] >> (i % 8)) & 1);
  }
  return out;
}

}  // namespace igsm
