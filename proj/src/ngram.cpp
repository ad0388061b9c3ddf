#include "veritas/ngram.hpp"

#include <ostream>

#include "veritas/error.hpp"

namespace veritas {

namespace {

// Returns the offset of the first invalid byte, or npos.
std::size_t find_invalid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len;
    std::uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > s.size()) return i;
    for (std::size_t k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) return i;
      cp = (cp << 6) | (cc & 0x3F);
    }
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return i;
    i += len;
  }
  return std::string_view::npos;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f' || c == '\n'; }

}  // namespace

std::uint64_t NGramTable::count(std::span<const Token> seq) const {
  if (seq.empty()) return base_count_;
  if (seq.size() > n_max_) throw DomainError("n-gram longer than the table order");
  const auto it = counts_.find(TokenSeq(seq.begin(), seq.end()));
  return it == counts_.end() ? 0 : it->second;
}

std::map<Token, std::uint64_t> NGramTable::continuations(std::span<const Token> context) const {
  if (context.size() >= n_max_) throw DomainError("context too long for the table order");
  std::map<Token, std::uint64_t> out;
  TokenSeq key(context.begin(), context.end());
  // Extensions of `context` sort directly after it; scan while the prefix matches.
  for (auto it = counts_.upper_bound(key); it != counts_.end(); ++it) {
    const auto& seq = it->first;
    if (seq.size() < key.size() || !std::equal(key.begin(), key.end(), seq.begin())) break;
    if (seq.size() == key.size() + 1) out.emplace(seq.back(), it->second);
  }
  return out;
}

TokenSeq tokenize(std::string_view sentence) {
  TokenSeq tokens;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && is_space(sentence[i])) ++i;
    const std::size_t start = i;
    while (i < sentence.size() && !is_space(sentence[i])) ++i;
    if (i > start) tokens.emplace_back(sentence.substr(start, i - start));
  }
  return tokens;
}

Ingested ingest(std::string_view text, const IngestConfig& config) {
  if (config.n_max == 0) throw DomainError("n_max must be >= 1");
  if (const auto bad = find_invalid_utf8(text); bad != std::string_view::npos)
    throw EncodingError(bad);

  Corpus corpus;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find(config.sentence_delimiter, start);
    if (end == std::string_view::npos) end = text.size();
    auto tokens = tokenize(text.substr(start, end - start));
    if (!tokens.empty()) {
      corpus.total_token_count += tokens.size();
      corpus.vocabulary.insert(tokens.begin(), tokens.end());
      corpus.sentences.push_back(std::move(tokens));
    }
    start = end + 1;
  }
  if (corpus.total_token_count == 0) throw EmptyCorpus();

  std::map<TokenSeq, std::uint64_t> counts;
  for (const auto& s : corpus.sentences)
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t k = 1; k <= config.n_max && i + k <= s.size(); ++k)
        ++counts[TokenSeq(s.begin() + i, s.begin() + i + k)];

  NGramTable table(config.n_max, corpus.total_token_count, std::move(counts));
  return {std::move(corpus), std::move(table)};
}

Rational conditional_prob(const NGramTable& table, const Token& next, std::span<const Token> context) {
  if (context.size() >= table.n_max()) throw DomainError("context length must be < n_max");
  const std::uint64_t denominator = table.count(context);
  if (denominator == 0) throw ZeroContext(join_tokens(context));
  TokenSeq joint(context.begin(), context.end());
  joint.push_back(next);
  return Rational(table.count(joint), denominator);
}

Rational sentence_prob(const NGramTable& table, std::span<const Token> sentence) {
  if (sentence.empty()) throw DomainError("sentence_prob: empty sentence");
  if (sentence.size() > table.n_max())
    throw DomainError("sentence longer than n_max; no Markov truncation in the exact model");
  Rational p = 1;
  for (std::size_t k = 0; k < sentence.size(); ++k) {
    const Rational factor = conditional_prob(table, sentence[k], sentence.first(k));
    if (factor == 0) return Rational(0);
    p *= factor;
  }
  return p;
}

ObservationReport direct_observation_check(const NGramTable& table, const Corpus& corpus,
                                           std::span<const Token> sentence) {
  ObservationReport r;
  r.chain_value = sentence_prob(table, sentence);

  std::uint64_t words = 0;
  std::uint64_t occurrences = 0;
  for (const auto& s : corpus.sentences) {
    words += s.size();
    if (s.size() < sentence.size()) continue;
    for (std::size_t i = 0; i + sentence.size() <= s.size(); ++i)
      if (std::equal(sentence.begin(), sentence.end(), s.begin() + i)) ++occurrences;
  }
  r.brute_force_value = Rational(occurrences, words);
  r.equal = r.chain_value == r.brute_force_value;
  return r;
}

std::string join_tokens(std::span<const Token> seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += seq[i];
  }
  return out;
}

void write_table_tsv(std::ostream& os, const NGramTable& table) {
  for (const auto& [seq, count] : table.counts()) os << join_tokens(seq) << '\t' << count << '\n';
}

}  // namespace veritas
