#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "veritas/prob.hpp"

namespace veritas {

using Token = std::string;
using TokenSeq = std::vector<Token>;

// A complete corpus: every sentence in use, one token sequence each.
// "…" is an ordinary token.
struct Corpus {
  std::vector<TokenSeq> sentences;
  std::set<Token> vocabulary;
  std::uint64_t total_token_count = 0;
};

// Occurrence counts of every contiguous k-gram (1 <= k <= n_max) inside a
// sentence. base_count is C(w_0), the total number of tokens.
class NGramTable {
 public:
  NGramTable(std::size_t n_max, std::uint64_t base_count,
             std::map<TokenSeq, std::uint64_t> counts)
      : n_max_(n_max), base_count_(base_count), counts_(std::move(counts)) {}

  // 0 for sequences never seen; base_count for the empty sequence.
  // Throws DomainError for sequences longer than n_max.
  std::uint64_t count(std::span<const Token> seq) const;

  std::size_t n_max() const noexcept { return n_max_; }
  std::uint64_t base_count() const noexcept { return base_count_; }
  const std::map<TokenSeq, std::uint64_t>& counts() const noexcept { return counts_; }
  std::size_t size() const noexcept { return counts_.size(); }

  // Observed next tokens of a context with their joint counts C(context.next).
  std::map<Token, std::uint64_t> continuations(std::span<const Token> context) const;

 private:
  std::size_t n_max_;
  std::uint64_t base_count_;
  std::map<TokenSeq, std::uint64_t> counts_;
};

struct IngestConfig {
  char sentence_delimiter = '\n';
  std::size_t n_max = 3;
};

struct Ingested {
  Corpus corpus;
  NGramTable table;
};

// One sentence per delimiter-separated record, tokens split on ASCII
// whitespace; blank records are skipped. N-grams never cross sentences.
// Throws EncodingError for invalid UTF-8, EmptyCorpus when no tokens remain,
// DomainError for n_max == 0.
Ingested ingest(std::string_view text, const IngestConfig& config);

TokenSeq tokenize(std::string_view sentence);

// C(context.next) / C(context); C(empty) = base_count.
// Throws DomainError when context.size() >= n_max, ZeroContext when C(context) = 0.
Rational conditional_prob(const NGramTable& table, const Token& next, std::span<const Token> context);

// Chain rule prod_k P(w_k | w_1..w_{k-1}); stops at the first zero factor.
// Throws DomainError for an empty sentence or one longer than n_max.
Rational sentence_prob(const NGramTable& table, std::span<const Token> sentence);

struct ObservationReport {
  Rational chain_value;
  Rational brute_force_value;
  bool equal = false;
};

// Compares the chain product with C(S)/C(w_0) counted directly on the raw
// corpus sentences, without the table.
ObservationReport direct_observation_check(const NGramTable& table, const Corpus& corpus,
                                           std::span<const Token> sentence);

// Sorted `tokens<TAB>count`, tokens joined by single spaces.
void write_table_tsv(std::ostream& os, const NGramTable& table);

std::string join_tokens(std::span<const Token> seq);

}  // namespace veritas
