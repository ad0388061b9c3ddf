#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <iterator>
#include <sstream>

#include "veritas/error.hpp"
#include "veritas/experiment.hpp"
#include "veritas/ngram.hpp"
#include "veritas/rng.hpp"

using namespace veritas;

namespace {

TokenSeq toks(std::string_view s) { return tokenize(s); }

// Independent occurrence counter: slides over the raw lines of the text.
std::uint64_t count_in_text(std::string_view text, const TokenSeq& needle) {
  std::uint64_t n = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    const TokenSeq s{std::istream_iterator<std::string>(words), {}};
    if (s.size() < needle.size()) continue;
    for (std::size_t i = 0; i + needle.size() <= s.size(); ++i)
      if (std::equal(needle.begin(), needle.end(), s.begin() + static_cast<std::ptrdiff_t>(i))) ++n;
  }
  return n;
}

std::uint64_t ends_sentence(const Corpus& c, const TokenSeq& ctx) {
  std::uint64_t n = 0;
  for (const auto& s : c.sentences)
    if (s.size() >= ctx.size() && std::equal(ctx.begin(), ctx.end(), s.end() - static_cast<std::ptrdiff_t>(ctx.size())))
      ++n;
  return n;
}

}  // namespace

TEST_CASE("ingest examples") {
  const auto ab = ingest("a b", {'\n', 2});
  CHECK(ab.table.count(toks("a")) == 1);
  CHECK(ab.table.count(toks("b")) == 1);
  CHECK(ab.table.count(toks("a b")) == 1);
  CHECK(ab.table.base_count() == 2);
  CHECK(ab.table.count(TokenSeq{}) == 2);

  const auto aaa = ingest("a a a", {'\n', 2});
  CHECK(aaa.table.count(toks("a")) == 3);
  CHECK(aaa.table.count(toks("a a")) == 2);
  CHECK(aaa.table.base_count() == 3);
  CHECK_THROWS_AS(aaa.table.count(toks("a a a")), DomainError);

  CHECK_THROWS_AS(ingest("", {'\n', 2}), EmptyCorpus);
  CHECK_THROWS_AS(ingest("\n  \n\t\n", {'\n', 2}), EmptyCorpus);
  CHECK_THROWS_AS(ingest("a b", {'\n', 0}), DomainError);
}

TEST_CASE("ingest rejects invalid UTF-8 with the byte offset") {
  const std::string bad = std::string("ok ") + '\xC3' + '(';
  try {
    ingest(bad, {'\n', 2});
    FAIL("expected EncodingError");
  } catch (const EncodingError& e) {
    CHECK(e.offset() == 3);
  }
  CHECK_THROWS_AS(ingest(std::string("a \xED\xA0\x80"), {'\n', 2}), EncodingError);  // surrogate
  CHECK_THROWS_AS(ingest(std::string("a \xC0\xAF"), {'\n', 2}), EncodingError);      // overlong
  CHECK_NOTHROW(ingest("caf\xC3\xA9 \xE2\x80\xA6", {'\n', 2}));
}

TEST_CASE("sentences do not share n-grams") {
  const auto r = ingest("a b\nc d", {'\n', 2});
  CHECK(r.table.count(toks("b c")) == 0);
  CHECK(r.corpus.sentences.size() == 2);
  CHECK(r.corpus.total_token_count == 4);
  CHECK(ingest("a b;c d", {';', 2}).corpus.sentences.size() == 2);
}

TEST_CASE("conditional_prob") {
  const auto r = ingest("a b", {'\n', 2});
  CHECK(conditional_prob(r.table, "b", toks("a")) == Rational(1));
  CHECK(conditional_prob(r.table, "a", TokenSeq{}) == Rational(1, 2));
  CHECK(conditional_prob(r.table, "z", toks("a")) == Rational(0));
  CHECK_THROWS_AS(conditional_prob(r.table, "a", toks("z")), ZeroContext);
  CHECK_THROWS_AS(conditional_prob(r.table, "a", toks("a b")), DomainError);
}

TEST_CASE("sentence_prob") {
  const auto r = ingest("a b", {'\n', 2});
  CHECK(sentence_prob(r.table, toks("a b")) == Rational(1, 2));
  CHECK(sentence_prob(r.table, toks("z b")) == Rational(0));
  CHECK(sentence_prob(r.table, toks("b a")) == Rational(0));
  CHECK_THROWS_AS(sentence_prob(r.table, TokenSeq{}), DomainError);
  CHECK_THROWS_AS(sentence_prob(r.table, toks("a b a")), DomainError);

  const auto rep = direct_observation_check(r.table, r.corpus, toks("a b"));
  CHECK(rep.chain_value == Rational(1, 2));
  CHECK(rep.brute_force_value == Rational(1, 2));
  CHECK(rep.equal);

  const auto three = ingest("x\ny\nz", {'\n', 1});
  Rational total = 0;
  for (const char* t : {"x", "y", "z"}) {
    const auto p = sentence_prob(three.table, toks(t));
    CHECK(p == Rational(1, 3));
    total += p;
  }
  CHECK(total == Rational(1));

  const auto freq = ingest("a b a\na c", {'\n', 2});
  CHECK(sentence_prob(freq.table, toks("a")) == Rational(3, 5));
}

TEST_CASE("bundled corpus file matches the embedded copy") {
  std::ifstream in(VERITAS_TOY_CORPUS, std::ios::binary);
  REQUIRE(in);
  const std::string text{std::istreambuf_iterator<char>(in), {}};
  CHECK(text == toy_corpus());
  CHECK(text.find("\xE2\x80\xA6") != std::string::npos);
}

TEST_CASE("toy corpus properties") {
  const std::string text{toy_corpus()};
  std::size_t longest = 0;
  for (const auto& s : ingest(text, {'\n', 1}).corpus.sentences) longest = std::max(longest, s.size());
  const auto [corpus, table] = ingest(text, {'\n', longest});

  SUBCASE("counts match an independent counter") {
    for (const auto& [seq, n] : table.counts()) CHECK(n == count_in_text(text, seq));
  }

  SUBCASE("telescoping on every sentence and every sentence prefix") {
    for (const auto& s : corpus.sentences) {
      for (std::size_t len = 1; len <= s.size(); ++len) {
        const TokenSeq prefix(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(len));
        CHECK(sentence_prob(table, prefix) == Rational(count_in_text(text, prefix), corpus.total_token_count));
      }
      CHECK(direct_observation_check(table, corpus, s).equal);
    }
  }

  SUBCASE("per-context normalization with the sentence-final deficit") {
    std::vector<TokenSeq> contexts{TokenSeq{}};
    for (const auto& [seq, n] : table.counts())
      if (seq.size() < table.n_max()) contexts.push_back(seq);
    for (const auto& ctx : contexts) {
      const auto c = table.count(ctx);
      REQUIRE(c > 0);
      std::uint64_t joint = 0;
      Rational sum = 0;
      for (const auto& [next, n] : table.continuations(ctx)) {
        joint += n;
        sum += conditional_prob(table, next, ctx);
      }
      const std::uint64_t deficit = ctx.empty() ? 0 : ends_sentence(corpus, ctx);
      CHECK(joint + deficit == c);
      CHECK(sum == Rational(c - deficit, c));
      if (deficit == 0) CHECK(sum == Rational(1));
    }
  }

  SUBCASE("monotonicity and finiteness") {
    for (const auto& [seq, n] : table.counts()) {
      const TokenSeq prefix(seq.begin(), seq.end() - 1);
      CHECK(table.count(prefix) >= n);
    }
    std::uint64_t bound = 0;
    for (const auto& s : corpus.sentences)
      for (std::size_t k = 1; k <= table.n_max(); ++k) bound += s.size() >= k ? s.size() - k + 1 : 0;
    CHECK(table.size() <= bound);
  }

  SUBCASE("random in-corpus sentences and out-of-corpus sentences") {
    Rng rng = Rng::from_seed(17);
    for (int i = 0; i < 100; ++i) {
      const auto& s = corpus.sentences[rng.below(corpus.sentences.size())];
      const auto start = rng.below(s.size());
      const auto len = 1 + rng.below(s.size() - start);
      const TokenSeq sub(s.begin() + static_cast<std::ptrdiff_t>(start),
                         s.begin() + static_cast<std::ptrdiff_t>(start + len));
      const auto rep = direct_observation_check(table, corpus, sub);
      CHECK(rep.equal);
      CHECK(rep.chain_value > 0);
    }
    const auto missing = direct_observation_check(table, corpus, toks("zebra the cat"));
    CHECK(missing.equal);
    CHECK(missing.chain_value == 0);
  }
}

TEST_CASE("table TSV") {
  const auto r = ingest("a b", {'\n', 2});
  std::ostringstream os;
  write_table_tsv(os, r.table);
  CHECK(os.str() == "a\t1\na b\t1\nb\t1\n");
}
