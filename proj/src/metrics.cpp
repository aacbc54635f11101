// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#include "mcbench/metrics.hpp"

#include <cmath>
#include <unordered_set>

#include "mcbench/errors.hpp"

namespace mcbench {
namespace {

// Counts distinct contiguous n-grams by joining tokens with an unlikely
// separator. Tokens are opaque strings, so the separator only needs to make
// the join injective; \x1f (unit separator) never appears in sane token text
// and collisions would require a token to embed it.
std::size_t distinct_ngrams(const TokenSequence& tokens, std::size_t n) {
  std::unordered_set<std::string> seen;
  for (std::size_t start = 0; start + n <= tokens.size(); ++start) {
    std::string key;
    for (std::size_t k = 0; k < n; ++k) {
      if (k > 0) key.push_back('\x1f');
      key += tokens[start + k];
    }
    seen.insert(std::move(key));
  }
  return seen.size();
}

double mean_logprob(const LogProbSequence& logprobs) {
  if (logprobs.empty()) {
    throw Error(ErrorCode::EmptySequence, "log-probability sequence is empty");
  }
  double sum = 0.0;
  for (double lp : logprobs) {
    if (!std::isfinite(lp)) {
      throw Error(ErrorCode::NonFiniteValue, "log-probability entry is not finite");
    }
    if (lp > 0.0) {
      throw Error(ErrorCode::OutOfRangeInput,
                  "log-probability entry is positive (probabilities must be <= 1)");
    }
    sum += lp;
  }
  return sum / static_cast<double>(logprobs.size());
}

}  // namespace

double diversity(const TokenSequence& continuation) {
  if (continuation.size() < 5) {
    throw Error(ErrorCode::SequenceTooShort,
                "diversity needs at least 5 tokens, got " +
                    std::to_string(continuation.size()));
  }
  double product = 1.0;
  for (std::size_t n = 2; n <= 4; ++n) {
    std::size_t total = continuation.size() - n + 1;
    std::size_t distinct = distinct_ngrams(continuation, n);
    product *= static_cast<double>(distinct) / static_cast<double>(total);
  }
  return product;
}

double coherence(const LogProbSequence& logprobs) { return mean_logprob(logprobs); }

double perplexity(const LogProbSequence& logprobs) {
  return std::exp(-mean_logprob(logprobs));
}

}  // namespace mcbench
