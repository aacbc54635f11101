// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 the mcbench authors

#pragma once

#include <string>
#include <vector>

namespace mcbench {

/// A generated continuation as an ordered list of opaque token identifiers.
/// Tokens compare by exact equality; tokenization happens upstream.
using TokenSequence = std::vector<std::string>;

/// Per-token natural-log probabilities of a generation, each finite and <= 0.
using LogProbSequence = std::vector<double>;

/// Product over n in {2,3,4} of (distinct n-grams / total n-grams), where the
/// total count of contiguous n-grams in a length-L sequence is L - n + 1.
/// Result lies in [0,1] and equals 1 exactly when all n-grams are distinct.
/// Throws SequenceTooShort when the sequence has fewer than 5 tokens (no
/// 4-gram would exist).
double diversity(const TokenSequence& continuation);

/// Arithmetic mean of the token log-probabilities (natural log, so <= 0).
/// Throws EmptySequence on an empty input and NonFiniteValue / OutOfRangeInput
/// when an entry is not a finite log-probability.
double coherence(const LogProbSequence& logprobs);

/// exp(-mean(logprobs)); equals exp(-coherence(logprobs)) exactly and is
/// always >= 1 for valid log-probabilities.
double perplexity(const LogProbSequence& logprobs);

}  // namespace mcbench
