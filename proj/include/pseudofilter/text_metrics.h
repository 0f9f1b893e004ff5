// Copyright 2026  The pseudofilter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pseudofilter {

// One token per Unicode scalar value, stored as its UTF-8 encoding.
// Holds no whitespace tokens.
class CharSeq {
 public:
  CharSeq() = default;
  explicit CharSeq(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {}

  const std::vector<std::string> &tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  const std::string &operator[](std::size_t i) const { return tokens_[i]; }

  auto begin() const { return tokens_.begin(); }
  auto end() const { return tokens_.end(); }

  // Concatenation of all tokens (no separators).
  std::string Join() const;

  friend bool operator==(const CharSeq &, const CharSeq &) = default;
  friend auto operator<=>(const CharSeq &, const CharSeq &) = default;

 private:
  std::vector<std::string> tokens_;
};

struct AlignmentStats {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::size_t ref_len = 0;

  std::size_t Errors() const { return substitutions + deletions + insertions; }

  AlignmentStats &operator+=(const AlignmentStats &other) {
    substitutions += other.substitutions;
    deletions += other.deletions;
    insertions += other.insertions;
    ref_len += other.ref_len;
    return *this;
  }

  friend bool operator==(const AlignmentStats &, const AlignmentStats &) = default;
};

// NFC-normalizes `text`, drops every whitespace scalar and splits the rest
// into one token per scalar. Throws EncodingError on invalid UTF-8.
CharSeq Tokenize(std::string_view text);

// Minimum-cost unit-cost alignment of `hypothesis` against `reference`.
// The S/D/I split is made deterministic by preferring substitution (or
// match), then deletion, then insertion while tracing back from the end.
AlignmentStats EditDistance(const CharSeq &reference, const CharSeq &hypothesis);

// (S + D + I) / ref_len, not clamped. Throws UndefinedCerError if ref_len is 0.
double Cer(const AlignmentStats &stats);

}  // namespace pseudofilter
