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

#include "pseudofilter/text_metrics.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <vector>

#include "pseudofilter/error.h"

namespace pseudofilter {

std::string CharSeq::Join() const {
  std::string out;
  for (const auto &t : tokens_) out += t;
  return out;
}

namespace {

icu::UnicodeString DecodeUtf8(std::string_view text) {
  // u_strFromUTF8 rejects ill-formed sequences, unlike UnicodeString::fromUTF8
  // which silently substitutes U+FFFD.
  UErrorCode status = U_ZERO_ERROR;
  int32_t needed = 0;
  u_strFromUTF8(nullptr, 0, &needed, text.data(), static_cast<int32_t>(text.size()), &status);
  if (status != U_BUFFER_OVERFLOW_ERROR && U_FAILURE(status)) {
    throw EncodingError("invalid UTF-8 in input text");
  }
  icu::UnicodeString out;
  status = U_ZERO_ERROR;
  UChar *buf = out.getBuffer(needed + 1);
  u_strFromUTF8(buf, needed + 1, nullptr, text.data(), static_cast<int32_t>(text.size()), &status);
  out.releaseBuffer(needed);
  if (U_FAILURE(status)) throw EncodingError("invalid UTF-8 in input text");
  return out;
}

}  // namespace

CharSeq Tokenize(std::string_view text) {
  if (text.empty()) return CharSeq();
  icu::UnicodeString decoded = DecodeUtf8(text);

  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw EncodingError("ICU NFC normalizer unavailable");
  icu::UnicodeString normalized = nfc->normalize(decoded, status);
  if (U_FAILURE(status)) throw EncodingError("NFC normalization failed");

  std::vector<std::string> tokens;
  tokens.reserve(normalized.length());
  for (int32_t i = 0; i < normalized.length();) {
    UChar32 c = normalized.char32At(i);
    i = normalized.moveIndex32(i, 1);
    if (u_isUWhiteSpace(c)) continue;
    char buf[U8_MAX_LENGTH];
    int32_t len = 0;
    U8_APPEND_UNSAFE(buf, len, c);
    tokens.emplace_back(buf, static_cast<std::size_t>(len));
  }
  return CharSeq(std::move(tokens));
}

AlignmentStats EditDistance(const CharSeq &reference, const CharSeq &hypothesis) {
  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  const std::size_t width = m + 1;
  std::vector<std::size_t> cost((n + 1) * width);
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t & { return cost[i * width + j]; };

  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      std::size_t diag = at(i - 1, j - 1) + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }

  AlignmentStats stats;
  stats.ref_len = n;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      bool same = reference[i - 1] == hypothesis[j - 1];
      if (at(i, j) == at(i - 1, j - 1) + (same ? 0 : 1)) {
        if (!same) ++stats.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++stats.deletions;
      --i;
    } else {
      ++stats.insertions;
      --j;
    }
  }
  return stats;
}

double Cer(const AlignmentStats &stats) {
  if (stats.ref_len == 0) throw UndefinedCerError("CER undefined for an empty reference");
  return static_cast<double>(stats.Errors()) / static_cast<double>(stats.ref_len);
}

}  // namespace pseudofilter
