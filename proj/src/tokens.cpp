//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "molrl/tokens.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "molrl/error.hpp"

namespace molrl {
namespace {

// Letters that carry a token meaning and cannot appear verbatim.
bool is_reserved(char c) { return c == 'G' || c == 'E' || c == 'R' || c == 'L'; }

}  // namespace

std::string normalize_smiles(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i + 1 < text.size() && text[i] == 'C' && text[i + 1] == 'l') {
      out.push_back('R');
      ++i;
    } else if (i + 1 < text.size() && text[i] == 'B' && text[i + 1] == 'r') {
      out.push_back('L');
      ++i;
    } else {
      out.push_back(text[i]);
    }
  }
  return out;
}

std::string denormalize_smiles(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 4);
  for (char c : text) {
    if (c == 'R')
      out += "Cl";
    else if (c == 'L')
      out += "Br";
    else
      out.push_back(c);
  }
  return out;
}

Vocabulary Vocabulary::from_corpus(std::span<const std::string> smiles) {
  std::set<char> seen;
  for (const auto &s : smiles)
    for (char c : normalize_smiles(s)) seen.insert(c);
  std::vector<std::string> tokens{std::string(kPadToken),
                                  std::string(kStartToken),
                                  std::string(kEndToken)};
  for (char c : seen) {
    if (c == 'G' || c == 'E') continue;
    tokens.emplace_back(1, c);
  }
  return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  Vocabulary v;
  if (tokens.empty() || tokens.front() != kPadToken)
    throw DataError("vocabulary must start with the pad token <pad>");
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) throw DataError("vocabulary contains an empty token");
    if (!v.lookup_.emplace(tokens[i], static_cast<int>(i)).second)
      throw DataError("duplicate vocabulary token '" + tokens[i] + "'");
  }
  v.tokens_ = std::move(tokens);
  auto s = v.find(kStartToken);
  auto e = v.find(kEndToken);
  if (!s || !e) throw DataError("vocabulary lacks the start/end tokens G and E");
  v.start_ = *s;
  v.end_ = *e;
  return v;
}

Vocabulary Vocabulary::from_text(std::string_view text) {
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    tokens.push_back(line);
  }
  return from_tokens(std::move(tokens));
}

Vocabulary Vocabulary::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open vocabulary file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

std::string Vocabulary::to_text() const {
  std::string out;
  for (const auto &t : tokens_) {
    out += t;
    out += '\n';
  }
  return out;
}

void Vocabulary::save(const std::filesystem::path &path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write vocabulary file " + path.string());
  out << to_text();
}

std::optional<int> Vocabulary::find(std::string_view token) const {
  auto it = lookup_.find(token);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

TokenSequence make_sequence(std::span<const int> logical_ids) {
  if (logical_ids.size() > static_cast<std::size_t>(kMaxSequenceLength))
    throw TokenError(TokenErrorKind::kTooLong, logical_ids.size(),
                     "sequence exceeds the maximum length");
  TokenSequence seq;
  std::copy(logical_ids.begin(), logical_ids.end(), seq.ids.begin());
  seq.length = static_cast<int>(logical_ids.size());
  return seq;
}

TokenSequence tokenize(std::string_view text, const Vocabulary &vocab) {
  std::vector<int> ids{vocab.start()};
  ids.reserve(text.size() + 2);
  for (std::size_t i = 0; i < text.size(); ++i) {
    std::string token(1, text[i]);
    if (is_reserved(text[i])) {
      throw TokenError(TokenErrorKind::kUnknownToken, i,
                       "reserved character '" + token + "' at position " +
                           std::to_string(i));
    }
    if (i + 1 < text.size() && text[i] == 'C' && text[i + 1] == 'l') {
      token = "R";
    } else if (i + 1 < text.size() && text[i] == 'B' && text[i + 1] == 'r') {
      token = "L";
    }
    auto id = vocab.find(token);
    if (!id) {
      throw TokenError(TokenErrorKind::kUnknownToken, i,
                       "unknown token '" + std::string(1, text[i]) +
                           "' at position " + std::to_string(i));
    }
    ids.push_back(*id);
    if (token.size() == 1 && token[0] != text[i]) ++i;
  }
  ids.push_back(vocab.end());
  if (ids.size() > static_cast<std::size_t>(kMaxSequenceLength)) {
    throw TokenError(TokenErrorKind::kTooLong, ids.size(),
                     "encoded length " + std::to_string(ids.size()) +
                         " exceeds " + std::to_string(kMaxSequenceLength));
  }
  return make_sequence(ids);
}

std::string detokenize(const TokenSequence &seq, const Vocabulary &vocab) {
  const auto ids = seq.logical();
  if (ids.empty() || ids.front() != vocab.start())
    throw TokenError(TokenErrorKind::kMalformedSequence, 0,
                     "sequence does not begin with the start token");
  std::string normalized;
  for (std::size_t i = 1; i < ids.size(); ++i) {
    const int id = ids[i];
    if (id == vocab.end()) {
      if (i + 1 != ids.size())
        throw TokenError(TokenErrorKind::kMalformedSequence, i,
                         "tokens after the end token");
      for (std::size_t j = ids.size(); j < seq.ids.size(); ++j)
        if (seq.ids[j] != vocab.pad())
          throw TokenError(TokenErrorKind::kMalformedSequence, j,
                           "non-pad id beyond the logical length");
      return denormalize_smiles(normalized);
    }
    if (id <= 0 || id >= vocab.size() || id == vocab.start())
      throw TokenError(TokenErrorKind::kMalformedSequence, i,
                       "invalid id " + std::to_string(id) + " inside sequence");
    normalized += vocab.token(id);
  }
  throw TokenError(TokenErrorKind::kMalformedSequence, ids.size(),
                   "sequence has no end token");
}

}  // namespace molrl
