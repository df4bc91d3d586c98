//
// molrl - Copyright 2026 The molrl Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MOLRL_TOKENS_HPP_
#define MOLRL_TOKENS_HPP_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace molrl {

/// Stored length of every encoded sequence, start and end tokens included.
inline constexpr int kMaxSequenceLength = 140;

inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kStartToken = "G";
inline constexpr std::string_view kEndToken = "E";

/// Rewrites the two-letter halogens to their single-character tokens
/// (Cl -> R, Br -> L).
std::string normalize_smiles(std::string_view text);
/// Inverse of normalize_smiles.
std::string denormalize_smiles(std::string_view text);

/// Token alphabet. Index 0 is always the pad token; `G` and `E` follow.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Builds `<pad>`, `G`, `E` plus every character observed in the
  /// normalized corpus strings, in byte order.
  static Vocabulary from_corpus(std::span<const std::string> smiles);
  /// Validates the token list (pad first, G/E present, all unique).
  static Vocabulary from_tokens(std::vector<std::string> tokens);
  /// One token per line; line number - 1 is the index.
  static Vocabulary from_text(std::string_view text);
  static Vocabulary load(const std::filesystem::path &path);

  std::string to_text() const;
  void save(const std::filesystem::path &path) const;

  int size() const { return static_cast<int>(tokens_.size()); }
  int pad() const { return 0; }
  int start() const { return start_; }
  int end() const { return end_; }

  std::optional<int> find(std::string_view token) const;
  const std::string &token(int id) const { return tokens_.at(id); }
  const std::vector<std::string> &tokens() const { return tokens_; }

  bool operator==(const Vocabulary &other) const {
    return tokens_ == other.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::map<std::string, int, std::less<>> lookup_;
  int start_ = -1;
  int end_ = -1;
};

/// Integer-encoded SMILES: `G`, tokens, `E`, then pad (id 0) up to
/// kMaxSequenceLength.
struct TokenSequence {
  std::vector<int> ids = std::vector<int>(kMaxSequenceLength, 0);
  int length = 0;

  std::span<const int> logical() const {
    return std::span<const int>(ids).first(length);
  }

  bool operator==(const TokenSequence &) const = default;
};

/// Pads `logical_ids` (which must fit in kMaxSequenceLength) with id 0.
TokenSequence make_sequence(std::span<const int> logical_ids);

TokenSequence tokenize(std::string_view text, const Vocabulary &vocab);
std::string detokenize(const TokenSequence &seq, const Vocabulary &vocab);

}  // namespace molrl

#endif  // MOLRL_TOKENS_HPP_
