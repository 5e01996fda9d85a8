// include/anchoralign/textnorm.h

// Copyright 2026 The anchoralign Authors.
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

#ifndef ANCHORALIGN_TEXTNORM_H_
#define ANCHORALIGN_TEXTNORM_H_

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace anchoralign {

/// How a replacement behaves once it is in the Unicode stream.
///  - kPlain:       emitted in place.
///  - kPrefixMatra: a vowel sign the legacy font stores before the consonant
///                  cluster it attaches to (short-i); moved after the cluster.
///  - kHalantForm:  a half consonant; its replacement must end in U+094D.
///  - kReph:        the superscript ra-halant the font stores after the
///                  syllable; moved in front of the cluster it crowns.
enum class RuleClass { kPlain, kPrefixMatra, kHalantForm, kReph };

const char *RuleClassName(RuleClass c);
RuleClass ParseRuleClass(std::string_view name);  // throws DomainError

struct MappingRule {
  std::string legacy;       // UTF-8
  std::string replacement;  // UTF-8
  RuleClass rule_class = RuleClass::kPlain;
};

class MappingTable {
 public:
  /// Validates: at least one rule, no duplicate legacy keys, non-empty keys,
  /// replacements decode as valid UTF-8. Throws ParseError naming the
  /// offending rule's 1-based position.
  MappingTable(std::vector<MappingRule> rules, std::string source_name);

  const std::vector<MappingRule> &rules() const { return rules_; }
  const std::string &source_name() const { return source_name_; }
  std::size_t size() const { return rules_.size(); }

  /// Index of the longest rule whose legacy sequence matches `text` at `pos`,
  /// or -1 if none does.
  long LongestMatch(std::u32string_view text, std::size_t pos) const;

  /// Legacy key of rule `i` as codepoints.
  const std::u32string &key(std::size_t i) const { return keys_[i]; }

 private:
  std::vector<MappingRule> rules_;
  std::vector<std::u32string> keys_;
  // first codepoint -> rule indices, longest key first.
  std::unordered_map<char32_t, std::vector<std::size_t>> by_first_;
  std::string source_name_;
};

/// Reads `legacy<TAB>replacement<TAB>class` lines. Lines starting with '#'
/// and blank lines are skipped.
MappingTable LoadMapping(const std::string &path);
MappingTable ParseMapping(std::istream &in, const std::string &source_name);

/// One step of the greedy scan: either a rule application or a codepoint
/// copied through unchanged (rule == -1).
struct LegacyToken {
  std::size_t pos = 0;  // codepoint offset in the input
  std::size_t len = 0;  // codepoints consumed
  long rule = -1;
};

/// Greedy longest-match-first tokenization, left to right, no backtracking.
std::vector<LegacyToken> TokenizeLegacy(std::u32string_view text,
                                        const MappingTable &table);

struct DecodeResult {
  std::string text;
  std::size_t unmatched = 0;  // codepoints that matched no rule
};

/// Converts legacy-font text to Unicode Devanagari. Total function.
/// Input bytes that are not valid UTF-8 are read as Windows-1252.
DecodeResult DecodeLegacy(std::string_view text, const MappingTable &table);

/// Reorders and composes a decoded codepoint stream. `origin` holds the rule
/// class that produced each codepoint. Exposed for tests.
std::u32string ApplyPostRules(std::u32string text,
                              std::vector<RuleClass> origin);

/// Keeps only U+0900..U+097F, space, '?', '!' and ','. Whitespace runs become
/// one space; ends are trimmed.
std::string FilterScript(std::string_view text);
bool IsAllowedCodepoint(char32_t c);

struct TextFragment {
  std::size_t index = 0;
  std::string raw;   // before script filtering
  std::string text;  // normalized Devanagari
  std::string source_id;
};

/// Splits filtered text after each run of terminators (danda, double danda,
/// '?', '!'). Empty pieces are dropped; indices are consecutive from 0.
std::vector<TextFragment> Fragmentize(std::string_view text,
                                      const std::string &source_id);

/// Full transcript path: optional legacy decode, split, per-fragment filter.
/// `raw` of each fragment holds the decoded but unfiltered piece.
/// `table` may be null for transcripts that are already Unicode.
std::vector<TextFragment> NormalizeTranscript(std::string_view transcript,
                                              const MappingTable *table,
                                              const std::string &source_id,
                                              std::size_t *unmatched = nullptr);

// UTF-8 helpers. Decoding is lenient: an invalid byte becomes the
// Windows-1252 character it would be in a legacy file.
std::u32string Utf8ToCodepoints(std::string_view s);
std::string CodepointsToUtf8(std::u32string_view s);
bool IsValidUtf8(std::string_view s);

}  // namespace anchoralign

#endif  // ANCHORALIGN_TEXTNORM_H_
