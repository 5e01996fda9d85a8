// src/textnorm.cc

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

#include "anchoralign/textnorm.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "anchoralign/error.h"

namespace anchoralign {

namespace {

constexpr char32_t kNukta = 0x093C;
constexpr char32_t kHalant = 0x094D;
constexpr char32_t kVowelSignAa = 0x093E;
constexpr char32_t kRa = 0x0930;

// Windows-1252 0x80..0x9F. Zero marks bytes undefined in the code page.
constexpr std::array<char16_t, 32> kCp1252High = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021,
    0x02C6, 0x2030, 0x0160, 0x2039, 0x0152, 0,      0x017D, 0,
    0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022, 0x2013, 0x2014,
    0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

char32_t LegacyByte(unsigned char b) {
  if (b >= 0x80 && b <= 0x9F && kCp1252High[b - 0x80] != 0)
    return kCp1252High[b - 0x80];
  return b;
}

// Returns the decoded codepoint and advances i, or returns false if the
// sequence at i is not valid UTF-8.
bool NextUtf8(std::string_view s, std::size_t &i, char32_t &out) {
  unsigned char c = s[i];
  int extra;
  char32_t cp;
  if (c < 0x80) {
    out = c;
    ++i;
    return true;
  } else if ((c & 0xE0) == 0xC0) {
    extra = 1;
    cp = c & 0x1F;
  } else if ((c & 0xF0) == 0xE0) {
    extra = 2;
    cp = c & 0x0F;
  } else if ((c & 0xF8) == 0xF0) {
    extra = 3;
    cp = c & 0x07;
  } else {
    return false;
  }
  if (i + extra >= s.size()) return false;
  for (int k = 1; k <= extra; ++k) {
    unsigned char cc = s[i + k];
    if ((cc & 0xC0) != 0x80) return false;
    cp = (cp << 6) | (cc & 0x3F);
  }
  static constexpr char32_t kMin[] = {0, 0x80, 0x800, 0x10000};
  if (cp < kMin[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF))
    return false;
  out = cp;
  i += extra + 1;
  return true;
}

bool IsConsonant(char32_t c) {
  return (c >= 0x0915 && c <= 0x0939) || (c >= 0x0958 && c <= 0x095F) ||
         (c >= 0x0978 && c <= 0x097F);
}

bool IsIndependentVowel(char32_t c) {
  return (c >= 0x0904 && c <= 0x0914) || c == 0x0960 || c == 0x0961 ||
         (c >= 0x0972 && c <= 0x0977);
}

// Signs that sit on a syllable and follow its consonant cluster in logical
// order.
bool IsDependentSign(char32_t c) {
  return (c >= 0x0900 && c <= 0x0903) || c == kNukta ||
         (c >= 0x093A && c <= 0x094C) || c == 0x094E || c == 0x094F ||
         (c >= 0x0951 && c <= 0x0957) || c == 0x0962 || c == 0x0963;
}

bool IsWhitespace(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f' || c == 0x00A0 || c == 0x2028 || c == 0x2029;
}

bool IsTerminator(char32_t c) {
  return c == 0x0964 || c == 0x0965 || c == '?' || c == '!';
}

// Precomposed nukta letters U+0958..U+095F and their bases.
constexpr std::array<char32_t, 8> kNuktaBases = {0x0915, 0x0916, 0x0917,
                                                 0x091C, 0x0921, 0x0922,
                                                 0x092B, 0x092F};

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r'))
    --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::u32string Utf8ToCodepoints(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char32_t cp;
    if (NextUtf8(s, i, cp)) {
      out.push_back(cp);
    } else {
      out.push_back(LegacyByte(static_cast<unsigned char>(s[i])));
      ++i;
    }
  }
  return out;
}

std::string CodepointsToUtf8(std::u32string_view s) {
  std::string out;
  out.reserve(s.size() * 3);
  for (char32_t c : s) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

bool IsValidUtf8(std::string_view s) {
  std::size_t i = 0;
  char32_t cp;
  while (i < s.size())
    if (!NextUtf8(s, i, cp)) return false;
  return true;
}

const char *RuleClassName(RuleClass c) {
  switch (c) {
    case RuleClass::kPlain: return "plain";
    case RuleClass::kPrefixMatra: return "prefix-matra";
    case RuleClass::kHalantForm: return "halant-form";
    case RuleClass::kReph: return "reph";
  }
  return "plain";
}

RuleClass ParseRuleClass(std::string_view name) {
  if (name == "plain") return RuleClass::kPlain;
  if (name == "prefix-matra") return RuleClass::kPrefixMatra;
  if (name == "halant-form") return RuleClass::kHalantForm;
  if (name == "reph") return RuleClass::kReph;
  throw DomainError("unknown rule class '" + std::string(name) + "'");
}

MappingTable::MappingTable(std::vector<MappingRule> rules,
                           std::string source_name)
    : rules_(std::move(rules)), source_name_(std::move(source_name)) {
  if (rules_.empty()) throw ParseError("mapping table has no rules", 0);
  std::set<std::u32string> seen;
  keys_.reserve(rules_.size());
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    const MappingRule &r = rules_[i];
    if (r.legacy.empty()) throw ParseError("empty legacy sequence", i + 1);
    if (!IsValidUtf8(r.replacement))
      throw ParseError("replacement is not valid UTF-8", i + 1);
    if (r.rule_class == RuleClass::kHalantForm) {
      std::u32string rep = Utf8ToCodepoints(r.replacement);
      if (rep.empty() || rep.back() != kHalant)
        throw ParseError("halant-form replacement must end in a halant",
                         i + 1);
    }
    std::u32string key = Utf8ToCodepoints(r.legacy);
    if (!seen.insert(key).second)
      throw ParseError("duplicate rule '" + r.legacy + "'", i + 1);
    by_first_[key.front()].push_back(i);
    keys_.push_back(std::move(key));
  }
  for (auto &[first, idx] : by_first_) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return keys_[a].size() > keys_[b].size();
    });
  }
}

long MappingTable::LongestMatch(std::u32string_view text,
                                std::size_t pos) const {
  if (pos >= text.size()) return -1;
  auto it = by_first_.find(text[pos]);
  if (it == by_first_.end()) return -1;
  for (std::size_t idx : it->second) {
    const std::u32string &k = keys_[idx];
    if (text.substr(pos, k.size()) == k) return static_cast<long>(idx);
  }
  return -1;
}

MappingTable ParseMapping(std::istream &in, const std::string &source_name) {
  std::vector<MappingRule> rules;
  std::vector<std::size_t> line_of;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t t1 = line.find('\t');
    std::size_t t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos ||
        line.find('\t', t2 + 1) != std::string::npos)
      throw ParseError("expected legacy<TAB>replacement<TAB>class", lineno);
    MappingRule r;
    r.legacy = line.substr(0, t1);
    r.replacement = line.substr(t1 + 1, t2 - t1 - 1);
    try {
      r.rule_class = ParseRuleClass(line.substr(t2 + 1));
    } catch (const DomainError &e) {
      throw ParseError(e.what(), lineno);
    }
    if (r.legacy.empty()) throw ParseError("empty legacy sequence", lineno);
    if (!seen.insert(r.legacy).second)
      throw ParseError("duplicate rule '" + r.legacy + "'", lineno);
    rules.push_back(std::move(r));
    line_of.push_back(lineno);
  }
  if (rules.empty())
    throw ParseError("mapping table '" + source_name + "' has no rules",
                     lineno);
  try {
    return MappingTable(std::move(rules), source_name);
  } catch (const ParseError &e) {
    // Re-anchor the rule position to its file line.
    std::size_t at = e.line() >= 1 && e.line() <= line_of.size()
                         ? line_of[e.line() - 1]
                         : lineno;
    std::string msg = e.what();
    msg = msg.substr(0, msg.rfind(" (line "));
    throw ParseError(msg, at);
  }
}

MappingTable LoadMapping(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open mapping table '" + path + "'");
  return ParseMapping(in, path);
}

std::vector<LegacyToken> TokenizeLegacy(std::u32string_view text,
                                        const MappingTable &table) {
  std::vector<LegacyToken> tokens;
  std::size_t pos = 0;
  while (pos < text.size()) {
    long r = table.LongestMatch(text, pos);
    LegacyToken t;
    t.pos = pos;
    t.rule = r;
    t.len = r < 0 ? 1 : table.key(static_cast<std::size_t>(r)).size();
    pos += t.len;
    tokens.push_back(t);
  }
  return tokens;
}

std::u32string ApplyPostRules(std::u32string text,
                              std::vector<RuleClass> origin) {
  // Composition: precomposed nukta letters to base + nukta.
  {
    std::u32string t;
    std::vector<RuleClass> o;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char32_t c = text[i];
      if (c >= 0x0958 && c <= 0x095F) {
        t.push_back(kNuktaBases[c - 0x0958]);
        t.push_back(kNukta);
        o.push_back(origin[i]);
        o.push_back(origin[i]);
      } else {
        t.push_back(c);
        o.push_back(origin[i]);
      }
    }
    text.swap(t);
    origin.swap(o);
  }
  // Nukta binds to the consonant: move it ahead of any halant or vowel sign
  // that the font placed between them.
  for (std::size_t i = 1; i < text.size(); ++i) {
    if (text[i] != kNukta) continue;
    std::size_t j = i;
    while (j > 0 && IsDependentSign(text[j - 1]) && text[j - 1] != kNukta) {
      std::swap(text[j - 1], text[j]);
      std::swap(origin[j - 1], origin[j]);
      --j;
    }
  }
  // Half form followed by aa-sign is the full consonant.
  {
    std::u32string t;
    std::vector<RuleClass> o;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == kHalant && i + 1 < text.size() &&
          text[i + 1] == kVowelSignAa) {
        ++i;
        continue;
      }
      t.push_back(text[i]);
      o.push_back(origin[i]);
    }
    text.swap(t);
    origin.swap(o);
  }
  // Prefix matra: move after the consonant cluster that follows it.
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (origin[i] != RuleClass::kPrefixMatra) continue;
    std::size_t j = i + 1;
    if (j >= text.size() || !IsConsonant(text[j])) continue;
    std::size_t end = j + 1;
    if (end < text.size() && text[end] == kNukta) ++end;
    while (end + 1 < text.size() && text[end] == kHalant &&
           IsConsonant(text[end + 1])) {
      end += 2;
      if (end < text.size() && text[end] == kNukta) ++end;
    }
    char32_t m = text[i];
    text.erase(i, 1);
    text.insert(text.begin() + (end - 1), m);
    origin.erase(origin.begin() + i);
    origin.insert(origin.begin() + (end - 1), RuleClass::kPlain);
    i = end - 1;
  }
  // Reph: the ra+halant pair moves in front of the cluster it follows.
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (origin[i] != RuleClass::kReph || text[i] != kRa ||
        text[i + 1] != kHalant)
      continue;
    std::size_t s = i;
    while (s > 0 && IsDependentSign(text[s - 1])) --s;
    if (s == 0 || !(IsConsonant(text[s - 1]) || IsIndependentVowel(text[s - 1]))) {
      origin[i] = origin[i + 1] = RuleClass::kPlain;
      continue;
    }
    --s;
    for (;;) {
      if (s >= 2 && text[s - 1] == kHalant && IsConsonant(text[s - 2])) {
        s -= 2;
      } else if (s >= 3 && text[s - 1] == kHalant && text[s - 2] == kNukta &&
                 IsConsonant(text[s - 3])) {
        s -= 3;
      } else {
        break;
      }
    }
    text.erase(i, 2);
    text.insert(s, std::u32string{kRa, kHalant});
    origin.erase(origin.begin() + i, origin.begin() + i + 2);
    origin.insert(origin.begin() + s, 2, RuleClass::kPlain);
    i += 1;
  }
  return text;
}

DecodeResult DecodeLegacy(std::string_view text, const MappingTable &table) {
  std::u32string in = Utf8ToCodepoints(text);
  std::u32string out;
  std::vector<RuleClass> origin;
  DecodeResult result;
  for (const LegacyToken &t : TokenizeLegacy(in, table)) {
    if (t.rule < 0) {
      out.push_back(in[t.pos]);
      origin.push_back(RuleClass::kPlain);
      ++result.unmatched;
      continue;
    }
    const MappingRule &r = table.rules()[static_cast<std::size_t>(t.rule)];
    std::u32string rep = Utf8ToCodepoints(r.replacement);
    out += rep;
    origin.insert(origin.end(), rep.size(), r.rule_class);
  }
  result.text = CodepointsToUtf8(ApplyPostRules(std::move(out), std::move(origin)));
  return result;
}

bool IsAllowedCodepoint(char32_t c) {
  return (c >= 0x0900 && c <= 0x097F) || c == ' ' || c == '?' || c == '!' ||
         c == ',';
}

std::string FilterScript(std::string_view text) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : Utf8ToCodepoints(text)) {
    if (IsWhitespace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (!IsAllowedCodepoint(c)) continue;
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return CodepointsToUtf8(out);
}

namespace {

// Splits after each run of terminators, keeping the run with its piece.
std::vector<std::string> SplitOnTerminators(std::string_view text) {
  std::u32string cps = Utf8ToCodepoints(text);
  std::vector<std::string> pieces;
  std::size_t start = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (!IsTerminator(cps[i])) continue;
    while (i + 1 < cps.size() && IsTerminator(cps[i + 1])) ++i;
    pieces.push_back(CodepointsToUtf8(cps.substr(start, i + 1 - start)));
    start = i + 1;
  }
  if (start < cps.size()) pieces.push_back(CodepointsToUtf8(cps.substr(start)));
  return pieces;
}

}  // namespace

std::vector<TextFragment> Fragmentize(std::string_view text,
                                      const std::string &source_id) {
  std::vector<TextFragment> out;
  for (const std::string &piece : SplitOnTerminators(text)) {
    std::string t = Trim(piece);
    if (t.empty()) continue;
    TextFragment f;
    f.index = out.size();
    f.raw = t;
    f.text = std::move(t);
    f.source_id = source_id;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<TextFragment> NormalizeTranscript(std::string_view transcript,
                                              const MappingTable *table,
                                              const std::string &source_id,
                                              std::size_t *unmatched) {
  std::string decoded;
  if (table != nullptr) {
    DecodeResult r = DecodeLegacy(transcript, *table);
    decoded = std::move(r.text);
    if (unmatched) *unmatched = r.unmatched;
  } else {
    decoded = std::string(transcript);
    if (unmatched) *unmatched = 0;
  }
  std::vector<TextFragment> out;
  for (const std::string &piece : SplitOnTerminators(decoded)) {
    std::string t = FilterScript(piece);
    if (t.empty()) continue;
    TextFragment f;
    f.index = out.size();
    f.raw = Trim(piece);
    f.text = std::move(t);
    f.source_id = source_id;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace anchoralign
