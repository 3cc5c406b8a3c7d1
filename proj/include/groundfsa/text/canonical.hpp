#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "groundfsa/error.hpp"
#include "json.hpp"

namespace groundfsa::text {

/// Lowercase alphanumeric words of `phrase`.
inline std::vector<std::string> words(std::string_view phrase) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : phrase) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      cur += static_cast<char>(std::tolower(c));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

/// Mechanical rewrite to an identifier: lowercase, non-alphanumeric runs
/// become one underscore, no leading or trailing underscore. A leading digit
/// gets a `p_` prefix so the result is always a valid identifier.
inline std::string canonical_id(std::string_view phrase) {
  const auto ws = words(phrase);
  if (ws.empty()) throw std::invalid_argument("phrase has no alphanumeric content: '" + std::string(phrase) + "'");
  std::string out;
  for (const auto& w : ws) {
    if (!out.empty()) out += '_';
    out += w;
  }
  if (std::isdigit(static_cast<unsigned char>(out.front()))) out = "p_" + out;
  return out;
}

/// Filler words ignored when matching phrases against known names.
inline bool is_stopword(std::string_view w) {
  static const std::set<std::string, std::less<>> kStop = {
      "a", "an", "the", "is", "are", "be", "to", "for", "of", "it", "its", "this", "that", "there", "then"};
  return kStop.contains(w);
}

inline std::vector<std::string> content_words(std::string_view phrase) {
  auto ws = words(phrase);
  std::erase_if(ws, [](const std::string& w) { return is_stopword(w); });
  return ws;
}

/// Whether every word of `needle` occurs in `haystack`.
inline bool covers(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
  if (needle.empty()) return false;
  return std::all_of(needle.begin(), needle.end(), [&](const std::string& w) {
    return std::find(haystack.begin(), haystack.end(), w) != haystack.end();
  });
}

/// Maps transcript phrases to canonical identifiers.
///
/// Keys are stored canonicalized. Lookup is exact first; `find_contained`
/// additionally accepts a key whose words all occur in the phrase (longest
/// key wins, ties by key order).
class SynonymTable {
 public:
  SynonymTable() = default;

  void add(std::string_view phrase, std::string_view id) { entries_[canonical_id(phrase)] = canonical_id(id); }

  std::optional<std::string> find_exact(std::string_view phrase) const {
    const auto words_of = words(phrase);
    if (words_of.empty()) return std::nullopt;
    auto it = entries_.find(canonical_id(phrase));
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  std::optional<std::string> find_contained(std::string_view phrase) const {
    const auto ws = words(phrase);
    std::optional<std::string> best;
    std::size_t best_len = 0;
    for (const auto& [key, id] : entries_) {
      const auto kw = words(key);
      if (kw.size() > best_len && covers(ws, kw)) {
        best = id;
        best_len = kw.size();
      }
    }
    return best;
  }

  /// Canonical form of `phrase` with the exact synonym applied, if any.
  std::string apply(std::string_view phrase) const {
    auto hit = find_exact(phrase);
    return hit ? *hit : canonical_id(phrase);
  }

  std::vector<std::string> targets() const {
    std::vector<std::string> out;
    for (const auto& [_, id] : entries_) out.push_back(id);
    return out;
  }

  bool empty() const noexcept { return entries_.empty(); }

  /// `{"phrase": "identifier", ...}`
  static SynonymTable from_json(const nlohmann::json& j) {
    SynonymTable t;
    for (auto it = j.begin(); it != j.end(); ++it) t.add(it.key(), it.value().get<std::string>());
    return t;
  }

 private:
  std::map<std::string, std::string> entries_;
};

/// Canonical proposition/action id for a phrase, with synonyms applied after
/// the mechanical rewrite.
inline std::string canonicalize(std::string_view phrase, const SynonymTable& synonyms = {}) {
  return synonyms.apply(phrase);
}

}  // namespace groundfsa::text
