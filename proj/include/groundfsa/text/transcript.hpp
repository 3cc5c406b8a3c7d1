#pragma once

#include <cctype>
#include <map>
#include <regex>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "groundfsa/error.hpp"
#include "groundfsa/text/chunker.hpp"
#include "json.hpp"

namespace groundfsa::text {

enum class TranscriptKind { Steps, PddlAction };

/// One prompt/completion exchange with a language model.
struct Transcript {
  std::vector<std::string> prompt_blocks;
  std::vector<std::string> completion_blocks;
  TranscriptKind kind = TranscriptKind::Steps;
};

namespace detail {

inline TranscriptKind infer_kind(const std::vector<std::string>& completions) {
  static const std::regex kAction("^\\s*action\\s*:", std::regex::icase);
  for (const auto& c : completions) {
    if (std::regex_search(c, kAction)) return TranscriptKind::PddlAction;
  }
  return TranscriptKind::Steps;
}

inline std::vector<std::string> lines(std::string_view text) {
  std::vector<std::string> out;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

inline void finish(std::vector<Transcript>& out, Transcript& cur) {
  if (cur.prompt_blocks.empty() && cur.completion_blocks.empty()) return;
  cur.kind = infer_kind(cur.completion_blocks);
  out.push_back(std::move(cur));
  cur = Transcript{};
}

}  // namespace detail

/// Reads transcripts from text.
///
/// Plaintext: lines starting with `>>>` are prompt lines, other nonblank lines
/// are completion lines. A prompt line following completions starts the next
/// transcript. JSON: `{"blocks": [{"role": "prompt"|"completion", "text": …}]}`
/// with the same boundary rule.
inline std::vector<Transcript> parse_transcripts(std::string_view text) {
  std::vector<Transcript> out;
  Transcript cur;
  auto add = [&](bool prompt, std::string line) {
    line = detail::trim(line);
    if (line.empty()) return;
    if (prompt) {
      if (!cur.completion_blocks.empty()) detail::finish(out, cur);
      cur.prompt_blocks.push_back(std::move(line));
    } else {
      cur.completion_blocks.push_back(std::move(line));
    }
  };

  if (const auto t = detail::trim(text); !t.empty() && t.front() == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(t);
      for (const auto& block : j.at("blocks")) {
        const auto role = block.at("role").get<std::string>();
        if (role != "prompt" && role != "completion") throw InvalidDocument("unknown transcript role '" + role + "'");
        for (const auto& line : detail::lines(block.at("text").get<std::string>())) add(role == "prompt", line);
      }
    } catch (const nlohmann::json::exception& e) {
      throw InvalidDocument(std::string("malformed transcript: ") + e.what());
    }
  } else {
    for (const auto& line : detail::lines(text)) {
      const auto trimmed = detail::trim(line);
      if (trimmed.starts_with(">>>")) {
        add(true, trimmed.substr(3));
      } else {
        add(false, trimmed);
      }
    }
  }
  detail::finish(out, cur);
  return out;
}

/// One numbered step of a steps transcript.
struct StepDescription {
  int index = 0;
  std::string text;
  std::vector<Clause> clauses;
  /// Set when the chunker could not parse the step and it fell back to a
  /// single plain clause.
  std::vector<std::string> warnings;
};

/// Parses numbered completion lines `N. text` (or `N) text`) into steps.
/// Numbering must start at 1 and be contiguous.
inline std::vector<StepDescription> extract_steps(const Transcript& t) {
  static const std::regex kNumbered("^\\s*(\\d+)\\s*[.)]\\s*(.*)$");
  std::vector<StepDescription> out;
  for (const auto& block : t.completion_blocks) {
    for (const auto& raw : detail::lines(block)) {
      const auto line = detail::trim(raw);
      if (line.empty()) continue;
      std::smatch m;
      if (!std::regex_match(line, m, kNumbered)) throw MalformedNumbering("unnumbered line '" + line + "'");
      const int index = std::stoi(m[1].str());
      const int expected = static_cast<int>(out.size()) + 1;
      if (index != expected) {
        throw MalformedNumbering("expected step " + std::to_string(expected) + ", found " + std::to_string(index));
      }
      StepDescription step;
      step.index = index;
      step.text = detail::strip_punctuation(m[2].str());
      if (step.text.empty()) throw MalformedNumbering("step " + std::to_string(index) + " is empty");
      try {
        step.clauses = chunk_step(step.text);
      } catch (const UnparsableStep&) {
        step.clauses = {Clause{ClauseKind::Plain, std::nullopt, {detail::lower(step.text)}, 0}};
        step.warnings.push_back("step " + std::to_string(index) + " could not be chunked; treated as a plain action");
      }
      out.push_back(std::move(step));
    }
  }
  if (out.empty()) throw MalformedNumbering("no numbered steps");
  return out;
}

struct PromptTemplate {
  std::string name;
  std::string body;
};

/// Replaces every `{name}` placeholder with its binding; all other text is
/// copied verbatim.
inline std::string render_prompt(const PromptTemplate& tmpl, const std::map<std::string, std::string>& bindings) {
  std::string out;
  const std::string& b = tmpl.body;
  for (std::size_t i = 0; i < b.size();) {
    if (b[i] == '{') {
      std::size_t j = i + 1;
      while (j < b.size() && (std::isalnum(static_cast<unsigned char>(b[j])) || b[j] == '_')) ++j;
      if (j < b.size() && b[j] == '}' && j > i + 1) {
        const std::string name = b.substr(i + 1, j - i - 1);
        auto it = bindings.find(name);
        if (it == bindings.end()) throw UnboundPlaceholder(name);
        out += it->second;
        i = j + 1;
        continue;
      }
    }
    out += b[i++];
  }
  return out;
}

inline PromptTemplate steps_prompt_template() { return {"steps", "Steps for \"{task}\""}; }

inline PromptTemplate pddl_prompt_template() { return {"pddl_action", "Define an action \"{action}\" in PDDL"}; }

}  // namespace groundfsa::text
