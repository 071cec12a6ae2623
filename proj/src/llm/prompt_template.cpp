#include "incode/llm/prompt_template.h"

#include <array>
#include <utility>

namespace incode::llm {

namespace {

constexpr std::array<std::pair<Placeholder, std::string_view>, 6> kNames{{
    {Placeholder::ResearchQuestion, "ResearchQuestion"},
    {Placeholder::CodingNotes, "CodingNotes"},
    {Placeholder::MessagesLength, "Messages.length"},
    {Placeholder::Documents, "Documents"},
    {Placeholder::Keywords, "Keywords"},
    {Placeholder::Conversation, "Conversation"},
}};

struct Token {
  std::size_t begin;
  std::size_t end;
  Placeholder placeholder;
};

std::vector<Token> scan(std::string_view s) {
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '{') continue;
    const auto close = s.find('}', i + 1);
    if (close == std::string_view::npos) break;
    const auto p = parse_placeholder(s.substr(i + 1, close - i - 1));
    if (!p) continue;
    const bool sigil = i > 0 && (s[i - 1] == '#' || s[i - 1] == '$');
    tokens.push_back({sigil ? i - 1 : i, close + 1, *p});
    i = close;
  }
  return tokens;
}

std::string substitute(std::string_view s, const Bindings& bindings,
                       std::set<Placeholder>& consumed) {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& tok : scan(s)) {
    const auto it = bindings.find(tok.placeholder);
    if (it == bindings.end()) throw UnboundPlaceholderError(tok.placeholder);
    out.append(s.substr(cursor, tok.begin - cursor));
    out.append(it->second);
    consumed.insert(tok.placeholder);
    cursor = tok.end;
  }
  out.append(s.substr(cursor));
  return out;
}

}  // namespace

std::string_view placeholder_name(Placeholder p) {
  for (const auto& [ph, name] : kNames) {
    if (ph == p) return name;
  }
  return {};
}

std::optional<Placeholder> parse_placeholder(std::string_view name) {
  for (const auto& [ph, n] : kNames) {
    if (n == name) return ph;
  }
  return std::nullopt;
}

PromptTemplate::PromptTemplate(std::string name, std::string system_text, std::string user_text,
                               std::set<Placeholder> declared)
    : name_(std::move(name)),
      system_text_(std::move(system_text)),
      user_text_(std::move(user_text)),
      declared_(std::move(declared)) {
  for (const auto p : used_placeholders()) {
    if (!declared_.count(p)) {
      throw ConfigError("template '" + name_ + "' uses undeclared placeholder " +
                        std::string(placeholder_name(p)));
    }
  }
}

std::set<Placeholder> PromptTemplate::used_placeholders() const {
  std::set<Placeholder> used;
  for (const auto& tok : scan(system_text_)) used.insert(tok.placeholder);
  for (const auto& tok : scan(user_text_)) used.insert(tok.placeholder);
  return used;
}

RenderedPrompt render_prompt(const PromptTemplate& tmpl, const Bindings& bindings) {
  RenderedPrompt out;
  std::set<Placeholder> consumed;
  out.system = substitute(tmpl.system_text(), bindings, consumed);
  out.user = substitute(tmpl.user_text(), bindings, consumed);
  for (const auto& [p, value] : bindings) {
    if (!consumed.count(p)) {
      out.warnings.push_back("unused binding: " + std::string(placeholder_name(p)));
    }
  }
  return out;
}

}  // namespace incode::llm
