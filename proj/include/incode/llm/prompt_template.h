#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "incode/common/error.h"

namespace incode::llm {

enum class Placeholder { ResearchQuestion, CodingNotes, MessagesLength, Documents, Keywords, Conversation };

// "ResearchQuestion", ..., "Messages.length"
std::string_view placeholder_name(Placeholder p);
std::optional<Placeholder> parse_placeholder(std::string_view name);

using Bindings = std::map<Placeholder, std::string>;

class UnboundPlaceholderError : public ConfigError {
 public:
  explicit UnboundPlaceholderError(Placeholder p)
      : ConfigError("unbound placeholder: " + std::string(placeholder_name(p))), placeholder_(p) {}
  Placeholder placeholder() const noexcept { return placeholder_; }

 private:
  Placeholder placeholder_;
};

// A system + user prompt pair. Placeholders appear as "{Name}", "#{Name}" or
// "${Name}"; other braced text is literal. Every placeholder that occurs in
// the texts must be declared.
class PromptTemplate {
 public:
  PromptTemplate(std::string name, std::string system_text, std::string user_text,
                 std::set<Placeholder> declared);

  const std::string& name() const noexcept { return name_; }
  const std::string& system_text() const noexcept { return system_text_; }
  const std::string& user_text() const noexcept { return user_text_; }
  const std::set<Placeholder>& placeholders() const noexcept { return declared_; }

  // Placeholders that actually occur in either text.
  std::set<Placeholder> used_placeholders() const;

 private:
  std::string name_;
  std::string system_text_;
  std::string user_text_;
  std::set<Placeholder> declared_;
};

struct RenderedPrompt {
  std::string system;
  std::string user;
  std::vector<std::string> warnings;
};

// Single pass: substituted values are never rescanned for placeholders.
RenderedPrompt render_prompt(const PromptTemplate& tmpl, const Bindings& bindings);

}  // namespace incode::llm
