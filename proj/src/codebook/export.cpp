#include "incode/codebook/export.h"

#include "incode/coding/verb_lexicon.h"
#include "incode/common/text.h"

namespace incode::codebook {

namespace {

std::string table_cell(std::string s) {
  s = text::replace_all(std::move(s), "|", "\\|");
  s = text::replace_all(std::move(s), "\r\n", " ");
  return text::replace_all(std::move(s), "\n", " ");
}

corpus::SpeakerRole role_from_json(const json& j) {
  const auto role = corpus::parse_speaker_role(j.get<std::string>());
  if (!role) throw ParseError("unknown speaker role", j.dump());
  return *role;
}

}  // namespace

std::optional<ExportFormat> parse_export_format(std::string_view s) {
  if (s == "table" || s == "table-doc") return ExportFormat::TableDoc;
  if (s == "structured" || s == "json") return ExportFormat::Structured;
  return std::nullopt;
}

std::string render_table_doc(const Codebook& codebook) {
  std::string out = "# " + std::string(display_name(codebook.approach())) + "\n\n";
  out += "| Label | Examples |\n| --- | --- |\n";
  for (const auto& code : codebook.codes()) {
    std::vector<std::string> bullets;
    for (const auto& ex : code.examples) {
      bullets.push_back("● " + ex.id.str() + ": " + std::string(corpus::to_string(ex.speaker_role)) +
                        ": " + ex.content);
    }
    out += "| " + table_cell(code.display_label) + " | " + table_cell(text::join(bullets, "<br>")) +
           " |\n";
  }
  return out;
}

json to_json(const Codebook& codebook) {
  json codes = json::array();
  for (const auto& code : codebook.codes()) {
    json examples = json::array();
    for (const auto& ex : code.examples) {
      examples.push_back({{"id", ex.id.str()},
                          {"speaker_role", corpus::to_string(ex.speaker_role)},
                          {"content", ex.content}});
    }
    json c = {{"label", code.normalized_label},
              {"display_label", code.display_label},
              {"examples", std::move(examples)},
              {"provenance",
               {{"approach", to_string(code.provenance.approach)}, {"chunks", code.provenance.chunks}}},
              {"flags", {{"verb_nonconforming", code.flags.verb_nonconforming}}}};
    if (code.definition) c["definition"] = *code.definition;
    codes.push_back(std::move(c));
  }
  const auto& meta = codebook.metadata();
  return {{"format", "incode.codebook"},
          {"version", 1},
          {"approach", to_string(codebook.approach())},
          {"metadata",
           {{"backend", meta.backend},
            {"seed", meta.seed ? json(*meta.seed) : json(nullptr)},
            {"config_digest", meta.config_digest}}},
          {"codes", std::move(codes)}};
}

Codebook codebook_from_json(const json& doc) {
  expect_format(doc, "incode.codebook", 1);
  try {
    const auto approach = parse_approach(doc.at("approach").get<std::string>());
    if (!approach) throw ParseError("unknown approach", doc.at("approach").dump());
    RunMetadata meta;
    if (doc.contains("metadata")) {
      const auto& m = doc.at("metadata");
      meta.backend = m.value("backend", "");
      if (m.contains("seed") && !m.at("seed").is_null()) meta.seed = m.at("seed").get<std::uint64_t>();
      meta.config_digest = m.value("config_digest", "");
    }
    std::vector<Code> codes;
    for (const auto& c : doc.at("codes")) {
      Code code;
      code.display_label = c.at("display_label").get<std::string>();
      code.normalized_label = normalize_label(code.display_label);
      if (c.contains("label") && c.at("label").get<std::string>() != code.normalized_label) {
        throw CodebookError("label '" + c.at("label").get<std::string>() + "' does not match '" +
                            code.display_label + "'");
      }
      if (c.contains("definition") && !c.at("definition").is_null()) {
        code.definition = c.at("definition").get<std::string>();
      }
      for (const auto& e : c.at("examples")) {
        const auto id = corpus::MessageId::parse(e.at("id").get<std::string>());
        if (!id) throw ParseError("bad message id", e.at("id").dump());
        code.examples.push_back({*id, role_from_json(e.at("speaker_role")), e.at("content").get<std::string>()});
      }
      code.provenance.approach = *approach;
      if (c.contains("provenance")) {
        const auto& p = c.at("provenance");
        if (p.contains("approach")) {
          const auto pa = parse_approach(p.at("approach").get<std::string>());
          if (!pa) throw ParseError("unknown provenance approach", p.dump());
          code.provenance.approach = *pa;
        }
        if (p.contains("chunks")) code.provenance.chunks = p.at("chunks").get<std::vector<std::size_t>>();
      }
      if (c.contains("flags")) {
        code.flags.verb_nonconforming = c.at("flags").value("verb_nonconforming", false);
      } else if (*approach == Approach::Verb) {
        code.flags.verb_nonconforming = !coding::check_verb_phrase(code.normalized_label);
      }
      codes.push_back(std::move(code));
    }
    return Codebook(*approach, std::move(codes), std::move(meta));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed codebook: ") + e.what(), doc.dump());
  }
}

std::string export_codebook(const Codebook& codebook, ExportFormat format) {
  return format == ExportFormat::TableDoc ? render_table_doc(codebook) : to_json(codebook).dump(1) + "\n";
}

void save_codebook(const std::filesystem::path& path, const Codebook& codebook) {
  write_json_file(path, to_json(codebook));
}

Codebook load_codebook(const std::filesystem::path& path) { return codebook_from_json(read_json_file(path)); }

}  // namespace incode::codebook
