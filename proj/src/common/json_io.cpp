#include "incode/common/json_io.h"

#include <fstream>
#include <sstream>

#include "incode/common/error.h"

namespace incode {

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

json read_json_file(const std::filesystem::path& path) {
  const auto content = read_text_file(path);
  try {
    return json::parse(content);
  } catch (const json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string dump_canonical(const json& doc) { return doc.dump(1) + "\n"; }

void write_json_file(const std::filesystem::path& path, const json& doc) {
  write_text_file(path, dump_canonical(doc));
}

void expect_format(const json& doc, const std::string& format, int version) {
  if (!doc.is_object() || doc.value("format", "") != format) {
    throw IoError("expected a " + format + " document");
  }
  if (doc.value("version", 0) != version) {
    throw IoError(format + ": unsupported version " + doc.value("version", json(0)).dump());
  }
}

}  // namespace incode
