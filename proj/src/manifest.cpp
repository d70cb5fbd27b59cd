#include "katzldp/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "katzldp/errors.hpp"
#include "katzldp/util.hpp"

namespace katzldp {

RunManifest::RunManifest(std::string command, std::uint64_t graph_digest)
    : command_(std::move(command)), graph_digest_(graph_digest) {}

void RunManifest::set(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, value);
}
void RunManifest::set(const std::string& key, double value) {
  entries_.emplace_back(key, format_double(value));
}
void RunManifest::set(const std::string& key, long long value) {
  entries_.emplace_back(key, std::to_string(value));
}
void RunManifest::set(const std::string& key, int value) {
  entries_.emplace_back(key, std::to_string(value));
}
void RunManifest::set(const std::string& key, std::uint64_t value) {
  entries_.emplace_back(key, std::to_string(value));
}
void RunManifest::set_flag(const std::string& key, bool value) {
  entries_.emplace_back(key, value ? "true" : "false");
}

std::string RunManifest::to_text() const {
  std::ostringstream out;
  out << "command=" << command_ << '\n';
  out << "version=" << kToolVersion << '\n';
  if (graph_digest_ != 0) out << "graph-digest=" << to_hex(graph_digest_) << '\n';
  for (const auto& [key, value] : entries_) out << key << '=' << value << '\n';
  return out.str();
}

void RunManifest::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest " + path);
  out << to_text();
}

std::map<std::string, std::string> read_key_value_file(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  long long lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const auto a = s.find_first_not_of(ws);
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value", lineno);
    kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
  }
  return kv;
}

std::map<std::string, std::string> read_key_value_path(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_key_value_file(in);
}

}  // namespace katzldp
