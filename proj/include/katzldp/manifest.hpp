#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace katzldp {

inline constexpr const char* kToolVersion = "0.1.0";

/// Record of one CLI invocation with every default materialized. Written
/// alongside every output; feeding it back through --config reproduces the
/// outputs bit-exactly. Keys reuse the long flag names so the file doubles as
/// a config file; the informational keys (command, version, graph-digest) are
/// ignored on the way back in.
class RunManifest {
 public:
  RunManifest(std::string command, std::uint64_t graph_digest = 0);

  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  void set(const std::string& key, long long value);
  void set(const std::string& key, int value);
  void set(const std::string& key, std::uint64_t value);
  void set_flag(const std::string& key, bool value);

  std::string to_text() const;
  void write_file(const std::string& path) const;

 private:
  std::string command_;
  std::uint64_t graph_digest_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// key=value reader shared by --config and manifest replay. '#' starts a
/// comment, blank lines are skipped, whitespace around key and value is
/// trimmed. Later duplicates win. Throws ParseError (with line number) on
/// lines without '='.
std::map<std::string, std::string> read_key_value_file(std::istream& in);
std::map<std::string, std::string> read_key_value_path(const std::string& path);

}  // namespace katzldp
