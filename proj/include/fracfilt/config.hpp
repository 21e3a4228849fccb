#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace fracfilt {

// Flat dotted-key configuration: one "key = value" line per entry, '#' starts
// a comment, blank lines are ignored.  Values keep their original spelling so
// an echo of the store re-parses to the same store.  Reads are tracked; after
// building a run from a config, ensure_consumed flags any key no reader asked
// for, which catches misspelled options early.
class Config {
 public:
  Config() = default;

  static Config parse_file(const std::string& path);
  static Config parse_stream(std::istream& is, const std::string& name);

  // Inserts or overwrites; key must be non-empty [A-Za-z0-9_.-]+.
  void set(const std::string& key, const std::string& value);
  // Applies "key=value"; used for command-line overrides.
  void set_pair(const std::string& pair);

  bool has(const std::string& key) const;
  std::string str(const std::string& key) const;
  std::string str_or(const std::string& key, const std::string& dflt) const;
  double num(const std::string& key) const;
  double num_or(const std::string& key, double dflt) const;
  int integer(const std::string& key) const;
  int integer_or(const std::string& key, int dflt) const;
  // Whitespace- or comma-separated list of numbers.
  std::vector<double> numbers(const std::string& key) const;

  // Keys beginning with the prefix, in lexicographic order.
  std::vector<std::string> keys_with_prefix(const std::string& prefix) const;

  // Sorted "key = value" lines; parse_stream(write(...)) reproduces the store.
  void write(std::ostream& os) const;

  // Throws std::invalid_argument naming every key never read by a getter.
  void ensure_consumed() const;

  bool operator==(const Config& other) const { return kv_ == other.kv_; }

 private:
  const std::string& fetch(const std::string& key) const;

  std::map<std::string, std::string> kv_;
  mutable std::set<std::string> used_;
};

} // namespace fracfilt
