#include "fracfilt/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracfilt {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' &&
        c != '-')
      return false;
  return true;
}

} // namespace

Config Config::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("config: cannot open " + path);
  return parse_stream(is, path);
}

Config Config::parse_stream(std::istream& is, const std::string& name) {
  Config cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    const std::string where = name + ":" + std::to_string(lineno);
    if (eq == std::string::npos)
      throw std::invalid_argument("config: missing '=' at " + where);
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key))
      throw std::invalid_argument("config: bad key '" + key + "' at " + where);
    if (cfg.kv_.count(key))
      throw std::invalid_argument("config: duplicate key '" + key + "' at " +
                                  where);
    cfg.kv_[key] = trim(line.substr(eq + 1));
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  if (!valid_key(key))
    throw std::invalid_argument("config: bad key '" + key + "'");
  kv_[key] = trim(value);
}

void Config::set_pair(const std::string& pair) {
  const std::size_t eq = pair.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("config: override needs key=value, got '" +
                                pair + "'");
  set(trim(pair.substr(0, eq)), pair.substr(eq + 1));
}

bool Config::has(const std::string& key) const {
  const bool present = kv_.count(key) != 0;
  if (present) used_.insert(key);
  return present;
}

const std::string& Config::fetch(const std::string& key) const {
  const auto it = kv_.find(key);
  if (it == kv_.end())
    throw std::invalid_argument("config: missing key '" + key + "'");
  used_.insert(key);
  return it->second;
}

std::string Config::str(const std::string& key) const { return fetch(key); }

std::string Config::str_or(const std::string& key,
                           const std::string& dflt) const {
  return has(key) ? fetch(key) : dflt;
}

double Config::num(const std::string& key) const {
  const std::string& v = fetch(key);
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty())
    throw std::invalid_argument("config: key '" + key + "' is not a number: '" +
                                v + "'");
  return d;
}

double Config::num_or(const std::string& key, double dflt) const {
  return has(key) ? num(key) : dflt;
}

int Config::integer(const std::string& key) const {
  const double d = num(key);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d)
    throw std::invalid_argument("config: key '" + key + "' is not an integer");
  return i;
}

int Config::integer_or(const std::string& key, int dflt) const {
  return has(key) ? integer(key) : dflt;
}

std::vector<double> Config::numbers(const std::string& key) const {
  std::string v = fetch(key);
  for (char& c : v)
    if (c == ',') c = ' ';
  std::istringstream is(v);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
      d = std::stod(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size())
      throw std::invalid_argument("config: key '" + key +
                                  "' has a non-numeric entry: '" + tok + "'");
    out.push_back(d);
  }
  if (out.empty())
    throw std::invalid_argument("config: key '" + key + "' has no numbers");
  return out;
}

std::vector<std::string> Config::keys_with_prefix(
    const std::string& prefix) const {
  std::vector<std::string> out;
  for (auto it = kv_.lower_bound(prefix); it != kv_.end(); ++it) {
    if (it->first.compare(0, prefix.size(), prefix) != 0) break;
    out.push_back(it->first);
  }
  return out;
}

void Config::write(std::ostream& os) const {
  for (const auto& [k, v] : kv_) os << k << " = " << v << "\n";
}

void Config::ensure_consumed() const {
  std::string leftover;
  for (const auto& [k, v] : kv_)
    if (!used_.count(k)) leftover += (leftover.empty() ? "" : ", ") + k;
  if (!leftover.empty())
    throw std::invalid_argument("config: unknown keys: " + leftover);
}

} // namespace fracfilt
